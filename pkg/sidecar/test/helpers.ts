import type { AddressInfo } from "node:net";
import type { Server } from "node:http";

import { createApp, type AppOptions } from "../src/app";

export interface RunningSidecar {
  url: string;
  ready: Promise<void>;
  close: () => Promise<void>;
}

/** Start the app on an ephemeral localhost port. */
export async function startSidecar(options: AppOptions = {}): Promise<RunningSidecar> {
  const { app, ready } = createApp(options);
  const server: Server = await new Promise((resolve) => {
    const s = app.listen(0, "127.0.0.1", () => resolve(s));
  });
  const { port } = server.address() as AddressInfo;
  return {
    url: `http://127.0.0.1:${port}`,
    ready,
    close: () =>
      new Promise((resolve, reject) =>
        server.close((err) => (err ? reject(err) : resolve())),
      ),
  };
}

export async function postJson(
  url: string,
  body: unknown,
): Promise<{ status: number; json: any }> {
  const res = await fetch(url, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
  return { status: res.status, json: await res.json() };
}
