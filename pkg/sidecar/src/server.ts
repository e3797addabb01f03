/**
 * Entry point: start the sidecar on SIDECAR_PORT (default 8811).
 *
 * Environment:
 *   SIDECAR_PORT         listen port (localhost deployment assumed)
 *   SIDECAR_MODEL_CACHE  directory checked for model overrides
 *   SIDECAR_MAX_BATCH    maximum sentences per /toxicity request
 */

import { createApp } from "./app";

function main(): void {
  const port = Number(process.env.SIDECAR_PORT ?? 8811);
  const maxBatch = process.env.SIDECAR_MAX_BATCH
    ? Number(process.env.SIDECAR_MAX_BATCH)
    : undefined;
  if (!Number.isInteger(port) || port < 0 || port > 65535) {
    console.error(`invalid SIDECAR_PORT: ${process.env.SIDECAR_PORT}`);
    process.exit(1);
  }
  if (maxBatch !== undefined && (!Number.isInteger(maxBatch) || maxBatch < 1)) {
    console.error(`invalid SIDECAR_MAX_BATCH: ${process.env.SIDECAR_MAX_BATCH}`);
    process.exit(1);
  }

  const { app, ready } = createApp({
    maxBatch,
    cacheDir: process.env.SIDECAR_MODEL_CACHE,
  });
  const server = app.listen(port, "127.0.0.1", () => {
    const address = server.address();
    const shown = typeof address === "object" && address ? address.port : port;
    console.log(`nlp-sidecar listening on http://127.0.0.1:${shown}/`);
  });
  void ready.then(() => console.log("models loaded"));
}

main();
