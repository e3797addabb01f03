/**
 * Express application exposing the sidecar's wire contracts:
 *
 *   POST /parse     {story_id, text}  -> {story_id, conllu}
 *   POST /toxicity  {sentences: [..]} -> {scores: [{six categories}, ..]}
 *   GET  /health    -> {status, models, limits}
 *
 * Requests are validated with zod; malformed bodies and empty inputs get
 * 400, oversized batches or payloads 413, unknown routes 404, and backend
 * failures 500 with a message. Scoring endpoints return 503 until the
 * models finish loading, matching /health.
 */

import express from "express";
import type { NextFunction, Request, Response } from "express";
import { z } from "zod";

import { loadParser, parseToConllu, type ModelInfo } from "./parser";
import { CATEGORIES, loadToxicity, type ToxicityScorer } from "./toxicity";

export interface AppOptions {
  /** Maximum sentences accepted per /toxicity request. */
  maxBatch?: number;
  /** express.json body limit, e.g. "1mb". */
  maxBodyBytes?: string;
  /** Directory that may hold model overrides (toxicity_lexicon.tsv). */
  cacheDir?: string;
  /** Artificial model-load delay, for exercising the loading state. */
  loadDelayMs?: number;
}

export interface Sidecar {
  app: express.Express;
  /** Resolves once the models are loaded and /health reports ok. */
  ready: Promise<void>;
}

const parseRequest = z.object({
  story_id: z.string(),
  text: z.string(),
});

const toxicityRequest = z.object({
  sentences: z.array(z.string()),
});

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export function createApp(options: AppOptions = {}): Sidecar {
  const maxBatch = options.maxBatch ?? 256;
  const maxBodyBytes = options.maxBodyBytes ?? "1mb";

  const models: { parser?: ModelInfo; toxicity?: ToxicityScorer } = {};
  let loaded = false;

  const ready = (async () => {
    if (options.loadDelayMs) {
      await sleep(options.loadDelayMs);
    }
    models.parser = await loadParser();
    models.toxicity = await loadToxicity(options.cacheDir);
    loaded = true;
  })();

  const app = express();
  app.use(express.json({ limit: maxBodyBytes }));

  const requireLoaded = (res: Response): boolean => {
    if (!loaded) {
      res.status(503).json({ error: "models are still loading" });
      return false;
    }
    return true;
  };

  app.get("/health", (_req, res) => {
    if (!loaded) {
      res.status(503).json({ status: "loading" });
      return;
    }
    res.json({
      status: "ok",
      models: {
        parser: models.parser,
        toxicity: models.toxicity!.info,
      },
      limits: { max_batch: maxBatch, max_body_bytes: maxBodyBytes },
    });
  });

  app.post("/parse", (req, res) => {
    if (!requireLoaded(res)) {
      return;
    }
    const parsed = parseRequest.safeParse(req.body);
    if (!parsed.success) {
      res.status(400).json({ error: "body must be {story_id: string, text: string}" });
      return;
    }
    const { story_id, text } = parsed.data;
    if (text.trim() === "") {
      res.status(400).json({ error: "text must be non-empty" });
      return;
    }
    try {
      res.json({ story_id, conllu: parseToConllu(story_id, text) });
    } catch (err) {
      res.status(500).json({ error: `parser failure: ${(err as Error).message}` });
    }
  });

  app.post("/toxicity", (req, res) => {
    if (!requireLoaded(res)) {
      return;
    }
    const parsed = toxicityRequest.safeParse(req.body);
    if (!parsed.success) {
      res.status(400).json({ error: "body must be {sentences: string[]}" });
      return;
    }
    const { sentences } = parsed.data;
    if (sentences.length === 0) {
      res.status(400).json({ error: "sentences must be non-empty" });
      return;
    }
    if (sentences.length > maxBatch) {
      res.status(413).json({ error: `batch of ${sentences.length} exceeds limit ${maxBatch}` });
      return;
    }
    try {
      const scores = sentences.map((sentence) => {
        const record = models.toxicity!.scoreSentence(sentence);
        // Rebuild in canonical key order so responses are byte-stable.
        return Object.fromEntries(CATEGORIES.map((c) => [c, record[c]]));
      });
      res.json({ scores });
    } catch (err) {
      res.status(500).json({ error: `scorer failure: ${(err as Error).message}` });
    }
  });

  app.use((_req, res) => {
    res.status(404).json({ error: "unknown route" });
  });

  app.use((err: Error & { type?: string }, _req: Request, res: Response, next: NextFunction) => {
    if (res.headersSent) {
      next(err);
      return;
    }
    if (err.type === "entity.too.large") {
      res.status(413).json({ error: "request body too large" });
    } else if (err.type === "entity.parse.failed" || err instanceof SyntaxError) {
      res.status(400).json({ error: "request body is not valid JSON" });
    } else {
      res.status(500).json({ error: err.message });
    }
  });

  return { app, ready };
}
