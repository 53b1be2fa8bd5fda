/** The HTTP surface: `GET /info` (static deployment metadata) and
 * `POST /embed` (batch text-to-vector).
 *
 * Status mapping: 400 malformed body or empty batch, 413 batch over the
 * cap, 503 encoder failure. Success bodies carry `model_id` and `dim` so
 * every response is self-describing.
 */

import express from "express";
import type { NextFunction, Request, Response } from "express";

import { EncodeError, Encoder, MAX_BATCH } from "./encoder.js";

export function buildApp(encoder: Encoder): express.Express {
  const app = express();
  app.use(express.json({ limit: "16mb" }));

  app.get("/info", (_req: Request, res: Response) => {
    res.json({ model_id: encoder.modelId, dim: encoder.dim, max_batch: MAX_BATCH });
  });

  app.post("/embed", async (req: Request, res: Response) => {
    const texts: unknown = (req.body as { texts?: unknown } | undefined)?.texts;
    if (
      !Array.isArray(texts) ||
      texts.length === 0 ||
      texts.some((t) => typeof t !== "string")
    ) {
      res.status(400).json({
        error: 'body must be {"texts": [string, ...]} with at least one text',
      });
      return;
    }
    if (texts.length > MAX_BATCH) {
      res.status(413).json({
        error: `batch of ${texts.length} texts exceeds the cap of ${MAX_BATCH}`,
      });
      return;
    }
    try {
      const vectors = await encoder.embedBatch(texts as string[]);
      res.json({ model_id: encoder.modelId, dim: encoder.dim, vectors });
    } catch (err) {
      const message =
        err instanceof EncodeError || err instanceof Error ? err.message : String(err);
      res.status(503).json({ error: message });
    }
  });

  // express.json routes unparseable/oversized bodies here
  app.use((err: unknown, _req: Request, res: Response, _next: NextFunction) => {
    const status =
      typeof (err as { status?: unknown }).status === "number"
        ? ((err as { status: number }).status)
        : 400;
    const message = err instanceof Error ? err.message : String(err);
    res.status(status).json({ error: `malformed request body: ${message}` });
  });

  return app;
}
