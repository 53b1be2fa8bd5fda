#!/usr/bin/env node
/** Command-line entry.
 *
 * `trendsim-embed serve` starts the HTTP service; `trendsim-embed
 * export-lexicon <vocab> <out>` snapshots a vocabulary (one lowercase token
 * per line) into the flat lexicon file format. Exit codes: 0 success,
 * 1 usage or flag error, 2 bad vocab/lexicon input, 3 encoder failure.
 */

import { realpathSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { buildApp } from "./app.js";
import {
  EncodeError,
  Encoder,
  HashProjectionEncoder,
  LexiconEncoder,
  LexiconError,
  loadUniversalSentenceEncoder,
} from "./encoder.js";
import { VocabError, exportLexicon } from "./exportLexicon.js";

const USAGE = `usage:
  trendsim-embed serve [--host HOST] [--port PORT] [--encoder SPEC] [--dim N]
  trendsim-embed export-lexicon <vocab-file> <out-file> [--encoder SPEC] [--dim N]

encoder SPEC:
  hash            deterministic stand-in (default; --dim sets width, default 512)
  lexicon:<path>  serve vectors from a lexicon file snapshot
  use             live universal-sentence-encoder checkpoint (needs optional
                  packages @tensorflow/tfjs and
                  @tensorflow-models/universal-sentence-encoder)`;

class UsageError extends Error {}

async function makeEncoder(spec: string, dim: number): Promise<Encoder> {
  if (spec === "hash") return new HashProjectionEncoder(dim);
  if (spec.startsWith("lexicon:")) return new LexiconEncoder(spec.slice("lexicon:".length));
  if (spec === "use") return loadUniversalSentenceEncoder();
  throw new UsageError(`unknown encoder spec "${spec}"`);
}

function parseDim(raw: string): number {
  const dim = Number(raw);
  if (!Number.isInteger(dim) || dim < 1) {
    throw new UsageError(`--dim must be a positive integer, got "${raw}"`);
  }
  return dim;
}

async function run(argv: string[]): Promise<number> {
  const command = argv[0];
  const rest = argv.slice(1);
  if (command === "serve") {
    const { values } = parseArgs({
      args: rest,
      options: {
        host: { type: "string", default: "127.0.0.1" },
        port: { type: "string", default: "8080" },
        encoder: { type: "string", default: "hash" },
        dim: { type: "string", default: "512" },
      },
    });
    const port = Number(values.port);
    if (!Number.isInteger(port) || port < 0 || port > 65535) {
      throw new UsageError(`--port must be 0..65535, got "${values.port}"`);
    }
    const encoder = await makeEncoder(values.encoder as string, parseDim(values.dim as string));
    const app = buildApp(encoder);
    await new Promise<void>((resolve, reject) => {
      const server = app.listen(port, values.host as string, () => {
        const addr = server.address();
        const where = typeof addr === "object" && addr ? `${addr.address}:${addr.port}` : "?";
        console.log(`listening on http://${where} (model ${encoder.modelId}, dim ${encoder.dim})`);
      });
      server.on("error", reject);
      process.on("SIGINT", () => server.close(() => resolve()));
      process.on("SIGTERM", () => server.close(() => resolve()));
    });
    return 0;
  }
  if (command === "export-lexicon") {
    const { values, positionals } = parseArgs({
      args: rest,
      options: {
        encoder: { type: "string", default: "hash" },
        dim: { type: "string", default: "512" },
      },
      allowPositionals: true,
    });
    if (positionals.length !== 2) {
      throw new UsageError("export-lexicon needs exactly <vocab-file> <out-file>");
    }
    const encoder = await makeEncoder(values.encoder as string, parseDim(values.dim as string));
    const count = await exportLexicon(encoder, positionals[0] as string, positionals[1] as string);
    console.log(`${positionals[1]} (${count} tokens, dim ${encoder.dim})`);
    return 0;
  }
  throw new UsageError(command ? `unknown command "${command}"` : "missing command");
}

export async function main(argv: string[]): Promise<number> {
  try {
    return await run(argv);
  } catch (err) {
    if (err instanceof UsageError || err instanceof TypeError || err instanceof RangeError) {
      // parseArgs raises TypeError on unknown flags
      console.error(`error: ${err.message}\n\n${USAGE}`);
      return 1;
    }
    if (err instanceof VocabError || err instanceof LexiconError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    if (err instanceof EncodeError) {
      console.error(`error: ${err.message}`);
      return 3;
    }
    const message = err instanceof Error ? err.message : String(err);
    console.error(`error: ${message}`);
    return 1;
  }
}

// argv[1] may be an npm .bin symlink; realpath makes the comparison robust
const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(realpathSync(process.argv[1])).href;
if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
