/** Embedding encoders behind one interface.
 *
 * `HashProjectionEncoder` is the default: a deterministic, dependency-free
 * stand-in that maps any string to a unit-norm pseudo-random vector. It has
 * no semantics — it exists to exercise the wire protocol and the export
 * plumbing, not to measure similarity. `LexiconEncoder` serves real vectors
 * from a flat lexicon-file snapshot (the same format `export-lexicon`
 * writes), composing multi-token texts as the mean of in-vocabulary token
 * vectors. `loadUniversalSentenceEncoder` wires in a live pretrained
 * checkpoint where the deployment can fetch one.
 */

import { readFileSync } from "node:fs";

import { fnv1a64, splitmix64, toUnitInterval } from "./hash.js";

/** Largest /embed batch the service accepts; clients chunk to this. */
export const MAX_BATCH = 256;

export interface Encoder {
  readonly modelId: string;
  readonly dim: number;
  embedBatch(texts: string[]): Promise<number[][]>;
}

/** The encoder cannot produce a vector for a text (surfaced as HTTP 503). */
export class EncodeError extends Error {}

/** A lexicon file violates the flat-file contract. */
export class LexiconError extends Error {}

export class HashProjectionEncoder implements Encoder {
  readonly modelId: string;
  readonly dim: number;

  constructor(dim = 512) {
    if (!Number.isInteger(dim) || dim < 1) {
      throw new RangeError(`dim must be a positive integer, got ${dim}`);
    }
    this.dim = dim;
    this.modelId = `hash-projection-v1:d${dim}`;
  }

  private project(text: string): number[] {
    let state = fnv1a64(text);
    for (;;) {
      const comps: number[] = [];
      for (let i = 0; i < this.dim; i++) {
        const step = splitmix64(state);
        state = step.state;
        comps.push(toUnitInterval(step.value));
      }
      let sq = 0;
      for (const c of comps) sq += c * c;
      const norm = Math.sqrt(sq);
      // an exactly-zero draw is astronomically unlikely but would have no
      // direction; keep drawing from the same stream so the result stays
      // a pure function of the text
      if (norm > 0) return comps.map((c) => c / norm);
    }
  }

  async embedBatch(texts: string[]): Promise<number[][]> {
    return texts.map((t) => this.project(t));
  }
}

interface Lexicon {
  dim: number;
  entries: Map<string, number[]>;
}

function parseComponent(field: string, context: string): number {
  const value = Number(field);
  if (field.trim() === "" || Number.isNaN(value) || !Number.isFinite(value)) {
    throw new LexiconError(`${context}: bad float component ${JSON.stringify(field)}`);
  }
  return value;
}

/** Parse a flat lexicon file: line 1 is `<entry_count> <dim>`, each
 * following line `<token> <c1> ... <cdim>` single-space separated. */
export function parseLexicon(path: string): Lexicon {
  let raw: string;
  try {
    raw = readFileSync(path, "utf8");
  } catch (err) {
    const message = err instanceof Error ? err.message : String(err);
    throw new LexiconError(`cannot read lexicon file ${path}: ${message}`);
  }
  const lines = raw.split("\n");
  if (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  const header = (lines[0] ?? "").split(/\s+/).filter((f) => f !== "");
  if (header.length !== 2) {
    throw new LexiconError(`${path}:1: expected header '<entry_count> <dim>'`);
  }
  const count = Number(header[0]);
  const dim = Number(header[1]);
  if (!Number.isInteger(count) || !Number.isInteger(dim) || count < 0 || dim < 1) {
    throw new LexiconError(`${path}:1: invalid header values ${header[0]} ${header[1]}`);
  }
  const entries = new Map<string, number[]>();
  for (let i = 1; i < lines.length; i++) {
    const lineno = i + 1;
    const fields = (lines[i] as string).split(" ");
    const token = fields[0] ?? "";
    if (!token) throw new LexiconError(`${path}:${lineno}: empty token`);
    if (token !== token.toLowerCase()) {
      throw new LexiconError(`${path}:${lineno}: token "${token}" is not lowercase`);
    }
    if (entries.has(token)) {
      throw new LexiconError(`${path}:${lineno}: duplicate token "${token}"`);
    }
    if (fields.length - 1 !== dim) {
      throw new LexiconError(
        `${path}:${lineno}: expected ${dim} components, got ${fields.length - 1}`
      );
    }
    const vec = fields.slice(1).map((f) => parseComponent(f, `${path}:${lineno}`));
    if (vec.every((c) => c === 0)) {
      throw new LexiconError(`${path}:${lineno}: all-zero vector`);
    }
    entries.set(token, vec);
  }
  if (entries.size !== count) {
    throw new LexiconError(`${path}: header promises ${count} entries, found ${entries.size}`);
  }
  return { dim, entries };
}

// word = letters/digits with internal apostrophes, >= 2 chars, >= 1 letter
const TOKEN_RE = /[^\W_]+(?:'[^\W_]+)*/gu;

function tokenizeForComposition(text: string): string[] {
  const out: string[] = [];
  for (const match of text.toLowerCase().matchAll(TOKEN_RE)) {
    const tok = match[0];
    if (tok.length >= 2 && /\p{L}/u.test(tok)) out.push(tok);
  }
  return out;
}

export class LexiconEncoder implements Encoder {
  readonly modelId: string;
  readonly dim: number;
  private readonly entries: Map<string, number[]>;

  constructor(path: string) {
    const lexicon = parseLexicon(path);
    this.dim = lexicon.dim;
    this.entries = lexicon.entries;
    this.modelId = `lexicon:${path}`;
  }

  private embedOne(text: string): number[] {
    const exact = this.entries.get(text);
    if (exact) return exact.slice();
    const rows: number[][] = [];
    for (const tok of tokenizeForComposition(text)) {
      const vec = this.entries.get(tok);
      if (vec) rows.push(vec);
    }
    if (rows.length === 0) {
      throw new EncodeError(`no in-vocabulary tokens in ${JSON.stringify(text)}`);
    }
    const mean = new Array<number>(this.dim).fill(0);
    for (const row of rows) {
      for (let j = 0; j < this.dim; j++) mean[j] = (mean[j] as number) + (row[j] as number);
    }
    for (let j = 0; j < this.dim; j++) mean[j] = (mean[j] as number) / rows.length;
    let sq = 0;
    for (const c of mean) sq += c * c;
    if (Math.sqrt(sq) <= 1e-12) {
      throw new EncodeError(
        `token vectors for ${JSON.stringify(text)} cancel to a zero vector`
      );
    }
    return mean;
  }

  async embedBatch(texts: string[]): Promise<number[][]> {
    return texts.map((t) => this.embedOne(t));
  }
}

/** Load a live multilingual Universal Sentence Encoder checkpoint.
 *
 * Requires the optional packages `@tensorflow/tfjs` and
 * `@tensorflow-models/universal-sentence-encoder` plus network access to
 * the checkpoint host; neither ships with this service by default.
 */
export async function loadUniversalSentenceEncoder(): Promise<Encoder> {
  let use: { load(): Promise<{ embed(texts: string[]): Promise<{ arraySync(): number[][] }> }> };
  try {
    // variable specifiers keep these imports out of static resolution; the
    // packages are deliberately not dependencies of this service
    const tfjs = "@tensorflow/tfjs";
    const useModule = "@tensorflow-models/universal-sentence-encoder";
    await import(tfjs);
    use = (await import(useModule)) as typeof use;
  } catch (err) {
    const message = err instanceof Error ? err.message : String(err);
    throw new EncodeError(
      "universal-sentence-encoder is not available; install @tensorflow/tfjs and " +
        `@tensorflow-models/universal-sentence-encoder to use it (${message})`
    );
  }
  const model = await use.load();
  const probe = await model.embed(["dimension probe"]);
  const dim = (probe.arraySync()[0] as number[]).length;
  // serialize inference so concurrent requests cannot interleave model calls
  let chain: Promise<unknown> = Promise.resolve();
  return {
    modelId: "universal-sentence-encoder-multilingual",
    dim,
    embedBatch(texts: string[]): Promise<number[][]> {
      const next = chain.then(async () => {
        const result = await model.embed(texts);
        return result.arraySync();
      });
      chain = next.catch(() => undefined);
      return next;
    },
  };
}
