/** Snapshot a vocabulary through an encoder into the flat lexicon format
 * the offline backend reads: line 1 is `<count> <dim>`, then one
 * `<token> <c1> ... <cdim>` row per entry, components printed with 8
 * decimal places (round-trip error ≤ 5e-9 per component).
 */

import { readFileSync, writeFileSync } from "node:fs";

import { Encoder, MAX_BATCH } from "./encoder.js";

/** The vocabulary file violates its contract (one lowercase token per line). */
export class VocabError extends Error {}

export function readVocab(path: string): string[] {
  let raw: string;
  try {
    raw = readFileSync(path, "utf8");
  } catch (err) {
    const message = err instanceof Error ? err.message : String(err);
    throw new VocabError(`cannot read vocab file ${path}: ${message}`);
  }
  const tokens: string[] = [];
  const seen = new Set<string>();
  raw.split("\n").forEach((line, idx) => {
    const token = line.trim();
    if (!token) return;
    if (/\s/.test(token)) {
      throw new VocabError(`${path}:${idx + 1}: token ${JSON.stringify(token)} contains whitespace`);
    }
    if (token !== token.toLowerCase()) {
      throw new VocabError(`${path}:${idx + 1}: token "${token}" is not lowercase`);
    }
    if (seen.has(token)) {
      throw new VocabError(`${path}:${idx + 1}: duplicate token "${token}"`);
    }
    seen.add(token);
    tokens.push(token);
  });
  return tokens;
}

/** Returns the number of tokens written. */
export async function exportLexicon(
  encoder: Encoder,
  vocabPath: string,
  outPath: string
): Promise<number> {
  const tokens = readVocab(vocabPath);
  const lines = [`${tokens.length} ${encoder.dim}`];
  for (let i = 0; i < tokens.length; i += MAX_BATCH) {
    const chunk = tokens.slice(i, i + MAX_BATCH);
    const vectors = await encoder.embedBatch(chunk);
    chunk.forEach((token, j) => {
      const comps = (vectors[j] as number[]).map((c) => c.toFixed(8));
      lines.push(`${token} ${comps.join(" ")}`);
    });
  }
  writeFileSync(outPath, lines.join("\n") + "\n", "utf8");
  return tokens.length;
}
