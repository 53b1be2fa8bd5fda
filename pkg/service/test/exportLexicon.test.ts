import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, describe, expect, it } from "vitest";

import { Encoder, HashProjectionEncoder } from "../src/encoder.js";
import { VocabError, exportLexicon, readVocab } from "../src/exportLexicon.js";

const scratch = mkdtempSync(join(tmpdir(), "export-test-"));
afterAll(() => rmSync(scratch, { recursive: true, force: true }));

function writeTemp(name: string, content: string): string {
  const path = join(scratch, name);
  writeFileSync(path, content, "utf8");
  return path;
}

/** Minimal independent reader for the exported format. */
function reparse(path: string): { count: number; dim: number; rows: Map<string, number[]> } {
  const lines = readFileSync(path, "utf8").split("\n");
  expect(lines[lines.length - 1]).toBe(""); // trailing newline
  lines.pop();
  const [count, dim] = (lines[0] as string).split(" ").map(Number) as [number, number];
  const rows = new Map<string, number[]>();
  for (const line of lines.slice(1)) {
    const fields = line.split(" ");
    expect(fields).toHaveLength(dim + 1);
    rows.set(fields[0] as string, fields.slice(1).map(Number));
  }
  expect(rows.size).toBe(count);
  return { count, dim, rows };
}

describe("readVocab", () => {
  it("keeps order and skips blank lines", () => {
    const path = writeTemp("vocab.txt", "war\n\npeace\n  computer  \n");
    expect(readVocab(path)).toEqual(["war", "peace", "computer"]);
  });

  it.each([
    ["duplicate token", "war\npeace\nwar\n", /3: duplicate token "war"/],
    ["uppercase token", "war\nPeace\n", /2: token "Peace" is not lowercase/],
    ["inner whitespace", "war\ntwo words\n", /contains whitespace/],
  ])("rejects %s", (_label, content, pattern) => {
    const path = writeTemp(`vocab-${_label.replace(/\W+/g, "-")}.txt`, content);
    expect(() => readVocab(path)).toThrow(VocabError);
    expect(() => readVocab(path)).toThrow(pattern);
  });

  it("rejects a missing file", () => {
    expect(() => readVocab(join(scratch, "nope.txt"))).toThrow(/cannot read vocab file/);
  });
});

describe("exportLexicon", () => {
  it("writes the flat format and round-trips within 1e-6", async () => {
    const encoder = new HashProjectionEncoder(24);
    const vocab = writeTemp("roundtrip-vocab.txt", "war\npeace\ncomputer\n");
    const out = join(scratch, "roundtrip-lexicon.txt");
    expect(await exportLexicon(encoder, vocab, out)).toBe(3);

    const { count, dim, rows } = reparse(out);
    expect(count).toBe(3);
    expect(dim).toBe(24);
    const live = await encoder.embedBatch(["war", "peace", "computer"]);
    let worst = 0;
    ["war", "peace", "computer"].forEach((token, i) => {
      const exported = rows.get(token) as number[];
      (live[i] as number[]).forEach((c, j) => {
        worst = Math.max(worst, Math.abs(c - (exported[j] as number)));
      });
    });
    expect(worst).toBeLessThanOrEqual(1e-6);
  });

  it("writes a bare header for an empty vocabulary", async () => {
    const vocab = writeTemp("empty-vocab.txt", "\n\n");
    const out = join(scratch, "empty-lexicon.txt");
    expect(await exportLexicon(new HashProjectionEncoder(6), vocab, out)).toBe(0);
    expect(readFileSync(out, "utf8")).toBe("0 6\n");
  });

  it("chunks large vocabularies through the encoder", async () => {
    const calls: number[] = [];
    const inner = new HashProjectionEncoder(4);
    const spy: Encoder = {
      modelId: inner.modelId,
      dim: inner.dim,
      embedBatch(texts) {
        calls.push(texts.length);
        return inner.embedBatch(texts);
      },
    };
    const vocab = writeTemp(
      "big-vocab.txt",
      Array.from({ length: 300 }, (_, i) => `tok${i}`).join("\n") + "\n"
    );
    const out = join(scratch, "big-lexicon.txt");
    expect(await exportLexicon(spy, vocab, out)).toBe(300);
    expect(calls).toEqual([256, 44]);
    expect(reparse(out).count).toBe(300);
  });
});

const hasOfflineBackend = (() => {
  try {
    execFileSync("python3", ["-c", "import trendsim.backends"], { stdio: "ignore" });
    return true;
  } catch {
    return false;
  }
})();

describe("cross-implementation round-trip", () => {
  it.runIf(hasOfflineBackend)(
    "exported files load through the offline backend's parser",
    async () => {
      const vocab = writeTemp("cross-vocab.txt", "war\npeace\ncomputer\nbattle\n");
      const out = join(scratch, "cross-lexicon.txt");
      await exportLexicon(new HashProjectionEncoder(12), vocab, out);
      const script =
        "import sys\n" +
        "from trendsim.backends import load_lexicon\n" +
        "lex = load_lexicon(sys.argv[1])\n" +
        "print(len(lex.entries), lex.dim)\n";
      const stdout = execFileSync("python3", ["-c", script, out], { encoding: "utf8" });
      expect(stdout.trim()).toBe("4 12");
    }
  );
});
