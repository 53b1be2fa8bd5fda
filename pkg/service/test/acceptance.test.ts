/** Acceptance checks for the embedding service: response determinism, the
 * export/serve round-trip bound, and semantic-ordering preservation when a
 * semantic encoder is deployed. Each prints a PASS line with its numbers.
 */

import { once } from "node:events";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import type { Server } from "node:http";
import type { AddressInfo } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import { afterAll, describe, expect, it } from "vitest";

import { buildApp } from "../src/app.js";
import {
  Encoder,
  HashProjectionEncoder,
  LexiconEncoder,
  loadUniversalSentenceEncoder,
} from "../src/encoder.js";
import { exportLexicon } from "../src/exportLexicon.js";

const FIXTURE = fileURLToPath(new URL("./fixtures/tiny-lexicon.txt", import.meta.url));
const scratch = mkdtempSync(join(tmpdir(), "service-acceptance-"));
afterAll(() => rmSync(scratch, { recursive: true, force: true }));

function cosine(a: number[], b: number[]): number {
  let dot = 0;
  let na = 0;
  let nb = 0;
  for (let i = 0; i < a.length; i++) {
    dot += (a[i] as number) * (b[i] as number);
    na += (a[i] as number) ** 2;
    nb += (b[i] as number) ** 2;
  }
  return dot / (Math.sqrt(na) * Math.sqrt(nb));
}

async function withServer<T>(
  encoder: Encoder,
  body: (base: string) => Promise<T>
): Promise<T> {
  const server: Server = buildApp(encoder).listen(0, "127.0.0.1");
  await once(server, "listening");
  const base = `http://127.0.0.1:${(server.address() as AddressInfo).port}`;
  try {
    return await body(base);
  } finally {
    await new Promise((resolve) => server.close(resolve));
  }
}

async function postEmbed(base: string, texts: string[]): Promise<number[][]> {
  const resp = await fetch(`${base}/embed`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ texts }),
  });
  expect(resp.status).toBe(200);
  return (await resp.json()).vectors;
}

describe("service acceptance", () => {
  it("embed responses are deterministic across repeated and concurrent calls", async () => {
    await withServer(new HashProjectionEncoder(64), async (base) => {
      const texts = ["war", "peace talks continue", "computer"];
      const first = await postEmbed(base, texts);
      for (let i = 0; i < 3; i++) {
        expect(await postEmbed(base, texts)).toEqual(first);
      }
      const concurrent = await Promise.all(
        Array.from({ length: 12 }, () => postEmbed(base, texts))
      );
      for (const vectors of concurrent) expect(vectors).toEqual(first);
      console.log(
        "PASS service determinism: 4 sequential + 12 concurrent /embed calls returned " +
          "identical vectors"
      );
    });
  });

  it("export-lexicon round-trips against the live service within 1e-6", async () => {
    const encoder = new HashProjectionEncoder(64);
    const vocabPath = join(scratch, "vocab.txt");
    const tokens = ["war", "peace", "computer", "battle", "ceasefire"];
    writeFileSync(vocabPath, tokens.join("\n") + "\n", "utf8");
    const outPath = join(scratch, "exported-lexicon.txt");
    await exportLexicon(encoder, vocabPath, outPath);

    const lines = readFileSync(outPath, "utf8").trimEnd().split("\n");
    expect(lines[0]).toBe(`${tokens.length} 64`);
    const exported = new Map(
      lines.slice(1).map((line) => {
        const fields = line.split(" ");
        return [fields[0] as string, fields.slice(1).map(Number)] as const;
      })
    );

    const live = await withServer(encoder, (base) => postEmbed(base, tokens));
    let worst = 0;
    tokens.forEach((token, i) => {
      const fromFile = exported.get(token) as number[];
      (live[i] as number[]).forEach((c, j) => {
        worst = Math.max(worst, Math.abs(c - (fromFile[j] as number)));
      });
    });
    expect(worst).toBeLessThanOrEqual(1e-6);
    console.log(
      `PASS export round-trip: max |exported - live| = ${worst.toExponential(2)} <= 1e-6 ` +
        `over ${tokens.length} tokens x 64 components`
    );
  });

  it("serving a semantic lexicon snapshot preserves similarity ordering end to end", async () => {
    await withServer(new LexiconEncoder(FIXTURE), async (base) => {
      const [war, peace, computer] = await postEmbed(base, ["war", "peace", "computer"]);
      const warPeace = cosine(war as number[], peace as number[]);
      const warComputer = cosine(war as number[], computer as number[]);
      expect(warPeace).toBeGreaterThan(warComputer);
      console.log(
        `PASS semantic ordering (lexicon snapshot): cosine(war,peace) = ${warPeace.toFixed(3)} > ` +
          `cosine(war,computer) = ${warComputer.toFixed(3)}`
      );
    });
  });

  // The live-checkpoint variant needs the optional tfjs packages plus network
  // access to the checkpoint host, neither of which this environment has.
  it.runIf(process.env.TRENDSIM_USE_REAL === "1")(
    "a live universal-sentence-encoder checkpoint preserves similarity ordering",
    async () => {
      const encoder = await loadUniversalSentenceEncoder();
      await withServer(encoder, async (base) => {
        const [war, peace, computer] = await postEmbed(base, ["war", "peace", "computer"]);
        const warPeace = cosine(war as number[], peace as number[]);
        const warComputer = cosine(war as number[], computer as number[]);
        expect(warPeace).toBeGreaterThan(warComputer);
        console.log(
          `PASS semantic ordering (live checkpoint): cosine(war,peace) = ${warPeace.toFixed(3)} > ` +
            `cosine(war,computer) = ${warComputer.toFixed(3)}`
        );
      });
    },
    120_000
  );
});
