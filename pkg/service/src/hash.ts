/** Deterministic 64-bit hashing and stream derivation (BigInt arithmetic).
 *
 * These are the numeric building blocks of the hash-projection encoder:
 * FNV-1a turns a string into a 64-bit seed, splitmix64 expands the seed
 * into a stream of decorrelated 64-bit values, and `toUnitInterval` maps
 * each value onto [-1, 1) using its top 53 bits (exact in a float64).
 */

const M64 = (1n << 64n) - 1n;
const FNV_OFFSET = 0xcbf29ce484222325n;
const FNV_PRIME = 0x100000001b3n;

/** FNV-1a over the UTF-8 bytes of `text`. */
export function fnv1a64(text: string): bigint {
  let h = FNV_OFFSET;
  for (const byte of Buffer.from(text, "utf8")) {
    h ^= BigInt(byte);
    h = (h * FNV_PRIME) & M64;
  }
  return h;
}

/** One splitmix64 step: returns the advanced state and the output value. */
export function splitmix64(state: bigint): { state: bigint; value: bigint } {
  state = (state + 0x9e3779b97f4a7c15n) & M64;
  let z = state;
  z = ((z ^ (z >> 30n)) * 0xbf58476d1ce4e5b9n) & M64;
  z = ((z ^ (z >> 27n)) * 0x94d049bb133111ebn) & M64;
  z = z ^ (z >> 31n);
  return { state, value: z };
}

/** Uniform float in [-1, 1) from the top 53 bits of a 64-bit value. */
export function toUnitInterval(value: bigint): number {
  return (Number(value >> 11n) / 2 ** 53) * 2 - 1;
}
