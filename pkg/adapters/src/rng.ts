// Deterministic RNG seeded from a wire seed (a JSON-safe integer below
// 2^53).  The seed is stretched through splitmix64 into four 32-bit words
// of sfc32 state, so nearby seeds still give unrelated streams.

const MASK64 = (1n << 64n) - 1n;

export function seededRng(seed: number): () => number {
  if (!Number.isSafeInteger(seed) || seed < 0) {
    throw new Error(`seed must be a non-negative safe integer, got ${seed}`);
  }
  let state = BigInt(seed);
  const word = (): number => {
    state = (state + 0x9e3779b97f4a7c15n) & MASK64;
    let z = state;
    z = ((z ^ (z >> 30n)) * 0xbf58476d1ce4e5b9n) & MASK64;
    z = ((z ^ (z >> 27n)) * 0x94d049bb133111ebn) & MASK64;
    z = z ^ (z >> 31n);
    return Number(z & 0xffffffffn) >>> 0;
  };

  let a = word();
  let b = word();
  let c = word();
  let d = word();

  return () => {
    a >>>= 0;
    b >>>= 0;
    c >>>= 0;
    d >>>= 0;
    const t = (((a + b) | 0) + d) | 0;
    d = (d + 1) | 0;
    a = b ^ (b >>> 9);
    b = (c + (c << 3)) | 0;
    c = (c << 21) | (c >>> 11);
    c = (c + t) | 0;
    return (t >>> 0) / 4294967296;
  };
}

/** Draw an index from a cumulative distribution (last entry is the total). */
export function sampleCdf(cdf: Float64Array, rng: () => number): number {
  const total = cdf[cdf.length - 1];
  const r = rng() * total;
  let lo = 0;
  let hi = cdf.length - 1;
  while (lo < hi) {
    const mid = (lo + hi) >> 1;
    if (r <= cdf[mid]) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}
