// Shared test utilities: a deterministic RNG so property-style loops are
// reproducible, and a canned valid landmark set.

export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function randomLandmarks(rand: () => number): [number, number][] {
  const out: [number, number][] = [];
  for (let i = 0; i < 21; i++) {
    out.push([rand(), rand()]);
  }
  return out;
}

export function choice<T>(rand: () => number, items: T[]): T {
  return items[Math.floor(rand() * items.length)];
}
