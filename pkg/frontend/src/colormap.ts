export type Rgb = [number, number, number];

// Diverging blue-white-red anchors (cool/warm style): negative values in
// blue, zero at white, positive in red, so sign structure stays readable.
const DIVERGING_ANCHORS: Rgb[] = [
  [33, 60, 153],
  [95, 127, 211],
  [174, 198, 235],
  [245, 245, 245],
  [235, 175, 156],
  [204, 93, 81],
  [155, 22, 38],
];

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

/** Sample the diverging map at t in [0, 1]; 0.5 is the white point. */
export function diverging(t: number): Rgb {
  const x = Math.max(0, Math.min(1, t)) * (DIVERGING_ANCHORS.length - 1);
  const i = Math.min(Math.floor(x), DIVERGING_ANCHORS.length - 2);
  const f = x - i;
  const lo = DIVERGING_ANCHORS[i];
  const hi = DIVERGING_ANCHORS[i + 1];
  return [
    Math.round(lerp(lo[0], hi[0], f)),
    Math.round(lerp(lo[1], hi[1], f)),
    Math.round(lerp(lo[2], hi[2], f)),
  ];
}

/**
 * Map a field value to a color with the scale centered at zero and
 * clipped at +-limit, so w = 0 always lands on the white midpoint.
 */
export function zeroCenteredColor(value: number, limit: number): Rgb {
  if (limit <= 0) return diverging(0.5);
  return diverging(0.5 + 0.5 * Math.max(-1, Math.min(1, value / limit)));
}

/** Symmetric color limit for one panel: max |v| over the field. */
export function symmetricLimit(values: Iterable<number | null>): number {
  let m = 0;
  for (const v of values) {
    if (v !== null && Math.abs(v) > m) m = Math.abs(v);
  }
  return m;
}

/** Line colors for multi-series panels. */
export const LINE_PALETTE: Rgb[] = [
  [31, 119, 180],
  [214, 39, 40],
  [44, 160, 44],
  [148, 103, 189],
  [255, 127, 14],
  [23, 190, 207],
  [140, 86, 75],
];
