/** Client-side recoloring: must match the analysis side channel-exactly. */

import type {
  ColorAssignment, ColorMode, DendrogramJson, Rgb, ScaleId,
} from "./types.js";

const SPECTRAL: Rgb[] = [
  [158, 1, 66], [193, 39, 74], [221, 74, 76], [240, 103, 68],
  [249, 142, 82], [253, 181, 103], [254, 212, 129], [254, 236, 159],
  [255, 255, 190], [239, 249, 166], [214, 238, 155], [177, 223, 163],
  [134, 207, 165], [94, 185, 169], [61, 149, 184], [68, 113, 178],
  [94, 79, 162],
];

const BLUES: Rgb[] = [
  [247, 251, 255], [234, 243, 251], [222, 235, 247], [210, 227, 243],
  [198, 219, 239], [178, 210, 232], [157, 202, 225], [132, 188, 219],
  [106, 174, 214], [86, 160, 206], [65, 145, 198], [49, 129, 189],
  [32, 112, 180], [20, 96, 168], [8, 80, 155], [8, 64, 130],
  [8, 48, 107],
];

const VIRIDIS: Rgb[] = [
  [68, 1, 84], [72, 24, 106], [71, 45, 123], [66, 64, 134],
  [59, 82, 139], [51, 99, 141], [44, 114, 142], [38, 130, 142],
  [33, 145, 140], [31, 160, 136], [40, 174, 128], [63, 188, 115],
  [94, 201, 98], [132, 212, 75], [173, 220, 48], [216, 226, 25],
  [253, 231, 37],
];

const CIVIDIS: Rgb[] = [
  [0, 34, 78], [0, 46, 106], [26, 56, 111], [50, 67, 109],
  [67, 78, 108], [83, 90, 109], [97, 101, 111], [111, 112, 115],
  [125, 124, 120], [140, 136, 120], [155, 148, 118], [171, 160, 114],
  [188, 174, 108], [205, 187, 99], [222, 201, 88], [240, 216, 70],
  [254, 232, 56],
];

const TABLES: Record<Exclude<ScaleId, "none">, Rgb[]> = {
  spectral: SPECTRAL, blues: BLUES, viridis: VIRIDIS, cividis: CIVIDIS,
};

export const SCALE_IDS: ScaleId[] =
  ["spectral", "blues", "viridis", "cividis", "none"];

export function scaleColor(scale: Exclude<ScaleId, "none">, t: number): Rgb {
  const points = TABLES[scale];
  const clamped = t < 0 ? 0 : t > 1 ? 1 : t;
  const last = points.length - 1;
  let lo = 0;
  for (let i = 0; i < last; i++) {
    // control points sit at i / last
    if (i / last <= clamped) lo = i;
    else break;
  }
  const t0 = lo / last;
  if (lo === last || clamped === t0) return points[lo];
  const t1 = (lo + 1) / last;
  const u = (clamped - t0) / (t1 - t0);
  const c0 = points[lo];
  const c1 = points[lo + 1];
  return [
    Math.floor(c0[0] + u * (c1[0] - c0[0]) + 0.5),
    Math.floor(c0[1] + u * (c1[1] - c0[1]) + 0.5),
    Math.floor(c0[2] + u * (c1[2] - c0[2]) + 0.5),
  ];
}

function assignment(mode: ColorMode, positions: (number | null)[],
                    scale: ScaleId, selected: number | null = null,
                    threshold: number | null = null): ColorAssignment {
  const colors = positions.map((p) =>
    p === null || scale === "none" ? null : scaleColor(scale, p));
  if (scale === "none") positions = positions.map(() => null);
  return { mode, positions, colors, selected, threshold };
}

export function mapDirect(matrix: number[][], selected: number,
                          scale: ScaleId): ColorAssignment {
  const positions = matrix[selected].map((d) => 1.0 - d);
  return assignment("direct", positions, scale, selected);
}

export function mapIdentical(matrix: number[][], selected: number,
                             scale: ScaleId): ColorAssignment {
  const positions = matrix[selected].map((d) => (d === 0 ? 1.0 : null));
  return assignment("identical", positions, scale, selected);
}

export function mapPositions(positions: number[],
                             scale: ScaleId): ColorAssignment {
  return assignment("mds", positions.slice(), scale);
}

export function cutDendrogram(dendrogram: DendrogramJson,
                              threshold: number): number[][] {
  const n = dendrogram.leafOrder.length;
  if (n === 0) return [];
  const byId = new Map(dendrogram.merges.map((m) => [m.newId, m]));
  const rootId = dendrogram.merges.length
    ? dendrogram.merges[dendrogram.merges.length - 1].newId : 0;

  const leavesOf = (node: number): number[] => {
    const out: number[] = [];
    const stack = [node];
    while (stack.length) {
      const current = stack.pop()!;
      if (current < n) out.push(current);
      else {
        const merge = byId.get(current)!;
        stack.push(merge.rightId);
        stack.push(merge.leftId);
      }
    }
    return out;
  };

  const clusters: number[][] = [];
  const walk = [rootId];
  while (walk.length) {
    const node = walk.pop()!;
    if (node < n || byId.get(node)!.height <= threshold) {
      clusters.push(leavesOf(node));
    } else {
      const merge = byId.get(node)!;
      walk.push(merge.rightId);
      walk.push(merge.leftId);
    }
  }
  return clusters;
}

export function clusterColors(dendrogram: DendrogramJson,
                              clusters: number[][], scale: ScaleId,
                              threshold: number): ColorAssignment {
  const n = dendrogram.leafOrder.length;
  const positionOf = new Map(dendrogram.leafOrder.map((leaf, i) => [leaf, i]));
  const positions: (number | null)[] = new Array(n).fill(null);
  for (const members of clusters) {
    const spots = members.map((m) => positionOf.get(m)!);
    const t = n > 1
      ? (Math.min(...spots) + Math.max(...spots)) / 2 / (n - 1)
      : 0.5;
    for (const m of members) positions[m] = t;
  }
  return assignment("cluster", positions, scale, null, threshold);
}

export function notePitchColor(pitch: number,
                               range: [number, number]): Rgb {
  const [lo, hi] = range;
  const t = hi === lo ? 0.5 : (pitch - lo) / (hi - lo);
  return scaleColor("viridis", t);
}

function linearize(channel: number): number {
  const c = channel / 255;
  return c <= 0.04045 ? c / 12.92 : ((c + 0.055) / 1.055) ** 2.4;
}

export function contrastTextColor(background: Rgb): Rgb {
  const luminance = 0.2126 * linearize(background[0])
    + 0.7152 * linearize(background[1])
    + 0.0722 * linearize(background[2]);
  return luminance >= 0.45 ? [0, 0, 0] : [255, 255, 255];
}

export function cssColor(color: Rgb): string {
  return `rgb(${color[0]},${color[1]},${color[2]})`;
}
