// Color parity: recoloring from bundle data must reproduce the golden
// vectors exported by the analysis side, exactly per channel.

import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";
import { describe, expect, it } from "vitest";

import { parseBundle, uncondense } from "../src/bundle.js";
import {
  clusterColors, cutDendrogram, mapDirect, mapIdentical, mapPositions,
  scaleColor,
} from "../src/coloring.js";
import type { ScaleId } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));
const repoRoot = join(here, "..", "..");

const bundle = parseBundle(readFileSync(
  join(repoRoot, "samples", "golden", "sections_tab.scorelens.json"),
  "utf8"));

interface VectorCase {
  mode: "direct" | "identical" | "mds" | "cluster";
  selected: number | null;
  scale: ScaleId;
  threshold: number;
  colors: ([number, number, number] | null)[];
}

const vectors = JSON.parse(readFileSync(
  join(repoRoot, "tests", "golden", "color_vectors.json"), "utf8")) as {
  cases: VectorCase[];
};

describe("color parity with the analysis side", () => {
  it("covers all four modes at two scales and three thresholds", () => {
    const modes = new Set(vectors.cases.map((c) => c.mode));
    const scales = new Set(vectors.cases.map((c) => c.scale));
    const thresholds = new Set(vectors.cases.map((c) => c.threshold));
    expect(modes.size).toBe(4);
    expect(scales.size).toBe(2);
    expect(thresholds.size).toBe(3);
    expect(vectors.cases.length).toBe(24);
  });

  it("reproduces every golden color vector channel-exactly", () => {
    const level = bundle.analyses[0].levels.bar;
    const matrix = uncondense(level.condensedDistances, level.count);
    for (const testCase of vectors.cases) {
      let colors: ([number, number, number] | null)[];
      if (testCase.mode === "direct") {
        colors = mapDirect(matrix, testCase.selected!, testCase.scale).colors;
      } else if (testCase.mode === "identical") {
        colors = mapIdentical(matrix, testCase.selected!,
                              testCase.scale).colors;
      } else if (testCase.mode === "mds") {
        colors = mapPositions(level.mdsPositions, testCase.scale).colors;
      } else {
        const clusters = cutDendrogram(level.dendrogram, testCase.threshold);
        colors = clusterColors(level.dendrogram, clusters, testCase.scale,
                               testCase.threshold).colors;
      }
      expect(colors.length).toBe(testCase.colors.length);
      colors.forEach((got, i) => {
        const want = testCase.colors[i];
        const label = `${testCase.mode}/${testCase.scale}`
          + `/t=${testCase.threshold} bar ${i}`;
        if (want === null) {
          expect(got, label).toBeNull();
        } else {
          expect(got, label).toEqual(want);
        }
      });
    }
  });

  it("pins the scale interpolation endpoints and midpoint", () => {
    expect(scaleColor("spectral", 0)).toEqual([158, 1, 66]);
    expect(scaleColor("spectral", 1)).toEqual([94, 79, 162]);
    expect(scaleColor("spectral", 0.5)).toEqual([255, 255, 190]);
    expect(scaleColor("blues", -5)).toEqual([247, 251, 255]);
    expect(scaleColor("blues", 7)).toEqual([8, 48, 107]);
  });
});
