// Bundle schema validation mirrors the analysis side: versioned, typed,
// and every rejection names the JSON path.

import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";
import { describe, expect, it } from "vitest";

import {
  SchemaViolation, UnsupportedVersion, expandTree, parseBundle,
} from "../src/bundle.js";

const here = dirname(fileURLToPath(import.meta.url));
const goldenPath = join(here, "..", "..", "samples", "golden",
                        "sections_tab.scorelens.json");
const goldenText = readFileSync(goldenPath, "utf8");

function corrupt(mutate: (payload: any) => void): () => void {
  const payload = JSON.parse(goldenText);
  mutate(payload);
  return () => parseBundle(JSON.stringify(payload));
}

describe("bundle parsing", () => {
  it("accepts the golden bundle", () => {
    const bundle = parseBundle(goldenText);
    expect(bundle.title).toBe("Riff Study");
    expect(bundle.tracks[0].bars.length).toBe(8);
    expect(bundle.analyses[0].canonicalIds).toEqual([0, 0, 2, 3, 4, 4, 6, 4]);
  });

  it("expands the repetition tree back to the canonical ids", () => {
    const bundle = parseBundle(goldenText);
    expect(expandTree(bundle.analyses[0].repetitionTree))
      .toEqual(bundle.analyses[0].canonicalIds);
  });

  it("rejects non-JSON input at the root path", () => {
    expect(() => parseBundle("not json")).toThrowError(SchemaViolation);
    try {
      parseBundle("not json");
    } catch (error) {
      expect((error as SchemaViolation).path).toBe("$");
    }
  });

  it("rejects unknown format versions", () => {
    expect(corrupt((p) => { p.formatVersion = 2; }))
      .toThrowError(UnsupportedVersion);
  });

  it("names the path of a missing field", () => {
    try {
      corrupt((p) => { delete p.tracks; })();
      throw new Error("should have thrown");
    } catch (error) {
      expect((error as SchemaViolation).path).toBe("$.tracks");
    }
  });

  it("names the path of a mistyped note field", () => {
    try {
      corrupt((p) => { p.tracks[0].bars[0].notes[0].pitch = "x"; })();
      throw new Error("should have thrown");
    } catch (error) {
      expect((error as SchemaViolation).path)
        .toBe("$.tracks[0].bars[0].notes[0].pitch");
    }
  });

  it("rejects a condensed matrix of the wrong length", () => {
    expect(corrupt((p) => {
      p.analyses[0].levels.bar.condensedDistances.pop();
    })).toThrowError(/condensedDistances/);
  });

  it("rejects a corrupt leaf order", () => {
    expect(corrupt((p) => {
      const order = p.analyses[0].levels.bar.dendrogram.leafOrder;
      order[0] = order[1];
    })).toThrowError(/leafOrder/);
  });

  it("rejects a tree that does not expand to the ids", () => {
    expect(corrupt((p) => {
      p.analyses[0].repetitionTree = { type: "leaf", id: 0 };
    })).toThrowError(/repetitionTree/);
  });

  it("rejects run nodes with count below two", () => {
    expect(corrupt((p) => {
      p.analyses[0].repetitionTree = {
        type: "run", count: 1, body: { type: "leaf", id: 0 },
      };
    })).toThrowError(/count/);
  });
});
