/** Bundle parsing and schema validation with path-qualified errors. */

import type {
  AnalysisJson, BarJson, BundleJson, DendrogramJson, HarmonyJson,
  LevelJson, LevelName, NoteJson, SectionJson, TrackJson, TreeJson,
} from "./types.js";

export const FORMAT_VERSION = 1;
export const LEVEL_NAMES: LevelName[] = ["bar", "section", "harmony"];

export class SchemaViolation extends Error {
  constructor(public path: string, message: string) {
    super(`${path}: ${message}`);
    this.name = "SchemaViolation";
  }
}

export class UnsupportedVersion extends Error {
  constructor(message: string) {
    super(message);
    this.name = "UnsupportedVersion";
  }
}

function fail(path: string, message: string): never {
  throw new SchemaViolation(path, message);
}

function asObject(value: unknown, path: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    fail(path, "expected an object");
  }
  return value as Record<string, unknown>;
}

function asArray(value: unknown, path: string): unknown[] {
  if (!Array.isArray(value)) fail(path, "expected an array");
  return value;
}

function field(obj: Record<string, unknown>, key: string,
               path: string): unknown {
  if (!(key in obj)) fail(`${path}.${key}`, "missing field");
  return obj[key];
}

function asNumber(value: unknown, path: string): number {
  if (typeof value !== "number" || !Number.isFinite(value)) {
    fail(path, "expected a finite number");
  }
  return value;
}

function asInt(value: unknown, path: string): number {
  const n = asNumber(value, path);
  if (!Number.isInteger(n)) fail(path, "expected an integer");
  return n;
}

function asString(value: unknown, path: string): string {
  if (typeof value !== "string") fail(path, "expected a string");
  return value;
}

function asBool(value: unknown, path: string): boolean {
  if (typeof value !== "boolean") fail(path, "expected a boolean");
  return value;
}

function readNote(value: unknown, path: string): NoteJson {
  const obj = asObject(value, path);
  const note: NoteJson = {
    startTick: asInt(field(obj, "startTick", path), `${path}.startTick`),
    durationTicks: asInt(field(obj, "durationTicks", path),
                         `${path}.durationTicks`),
    pitch: asInt(field(obj, "pitch", path), `${path}.pitch`),
    tieContinuation: asBool(field(obj, "tieContinuation", path),
                            `${path}.tieContinuation`),
  };
  if (note.pitch < 0 || note.pitch > 127) fail(`${path}.pitch`, "out of range");
  if (note.durationTicks < 1) fail(`${path}.durationTicks`, "must be >= 1");
  if ("string" in obj) {
    note.string = asInt(obj.string, `${path}.string`);
    note.fret = asInt(field(obj, "fret", path), `${path}.fret`);
  }
  return note;
}

function readBar(value: unknown, path: string, expectedIndex: number): BarJson {
  const obj = asObject(value, path);
  const index = asInt(field(obj, "index", path), `${path}.index`);
  if (index !== expectedIndex) fail(`${path}.index`, "bars must be consecutive");
  const signature = asArray(field(obj, "timeSignature", path),
                            `${path}.timeSignature`);
  if (signature.length !== 2) fail(`${path}.timeSignature`, "expected [n, d]");
  const bar: BarJson = {
    index,
    startTick: asInt(field(obj, "startTick", path), `${path}.startTick`),
    lengthTicks: asInt(field(obj, "lengthTicks", path), `${path}.lengthTicks`),
    timeSignature: [asInt(signature[0], `${path}.timeSignature[0]`),
                    asInt(signature[1], `${path}.timeSignature[1]`)],
    notes: asArray(field(obj, "notes", path), `${path}.notes`)
      .map((n, k) => readNote(n, `${path}.notes[${k}]`)),
  };
  if (bar.lengthTicks < 1) fail(`${path}.lengthTicks`, "must be >= 1");
  return bar;
}

function readTrack(value: unknown, path: string): TrackJson {
  const obj = asObject(value, path);
  const rawTuning = field(obj, "tuning", path);
  let tuning: number[] | null = null;
  if (rawTuning !== null) {
    tuning = asArray(rawTuning, `${path}.tuning`)
      .map((v, k) => asInt(v, `${path}.tuning[${k}]`));
  }
  return {
    name: asString(field(obj, "name", path), `${path}.name`),
    tuning,
    bars: asArray(field(obj, "bars", path), `${path}.bars`)
      .map((b, k) => readBar(b, `${path}.bars[${k}]`, k)),
  };
}

function readSection(value: unknown, path: string): SectionJson {
  const obj = asObject(value, path);
  return {
    name: asString(field(obj, "name", path), `${path}.name`),
    firstBar: asInt(field(obj, "firstBar", path), `${path}.firstBar`),
    lastBar: asInt(field(obj, "lastBar", path), `${path}.lastBar`),
  };
}

function readTree(value: unknown, path: string): TreeJson {
  const obj = asObject(value, path);
  const type = asString(field(obj, "type", path), `${path}.type`);
  if (type === "leaf") {
    return { type, id: asInt(field(obj, "id", path), `${path}.id`) };
  }
  if (type === "run") {
    const count = asInt(field(obj, "count", path), `${path}.count`);
    if (count < 2) fail(`${path}.count`, "run count must be >= 2");
    const node: TreeJson = {
      type, count,
      body: readTree(field(obj, "body", path), `${path}.body`),
    };
    if ("prefix" in obj) node.prefix = readTree(obj.prefix, `${path}.prefix`);
    if ("suffix" in obj) node.suffix = readTree(obj.suffix, `${path}.suffix`);
    return node;
  }
  if (type === "seq") {
    const parts = asArray(field(obj, "parts", path), `${path}.parts`);
    if (parts.length === 0) fail(`${path}.parts`, "must not be empty");
    return { type, parts: parts.map((p, k) => readTree(p, `${path}.parts[${k}]`)) };
  }
  fail(`${path}.type`, `unknown node type ${JSON.stringify(type)}`);
}

export function expandTree(node: TreeJson): number[] {
  if (node.type === "leaf") return [node.id];
  if (node.type === "seq") return node.parts.flatMap(expandTree);
  const out = node.prefix ? expandTree(node.prefix) : [];
  const body = expandTree(node.body);
  for (let k = 0; k < node.count; k++) out.push(...body);
  if (node.suffix) out.push(...expandTree(node.suffix));
  return out;
}

function readDendrogram(value: unknown, path: string,
                        count: number): DendrogramJson {
  const obj = asObject(value, path);
  const merges = asArray(field(obj, "merges", path), `${path}.merges`)
    .map((m, k) => {
      const mPath = `${path}.merges[${k}]`;
      const merge = asObject(m, mPath);
      return {
        leftId: asInt(field(merge, "leftId", mPath), `${mPath}.leftId`),
        rightId: asInt(field(merge, "rightId", mPath), `${mPath}.rightId`),
        height: asNumber(field(merge, "height", mPath), `${mPath}.height`),
        newId: asInt(field(merge, "newId", mPath), `${mPath}.newId`),
      };
    });
  if (merges.length !== Math.max(0, count - 1)) {
    fail(`${path}.merges`, `expected ${Math.max(0, count - 1)} merges`);
  }
  let previous = 0;
  merges.forEach((m, k) => {
    const mPath = `${path}.merges[${k}]`;
    if (m.height < 0 || m.height > 1) fail(`${mPath}.height`, "outside [0, 1]");
    if (m.height < previous) fail(`${mPath}.height`, "heights must not decrease");
    previous = m.height;
    if (m.newId !== count + k) fail(`${mPath}.newId`, "ids must be sequential");
  });
  const leafOrder = asArray(field(obj, "leafOrder", path), `${path}.leafOrder`)
    .map((v, k) => asInt(v, `${path}.leafOrder[${k}]`));
  const seen = new Set(leafOrder);
  if (leafOrder.length !== count || seen.size !== count
      || leafOrder.some((v) => v < 0 || v >= count)) {
    fail(`${path}.leafOrder`, "must be a permutation of the leaves");
  }
  return { merges, leafOrder };
}

function readLevel(value: unknown, path: string): LevelJson {
  const obj = asObject(value, path);
  const count = asInt(field(obj, "count", path), `${path}.count`);
  if (count < 0) fail(`${path}.count`, "must be >= 0");
  const condensed = asArray(field(obj, "condensedDistances", path),
                            `${path}.condensedDistances`)
    .map((v, k) => asNumber(v, `${path}.condensedDistances[${k}]`));
  if (condensed.length !== (count * (count - 1)) / 2) {
    fail(`${path}.condensedDistances`, "length must be count*(count-1)/2");
  }
  condensed.forEach((v, k) => {
    if (v < 0 || v > 1) fail(`${path}.condensedDistances[${k}]`, "outside [0, 1]");
  });
  const positions = asArray(field(obj, "mdsPositions", path),
                            `${path}.mdsPositions`)
    .map((v, k) => asNumber(v, `${path}.mdsPositions[${k}]`));
  if (positions.length !== count) {
    fail(`${path}.mdsPositions`, "length must equal count");
  }
  positions.forEach((v, k) => {
    if (v < 0 || v > 1) fail(`${path}.mdsPositions[${k}]`, "outside [0, 1]");
  });
  return {
    count, condensedDistances: condensed, mdsPositions: positions,
    dendrogram: readDendrogram(field(obj, "dendrogram", path),
                               `${path}.dendrogram`, count),
  };
}

function readHarmony(value: unknown, path: string): HarmonyJson {
  const obj = asObject(value, path);
  const pitchClasses = asArray(field(obj, "pitchClasses", path),
                               `${path}.pitchClasses`)
    .map((v, k) => asInt(v, `${path}.pitchClasses[${k}]`));
  pitchClasses.forEach((v, k) => {
    if (v < 0 || v > 11) fail(`${path}.pitchClasses[${k}]`, "outside 0..11");
  });
  return {
    startTick: asInt(field(obj, "startTick", path), `${path}.startTick`),
    pitchClasses,
  };
}

function readAnalysis(value: unknown, path: string,
                      tracks: TrackJson[]): AnalysisJson {
  const obj = asObject(value, path);
  const trackIndex = asInt(field(obj, "trackIndex", path), `${path}.trackIndex`);
  if (trackIndex < 0 || trackIndex >= tracks.length) {
    fail(`${path}.trackIndex`, "no such track");
  }
  const bars = tracks[trackIndex].bars.length;
  const levelsObj = asObject(field(obj, "levels", path), `${path}.levels`);
  const levels = {} as Record<LevelName, LevelJson>;
  for (const name of LEVEL_NAMES) {
    levels[name] = readLevel(field(levelsObj, name, `${path}.levels`),
                             `${path}.levels.${name}`);
  }
  if (levels.bar.count !== bars) {
    fail(`${path}.levels.bar.count`, "must equal the track's bar count");
  }
  const harmonies = asArray(field(obj, "harmonies", path), `${path}.harmonies`)
    .map((h, k) => readHarmony(h, `${path}.harmonies[${k}]`));
  if (levels.harmony.count !== harmonies.length) {
    fail(`${path}.levels.harmony.count`, "must equal the harmony count");
  }
  const canonicalIds = asArray(field(obj, "canonicalIds", path),
                               `${path}.canonicalIds`)
    .map((v, k) => asInt(v, `${path}.canonicalIds[${k}]`));
  if (canonicalIds.length !== bars) {
    fail(`${path}.canonicalIds`, "one id per bar required");
  }
  canonicalIds.forEach((v, k) => {
    if (v < 0 || v > k) fail(`${path}.canonicalIds[${k}]`, "id after its bar");
    if (canonicalIds[v] !== v) {
      fail(`${path}.canonicalIds[${k}]`, "id must point at a first occurrence");
    }
  });
  const tree = readTree(field(obj, "repetitionTree", path),
                        `${path}.repetitionTree`);
  const expanded = expandTree(tree);
  if (bars > 0 && (expanded.length !== canonicalIds.length
      || expanded.some((v, k) => v !== canonicalIds[k]))) {
    fail(`${path}.repetitionTree`, "must expand to the canonical ids");
  }
  return { trackIndex, harmonies, levels, canonicalIds, repetitionTree: tree };
}

export function parseBundle(text: string): BundleJson {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (error) {
    throw new SchemaViolation("$", `not valid JSON (${String(error)})`);
  }
  const obj = asObject(raw, "$");
  const version = asInt(field(obj, "formatVersion", "$"), "$.formatVersion");
  if (version !== FORMAT_VERSION) {
    throw new UnsupportedVersion(
      `bundle format ${version} is not supported (expected ${FORMAT_VERSION})`);
  }
  const tracks = asArray(field(obj, "tracks", "$"), "$.tracks")
    .map((t, k) => readTrack(t, `$.tracks[${k}]`));
  if (tracks.length === 0) fail("$.tracks", "must not be empty");
  const sections = asArray(field(obj, "sections", "$"), "$.sections")
    .map((s, k) => readSection(s, `$.sections[${k}]`));
  const analyses = asArray(field(obj, "analyses", "$"), "$.analyses")
    .map((a, k) => readAnalysis(a, `$.analyses[${k}]`, tracks));
  if (analyses.length === 0) fail("$.analyses", "must not be empty");
  return {
    formatVersion: version,
    title: asString(field(obj, "title", "$"), "$.title"),
    ticksPerQuarter: asInt(field(obj, "ticksPerQuarter", "$"),
                           "$.ticksPerQuarter"),
    sections, tracks, analyses,
  };
}

export function uncondense(values: number[], n: number): number[][] {
  const matrix = Array.from({ length: n }, () => new Array<number>(n).fill(0));
  let k = 0;
  for (let i = 0; i < n; i++) {
    for (let j = i + 1; j < n; j++) {
      matrix[i][j] = matrix[j][i] = values[k];
      k += 1;
    }
  }
  return matrix;
}
