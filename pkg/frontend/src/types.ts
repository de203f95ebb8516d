/** Wire types for the analysis bundle (format version 1). */

export interface NoteJson {
  startTick: number;
  durationTicks: number;
  pitch: number;
  string?: number;
  fret?: number;
  tieContinuation: boolean;
}

export interface BarJson {
  index: number;
  startTick: number;
  lengthTicks: number;
  timeSignature: [number, number];
  notes: NoteJson[];
}

export interface TrackJson {
  name: string;
  tuning: number[] | null;
  bars: BarJson[];
}

export interface SectionJson {
  name: string;
  firstBar: number;
  lastBar: number;
}

export interface MergeJson {
  leftId: number;
  rightId: number;
  height: number;
  newId: number;
}

export interface DendrogramJson {
  merges: MergeJson[];
  leafOrder: number[];
}

export interface LevelJson {
  count: number;
  condensedDistances: number[];
  mdsPositions: number[];
  dendrogram: DendrogramJson;
}

export interface HarmonyJson {
  startTick: number;
  pitchClasses: number[];
}

export type TreeJson =
  | { type: "leaf"; id: number }
  | { type: "run"; count: number; body: TreeJson;
      prefix?: TreeJson; suffix?: TreeJson }
  | { type: "seq"; parts: TreeJson[] };

export type LevelName = "bar" | "section" | "harmony";

export interface AnalysisJson {
  trackIndex: number;
  harmonies: HarmonyJson[];
  levels: Record<LevelName, LevelJson>;
  canonicalIds: number[];
  repetitionTree: TreeJson;
}

export interface BundleJson {
  formatVersion: number;
  title: string;
  ticksPerQuarter: number;
  sections: SectionJson[];
  tracks: TrackJson[];
  analyses: AnalysisJson[];
}

export type Rgb = [number, number, number];

export type ColorMode = "mds" | "cluster" | "direct" | "identical";
export type ScaleId = "spectral" | "blues" | "viridis" | "cividis" | "none";
export type NoteMode = "pianoRoll" | "tabSimple" | "tabFrets";

export interface ViewerState {
  bundle: BundleJson;
  activeLevel: LevelName;
  colorMode: ColorMode;
  selectedSegment: number | null;
  clusterThreshold: number;
  scale: ScaleId;
  noteMode: NoteMode;
  highlightedBar: number | null;
}

export interface ColorAssignment {
  mode: ColorMode;
  positions: (number | null)[];
  colors: (Rgb | null)[];
  selected: number | null;
  threshold: number | null;
}
