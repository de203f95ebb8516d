/** Central viewer state and its pure transitions.
 *
 * Every view reads from this one state object; there are no
 * view-local selections.
 */

import { uncondense } from "./bundle.js";
import {
  clusterColors, cutDendrogram, mapDirect, mapIdentical, mapPositions,
} from "./coloring.js";
import type {
  AnalysisJson, BundleJson, ColorAssignment, ColorMode, LevelName,
  NoteMode, Rgb, ScaleId, TrackJson, ViewerState,
} from "./types.js";

export interface AppState extends ViewerState {
  // set when a hierarchy section node was clicked, cleared on bar clicks
  highlightedSection: number | null;
}

export function initialState(bundle: BundleJson): AppState {
  return {
    bundle,
    activeLevel: "bar",
    colorMode: "mds",
    selectedSegment: null,
    clusterThreshold: 0.3,
    scale: "spectral",
    noteMode: "pianoRoll",
    highlightedBar: null,
    highlightedSection: null,
  };
}

export function analysis(state: AppState): AnalysisJson {
  return state.bundle.analyses[0];
}

export function analyzedTrack(state: AppState): TrackJson {
  return state.bundle.tracks[analysis(state).trackIndex];
}

export function segmentCount(state: AppState, level: LevelName): number {
  return analysis(state).levels[level].count;
}

/** Bar index -> index of the section containing it, or null. */
export function sectionOfBar(state: AppState, bar: number): number | null {
  const found = state.bundle.sections.findIndex(
    (s) => s.firstBar <= bar && bar <= s.lastBar);
  return found === -1 ? null : found;
}

/** Bar index each harmony falls in, by onset tick. */
export function harmonyBars(state: AppState): number[] {
  const bars = analyzedTrack(state).bars;
  return analysis(state).harmonies.map((h) => {
    const bar = bars.find((b) =>
      b.startTick <= h.startTick && h.startTick < b.startTick + b.lengthTicks);
    return bar ? bar.index : 0;
  });
}

/** The active-level segment a clicked bar belongs to. */
export function segmentForBar(state: AppState, bar: number): number {
  if (state.activeLevel === "bar") return bar;
  if (state.activeLevel === "section") return sectionOfBar(state, bar) ?? 0;
  const index = harmonyBars(state).findIndex((b) => b === bar);
  return index === -1 ? 0 : index;
}

function needsSelection(mode: ColorMode): boolean {
  return mode === "direct" || mode === "identical";
}

function clampSelection(state: AppState): void {
  if (!needsSelection(state.colorMode)) return;
  const count = segmentCount(state, state.activeLevel);
  if (state.selectedSegment === null
      || state.selectedSegment >= count) {
    state.selectedSegment =
      state.highlightedBar !== null
        ? segmentForBar(state, state.highlightedBar)
        : 0;
  }
}

export function setMode(state: AppState, mode: ColorMode): void {
  state.colorMode = mode;
  if (!needsSelection(mode)) state.selectedSegment = null;
  clampSelection(state);
}

export function setLevel(state: AppState, level: LevelName): void {
  state.activeLevel = level;
  state.selectedSegment = null;
  clampSelection(state);
}

export function setScale(state: AppState, scale: ScaleId): void {
  state.scale = scale;
}

export function setThreshold(state: AppState, threshold: number): void {
  state.clusterThreshold = Math.min(1, Math.max(0, threshold));
}

export function setNoteMode(state: AppState, mode: NoteMode): void {
  state.noteMode = mode;
}

export function selectBar(state: AppState, bar: number): void {
  state.highlightedBar = bar;
  state.highlightedSection = null;
  if (needsSelection(state.colorMode)) {
    state.selectedSegment = segmentForBar(state, bar);
  }
}

export function selectSection(state: AppState, section: number): void {
  const range = state.bundle.sections[section];
  state.highlightedBar = range.firstBar;
  state.highlightedSection = section;
  if (needsSelection(state.colorMode)) {
    state.selectedSegment = segmentForBar(state, range.firstBar);
  }
}

/** Colors for the segments of `level` under the current options. */
export function recolorLevel(state: AppState,
                             level: LevelName): ColorAssignment {
  const data = analysis(state).levels[level];
  switch (state.colorMode) {
    case "mds":
      return mapPositions(data.mdsPositions, state.scale);
    case "cluster": {
      const clusters = cutDendrogram(data.dendrogram, state.clusterThreshold);
      return clusterColors(data.dendrogram, clusters, state.scale,
                           state.clusterThreshold);
    }
    case "direct":
    case "identical": {
      const selected = level === state.activeLevel
        ? state.selectedSegment ?? 0 : 0;
      const matrix = uncondense(data.condensedDistances, data.count);
      return state.colorMode === "direct"
        ? mapDirect(matrix, selected, state.scale)
        : mapIdentical(matrix, selected, state.scale);
    }
  }
}

/** Colors for the active level's segments. */
export function recolor(state: AppState): ColorAssignment {
  return recolorLevel(state, state.activeLevel);
}

/** Per-bar overlay colors for the grid views under the active level. */
export function barColors(state: AppState): (Rgb | null)[] {
  const bars = analyzedTrack(state).bars.length;
  const colors = recolor(state).colors;
  if (state.activeLevel === "bar") return colors;
  if (state.activeLevel === "section") {
    return Array.from({ length: bars }, (_, bar) => {
      const section = sectionOfBar(state, bar);
      return section === null ? null : colors[section];
    });
  }
  // harmony colors are sub-bar; the hierarchy view carries them
  return new Array(bars).fill(null);
}

export function pitchRange(track: TrackJson): [number, number] {
  const pitches = track.bars.flatMap((b) => b.notes.map((n) => n.pitch));
  if (!pitches.length) return [60, 60];
  return [Math.min(...pitches), Math.max(...pitches)];
}
