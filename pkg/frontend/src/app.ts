/** DOM construction for the four linked views plus the option controls. */

import { expandTree } from "./bundle.js";
import { contrastTextColor, cssColor, notePitchColor } from "./coloring.js";
import {
  analysis, analyzedTrack, AppState, barColors, harmonyBars, initialState,
  pitchRange, recolorLevel, selectBar, selectSection, setLevel, setMode,
  setNoteMode, setScale, setThreshold,
} from "./state.js";
import type {
  BarJson, BundleJson, ColorMode, LevelName, NoteMode, Rgb, ScaleId,
  TrackJson, TreeJson,
} from "./types.js";

const LEVELS: LevelName[] = ["bar", "section", "harmony"];
const MODES: ColorMode[] = ["mds", "cluster", "direct", "identical"];
const SCALES: ScaleId[] = ["spectral", "blues", "viridis", "cividis", "none"];
const NOTE_MODES: NoteMode[] = ["pianoRoll", "tabSimple", "tabFrets"];
const VIEWS = ["tracks", "hierarchy", "compressed", "compact"] as const;

export interface App {
  state: AppState;
  root: HTMLElement;
  rerender(): void;
}

export function buildApp(bundle: BundleJson, root: HTMLElement): App {
  const state = initialState(bundle);
  const doc = root.ownerDocument;
  const hiddenViews = new Set<string>();

  const el = (tag: string, className?: string,
              text?: string): HTMLElement => {
    const node = doc.createElement(tag);
    if (className) node.className = className;
    if (text !== undefined) node.textContent = text;
    return node;
  };

  const chip = (color: Rgb | null): HTMLElement => {
    const node = el("span", "chip");
    if (color) node.style.backgroundColor = cssColor(color);
    else node.classList.add("chip-empty");
    return node;
  };

  function option(select: HTMLSelectElement, value: string): void {
    const node = doc.createElement("option");
    node.value = value;
    node.textContent = value;
    select.appendChild(node);
  }

  function renderControls(): HTMLElement {
    const bar = el("div", "controls");

    const pick = (id: string, values: readonly string[], current: string,
                  apply: (value: string) => void): void => {
      const label = el("label", undefined, id.replace("control-", "") + " ");
      const select = doc.createElement("select");
      select.id = id;
      for (const value of values) option(select, value);
      select.value = current;
      select.addEventListener("change", () => {
        apply(select.value);
        rerender();
      });
      label.appendChild(select);
      bar.appendChild(label);
    };

    pick("control-level", LEVELS, state.activeLevel,
         (v) => setLevel(state, v as LevelName));
    pick("control-mode", MODES, state.colorMode,
         (v) => setMode(state, v as ColorMode));
    pick("control-scale", SCALES, state.scale,
         (v) => setScale(state, v as ScaleId));
    pick("control-notemode", NOTE_MODES, state.noteMode,
         (v) => setNoteMode(state, v as NoteMode));

    const thresholdLabel = el("label", undefined, "threshold ");
    const slider = doc.createElement("input");
    slider.type = "range";
    slider.id = "control-threshold";
    slider.min = "0";
    slider.max = "1";
    slider.step = "0.01";
    slider.value = String(state.clusterThreshold);
    slider.addEventListener("input", () => {
      setThreshold(state, Number(slider.value));
      rerender();
    });
    thresholdLabel.appendChild(slider);
    thresholdLabel.appendChild(
      el("span", "threshold-value", state.clusterThreshold.toFixed(2)));
    bar.appendChild(thresholdLabel);

    for (const view of VIEWS) {
      const label = el("label", "view-toggle", view + " ");
      const box = doc.createElement("input");
      box.type = "checkbox";
      box.id = `toggle-${view}`;
      box.checked = !hiddenViews.has(view);
      box.addEventListener("change", () => {
        if (box.checked) hiddenViews.delete(view);
        else hiddenViews.add(view);
        rerender();
      });
      label.appendChild(box);
      bar.appendChild(label);
    }
    return bar;
  }

  function noteBlocks(bar: BarJson, track: TrackJson,
                      range: [number, number]): HTMLElement {
    const box = el("div", "note-area");
    const tab = state.noteMode !== "pianoRoll" && track.tuning !== null;
    const rows = tab
      ? track.tuning!.length
      : range[1] - range[0] + 1;
    for (const note of bar.notes) {
      const block = el("div", "note-block");
      const left = (note.startTick - bar.startTick) / bar.lengthTicks * 100;
      const width = note.durationTicks / bar.lengthTicks * 100;
      const row = tab && note.string !== undefined
        ? note.string - 1
        : range[1] - note.pitch;
      const color = notePitchColor(note.pitch, range);
      block.style.left = left + "%";
      block.style.width = width + "%";
      block.style.top = (row / rows) * 100 + "%";
      block.style.height = (1 / rows) * 100 + "%";
      block.style.backgroundColor = cssColor(color);
      if (state.noteMode === "tabFrets" && note.fret !== undefined
          && !note.tieContinuation) {
        block.textContent = String(note.fret);
        block.style.color = cssColor(contrastTextColor(color));
      }
      box.appendChild(block);
    }
    return box;
  }

  function barBox(bar: BarJson, track: TrackJson, range: [number, number],
                  overlay: Rgb | null): HTMLElement {
    const box = el("div", "bar-box");
    box.appendChild(noteBlocks(bar, track, range));
    if (overlay) {
      const layer = el("div", "overlay");
      const [r, g, b] = overlay;
      layer.style.backgroundColor = `rgba(${r},${g},${b},0.45)`;
      box.appendChild(layer);
    }
    return box;
  }

  function renderTracks(): HTMLElement {
    const section = el("section", "view", undefined);
    section.id = "view-tracks";
    section.appendChild(el("h2", undefined, "tracks"));
    const colors = barColors(state);
    const analyzed = analysis(state).trackIndex;
    state.bundle.tracks.forEach((track, t) => {
      const row = el("div", "track-row");
      row.appendChild(el("span", "track-name", track.name));
      track.bars.forEach((bar) => {
        const cell = el("div", "mini-bar");
        cell.dataset.track = String(t);
        cell.dataset.bar = String(bar.index);
        if (t === analyzed && colors[bar.index]) {
          cell.style.backgroundColor = cssColor(colors[bar.index]!);
        }
        if (t === analyzed && state.highlightedBar === bar.index) {
          cell.classList.add("highlighted");
        }
        cell.addEventListener("click", () => {
          selectBar(state, bar.index);
          rerender();
        });
        row.appendChild(cell);
      });
      section.appendChild(row);
    });
    return section;
  }

  function renderHierarchy(): HTMLElement {
    const view = el("section", "view");
    view.id = "view-hierarchy";
    view.appendChild(el("h2", undefined, "hierarchy"));
    const track = analyzedTrack(state);
    const range = pitchRange(track);
    const sectionAssign = recolorLevel(state, "section");
    const barAssign = recolorLevel(state, "bar");
    const harmonyAssign = recolorLevel(state, "harmony");
    const byBar = harmonyBars(state);

    const piece = doc.createElement("details");
    piece.open = true;
    piece.className = "h-piece";
    piece.appendChild(el("summary", undefined, state.bundle.title));

    state.bundle.sections.forEach((sectionInfo, s) => {
      const node = doc.createElement("details");
      node.className = "h-section";
      node.dataset.section = String(s);
      node.open = true;
      const summary = el("summary");
      summary.appendChild(chip(sectionAssign.colors[s] ?? null));
      summary.appendChild(el("span", undefined,
        ` ${sectionInfo.name} (bars ${sectionInfo.firstBar}`
        + `-${sectionInfo.lastBar})`));
      summary.addEventListener("click", () => {
        selectSection(state, s);
        rerender();
      });
      node.appendChild(summary);

      for (let barIndex = sectionInfo.firstBar;
           barIndex <= sectionInfo.lastBar; barIndex++) {
        const barNode = doc.createElement("details");
        barNode.className = "h-bar";
        barNode.dataset.bar = String(barIndex);
        if (state.highlightedBar === barIndex) {
          barNode.classList.add("highlighted");
        }
        const barSummary = el("summary");
        barSummary.appendChild(chip(barAssign.colors[barIndex] ?? null));
        barSummary.appendChild(el("span", undefined, ` bar ${barIndex}`));
        barSummary.addEventListener("click", (event) => {
          event.stopPropagation();
          selectBar(state, barIndex);
          rerender();
        });
        barNode.appendChild(barSummary);

        byBar.forEach((homeBar, h) => {
          if (homeBar !== barIndex) return;
          const harmony = analysis(state).harmonies[h];
          const harmonyNode = doc.createElement("details");
          harmonyNode.className = "h-harmony";
          harmonyNode.dataset.harmony = String(h);
          const harmonySummary = el("summary");
          harmonySummary.appendChild(chip(harmonyAssign.colors[h] ?? null));
          harmonySummary.appendChild(el("span", undefined,
            ` tick ${harmony.startTick} {${harmony.pitchClasses.join(",")}}`));
          harmonyNode.appendChild(harmonySummary);
          const bar = track.bars[barIndex];
          bar.notes
            .filter((n) => n.startTick === harmony.startTick)
            .forEach((note) => {
              const row = el("div", "h-note");
              row.appendChild(chip(notePitchColor(note.pitch, range)));
              row.appendChild(el("span", undefined, ` pitch ${note.pitch}`));
              harmonyNode.appendChild(row);
            });
          barNode.appendChild(harmonyNode);
        });
        node.appendChild(barNode);
      }
      piece.appendChild(node);
    });
    view.appendChild(piece);
    return view;
  }

  function expandLength(node: TreeJson): number {
    return expandTree(node).length;
  }

  function renderCompressed(): HTMLElement {
    const view = el("section", "view");
    view.id = "view-compressed";
    view.appendChild(el("h2", undefined, "compressed"));
    const track = analyzedTrack(state);
    const range = pitchRange(track);
    const colors = barColors(state);
    const strip = el("div", "compressed-strip");

    const build = (node: TreeJson, offsets: number[]): HTMLElement => {
      if (node.type === "leaf") {
        const cell = el("div", "leaf-cell");
        cell.dataset.id = String(node.id);
        cell.dataset.covers = offsets.join(" ");
        if (state.highlightedBar !== null
            && offsets.includes(state.highlightedBar)) {
          cell.classList.add("highlighted");
        }
        cell.appendChild(el("span", "leaf-label", String(node.id)));
        cell.appendChild(barBox(track.bars[node.id], track, range,
                                colors[node.id]));
        cell.addEventListener("click", () => {
          selectBar(state, node.id);
          rerender();
        });
        return cell;
      }
      if (node.type === "seq") {
        const box = el("div", "seq-box");
        let shift = 0;
        for (const part of node.parts) {
          const partOffsets = offsets.map((o) => o + shift);
          box.appendChild(build(part, partOffsets));
          shift += expandLength(part);
        }
        return box;
      }
      const box = el("div", "run-box");
      let shift = 0;
      if (node.prefix) {
        box.appendChild(build(node.prefix, offsets.map((o) => o + shift)));
        shift += expandLength(node.prefix);
      }
      const bodyLength = expandLength(node.body);
      const bodyOffsets = offsets.flatMap((o) =>
        Array.from({ length: node.count }, (_, k) => o + shift + k * bodyLength));
      const body = el("div", "run-body");
      body.appendChild(el("span", "run-count", `×${node.count}`));
      body.appendChild(build(node.body, bodyOffsets));
      box.appendChild(body);
      shift += node.count * bodyLength;
      if (node.suffix) {
        box.appendChild(build(node.suffix, offsets.map((o) => o + shift)));
      }
      return box;
    };

    strip.appendChild(build(analysis(state).repetitionTree, [0]));
    view.appendChild(strip);
    return view;
  }

  function renderCompact(): HTMLElement {
    const view = el("section", "view");
    view.id = "view-compact";
    view.appendChild(el("h2", undefined, "compact"));
    const track = analyzedTrack(state);
    const range = pitchRange(track);
    const colors = barColors(state);
    const grid = el("div", "compact-grid");
    const glow = state.highlightedSection !== null
      ? state.bundle.sections[state.highlightedSection] : null;
    track.bars.forEach((bar) => {
      const cell = el("div", "compact-cell");
      cell.dataset.bar = String(bar.index);
      cell.dataset.colored = colors[bar.index] ? "1" : "0";
      if (state.highlightedBar === bar.index) cell.classList.add("highlighted");
      if (glow && glow.firstBar <= bar.index && bar.index <= glow.lastBar) {
        cell.classList.add("section-glow");
      }
      cell.appendChild(el("span", "bar-label", String(bar.index)));
      cell.appendChild(barBox(bar, track, range, colors[bar.index]));
      cell.addEventListener("click", () => {
        selectBar(state, bar.index);
        rerender();
      });
      grid.appendChild(cell);
    });
    view.appendChild(grid);
    return view;
  }

  function rerender(): void {
    root.textContent = "";
    const header = el("header");
    header.appendChild(el("h1", undefined, state.bundle.title));
    header.appendChild(renderControls());
    root.appendChild(header);
    const renderers: Record<string, () => HTMLElement> = {
      tracks: renderTracks,
      hierarchy: renderHierarchy,
      compressed: renderCompressed,
      compact: renderCompact,
    };
    for (const view of VIEWS) {
      if (hiddenViews.has(view)) continue;
      root.appendChild(renderers[view]());
    }
  }

  rerender();
  return { state, root, rerender };
}
