"""Non-overlapping segments of a track: bars, sections, harmonies.

Also builds the piece -> section -> bar -> harmony -> note hierarchy
tree. A harmony is the set of notes sharing one onset tick; tie
continuations never open or join a harmony.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import Score, Section, Track, pitch_name

#: (bar index, note index within the bar)
NoteRef = tuple[int, int]


@dataclass(frozen=True)
class Segment:
    """A contiguous unit of comparison at one hierarchy level."""

    level: str  # "section" | "bar" | "harmony"
    ordinal: int
    bar_range: tuple[int, int]  # inclusive
    start_tick: int
    note_refs: tuple[NoteRef, ...]
    label: str = ""


@dataclass(frozen=True)
class Harmony:
    """All notes of a track that onset at the same tick, folded to pitch classes."""

    start_tick: int
    pitch_class_set: frozenset[int]
    note_refs: tuple[NoteRef, ...]


@dataclass(frozen=True)
class HierarchyNode:
    level: str  # "piece" | "section" | "bar" | "harmony" | "note"
    ordinal: int
    label: str
    children: tuple["HierarchyNode", ...] = field(default=())

    def count(self) -> int:
        return 1 + sum(child.count() for child in self.children)


def segment_bars(track: Track) -> list[Segment]:
    """One segment per bar; empty bars keep their ordinal with no notes."""
    segments = []
    for bar in track.bars:
        refs = tuple((bar.index, j) for j in range(len(bar.notes)))
        segments.append(Segment(
            level="bar",
            ordinal=bar.index,
            bar_range=(bar.index, bar.index),
            start_tick=bar.start_tick,
            note_refs=refs,
            label=f"bar {bar.index}",
        ))
    return segments


def _section_ranges(score: Score, track: Track) -> list[Section]:
    if score.sections:
        return list(score.sections)
    if not track.bars:
        return []
    return [Section("piece", 0, len(track.bars) - 1)]


def segment_sections(score: Score, track: Track) -> list[Segment]:
    """One segment per section; section-less scores fall back to one
    piece-wide segment."""
    segments = []
    for ordinal, sec in enumerate(_section_ranges(score, track)):
        first = min(sec.first_bar, len(track.bars))
        last = min(sec.last_bar, len(track.bars) - 1)
        refs: list[NoteRef] = []
        for bar in track.bars[first:last + 1]:
            refs.extend((bar.index, j) for j in range(len(bar.notes)))
        start = track.bars[first].start_tick if first < len(track.bars) else 0
        segments.append(Segment(
            level="section",
            ordinal=ordinal,
            bar_range=(sec.first_bar, sec.last_bar),
            start_tick=start,
            note_refs=tuple(refs),
            label=sec.name,
        ))
    return segments


def extract_harmonies(track: Track) -> list[Harmony]:
    """Group onset notes by absolute start tick, ordered by tick."""
    by_tick: dict[int, list[NoteRef]] = {}
    for bar in track.bars:
        for j, note in enumerate(bar.notes):
            if note.tie_continuation:
                continue
            by_tick.setdefault(note.start_tick, []).append((bar.index, j))
    harmonies = []
    for tick in sorted(by_tick):
        refs = by_tick[tick]
        pcs = frozenset(track.bars[b].notes[j].pitch % 12 for b, j in refs)
        harmonies.append(Harmony(tick, pcs, tuple(refs)))
    return harmonies


def harmony_segments(track: Track) -> list[Segment]:
    """Harmonies rephrased as segments (for bundle bookkeeping)."""
    segments = []
    for ordinal, h in enumerate(extract_harmonies(track)):
        bar_idx = h.note_refs[0][0]
        segments.append(Segment(
            level="harmony",
            ordinal=ordinal,
            bar_range=(bar_idx, bar_idx),
            start_tick=h.start_tick,
            note_refs=h.note_refs,
            label=str(h.start_tick),
        ))
    return segments


def build_hierarchy(score: Score, track: Track) -> HierarchyNode:
    """Tree of piece / sections / bars / harmonies / onset notes.

    Children are ordered by start tick; each bar node partitions its
    onset notes into per-tick harmony nodes, whose leaves are the notes.
    """
    harmonies = extract_harmonies(track)
    harmonies_by_bar: dict[int, list[tuple[int, Harmony]]] = {}
    for ordinal, h in enumerate(harmonies):
        harmonies_by_bar.setdefault(h.note_refs[0][0], []).append((ordinal, h))

    def harmony_node(ordinal: int, h: Harmony) -> HierarchyNode:
        leaves = tuple(
            HierarchyNode("note", j, pitch_name(track.bars[b].notes[j].pitch))
            for b, j in h.note_refs
        )
        return HierarchyNode("harmony", ordinal, str(h.start_tick), leaves)

    def bar_node(bar_index: int) -> HierarchyNode:
        children = tuple(harmony_node(o, h)
                         for o, h in harmonies_by_bar.get(bar_index, []))
        return HierarchyNode("bar", bar_index, f"bar {bar_index}", children)

    section_nodes = []
    for ordinal, sec in enumerate(_section_ranges(score, track)):
        last = min(sec.last_bar, len(track.bars) - 1)
        bars = tuple(bar_node(i) for i in range(sec.first_bar, last + 1))
        section_nodes.append(HierarchyNode("section", ordinal, sec.name, bars))
    return HierarchyNode("piece", 0, score.title or "piece", tuple(section_nodes))
