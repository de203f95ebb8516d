"""Versioned analysis bundle: the one serialized contract between the
analyzer, the CLI renderer, and the browser viewer.

Canonical JSON form: keys sorted, no insignificant whitespace, reals
rounded to 9 significant digits at build time (so serialization is
byte-deterministic and round-trips exactly). Distance matrices are
stored as condensed upper triangles (row-major, i < j); colors are never
stored, consumers derive them from positions/dendrograms plus a scale.
"""

from __future__ import annotations

import json
import warnings as _warnings
from dataclasses import dataclass

import numpy as np

from . import compression
from .colors import Dendrogram, Merge, cluster, mds_1d
from .compression import Leaf, Node, Run, Seq
from .model import Bar, Note, Score, Section, Track, validate
from .segmentation import (Harmony, extract_harmonies, segment_bars,
                           segment_sections)
from .similarity import (check_distance_matrix, distance_matrix,
                         harmony_distance_matrix)

FORMAT_VERSION = 1
LEVELS = ("bar", "section", "harmony")

#: Bundles beyond this many bars get large; the builder warns.
_BAR_WARN_LIMIT = 2000


class UnsupportedVersion(ValueError):
    pass


class SchemaViolation(ValueError):
    """Invalid bundle document; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class LevelAnalysis:
    """Everything needed to recolor one segmentation level."""

    count: int
    condensed_distances: tuple[float, ...]
    mds_positions: tuple[float, ...]
    dendrogram: Dendrogram


@dataclass(frozen=True)
class TrackAnalysis:
    track_index: int
    harmonies: tuple[Harmony, ...]
    levels: dict[str, LevelAnalysis]
    canonical_ids: tuple[int, ...]
    repetition_tree: Node


@dataclass(frozen=True)
class AnalysisBundle:
    format_version: int
    score: Score
    analyses: tuple[TrackAnalysis, ...]

    def analysis_track(self, analysis: TrackAnalysis) -> Track:
        return self.score.tracks[analysis.track_index]


def _round9(x: float) -> float:
    value = float(f"{float(x):.9g}")
    return 0.0 if value == 0.0 else value


def condense(matrix: np.ndarray) -> list[float]:
    """Upper triangle (i < j), row-major."""
    n = len(matrix)
    return [float(matrix[i, j]) for i in range(n) for j in range(i + 1, n)]


def uncondense(values: list[float], n: int) -> np.ndarray:
    matrix = np.zeros((n, n), dtype=float)
    it = iter(values)
    for i in range(n):
        for j in range(i + 1, n):
            matrix[i, j] = matrix[j, i] = next(it)
    return matrix


def _level_analysis(matrix: np.ndarray) -> LevelAnalysis:
    dendrogram = cluster(matrix)
    return LevelAnalysis(
        count=len(matrix),
        condensed_distances=tuple(_round9(v) for v in condense(matrix)),
        mds_positions=tuple(_round9(p) for p in mds_1d(matrix)),
        dendrogram=Dendrogram(
            dendrogram.n_leaves,
            tuple(Merge(m.left_id, m.right_id, _round9(m.height), m.new_id)
                  for m in dendrogram.merges),
            dendrogram.leaf_order,
        ),
    )


def build_bundle(score: Score, track_index: int = 0) -> AnalysisBundle:
    """Run the full analysis pipeline for one track and pack the results.

    Stores the complete score (all tracks), the chosen track's harmonies,
    per-level distance matrices, MDS positions, dendrograms, canonical
    bar ids and the repetition tree.
    """
    if not 0 <= track_index < len(score.tracks):
        raise IndexError(f"track index {track_index} out of range")
    track = score.tracks[track_index]
    if len(track.bars) > _BAR_WARN_LIMIT:
        _warnings.warn(f"piece has {len(track.bars)} bars; bundle holds "
                       f"O(n^2) distances and will be large")

    bar_matrix = distance_matrix(segment_bars(track), track)
    section_matrix = distance_matrix(segment_sections(score, track), track)
    harmonies = tuple(extract_harmonies(track))
    harmony_matrix = harmony_distance_matrix(harmonies)

    ids = compression.canonical_ids(bar_matrix)
    tree = compression.build_repetition_tree(ids) if ids else Seq(())

    analysis = TrackAnalysis(
        track_index=track_index,
        # note refs are derivable from ticks; stored harmonies carry only
        # what the wire format defines
        harmonies=tuple(Harmony(h.start_tick, h.pitch_class_set, ())
                        for h in harmonies),
        levels={
            "bar": _level_analysis(bar_matrix),
            "section": _level_analysis(section_matrix),
            "harmony": _level_analysis(harmony_matrix),
        },
        canonical_ids=tuple(ids),
        repetition_tree=tree,
    )
    return AnalysisBundle(FORMAT_VERSION, score, (analysis,))


def _note_json(note: Note) -> dict:
    return {
        "startTick": note.start_tick,
        "durationTicks": note.duration_ticks,
        "pitch": note.pitch,
        "string": note.string,
        "fret": note.fret,
        "tieContinuation": note.tie_continuation,
    }


def _track_json(track: Track) -> dict:
    return {
        "name": track.name,
        "tuning": list(track.tuning) if track.tuning is not None else None,
        "bars": [{
            "index": bar.index,
            "startTick": bar.start_tick,
            "lengthTicks": bar.length_ticks,
            "timeSignature": [bar.time_sig_numerator, bar.time_sig_denominator],
            "notes": [_note_json(n) for n in bar.notes],
        } for bar in track.bars],
    }


def _tree_json(node: Node) -> dict:
    if isinstance(node, Leaf):
        return {"type": "leaf", "id": node.segment_id}
    if isinstance(node, Run):
        out = {"type": "run", "count": node.count, "body": _tree_json(node.body)}
        if node.prefix is not None:
            out["prefix"] = _tree_json(node.prefix)
        if node.suffix is not None:
            out["suffix"] = _tree_json(node.suffix)
        return out
    return {"type": "seq", "parts": [_tree_json(p) for p in node.parts]}


def _level_json(level: LevelAnalysis) -> dict:
    return {
        "count": level.count,
        "condensedDistances": list(level.condensed_distances),
        "mdsPositions": list(level.mds_positions),
        "dendrogram": {
            "merges": [{
                "leftId": m.left_id,
                "rightId": m.right_id,
                "height": m.height,
                "newId": m.new_id,
            } for m in level.dendrogram.merges],
            "leafOrder": list(level.dendrogram.leaf_order),
        },
    }


def serialize(bundle: AnalysisBundle) -> bytes:
    """Canonical JSON bytes: sorted keys, compact separators."""
    document = {
        "formatVersion": bundle.format_version,
        "title": bundle.score.title,
        "ticksPerQuarter": bundle.score.ticks_per_quarter,
        "sections": [{
            "name": s.name, "firstBar": s.first_bar, "lastBar": s.last_bar,
        } for s in bundle.score.sections],
        "tracks": [_track_json(t) for t in bundle.score.tracks],
        "analyses": [{
            "trackIndex": a.track_index,
            "harmonies": [{
                "startTick": h.start_tick,
                "pitchClasses": sorted(h.pitch_class_set),
            } for h in a.harmonies],
            "levels": {name: _level_json(level)
                       for name, level in a.levels.items()},
            "canonicalIds": list(a.canonical_ids),
            "repetitionTree": _tree_json(a.repetition_tree),
        } for a in bundle.analyses],
    }
    return json.dumps(document, sort_keys=True,
                      separators=(",", ":")).encode("utf-8")


class _Reader:
    """Typed field access over parsed JSON, reporting JSONPath-style
    locations on violations."""

    def __init__(self, value, path: str):
        self.value = value
        self.path = path

    def fail(self, message: str):
        raise SchemaViolation(self.path, message)

    def as_dict(self) -> "_Reader":
        if not isinstance(self.value, dict):
            self.fail(f"expected object, got {type(self.value).__name__}")
        return self

    def field(self, name: str) -> "_Reader":
        self.as_dict()
        if name not in self.value:
            raise SchemaViolation(f"{self.path}.{name}", "missing field")
        return _Reader(self.value[name], f"{self.path}.{name}")

    def opt_field(self, name: str) -> "_Reader | None":
        self.as_dict()
        if name not in self.value:
            return None
        return _Reader(self.value[name], f"{self.path}.{name}")

    def items(self) -> list["_Reader"]:
        if not isinstance(self.value, list):
            self.fail(f"expected array, got {type(self.value).__name__}")
        return [_Reader(v, f"{self.path}[{i}]") for i, v in enumerate(self.value)]

    def int(self) -> int:
        if not isinstance(self.value, int) or isinstance(self.value, bool):
            self.fail(f"expected integer, got {self.value!r}")
        return self.value

    def real(self) -> float:
        if isinstance(self.value, bool) or not isinstance(self.value, (int, float)):
            self.fail(f"expected number, got {self.value!r}")
        return float(self.value)

    def string(self) -> str:
        if not isinstance(self.value, str):
            self.fail(f"expected string, got {self.value!r}")
        return self.value

    def boolean(self) -> bool:
        if not isinstance(self.value, bool):
            self.fail(f"expected boolean, got {self.value!r}")
        return self.value

    def opt_int(self) -> int | None:
        return None if self.value is None else self.int()


def _read_note(reader: _Reader) -> Note:
    return Note(
        start_tick=reader.field("startTick").int(),
        duration_ticks=reader.field("durationTicks").int(),
        pitch=reader.field("pitch").int(),
        string=reader.field("string").opt_int(),
        fret=reader.field("fret").opt_int(),
        tie_continuation=reader.field("tieContinuation").boolean(),
    )


def _read_bar(reader: _Reader) -> Bar:
    time_sig = reader.field("timeSignature").items()
    if len(time_sig) != 2:
        reader.field("timeSignature").fail("expected [numerator, denominator]")
    return Bar(
        index=reader.field("index").int(),
        start_tick=reader.field("startTick").int(),
        length_ticks=reader.field("lengthTicks").int(),
        time_sig_numerator=time_sig[0].int(),
        time_sig_denominator=time_sig[1].int(),
        notes=tuple(_read_note(n) for n in reader.field("notes").items()),
    )


def _read_track(reader: _Reader) -> Track:
    tuning_reader = reader.field("tuning")
    tuning = (None if tuning_reader.value is None
              else tuple(r.int() for r in tuning_reader.items()))
    return Track(
        name=reader.field("name").string(),
        tuning=tuning,
        bars=tuple(_read_bar(b) for b in reader.field("bars").items()),
    )


def _read_tree(reader: _Reader) -> Node:
    kind = reader.field("type").string()
    if kind == "leaf":
        return Leaf(reader.field("id").int())
    if kind == "run":
        count = reader.field("count").int()
        if count < 2:
            reader.field("count").fail("run count must be >= 2")
        prefix = reader.opt_field("prefix")
        suffix = reader.opt_field("suffix")
        return Run(
            count=count,
            body=_read_tree(reader.field("body")),
            prefix=_read_tree(prefix) if prefix is not None else None,
            suffix=_read_tree(suffix) if suffix is not None else None,
        )
    if kind == "seq":
        return Seq(tuple(_read_tree(p) for p in reader.field("parts").items()))
    reader.field("type").fail(f"unknown node type {kind!r}")


def _read_level(reader: _Reader) -> LevelAnalysis:
    count = reader.field("count").int()
    condensed = tuple(r.real() for r in reader.field("condensedDistances").items())
    positions = tuple(r.real() for r in reader.field("mdsPositions").items())
    dendro = reader.field("dendrogram")
    merges = tuple(Merge(
        left_id=m.field("leftId").int(),
        right_id=m.field("rightId").int(),
        height=m.field("height").real(),
        new_id=m.field("newId").int(),
    ) for m in dendro.field("merges").items())
    leaf_order = tuple(r.int() for r in dendro.field("leafOrder").items())

    if count < 0:
        reader.field("count").fail("negative count")
    if len(condensed) != count * (count - 1) // 2:
        reader.field("condensedDistances").fail(
            f"expected {count * (count - 1) // 2} entries for {count} "
            f"segments, got {len(condensed)}")
    if len(positions) != count:
        reader.field("mdsPositions").fail(
            f"expected {count} positions, got {len(positions)}")
    if any(not 0.0 <= p <= 1.0 for p in positions):
        reader.field("mdsPositions").fail("positions outside [0, 1]")
    if count and len(merges) != count - 1:
        dendro.field("merges").fail(
            f"expected {count - 1} merges for {count} leaves, got {len(merges)}")
    if sorted(leaf_order) != list(range(count)):
        dendro.field("leafOrder").fail("not a permutation of the leaves")
    heights = [m.height for m in merges]
    if any(not 0.0 <= h <= 1.0 for h in heights):
        dendro.field("merges").fail("merge heights outside [0, 1]")
    if heights != sorted(heights):
        dendro.field("merges").fail("merge heights decrease")
    try:
        check_distance_matrix(uncondense(list(condensed), count))
    except ValueError as exc:
        reader.field("condensedDistances").fail(str(exc))
    return LevelAnalysis(count, condensed, positions,
                         Dendrogram(count, merges, leaf_order))


def _read_analysis(reader: _Reader, score: Score) -> TrackAnalysis:
    track_index = reader.field("trackIndex").int()
    if not 0 <= track_index < len(score.tracks):
        reader.field("trackIndex").fail(
            f"track {track_index} out of range ({len(score.tracks)} tracks)")
    track = score.tracks[track_index]
    harmonies = tuple(Harmony(
        start_tick=h.field("startTick").int(),
        pitch_class_set=frozenset(
            pc.int() for pc in h.field("pitchClasses").items()),
        note_refs=(),
    ) for h in reader.field("harmonies").items())

    levels_reader = reader.field("levels")
    levels = {name: _read_level(levels_reader.field(name)) for name in LEVELS}
    ids = tuple(r.int() for r in reader.field("canonicalIds").items())
    tree = _read_tree(reader.field("repetitionTree"))

    if levels["bar"].count != len(track.bars):
        levels_reader.field("bar").fail(
            f"bar level count {levels['bar'].count} != track bar count "
            f"{len(track.bars)}")
    if levels["harmony"].count != len(harmonies):
        levels_reader.field("harmony").fail("harmony level count mismatch")
    if len(ids) != len(track.bars):
        reader.field("canonicalIds").fail("one id per bar required")
    for i, canon in enumerate(ids):
        if not 0 <= canon <= i or ids[canon] != canon:
            reader.field("canonicalIds").fail(
                f"ids[{i}]={canon} is not a first-occurrence index")
    if compression.expand(tree) != list(ids):
        reader.field("repetitionTree").fail(
            "tree does not expand to canonicalIds")
    return TrackAnalysis(track_index, harmonies, levels, ids, tree)


def deserialize(data: bytes) -> AnalysisBundle:
    """Parse and fully re-validate canonical bundle bytes.

    Raises UnsupportedVersion for other format versions and
    SchemaViolation (with a JSONPath-style location) for structural or
    semantic corruption.
    """
    try:
        document = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SchemaViolation("$", f"not valid JSON: {exc}") from exc
    root = _Reader(document, "$")
    version = root.field("formatVersion").int()
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(f"formatVersion {version} not supported "
                                 f"(expected {FORMAT_VERSION})")

    score = Score(
        title=root.field("title").string(),
        ticks_per_quarter=root.field("ticksPerQuarter").int(),
        tracks=tuple(_read_track(t) for t in root.field("tracks").items()),
        sections=tuple(Section(
            name=s.field("name").string(),
            first_bar=s.field("firstBar").int(),
            last_bar=s.field("lastBar").int(),
        ) for s in root.field("sections").items()),
    )
    problems = validate(score)
    if problems:
        raise SchemaViolation("$", f"invalid score: {problems[0]}")

    analyses = tuple(_read_analysis(a, score)
                     for a in root.field("analyses").items())
    if not analyses:
        root.field("analyses").fail("at least one analysis required")
    return AnalysisBundle(version, score, analyses)
