"""In-memory model of a parsed piece: notes, bars, tracks, sections.

All types are immutable after construction and safe to share between
threads. Time is measured in integer ticks; the piece-global resolution
is ``Score.ticks_per_quarter``.
"""

from __future__ import annotations

from dataclasses import dataclass

PITCH_NAMES = ("C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B")

#: Standard guitar tuning, string 1 (highest) to string 6 (lowest).
STANDARD_GUITAR_TUNING = (64, 59, 55, 50, 45, 40)


def pitch_name(pitch: int) -> str:
    """MIDI pitch number to a name such as ``C4`` (= 60)."""
    return f"{PITCH_NAMES[pitch % 12]}{pitch // 12 - 1}"


@dataclass(frozen=True)
class Note:
    """One played or held note.

    ``start_tick`` is absolute (piece-global). ``string``/``fret`` carry
    tablature data and are either both present or both absent; string 1 is
    the highest-pitched string. ``tie_continuation`` marks a note that
    continues a tie and does not re-onset; renderers draw it, metrics skip
    it.
    """

    start_tick: int
    duration_ticks: int
    pitch: int
    string: int | None = None
    fret: int | None = None
    tie_continuation: bool = False


@dataclass(frozen=True)
class Bar:
    index: int
    start_tick: int
    length_ticks: int
    time_sig_numerator: int
    time_sig_denominator: int
    notes: tuple[Note, ...] = ()

    @property
    def end_tick(self) -> int:
        return self.start_tick + self.length_ticks


@dataclass(frozen=True)
class Track:
    name: str
    tuning: tuple[int, ...] | None
    bars: tuple[Bar, ...]


@dataclass(frozen=True)
class Section:
    """A named contiguous bar range; ``last_bar`` is inclusive."""

    name: str
    first_bar: int
    last_bar: int


@dataclass(frozen=True)
class Score:
    title: str
    ticks_per_quarter: int
    tracks: tuple[Track, ...]
    sections: tuple[Section, ...]

    def bar_count(self) -> int:
        """Number of bars of the longest track."""
        return max((len(t.bars) for t in self.tracks), default=0)


def _validate_note(note: Note, bar: Bar, where: str, out: list[str]) -> None:
    if not 0 <= note.pitch <= 127:
        out.append(f"{where}: pitch {note.pitch} outside [0, 127]")
    if note.duration_ticks < 1:
        out.append(f"{where}: duration_ticks {note.duration_ticks} < 1")
    if note.start_tick < 0:
        out.append(f"{where}: start_tick {note.start_tick} < 0")
    if (note.string is None) != (note.fret is None):
        out.append(f"{where}: string and fret must be both present or both absent")
    if note.string is not None and note.string < 1:
        out.append(f"{where}: string {note.string} < 1")
    if note.fret is not None and note.fret < 0:
        out.append(f"{where}: fret {note.fret} < 0")
    if not bar.start_tick <= note.start_tick < bar.end_tick:
        out.append(
            f"{where}: start_tick {note.start_tick} does not begin within "
            f"bar span [{bar.start_tick}, {bar.end_tick})"
        )


def _validate_track(track: Track, track_idx: int, out: list[str]) -> None:
    name = f"track {track_idx} ({track.name!r})"
    if track.tuning is not None and not all(0 <= p <= 127 for p in track.tuning):
        out.append(f"{name}: tuning pitches outside [0, 127]")
    prev_end = None
    for i, bar in enumerate(track.bars):
        where = f"{name}, bar {i}"
        if bar.index != i:
            out.append(f"{where}: index {bar.index} is not consecutive")
        if bar.length_ticks < 1:
            out.append(f"{where}: length_ticks {bar.length_ticks} < 1")
        if bar.time_sig_numerator < 1 or bar.time_sig_denominator < 1:
            out.append(f"{where}: invalid time signature")
        if prev_end is not None and bar.start_tick < prev_end:
            out.append(f"{where}: overlaps the previous bar")
        prev_end = bar.start_tick + bar.length_ticks
        keys = [(n.start_tick, n.pitch) for n in bar.notes]
        if keys != sorted(keys):
            out.append(f"{where}: notes are not sorted by (start_tick, pitch)")
        for j, note in enumerate(bar.notes):
            _validate_note(note, bar, f"{where}, note {j}", out)


def _validate_sections(score: Score, out: list[str]) -> None:
    bar_count = score.bar_count()
    if not score.sections:
        return
    expected_first = 0
    for k, sec in enumerate(score.sections):
        where = f"section {k} ({sec.name!r})"
        if not 0 <= sec.first_bar <= sec.last_bar < bar_count:
            out.append(f"{where}: bar range [{sec.first_bar}, {sec.last_bar}] "
                       f"invalid for {bar_count} bars")
            return
        if sec.first_bar != expected_first:
            out.append(f"{where}: sections must be ordered, non-overlapping and "
                       f"cover all bars (expected first_bar {expected_first})")
            return
        expected_first = sec.last_bar + 1
    if expected_first != bar_count:
        out.append(f"sections cover bars up to {expected_first - 1} "
                   f"but the longest track has {bar_count} bars")


def validate(score: Score) -> list[str]:
    """Check every model invariant; returns one description per violation.

    Idempotent and side-effect free; an empty list means the score is
    well formed.
    """
    out: list[str] = []
    if score.ticks_per_quarter < 1:
        out.append(f"ticks_per_quarter {score.ticks_per_quarter} < 1")
    if not score.tracks:
        out.append("score has no tracks")
    for idx, track in enumerate(score.tracks):
        _validate_track(track, idx, out)
    _validate_sections(score, out)
    return out
