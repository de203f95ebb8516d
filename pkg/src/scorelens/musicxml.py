"""MusicXML (and .mxl ZIP) ingestion into the Score model.

Supports score-partwise documents only. Timing is normalized to one
global ticks-per-quarter resolution (the least common multiple of every
divisions value, capped at 960); positions are tracked as exact rational
quarter-note offsets, so tick conversion is lossless below the cap.
"""

from __future__ import annotations

import io
import math
import zipfile
from dataclasses import dataclass
from fractions import Fraction
from xml.etree import ElementTree

from .model import Bar, Note, Score, Section, Track

_STEP_SEMITONES = {"C": 0, "D": 2, "E": 4, "F": 5, "G": 7, "A": 9, "B": 11}

#: Measure-level elements the parser understands (or deliberately reads
#: past, like repeat barlines, which are kept as written and not unrolled).
_HANDLED_MEASURE_ELEMENTS = {
    "note", "backup", "forward", "attributes", "direction",
    "barline", "print", "sound",
}

_MAX_TICKS_PER_QUARTER = 960


class MalformedXml(ValueError):
    """Input is not well-formed XML (or a broken ZIP container)."""


class UnsupportedRoot(ValueError):
    """Well-formed XML but not a score-partwise document."""


class MissingDivisions(ValueError):
    """No divisions declaration; note durations cannot be resolved."""


class UnsupportedElement(ValueError):
    """Strict mode: input uses an element this parser would skip."""


@dataclass(frozen=True)
class ParseOptions:
    """``track_filter`` keeps only the listed part indices (document
    order); ``strict_mode`` turns skipped-element warnings into errors."""

    track_filter: tuple[int, ...] | None = None
    strict_mode: bool = False


def _unzip_mxl(document: bytes) -> bytes:
    try:
        archive = zipfile.ZipFile(io.BytesIO(document))
        container = ElementTree.fromstring(archive.read("META-INF/container.xml"))
    except (zipfile.BadZipFile, KeyError, ElementTree.ParseError) as exc:
        raise MalformedXml(f"unreadable .mxl container: {exc}") from exc
    rootfile = container.find(".//rootfile")
    path = rootfile.get("full-path") if rootfile is not None else None
    if not path:
        raise MalformedXml(".mxl container declares no rootfile")
    try:
        return archive.read(path)
    except KeyError as exc:
        raise MalformedXml(f".mxl rootfile {path!r} missing from archive") from exc


def _local_name(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _text(element: ElementTree.Element | None) -> str:
    return (element.text or "").strip() if element is not None else ""


def _int_text(element: ElementTree.Element | None, default: int = 0) -> int:
    text = _text(element)
    return int(text) if text else default


class _Warnings(list):
    def __init__(self, strict: bool):
        super().__init__()
        self.strict = strict

    def skip(self, message: str) -> None:
        # skipped content is an error under strict mode
        if self.strict:
            raise UnsupportedElement(message)
        self.append(message)


def parse_score(document: bytes,
                options: ParseOptions = ParseOptions()) -> tuple[Score, list[str]]:
    """Parse MusicXML bytes (raw or .mxl ZIP) into a validated Score.

    Returns the score plus human-readable warnings for everything that
    was skipped or approximated. Deterministic: equal bytes give a
    structurally equal Score and equal warnings.
    """
    if options.track_filter is not None:
        if any(i < 0 for i in options.track_filter):
            raise ValueError("track_filter indices must be non-negative")
    if document[:4] == b"PK\x03\x04":
        document = _unzip_mxl(document)
    try:
        root = ElementTree.fromstring(document)
    except ElementTree.ParseError as exc:
        raise MalformedXml(str(exc)) from exc
    root_name = _local_name(root.tag)
    if root_name != "score-partwise":
        raise UnsupportedRoot(f"expected a score-partwise document, got <{root_name}>")

    warnings = _Warnings(options.strict_mode)
    version = root.get("version")
    if version and not version.startswith("3."):
        warnings.append(f"MusicXML version {version} not explicitly supported; "
                        "attempting anyway")

    title = _text(root.find("work/work-title")) or _text(root.find("movement-title"))

    part_names: dict[str, str] = {}
    for score_part in root.iter():
        if _local_name(score_part.tag) == "score-part":
            part_id = score_part.get("id", "")
            part_names[part_id] = _text(score_part.find("part-name")) or part_id

    parts = [el for el in root if _local_name(el.tag) == "part"]
    if options.track_filter is not None:
        for idx in options.track_filter:
            if idx >= len(parts):
                warnings.append(f"track_filter index {idx} out of range "
                                f"({len(parts)} parts); ignored")
        keep = set(options.track_filter)
        parts = [p for p in enumerate(parts) if p[0] in keep]
        if not parts:
            raise ValueError("track_filter selects no parts")
    else:
        parts = list(enumerate(parts))

    all_divisions = [
        value for _, part in parts
        for el in part.iter() if _local_name(el.tag) == "divisions"
        and (value := _int_text(el)) > 0
    ]
    if not all_divisions:
        raise MissingDivisions("no <divisions> element in any selected part")
    ticks_per_quarter = math.lcm(*all_divisions)
    if ticks_per_quarter > _MAX_TICKS_PER_QUARTER:
        warnings.append(
            f"combined tick resolution {ticks_per_quarter} exceeds "
            f"{_MAX_TICKS_PER_QUARTER}; note times are rounded")
        ticks_per_quarter = _MAX_TICKS_PER_QUARTER

    def to_tick(quarters: Fraction) -> int:
        scaled = quarters * ticks_per_quarter
        # floor(x + 1/2): exact for uncapped resolutions, deterministic
        # rounding otherwise
        return (2 * scaled.numerator + scaled.denominator) // (2 * scaled.denominator)

    tracks = []
    section_marks: dict[int, str] = {}
    for part_index, part in parts:
        track = _parse_part(part, part_names, part_index, to_tick,
                            warnings, section_marks)
        tracks.append(track)

    bar_count = max((len(t.bars) for t in tracks), default=0)
    sections = _sections_from_marks(section_marks, bar_count)
    score = Score(
        title=title,
        ticks_per_quarter=ticks_per_quarter,
        tracks=tuple(tracks),
        sections=sections,
    )
    return score, list(warnings)


def _sections_from_marks(marks: dict[int, str], bar_count: int) -> tuple[Section, ...]:
    if bar_count == 0:
        return ()
    if not marks:
        return (Section("piece", 0, bar_count - 1),)
    starts = sorted(m for m in marks if m < bar_count)
    if not starts:
        return (Section("piece", 0, bar_count - 1),)
    sections = []
    if starts[0] > 0:
        # unnamed opening bars before the first mark
        sections.append(Section("intro", 0, starts[0] - 1))
    for i, start in enumerate(starts):
        last = (starts[i + 1] - 1) if i + 1 < len(starts) else bar_count - 1
        sections.append(Section(marks[start], start, last))
    return tuple(sections)


def _parse_tuning(staff_details: ElementTree.Element,
                  warnings: _Warnings) -> tuple[int, ...] | None:
    lines = _int_text(staff_details.find("staff-lines"), default=0)
    by_line: dict[int, int] = {}
    for tuning in staff_details.findall("staff-tuning"):
        line = int(tuning.get("line", "0"))
        step = _text(tuning.find("tuning-step"))
        if line < 1 or step not in _STEP_SEMITONES:
            warnings.skip(f"staff-tuning with line {line!r} step {step!r} skipped")
            continue
        octave = _int_text(tuning.find("tuning-octave"))
        alter = _int_text(tuning.find("tuning-alter"))
        by_line[line] = (octave + 1) * 12 + _STEP_SEMITONES[step] + alter
    if not by_line:
        return None
    lines = max(lines, max(by_line))
    if set(by_line) != set(range(1, lines + 1)):
        warnings.append("staff-tuning does not cover every staff line; "
                        "tuning ignored")
        return None
    # line 1 is the lowest-pitched (bottom) staff line; string numbers
    # count from the top, so string s sits on line (lines - s + 1)
    return tuple(by_line[lines - s + 1] for s in range(1, lines + 1))


def _parse_part(part: ElementTree.Element, part_names: dict[str, str],
                part_index: int, to_tick, warnings: _Warnings,
                section_marks: dict[int, str]) -> Track:
    part_id = part.get("id", f"part{part_index}")
    name = part_names.get(part_id, part_id)
    divisions: int | None = None
    time_sig: tuple[int, int] | None = None
    transpose_semitones = 0
    tuning: tuple[int, ...] | None = None

    bars: list[Bar] = []
    measure_start = Fraction(0)
    measure_index = 0

    for measure in part:
        if _local_name(measure.tag) != "measure":
            continue
        cursor = measure_start
        prev_onset: Fraction | None = None
        notes: list[tuple[Fraction, Fraction, Note | None]] = []
        content_end = measure_start

        for element in measure:
            tag = _local_name(element.tag)
            if tag == "attributes":
                div = element.find("divisions")
                if div is not None:
                    divisions = _int_text(div)
                time = element.find("time")
                if time is not None:
                    time_sig = (_int_text(time.find("beats"), 4),
                                _int_text(time.find("beat-type"), 4))
                transpose = element.find("transpose")
                if transpose is not None:
                    transpose_semitones = (
                        _int_text(transpose.find("chromatic"))
                        + 12 * _int_text(transpose.find("octave-change")))
                for staff_details in element.findall("staff-details"):
                    parsed = _parse_tuning(staff_details, warnings)
                    if parsed is not None:
                        tuning = parsed
            elif tag == "note":
                cursor, prev_onset = _parse_note(
                    element, divisions, cursor, prev_onset, measure_index,
                    transpose_semitones, notes, warnings)
                content_end = max(content_end, cursor)
                if notes and notes[-1][2] is not None:
                    onset_q, dur_q, _ = notes[-1]
                    content_end = max(content_end, onset_q + dur_q)
            elif tag in ("backup", "forward"):
                duration = _int_text(element.find("duration"))
                if divisions is None:
                    raise MissingDivisions(
                        f"measure {measure_index}: {tag} before any <divisions>")
                delta = Fraction(duration, divisions)
                cursor = cursor - delta if tag == "backup" else cursor + delta
                content_end = max(content_end, cursor)
            elif tag == "direction":
                for direction_type in element.findall("direction-type"):
                    mark = (_text(direction_type.find("rehearsal"))
                            or _text(direction_type.find("words")))
                    if mark:
                        section_marks.setdefault(measure_index, mark)
            elif tag not in _HANDLED_MEASURE_ELEMENTS:
                warnings.skip(f"measure {measure_index}: "
                              f"unsupported element <{tag}> skipped")

        if time_sig is None:
            warnings.append(f"measure {measure_index}: no time signature seen; "
                            "assuming 4/4")
            time_sig = (4, 4)
        nominal_end = measure_start + Fraction(4 * time_sig[0], time_sig[1])
        if content_end > nominal_end:
            warnings.append(f"measure {measure_index}: content exceeds the "
                            "time signature; bar lengthened")
        measure_end = max(nominal_end, content_end)

        start_tick = to_tick(measure_start)
        length_ticks = max(1, to_tick(measure_end) - start_tick)
        bar_notes = []
        for onset_q, dur_q, note in notes:
            if note is None:
                continue
            onset_tick = to_tick(onset_q)
            duration_ticks = max(1, to_tick(onset_q + dur_q) - onset_tick)
            bar_notes.append(Note(
                start_tick=onset_tick,
                duration_ticks=duration_ticks,
                pitch=note.pitch,
                string=note.string,
                fret=note.fret,
                tie_continuation=note.tie_continuation,
            ))
        bar_notes.sort(key=lambda n: (n.start_tick, n.pitch))
        bars.append(Bar(
            index=measure_index,
            start_tick=start_tick,
            length_ticks=length_ticks,
            time_sig_numerator=time_sig[0],
            time_sig_denominator=time_sig[1],
            notes=tuple(bar_notes),
        ))
        measure_start = measure_end
        measure_index += 1

    return Track(name=name, tuning=tuning, bars=tuple(bars))


def _parse_note(element: ElementTree.Element, divisions: int | None,
                cursor: Fraction, prev_onset: Fraction | None,
                measure_index: int, transpose_semitones: int,
                notes: list, warnings: _Warnings) -> tuple[Fraction, Fraction | None]:
    """Process one <note>; appends to ``notes`` and returns the updated
    (cursor, previous onset) pair."""
    where = f"measure {measure_index}"
    if element.find("grace") is not None:
        warnings.skip(f"{where}: grace note skipped")
        return cursor, prev_onset

    duration = _int_text(element.find("duration"))
    if duration <= 0:
        warnings.skip(f"{where}: note without duration skipped")
        return cursor, prev_onset
    if divisions is None:
        raise MissingDivisions(f"{where}: note before any <divisions>")
    dur_q = Fraction(duration, divisions)

    is_chord = element.find("chord") is not None
    if is_chord and prev_onset is not None:
        onset = prev_onset
        advance = cursor
    else:
        if is_chord:
            warnings.append(f"{where}: chord note without a preceding note; "
                            "treated as a plain note")
        onset = cursor
        advance = cursor + dur_q

    if element.find("rest") is not None:
        return advance, (prev_onset if is_chord else None)

    if element.find("cue") is not None:
        warnings.skip(f"{where}: cue note skipped")
        return advance, (onset if not is_chord else prev_onset)
    pitch_el = element.find("pitch")
    if pitch_el is None:
        warnings.skip(f"{where}: unpitched note skipped")
        return advance, (onset if not is_chord else prev_onset)

    step = _text(pitch_el.find("step"))
    if step not in _STEP_SEMITONES:
        warnings.skip(f"{where}: note with invalid step {step!r} skipped")
        return advance, (onset if not is_chord else prev_onset)
    pitch = ((_int_text(pitch_el.find("octave")) + 1) * 12
             + _STEP_SEMITONES[step]
             + _int_text(pitch_el.find("alter"))
             + transpose_semitones)

    tie_continuation = any(
        tie.get("type") == "stop"
        for tie in element.findall("tie")
    )
    string = fret = None
    technical = element.find("notations/technical")
    if technical is not None:
        string_el = technical.find("string")
        fret_el = technical.find("fret")
        if string_el is not None and fret_el is not None:
            string = _int_text(string_el)
            fret = _int_text(fret_el)
        elif string_el is not None or fret_el is not None:
            warnings.append(f"{where}: incomplete string/fret pair ignored")

    notes.append((onset, dur_q, Note(
        start_tick=0,  # rebound to ticks by the caller
        duration_ticks=1,
        pitch=pitch,
        string=string,
        fret=fret,
        tie_continuation=tie_continuation,
    )))
    return advance, (onset if not is_chord else prev_onset)
