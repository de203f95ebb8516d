import pytest

from scorelens.model import (Bar, Note, Score, Section, Track, pitch_name,
                             validate)


def make_bar(index, notes=(), start=None, length=8):
    return Bar(index=index, start_tick=index * length if start is None else start,
               length_ticks=length, time_sig_numerator=4,
               time_sig_denominator=4, notes=tuple(notes))


def make_score(bars, sections=(), tuning=None, tpq=2):
    track = Track(name="t", tuning=tuning, bars=tuple(bars))
    return Score(title="x", ticks_per_quarter=tpq, tracks=(track,),
                 sections=tuple(sections))


def test_pitch_names():
    assert pitch_name(60) == "C4"
    assert pitch_name(61) == "C#4"
    assert pitch_name(40) == "E2"
    assert pitch_name(0) == "C-1"


def test_valid_score_passes():
    bars = [
        make_bar(0, [Note(0, 2, 60), Note(2, 2, 64)]),
        make_bar(1, [Note(8, 4, 67)]),
        make_bar(2),
    ]
    score = make_score(bars, sections=[Section("a", 0, 1), Section("b", 2, 2)])
    assert validate(score) == []


def test_empty_track_is_valid():
    assert validate(make_score([])) == []


def test_no_tracks_flagged():
    score = Score(title="", ticks_per_quarter=2, tracks=(), sections=())
    assert any("no tracks" in p for p in validate(score))


def test_bad_tick_resolution_flagged():
    score = make_score([make_bar(0)], tpq=0)
    assert any("ticks_per_quarter" in p for p in validate(score))


def test_nonconsecutive_bar_indices_flagged():
    score = make_score([make_bar(0), make_bar(2, start=8)])
    assert any("not consecutive" in p for p in validate(score))


def test_overlapping_bars_flagged():
    score = make_score([make_bar(0, length=8), make_bar(1, start=4)])
    assert any("overlaps" in p for p in validate(score))


def test_unsorted_notes_flagged():
    bar = make_bar(0, [Note(2, 1, 60), Note(0, 1, 64)])
    assert any("sorted" in p for p in validate(make_score([bar])))


def test_equal_onsets_sorted_by_pitch_ok():
    bar = make_bar(0, [Note(0, 2, 60), Note(0, 2, 64), Note(0, 2, 64)])
    assert validate(make_score([bar])) == []


def test_pitch_range_flagged():
    bar = make_bar(0, [Note(0, 1, 200)])
    assert any("pitch" in p for p in validate(make_score([bar])))


def test_note_outside_bar_flagged():
    bar = make_bar(0, [Note(20, 1, 60)], length=8)
    assert any("within" in p or "span" in p for p in validate(make_score([bar])))


def test_string_without_fret_flagged():
    bar = make_bar(0, [Note(0, 1, 60, string=3)])
    assert any("string and fret" in p for p in validate(make_score([bar])))


def test_zero_duration_flagged():
    bar = make_bar(0, [Note(0, 0, 60)])
    assert any("duration" in p for p in validate(make_score([bar])))


def test_sections_must_cover_all_bars():
    score = make_score([make_bar(0), make_bar(1)],
                       sections=[Section("a", 0, 0)])
    assert validate(score) != []


def test_sections_must_not_overlap():
    score = make_score([make_bar(0), make_bar(1)],
                       sections=[Section("a", 0, 1), Section("b", 1, 1)])
    assert validate(score) != []


def test_section_range_must_be_in_bounds():
    score = make_score([make_bar(0)], sections=[Section("a", 0, 5)])
    assert validate(score) != []


def test_model_is_immutable():
    note = Note(0, 1, 60)
    with pytest.raises(AttributeError):
        note.pitch = 61


def test_bar_end_tick():
    assert make_bar(2, length=8).end_tick == 24
