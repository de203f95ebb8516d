import random

from scorelens.model import Bar, Note, Score, Section, Track
from scorelens.segmentation import (build_hierarchy, extract_harmonies,
                                    harmony_segments, segment_bars,
                                    segment_sections)


def make_track(note_rows, bar_len=8):
    bars = []
    for index, notes in enumerate(note_rows):
        bars.append(Bar(index=index, start_tick=index * bar_len,
                        length_ticks=bar_len, time_sig_numerator=4,
                        time_sig_denominator=4,
                        notes=tuple(sorted(notes, key=lambda n: (n.start_tick,
                                                                 n.pitch)))))
    return Track(name="t", tuning=None, bars=tuple(bars))


def make_score(track, sections=()):
    return Score(title="piece", ticks_per_quarter=2, tracks=(track,),
                 sections=tuple(sections))


def test_segment_bars_one_per_bar():
    track = make_track([[Note(0, 2, 60)], [], [Note(17, 2, 64)], []])
    segments = segment_bars(track)
    assert [s.ordinal for s in segments] == [0, 1, 2, 3]
    assert [s.bar_range for s in segments] == [(0, 0), (1, 1), (2, 2), (3, 3)]
    assert segments[1].note_refs == ()
    assert segments[2].note_refs == ((2, 0),)


def test_segment_bars_empty_track():
    assert segment_bars(make_track([])) == []


def test_segment_sections_explicit():
    track = make_track([[Note(i * 8, 2, 60 + i)] for i in range(4)])
    score = make_score(track, [Section("intro", 0, 1), Section("solo", 2, 3)])
    segments = segment_sections(score, track)
    assert [s.label for s in segments] == ["intro", "solo"]
    assert segments[0].note_refs == ((0, 0), (1, 0))
    assert segments[1].note_refs == ((2, 0), (3, 0))


def test_segment_sections_fallback_single_piece():
    track = make_track([[Note(0, 2, 60)], [Note(8, 2, 62)]])
    segments = segment_sections(make_score(track), track)
    assert len(segments) == 1
    assert segments[0].label == "piece"
    assert segments[0].bar_range == (0, 1)


def test_extract_harmonies_groups_by_tick():
    track = make_track([[Note(0, 2, 60), Note(0, 2, 64), Note(4, 2, 67)]])
    harmonies = extract_harmonies(track)
    assert [(h.start_tick, set(h.pitch_class_set)) for h in harmonies] == [
        (0, {0, 4}), (4, {7})]


def test_harmony_octaves_fold():
    # an E chord voiced across octaves folds to three pitch classes
    notes = [Note(0, 2, 40), Note(0, 2, 47), Note(0, 2, 52), Note(0, 2, 56)]
    harmonies = extract_harmonies(make_track([notes]))
    assert len(harmonies) == 1
    assert set(harmonies[0].pitch_class_set) == {4, 11, 8}


def test_harmonies_skip_tie_continuations():
    notes = [Note(0, 4, 60), Note(4, 4, 60, tie_continuation=True)]
    harmonies = extract_harmonies(make_track([notes]))
    assert len(harmonies) == 1
    assert harmonies[0].start_tick == 0


def test_harmonies_cross_bar_by_absolute_tick():
    track = make_track([[Note(0, 2, 60)], [Note(8, 2, 62), Note(8, 2, 65)]])
    harmonies = extract_harmonies(track)
    assert [h.start_tick for h in harmonies] == [0, 8]
    assert set(harmonies[1].pitch_class_set) == {2, 5}


def test_harmony_extraction_invariant_under_equal_start_reordering():
    rng = random.Random(7)
    notes = [Note(0, 2, 60 + i) for i in range(5)] + [Note(4, 2, 50)]
    baseline = extract_harmonies(make_track([list(notes)]))
    for _ in range(10):
        shuffled = list(notes)
        rng.shuffle(shuffled)
        assert extract_harmonies(make_track([shuffled])) == baseline


def test_levels_partition_every_onset_note():
    rng = random.Random(8)
    rows = []
    for b in range(6):
        row = [Note(b * 8 + rng.randrange(8), 1, rng.randrange(40, 80),
                    tie_continuation=(rng.random() < 0.2))
               for _ in range(rng.randrange(0, 5))]
        rows.append(row)
    track = make_track(rows)
    score = make_score(track)
    onsets = sum(1 for bar in track.bars for n in bar.notes
                 if not n.tie_continuation)
    all_notes = sum(len(bar.notes) for bar in track.bars)
    assert sum(len(s.note_refs) for s in segment_bars(track)) == all_notes
    assert sum(len(s.note_refs)
               for s in segment_sections(score, track)) == all_notes
    assert sum(len(h.note_refs) for h in extract_harmonies(track)) == onsets
    ordinals = [s.ordinal for s in harmony_segments(track)]
    assert ordinals == sorted(ordinals)


def test_hierarchy_node_count():
    # 2 sections x 2 bars x 1 harmony x 2 notes: 1 + 2 + 4 + 4 + 8 nodes
    rows = [[Note(i * 8, 2, 60), Note(i * 8, 2, 64)] for i in range(4)]
    track = make_track(rows)
    score = make_score(track, [Section("a", 0, 1), Section("b", 2, 3)])
    tree = build_hierarchy(score, track)
    assert tree.count() == 1 + 2 + 4 + 4 + 8
    assert [c.level for c in tree.children] == ["section", "section"]
    assert [c.label for c in tree.children] == ["a", "b"]


def test_hierarchy_empty_bar_has_no_children():
    track = make_track([[Note(0, 2, 60)], []])
    tree = build_hierarchy(make_score(track), track)
    bar_nodes = tree.children[0].children
    assert len(bar_nodes) == 2
    assert bar_nodes[1].children == ()


def test_hierarchy_counts_match_formula():
    rng = random.Random(9)
    rows = []
    for b in range(5):
        ticks = sorted(rng.sample(range(8), rng.randrange(0, 4)))
        rows.append([Note(b * 8 + t, 1, rng.randrange(40, 80)) for t in ticks])
    track = make_track(rows)
    score = make_score(track)
    harmonies = extract_harmonies(track)
    onsets = sum(len(h.note_refs) for h in harmonies)
    tree = build_hierarchy(score, track)
    assert tree.count() == 1 + 1 + len(track.bars) + len(harmonies) + onsets
