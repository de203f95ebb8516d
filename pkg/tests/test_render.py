import re
from pathlib import Path

import pytest

from scorelens.colors import ColorAssignment, get_scale, map_positions
from scorelens.compression import (Leaf, Run, Seq, build_repetition_tree,
                                   expand, leaf_count)
from scorelens.model import Bar, Note, Track
from scorelens.musicxml import parse_score
from scorelens.render import (InconsistentTree, LengthMismatch,
                              MissingTabData, RenderConfig, render_bar,
                              render_compact, render_compressed)

SAMPLES = Path(__file__).resolve().parents[1] / "samples"

RECT = re.compile(r'<rect x="([^"]+)" y="([^"]+)" width="([^"]+)" '
                  r'height="([^"]+)" fill="([^"]+)"')
TRANSLATE = re.compile(r'translate\(([-0-9.]+),([-0-9.]+)\)')


def rects(svg):
    return [(float(m[1]), float(m[2]), float(m[3]), float(m[4]), m[5])
            for m in RECT.finditer(svg)]


def make_track(bar_pitches, tuning=None, strings=None, tpq=4):
    bars = []
    for index, pitches in enumerate(bar_pitches):
        notes = []
        for k, p in enumerate(pitches):
            sf = strings[index][k] if strings else (None, None)
            notes.append(Note(start_tick=index * 4 * tpq + k * tpq,
                              duration_ticks=tpq, pitch=p,
                              string=sf[0], fret=sf[1]))
        bars.append(Bar(index=index, start_tick=index * 4 * tpq,
                        length_ticks=4 * tpq, time_sig_numerator=4,
                        time_sig_denominator=4, notes=tuple(notes)))
    return Track(name="t", tuning=tuning, bars=tuple(bars))


def flat_colors(n, mode="mds"):
    return map_positions([0.5] * n, get_scale("spectral"), mode=mode)


def no_colors(n):
    return ColorAssignment(mode="mds", positions=(None,) * n,
                           colors=(None,) * n)


def test_config_validation():
    with pytest.raises(ValueError):
        RenderConfig(note_mode="guitarPro")
    with pytest.raises(ValueError):
        RenderConfig(bars_per_row=0)
    with pytest.raises(ValueError):
        RenderConfig(overlay_opacity=1.5)


def test_note_geometry_is_proportional():
    # half note then quarter at beat 3 in 4/4: x and width scale with ticks
    track = make_track([[60]])
    bar = Bar(index=0, start_tick=0, length_ticks=16, time_sig_numerator=4,
              time_sig_denominator=4,
              notes=(Note(start_tick=0, duration_ticks=8, pitch=60),
                     Note(start_tick=8, duration_ticks=4, pitch=60)))
    track = Track(name="t", tuning=None, bars=(bar,))
    svg = render_bar(bar, track, RenderConfig())
    note_rects = [r for r in rects(svg) if r[4].startswith("rgb")]
    # each note paints a body rect then a 1px onset cue
    assert (note_rects[0][0], note_rects[0][2]) == (0.0, 60.0)
    assert note_rects[1][2] == 1.0  # onset cue width
    assert (note_rects[2][0], note_rects[2][2]) == (60.0, 30.0)
    # single-pitch track: one row spanning the full box height
    assert note_rects[0][1] == 0.0 and note_rects[0][3] == 48.0


def test_fractional_widths_round_to_three_decimals():
    bar = Bar(index=0, start_tick=0, length_ticks=12, time_sig_numerator=3,
              time_sig_denominator=4,
              notes=(Note(start_tick=0, duration_ticks=4, pitch=60),))
    track = Track(name="t", tuning=None, bars=(bar,))
    svg = render_bar(bar, track, RenderConfig(bar_box_width=100.0))
    assert 'width="33.333"' in svg
    assert not re.search(r'\d\.\d{4,}', svg)


def test_piano_roll_rows_follow_pitch():
    track = make_track([[60, 67]])
    svg = render_bar(track.bars[0], track, RenderConfig())
    note_rects = [r for r in rects(svg) if r[4].startswith("rgb")]
    row_h = 48.0 / 8  # pitch range 60..67 spans 8 rows
    assert note_rects[0][1] == 7 * row_h  # low note at the bottom
    assert note_rects[2][1] == 0.0        # high note on top
    assert note_rects[0][3] == row_h


def test_tab_rows_follow_strings():
    tuning = (64, 59, 55, 50, 45, 40)
    track = make_track([[40, 64]], tuning=tuning,
                       strings=[[(6, 0), (1, 0)]])
    svg = render_bar(track.bars[0], track,
                     RenderConfig(note_mode="tabSimple"))
    note_rects = [r for r in rects(svg) if r[4].startswith("rgb")]
    row_h = 48.0 / 6
    assert note_rects[0][1] == 5 * row_h  # string 6 on the bottom row
    assert note_rects[2][1] == 0.0        # string 1 on top


def test_tab_frets_mode_prints_fret_numbers():
    tuning = (64, 59, 55, 50, 45, 40)
    track = make_track([[40, 45]], tuning=tuning,
                       strings=[[(6, 0), (6, 5)]])
    svg = render_bar(track.bars[0], track,
                     RenderConfig(note_mode="tabFrets"))
    texts = re.findall(r'dominant-baseline="central">([^<]*)</text>', svg)
    assert texts == ["0", "5"]


def test_tab_frets_skips_tie_continuations():
    tuning = (64, 59, 55, 50, 45, 40)
    bar = Bar(index=0, start_tick=0, length_ticks=16, time_sig_numerator=4,
              time_sig_denominator=4,
              notes=(Note(start_tick=0, duration_ticks=8, pitch=40,
                          string=6, fret=0, tie_continuation=True),))
    track = Track(name="t", tuning=tuning, bars=(bar,))
    svg = render_bar(bar, track, RenderConfig(note_mode="tabFrets"))
    assert "central" not in svg  # no fret label
    note_rects = [r for r in rects(svg) if r[4].startswith("rgb")]
    assert len(note_rects) == 1  # body only, no onset cue


def test_missing_tab_data():
    track = make_track([[60]])  # no tuning
    with pytest.raises(MissingTabData):
        render_bar(track.bars[0], track, RenderConfig(note_mode="tabSimple"))
    tuned = make_track([[60]], tuning=(64, 59, 55, 50, 45, 40))
    with pytest.raises(MissingTabData):  # tuning but note has no string
        render_bar(tuned.bars[0], tuned, RenderConfig(note_mode="tabSimple"))


def test_fill_paints_translucent_overlay():
    track = make_track([[60]])
    svg = render_bar(track.bars[0], track, RenderConfig(),
                     fill=(200, 30, 30))
    assert 'fill="rgb(200,30,30)" fill-opacity="0.45"' in svg
    bare = render_bar(track.bars[0], track, RenderConfig())
    assert "fill-opacity" not in bare


def test_compact_grid_wraps_rows():
    track = make_track([[60]] * 16)
    svg = render_compact(track, flat_colors(16), RenderConfig())
    offsets = [(float(m[1]), float(m[2])) for m in TRANSLATE.finditer(svg)]
    assert len(offsets) == 16
    assert len({y for _, y in offsets}) == 2
    assert len({x for x, _ in offsets}) == 8
    xs = sorted({x for x, _ in offsets})
    assert xs[1] - xs[0] == 128.0  # box width 120 plus 8 gap

    svg17 = render_compact(make_track([[60]] * 17), flat_colors(17),
                           RenderConfig())
    offsets = [(float(m[1]), float(m[2])) for m in TRANSLATE.finditer(svg17)]
    rows = {}
    for x, y in offsets:
        rows.setdefault(y, []).append(x)
    assert sorted(len(v) for v in rows.values()) == [1, 8, 8]


def test_compact_labels_every_bar():
    track = make_track([[60]] * 3)
    svg = render_compact(track, flat_colors(3), RenderConfig())
    labels = re.findall(r'text-anchor="start">(\d+)</text>', svg)
    assert labels == ["0", "1", "2"]


def test_compact_unassigned_bars_have_no_overlay():
    track = make_track([[60]] * 2)
    svg = render_compact(track, no_colors(2), RenderConfig())
    assert "fill-opacity" not in svg


def test_compact_length_mismatch():
    track = make_track([[60]] * 3)
    with pytest.raises(LengthMismatch):
        render_compact(track, flat_colors(2), RenderConfig())


def test_compact_empty_track():
    svg = render_compact(make_track([]), flat_colors(0), RenderConfig())
    assert svg.startswith("<svg ") and svg.endswith("</svg>")


def test_svg_document_shape():
    track = make_track([[60]] * 2)
    svg = render_compact(track, flat_colors(2), RenderConfig())
    assert svg.startswith('<svg xmlns="http://www.w3.org/2000/svg" ')
    assert 'viewBox="0 0 ' in svg
    first_rect = rects(svg)[0]
    assert first_rect[4] == "#fff"  # white background under everything


def test_compressed_draws_one_box_per_leaf():
    ids = [0, 0, 2, 0]
    tree = build_repetition_tree(ids)
    track = make_track([[60], [60], [64], [60]])
    svg = render_compressed(tree, track, ids, flat_colors(4), RenderConfig())
    assert len(TRANSLATE.findall(svg)) == leaf_count(tree)
    labels = re.findall(r'text-anchor="start">(\d+)</text>', svg)
    assert labels == ["0", "2", "0"]  # canonical ids in expansion order
    counts = re.findall(r'text-anchor="middle">×(\d+)</text>', svg)
    assert counts == ["2"]
    assert svg.count("<path ") == 1  # one bracket per run


def test_compressed_nested_brackets_stack():
    ids = [0, 1, 0, 1, 0, 1] * 3
    tree = build_repetition_tree(ids)
    track = make_track([[60 + i] for i in ids])
    svg = render_compressed(tree, track, ids, flat_colors(18),
                            RenderConfig())
    # largest block wins the cover tie, so the pattern nests as 3 × (3 × [0,1])
    counts = re.findall(r'text-anchor="middle">×(\d+)</text>', svg)
    assert counts == ["3", "3"]
    # brackets for distinct nesting depths sit at distinct heights
    ys = {float(m[1]) for m in
          re.finditer(r'<path d="M [0-9.]+ ([0-9.]+)', svg)}
    assert len(ys) == svg.count("<path ")


def test_compressed_inconsistent_tree():
    track = make_track([[60], [60]])
    with pytest.raises(InconsistentTree):
        render_compressed(Leaf(0), track, [0, 0], flat_colors(2),
                          RenderConfig())


def test_compressed_length_mismatch():
    ids = [0, 0]
    tree = build_repetition_tree(ids)
    track = make_track([[60], [60]])
    with pytest.raises(LengthMismatch):
        render_compressed(tree, track, ids, flat_colors(1), RenderConfig())


def test_rendering_is_deterministic():
    score, _ = parse_score((SAMPLES / "sections_tab.musicxml").read_bytes())
    track = score.tracks[0]
    colors = flat_colors(len(track.bars))
    config = RenderConfig(note_mode="tabFrets")
    assert render_compact(track, colors, config) == \
        render_compact(track, colors, config)
    ids = [0, 0, 2, 3, 4, 4, 6, 4]
    tree = build_repetition_tree(ids)
    assert render_compressed(tree, track, ids, colors, config) == \
        render_compressed(tree, track, ids, colors, config)
