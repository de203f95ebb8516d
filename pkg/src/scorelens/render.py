"""Deterministic SVG rendering: single bars, the compact whole-piece
grid, and the compressed repetition view.

All geometry derives from integer ticks and the fixed RenderConfig, and
floats are formatted with at most 3 fractional digits, so equal inputs
produce byte-identical documents. Attribute order is fixed by
construction (plain string building, no dict iteration).
"""

from __future__ import annotations

from dataclasses import dataclass

from .colors import (ColorAssignment, Rgb, contrast_text_color,
                     note_pitch_color)
from .compression import Leaf, Node, Run, bracket_depth, expand, leaf_count
from .model import Bar, Track

NOTE_MODES = ("pianoRoll", "tabSimple", "tabFrets")


class MissingTabData(ValueError):
    """Tab rendering needs a tuning and per-note string numbers."""


class LengthMismatch(ValueError):
    """Color assignment length does not match the bar count."""


class InconsistentTree(ValueError):
    """Repetition tree does not expand to the given canonical ids."""


@dataclass(frozen=True)
class RenderConfig:
    note_mode: str = "pianoRoll"
    bars_per_row: int = 8
    bar_box_width: float = 120.0
    bar_box_height: float = 48.0
    overlay_opacity: float = 0.45

    def __post_init__(self):
        if self.note_mode not in NOTE_MODES:
            raise ValueError(f"unknown note mode {self.note_mode!r}")
        if self.bars_per_row < 1:
            raise ValueError("bars_per_row must be >= 1")
        if self.bar_box_width <= 0 or self.bar_box_height <= 0:
            raise ValueError("bar box dimensions must be positive")
        if not 0 < self.overlay_opacity <= 1:
            raise ValueError("overlay_opacity must be in (0, 1]")


_MARGIN = 10.0
_LABEL_H = 14.0
_BAR_GAP = 8.0
_ROW_GAP = 10.0
_BRACKET_H = 16.0


def _fmt(x: float) -> str:
    text = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def _rgb(color: Rgb) -> str:
    return f"rgb({color[0]},{color[1]},{color[2]})"


def _esc(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


def _rect(x: float, y: float, w: float, h: float, fill: str,
          extra: str = "") -> str:
    return (f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" '
            f'height="{_fmt(h)}" fill="{fill}"{extra}/>')


def _text_el(x: float, y: float, content: str, fill: str = "#333",
             size: float = 10.0, anchor: str = "start") -> str:
    return (f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-family="sans-serif" '
            f'font-size="{_fmt(size)}" fill="{fill}" '
            f'text-anchor="{anchor}">{_esc(content)}</text>')


def _pitch_range(track: Track) -> tuple[int, int]:
    pitches = [n.pitch for bar in track.bars for n in bar.notes]
    if not pitches:
        return (60, 60)
    return (min(pitches), max(pitches))


def _darken(color: Rgb) -> Rgb:
    return (int(color[0] * 0.6), int(color[1] * 0.6), int(color[2] * 0.6))


def render_bar(bar: Bar, track: Track, config: RenderConfig,
               fill: Rgb | None = None) -> str:
    """One bar as an SVG ``<g>`` fragment with its origin at (0, 0).

    Piano roll places notes by pitch over the track-wide pitch range
    (high notes on top); tab modes place them on string rows (string 1
    on top). Block x and width are proportional to start offset and
    duration within the bar. ``fill`` adds a translucent background.
    """
    w, h = config.bar_box_width, config.bar_box_height
    parts = ['<g>']
    if fill is not None:
        parts.append(_rect(0, 0, w, h, _rgb(fill),
                           f' fill-opacity="{_fmt(config.overlay_opacity)}"'))
    parts.append(_rect(0, 0, w, h, "none", ' stroke="#999" stroke-width="1"'))

    piece_range = _pitch_range(track)
    tab = config.note_mode in ("tabSimple", "tabFrets")
    if tab:
        if track.tuning is None:
            raise MissingTabData(f"bar {bar.index}: track has no tuning")
        rows = len(track.tuning)
    else:
        lo, hi = piece_range
        rows = hi - lo + 1
    row_h = h / rows

    for note in bar.notes:
        x = (note.start_tick - bar.start_tick) / bar.length_ticks * w
        width = note.duration_ticks / bar.length_ticks * w
        if tab:
            if note.string is None or note.fret is None:
                raise MissingTabData(
                    f"bar {bar.index}: note at tick {note.start_tick} "
                    "has no string/fret")
            y = (note.string - 1) * row_h
        else:
            y = (hi - note.pitch) * row_h
        color = note_pitch_color(note.pitch, piece_range)
        parts.append(_rect(x, y, width, row_h, _rgb(color)))
        if not note.tie_continuation:
            # onset cue: darker leading edge, continuations have none
            parts.append(_rect(x, y, min(1.0, width), row_h,
                               _rgb(_darken(color))))
        if config.note_mode == "tabFrets" and not note.tie_continuation:
            text_fill = _rgb(contrast_text_color(color))
            parts.append(
                f'<text x="{_fmt(x + width / 2)}" y="{_fmt(y + row_h / 2)}" '
                f'font-family="sans-serif" font-size="8" fill="{text_fill}" '
                f'text-anchor="middle" dominant-baseline="central">'
                f'{note.fret}</text>')
    parts.append("</g>")
    return "".join(parts)


def _svg_document(width: float, height: float, body: list[str]) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
            f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">')
    background = _rect(0, 0, width, height, "#fff")
    return head + background + "".join(body) + "</svg>"


def _placed(x: float, y: float, fragment: str) -> str:
    return f'<g transform="translate({_fmt(x)},{_fmt(y)})">{fragment}</g>'


def render_compact(track: Track, colors: ColorAssignment,
                   config: RenderConfig) -> str:
    """The whole piece as a grid of bars, wrapping every bars_per_row.

    Each bar gets its assigned overlay color (unassigned bars none) and
    an index label above it.
    """
    n = len(track.bars)
    if len(colors.positions) != n:
        raise LengthMismatch(
            f"{len(colors.positions)} colors for {n} bars")
    w, h = config.bar_box_width, config.bar_box_height
    columns = min(n, config.bars_per_row) or 1
    rows = (n + config.bars_per_row - 1) // config.bars_per_row if n else 0
    cell_w = w + _BAR_GAP
    cell_h = h + _LABEL_H + _ROW_GAP
    width = 2 * _MARGIN + columns * cell_w - _BAR_GAP
    height = 2 * _MARGIN + rows * cell_h - (_ROW_GAP if rows else 0)

    body = []
    for bar in track.bars:
        row, col = divmod(bar.index, config.bars_per_row)
        x = _MARGIN + col * cell_w
        y = _MARGIN + row * cell_h + _LABEL_H
        body.append(_text_el(x, y - 4, str(bar.index)))
        body.append(_placed(x, y, render_bar(bar, track, config,
                                             colors.colors[bar.index])))
    return _svg_document(max(width, 2 * _MARGIN), max(height, 2 * _MARGIN), body)


def render_compressed(tree: Node, track: Track, ids: list[int],
                      colors: ColorAssignment, config: RenderConfig) -> str:
    """The repetition tree as one row of first-occurrence bars with
    stacked run brackets.

    Leaves draw the canonical bar's content labeled with its id; every
    Run draws a bracket over its body span annotated with the count.
    Outer brackets stack above inner ones.
    """
    if expand(tree) != list(ids):
        raise InconsistentTree("tree does not expand to the canonical ids")
    if len(colors.positions) != len(track.bars):
        raise LengthMismatch(
            f"{len(colors.positions)} colors for {len(track.bars)} bars")

    w, h = config.bar_box_width, config.bar_box_height
    lanes = bracket_depth(tree)
    top = _MARGIN + lanes * _BRACKET_H + _LABEL_H
    boxes = leaf_count(tree)
    width = 2 * _MARGIN + boxes * (w + _BAR_GAP) - (_BAR_GAP if boxes else 0)
    height = top + h + _MARGIN

    body: list[str] = []
    cursor = 0

    def place(node: Node) -> tuple[int, int]:
        """Render ``node``, returning its (first, last) box index span."""
        nonlocal cursor
        if isinstance(node, Leaf):
            index = cursor
            cursor += 1
            x = _MARGIN + index * (w + _BAR_GAP)
            bar = track.bars[node.segment_id]
            body.append(_text_el(x, top - 4, str(node.segment_id)))
            body.append(_placed(x, top, render_bar(
                bar, track, config, colors.colors[node.segment_id])))
            return index, index
        if isinstance(node, Run):
            first = last = None
            if node.prefix is not None:
                first, last = place(node.prefix)
            body_first, body_last = place(node.body)
            first = body_first if first is None else first
            last = body_last
            lane = bracket_depth(node)  # outer runs sit on higher lanes
            x0 = _MARGIN + body_first * (w + _BAR_GAP)
            x1 = _MARGIN + body_last * (w + _BAR_GAP) + w
            y = top - _LABEL_H - (lane - 1) * _BRACKET_H - 6
            body.append(
                f'<path d="M {_fmt(x0)} {_fmt(y + 5)} L {_fmt(x0)} {_fmt(y)} '
                f'L {_fmt(x1)} {_fmt(y)} L {_fmt(x1)} {_fmt(y + 5)}" '
                f'fill="none" stroke="#333" stroke-width="1"/>')
            body.append(_text_el((x0 + x1) / 2, y - 2,
                                 f"×{node.count}", anchor="middle"))
            if node.suffix is not None:
                _, last = place(node.suffix)
            return first, last
        first = last = None
        for part in node.parts:
            a, b = place(part)
            first = a if first is None else first
            last = b
        return first, last

    place(tree)
    return _svg_document(max(width, 2 * _MARGIN), height, body)
