"""Command-line interface: analyze, render, serve.

Exit codes: 0 success, 2 parse failure (the message names the error
class), 3 I/O failure, 4 invalid flag combination, 5 port in use.
"""

from __future__ import annotations

import socket
import sys
from pathlib import Path

import click

from . import bundle as bundle_mod
from . import colors as colors_mod
from . import musicxml, render
from .bundle import AnalysisBundle, TrackAnalysis

_PARSE_ERRORS = (
    musicxml.MalformedXml,
    musicxml.UnsupportedRoot,
    musicxml.MissingDivisions,
    musicxml.UnsupportedElement,
    bundle_mod.SchemaViolation,
    bundle_mod.UnsupportedVersion,
)

EXIT_PARSE = 2
EXIT_IO = 3
EXIT_FLAGS = 4
EXIT_PORT = 5


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        _fail(EXIT_IO, f"cannot read {path}: {exc}")


def _write_bytes(path: str, data: bytes) -> None:
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write {path}: {exc}")


def _emit_warnings(warnings: list[str]) -> None:
    for message in warnings:
        click.echo(f"warning: {message}", err=True)


def _parse_and_build(data: bytes, track: int) -> AnalysisBundle:
    try:
        score, warnings = musicxml.parse_score(data)
    except _PARSE_ERRORS as exc:
        _fail(EXIT_PARSE, f"{type(exc).__name__}: {exc}")
    _emit_warnings(warnings)
    if not 0 <= track < len(score.tracks):
        _fail(EXIT_FLAGS, f"track {track} out of range "
                          f"({len(score.tracks)} tracks)")
    return bundle_mod.build_bundle(score, track)


def _load_any(data: bytes, track: int | None) -> AnalysisBundle:
    """Input sniffing: JSON bundles start with '{', MusicXML with '<' or
    a ZIP magic."""
    if data.lstrip()[:1] == b"{":
        try:
            loaded = bundle_mod.deserialize(data)
        except _PARSE_ERRORS as exc:
            _fail(EXIT_PARSE, f"{type(exc).__name__}: {exc}")
        if track is not None and loaded.analyses[0].track_index != track:
            _fail(EXIT_FLAGS,
                  f"bundle was analyzed for track "
                  f"{loaded.analyses[0].track_index}, not {track}")
        return loaded
    return _parse_and_build(data, track if track is not None else 0)


def _resolve_colors(analysis: TrackAnalysis, mode: str, scale_id: str | None,
                    threshold: float) -> colors_mod.ColorAssignment:
    level = analysis.levels["bar"]
    n = level.count
    mode_name, _, index_text = mode.partition(":")

    if threshold < 0:
        _fail(EXIT_FLAGS, "--threshold must be >= 0")
    if scale_id is None:
        scale_id = "blues" if mode_name in ("direct", "identical") else "spectral"
    if scale_id not in colors_mod.SCALE_IDS:
        _fail(EXIT_FLAGS, f"unknown color scale {scale_id!r} "
                          f"(choose from {', '.join(colors_mod.SCALE_IDS)})")
    scale = colors_mod.get_scale(scale_id if scale_id != "none" else "spectral")

    if mode_name in ("direct", "identical"):
        if not index_text:
            _fail(EXIT_FLAGS, f"--color {mode_name} needs a segment index, "
                              f"e.g. {mode_name}:0")
        try:
            selected = int(index_text)
        except ValueError:
            _fail(EXIT_FLAGS, f"--color {mode}: index must be an integer")
        if not 0 <= selected < n:
            _fail(EXIT_FLAGS, f"--color {mode}: index out of range "
                              f"(piece has {n} bars)")
        matrix = bundle_mod.uncondense(list(level.condensed_distances), n)
        if mode_name == "direct":
            assignment = colors_mod.map_direct(matrix, selected, scale)
        else:
            assignment = colors_mod.map_identical(matrix, selected, scale)
    elif mode_name == "mds":
        if index_text:
            _fail(EXIT_FLAGS, "--color mds takes no index")
        assignment = colors_mod.map_positions(level.mds_positions, scale)
    elif mode_name == "cluster":
        if index_text:
            _fail(EXIT_FLAGS, "--color cluster takes no index")
        clusters = colors_mod.cut(level.dendrogram, threshold)
        assignment = colors_mod.cluster_colors(level.dendrogram, clusters,
                                               scale, threshold=threshold)
    else:
        _fail(EXIT_FLAGS, f"unknown color mode {mode!r} (use mds, cluster, "
                          "direct:<i> or identical:<i>)")

    if scale_id == "none":
        # colors off: keep the mode but drop every overlay
        blank = (None,) * len(assignment.positions)
        assignment = colors_mod.ColorAssignment(
            assignment.mode, blank, blank,
            assignment.selected, assignment.threshold)
    return assignment


@click.group()
def main():
    """Structure and similarity analysis for symbolic guitar scores."""


@main.command()
@click.argument("input_path", metavar="INPUT")
@click.option("--track", type=int, default=0, show_default=True,
              help="Part index to analyze.")
@click.option("--out", "-o", "out_path", default=None,
              help="Output path [default: INPUT stem + .scorelens.json].")
def analyze(input_path: str, track: int, out_path: str | None):
    """Parse INPUT (MusicXML/.mxl) and write the analysis bundle."""
    data = _read_bytes(input_path)
    if track < 0:
        _fail(EXIT_FLAGS, "--track must be >= 0")
    built = _parse_and_build(data, track)
    if out_path is None:
        stem = Path(input_path).name.split(".")[0] or "score"
        out_path = str(Path(input_path).with_name(f"{stem}.scorelens.json"))
    _write_bytes(out_path, bundle_mod.serialize(built))
    click.echo(out_path)


@main.command(name="render")
@click.argument("input_path", metavar="INPUT")
@click.option("--track", type=int, default=None,
              help="Part index (raw score inputs only) [default: 0].")
@click.option("--view", default="compact", show_default=True,
              help="compact or compressed.")
@click.option("--color", "color_mode", default="mds", show_default=True,
              help="mds, cluster, direct:<i> or identical:<i>.")
@click.option("--scale", default=None,
              help="spectral, blues, viridis, cividis or none "
                   "[default: blues for direct/identical, else spectral].")
@click.option("--threshold", type=float, default=0.3, show_default=True,
              help="Cluster cut height for --color cluster.")
@click.option("--bars-per-row", type=int, default=8, show_default=True,
              help="Row width of the compact view.")
@click.option("--out", "-o", "out_path", default=None,
              help="Output path [default: INPUT stem + .svg].")
def render_cmd(input_path: str, track: int | None, view: str,
               color_mode: str, scale: str | None, threshold: float,
               bars_per_row: int, out_path: str | None):
    """Render INPUT (score or bundle) to a deterministic SVG."""
    if view not in ("compact", "compressed"):
        _fail(EXIT_FLAGS, f"unknown view {view!r} (use compact or compressed)")
    if bars_per_row < 1:
        _fail(EXIT_FLAGS, "--bars-per-row must be >= 1")
    if track is not None and track < 0:
        _fail(EXIT_FLAGS, "--track must be >= 0")
    data = _read_bytes(input_path)
    loaded = _load_any(data, track)
    analysis = loaded.analyses[0]
    track_data = loaded.analysis_track(analysis)
    assignment = _resolve_colors(analysis, color_mode, scale, threshold)
    config = render.RenderConfig(bars_per_row=bars_per_row)

    if view == "compact":
        svg = render.render_compact(track_data, assignment, config)
    else:
        svg = render.render_compressed(
            analysis.repetition_tree, track_data,
            list(analysis.canonical_ids), assignment, config)
    if out_path is None:
        stem = Path(input_path).name.split(".")[0] or "score"
        out_path = str(Path(input_path).with_name(f"{stem}.svg"))
    _write_bytes(out_path, svg.encode("utf-8"))
    click.echo(out_path)


@main.command()
@click.argument("input_path", metavar="INPUT")
@click.option("--track", type=int, default=None,
              help="Part index (raw score inputs only) [default: 0].")
@click.option("--port", type=int, default=8080, show_default=True,
              help="TCP port to listen on.")
def serve(input_path: str, track: int | None, port: int):
    """Analyze INPUT and serve the bundle plus the viewer over HTTP."""
    import uvicorn

    from .service import create_app

    if not 1 <= port <= 65535:
        _fail(EXIT_FLAGS, f"port {port} out of range")
    data = _read_bytes(input_path)
    loaded = _load_any(data, track)
    payload = bundle_mod.serialize(loaded)

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind(("127.0.0.1", port))
    except OSError:
        _fail(EXIT_PORT, f"port {port} is already in use")
    finally:
        probe.close()

    click.echo(f"serving on http://127.0.0.1:{port}", err=True)
    uvicorn.run(create_app(payload), host="127.0.0.1", port=port,
                log_level="warning")


if __name__ == "__main__":
    main()
