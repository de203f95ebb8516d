"""Distance matrices to colors: direct mapping, 1-D MDS, clustering.

Scales are piecewise-linear sRGB ramps over 17 embedded control points
(ColorBrewer / viridis / cividis tables). Positions live in [0, 1];
``scale_color`` turns a position into an (r, g, b) triple of 0-255 ints.

Clustering runs UPGMA with exact rational arithmetic so that equal
distances tie exactly and the documented tie-breaking rules are
reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .similarity import check_distance_matrix

Rgb = tuple[int, int, int]

_SPECTRAL = (
    (158, 1, 66), (193, 39, 74), (221, 74, 76), (240, 103, 68),
    (249, 142, 82), (253, 181, 103), (254, 212, 129), (254, 236, 159),
    (255, 255, 190), (239, 249, 166), (214, 238, 155), (177, 223, 163),
    (134, 207, 165), (94, 185, 169), (61, 149, 184), (68, 113, 178),
    (94, 79, 162),
)
_BLUES = (
    (247, 251, 255), (234, 243, 251), (222, 235, 247), (210, 227, 243),
    (198, 219, 239), (178, 210, 232), (157, 202, 225), (132, 188, 219),
    (106, 174, 214), (86, 160, 206), (65, 145, 198), (49, 129, 189),
    (32, 112, 180), (20, 96, 168), (8, 80, 155), (8, 64, 130),
    (8, 48, 107),
)
_VIRIDIS = (
    (68, 1, 84), (72, 24, 106), (71, 45, 123), (66, 64, 134),
    (59, 82, 139), (51, 99, 141), (44, 114, 142), (38, 130, 142),
    (33, 145, 140), (31, 160, 136), (40, 174, 128), (63, 188, 115),
    (94, 201, 98), (132, 212, 75), (173, 220, 48), (216, 226, 25),
    (253, 231, 37),
)
_CIVIDIS = (
    (0, 34, 78), (0, 46, 106), (26, 56, 111), (50, 67, 109),
    (67, 78, 108), (83, 90, 109), (97, 101, 111), (111, 112, 115),
    (125, 124, 120), (140, 136, 120), (155, 148, 118), (171, 160, 114),
    (188, 174, 108), (205, 187, 99), (222, 201, 88), (240, 216, 70),
    (254, 232, 56),
)


@dataclass(frozen=True)
class ColorScale:
    id: str
    control_points: tuple[tuple[float, Rgb], ...]


def _make_scale(scale_id: str, colors: tuple[Rgb, ...]) -> ColorScale:
    points = tuple((i / (len(colors) - 1), c) for i, c in enumerate(colors))
    return ColorScale(scale_id, points)


SCALES: dict[str, ColorScale] = {
    "spectral": _make_scale("spectral", _SPECTRAL),
    "blues": _make_scale("blues", _BLUES),
    "viridis": _make_scale("viridis", _VIRIDIS),
    "cividis": _make_scale("cividis", _CIVIDIS),
}

#: Valid scale ids accepted by consumers; "none" turns coloring off.
SCALE_IDS = ("spectral", "blues", "viridis", "cividis", "none")


def get_scale(scale_id: str) -> ColorScale | None:
    """Scale by id; ``None`` for the color-off pseudo scale."""
    if scale_id == "none":
        return None
    try:
        return SCALES[scale_id]
    except KeyError:
        raise KeyError(f"unknown color scale {scale_id!r}") from None


def scale_color(scale: ColorScale, t: float) -> Rgb:
    """Piecewise-linear interpolation between bracketing control points.

    ``t`` is clamped to [0, 1]; endpoints return the first/last control
    point exactly. Channels round half-up to 0-255 ints.
    """
    t = 0.0 if t < 0.0 else 1.0 if t > 1.0 else t
    points = scale.control_points
    lo = 0
    for i in range(len(points) - 1):
        if points[i][0] <= t:
            lo = i
        else:
            break
    t0, c0 = points[lo]
    if lo == len(points) - 1 or t == t0:
        return c0
    t1, c1 = points[lo + 1]
    u = (t - t0) / (t1 - t0)
    return (
        int(c0[0] + u * (c1[0] - c0[0]) + 0.5),
        int(c0[1] + u * (c1[1] - c0[1]) + 0.5),
        int(c0[2] + u * (c1[2] - c0[2]) + 0.5),
    )


@dataclass(frozen=True)
class ColorAssignment:
    """Per-segment scale positions and resolved colors.

    ``positions[i]`` is ``None`` for unassigned segments (identical mode
    leaves non-matches uncolored); where present, ``colors[i]`` is the
    scale color at that position.
    """

    mode: str  # "direct" | "identical" | "mds" | "cluster"
    positions: tuple[float | None, ...]
    colors: tuple[Rgb | None, ...]
    selected: int | None = None
    threshold: float | None = None


def _assignment(mode: str, positions: Sequence[float | None], scale: ColorScale,
                selected: int | None = None,
                threshold: float | None = None) -> ColorAssignment:
    colors = tuple(None if p is None else scale_color(scale, p) for p in positions)
    return ColorAssignment(mode, tuple(positions), colors, selected, threshold)


def map_direct(matrix: np.ndarray, selected: int,
               scale: ColorScale | None = None) -> ColorAssignment:
    """Color every segment by its similarity (1 - distance) to the selected one.

    Single-hue ramps read best for one-vs-all comparison, so the default
    scale is blues.
    """
    matrix = check_distance_matrix(matrix)
    if not 0 <= selected < len(matrix):
        raise IndexError(f"selected segment {selected} out of range")
    scale = scale if scale is not None else SCALES["blues"]
    positions = [1.0 - d for d in matrix[selected]]
    return _assignment("direct", positions, scale, selected=selected)


def map_identical(matrix: np.ndarray, selected: int,
                  scale: ColorScale | None = None) -> ColorAssignment:
    """Highlight only segments at distance exactly 0 from the selected one."""
    matrix = check_distance_matrix(matrix)
    if not 0 <= selected < len(matrix):
        raise IndexError(f"selected segment {selected} out of range")
    scale = scale if scale is not None else SCALES["blues"]
    positions = [1.0 if d == 0.0 else None for d in matrix[selected]]
    return _assignment("identical", positions, scale, selected=selected)


def map_positions(positions: Sequence[float], scale: ColorScale,
                  mode: str = "mds") -> ColorAssignment:
    """Wrap precomputed [0, 1] positions (e.g. an MDS embedding) as colors."""
    return _assignment(mode, list(positions), scale)


def mds_1d(matrix: np.ndarray) -> list[float]:
    """Classical (Torgerson) MDS onto one dimension, min-max scaled to [0, 1].

    Double-centers the squared distances, takes the principal eigenvector
    scaled by the square root of its eigenvalue, then normalizes. The sign
    is fixed deterministically: flipped so the first position is <= the
    last. Degenerate inputs (one segment, all-zero distances, vanishing
    leading eigenvalue) map everything to 0.5.
    """
    matrix = check_distance_matrix(matrix)
    n = len(matrix)
    if n == 0:
        return []
    if n == 1:
        return [0.5]
    d2 = matrix ** 2
    row_means = d2.mean(axis=1)
    grand_mean = d2.mean()
    b = -0.5 * (d2 - row_means[:, None] - row_means[None, :] + grand_mean)
    eigenvalues, eigenvectors = np.linalg.eigh(b)
    leading = eigenvalues[-1]
    if leading <= 1e-12:
        return [0.5] * n
    embedding = eigenvectors[:, -1] * np.sqrt(leading)
    lo, hi = embedding.min(), embedding.max()
    if hi - lo <= 1e-12:
        return [0.5] * n
    positions = (embedding - lo) / (hi - lo)
    if positions[0] > positions[-1]:
        positions = 1.0 - positions
    return [float(p) for p in positions]


@dataclass(frozen=True)
class Merge:
    """One agglomeration step; ids < n_leaves are leaves, merged clusters
    get ids n_leaves, n_leaves + 1, ... in merge order."""

    left_id: int
    right_id: int
    height: float
    new_id: int


@dataclass(frozen=True)
class Dendrogram:
    n_leaves: int
    merges: tuple[Merge, ...]
    leaf_order: tuple[int, ...]

    def root_id(self) -> int:
        if self.n_leaves == 0:
            raise ValueError("empty dendrogram has no root")
        return self.merges[-1].new_id if self.merges else 0


def _pair_key(rep_a: int, rep_b: int) -> tuple[int, int]:
    return (rep_a, rep_b) if rep_a < rep_b else (rep_b, rep_a)


def cluster(matrix: np.ndarray) -> Dendrogram:
    """Average-linkage (UPGMA) agglomeration over a distance matrix.

    Cluster distances follow the Lance-Williams recurrence evaluated in
    exact rational arithmetic. Among equal-distance pairs the one with the
    lexicographically smallest pair of cluster representatives (each
    cluster represented by its minimum original index) merges first; the
    child containing the smallest original index becomes the left child.
    """
    matrix = check_distance_matrix(matrix)
    n = len(matrix)
    if n == 0:
        return Dendrogram(0, (), ())
    size = {i: 1 for i in range(n)}
    rep = {i: i for i in range(n)}
    children: dict[int, tuple[int, int]] = {}
    dist: dict[tuple[int, int], Fraction] = {}
    for i in range(n):
        for j in range(i + 1, n):
            dist[(i, j)] = Fraction(float(matrix[i, j]))
    active = set(range(n))

    def pair_dist(a: int, b: int) -> Fraction:
        return dist[(a, b) if a < b else (b, a)]

    # nearest[c] = (distance, representative pair key, partner id)
    nearest: dict[int, tuple[Fraction, tuple[int, int], int]] = {}

    def scan_nearest(c: int) -> None:
        best = None
        for other in active:
            if other == c:
                continue
            cand = (pair_dist(c, other), _pair_key(rep[c], rep[other]), other)
            if best is None or cand[:2] < best[:2]:
                best = cand
        if best is not None:
            nearest[c] = best

    for c in active:
        scan_nearest(c)

    merges: list[Merge] = []
    next_id = n
    while len(active) > 1:
        a = min(active, key=lambda c: nearest[c][:2])
        d, _, b = nearest[a]
        new_id = next_id
        next_id += 1
        left, right = (a, b) if rep[a] < rep[b] else (b, a)
        merges.append(Merge(left, right, float(d), new_id))

        size_new = size[a] + size[b]
        rep_new = min(rep[a], rep[b])
        active.discard(a)
        active.discard(b)
        nearest.pop(a, None)
        nearest.pop(b, None)
        for other in active:
            merged = (size[a] * pair_dist(a, other) +
                      size[b] * pair_dist(b, other)) / size_new
            dist[(min(other, new_id), max(other, new_id))] = merged
        size[new_id] = size_new
        rep[new_id] = rep_new
        children[new_id] = (left, right)
        active.add(new_id)
        for other in list(active):
            if other == new_id:
                continue
            if nearest[other][2] in (a, b):
                scan_nearest(other)
            else:
                cand = (pair_dist(other, new_id),
                        _pair_key(rep[other], rep_new), new_id)
                if cand[:2] < nearest[other][:2]:
                    nearest[other] = cand
        scan_nearest(new_id)

    leaf_order: list[int] = []
    stack = [n + len(merges) - 1 if merges else 0]
    while stack:
        node = stack.pop()
        if node < n:
            leaf_order.append(node)
        else:
            left, right = children[node]
            stack.append(right)
            stack.append(left)
    return Dendrogram(n, tuple(merges), tuple(leaf_order))


def cut(dendrogram: Dendrogram, threshold: float) -> list[list[int]]:
    """Maximal subtrees merged at height <= threshold, one cluster each.

    Clusters are ordered by their first leaf-order position; members are
    listed in leaf order.
    """
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    n = dendrogram.n_leaves
    if n == 0:
        return []
    by_id = {m.new_id: m for m in dendrogram.merges}
    clusters: list[list[int]] = []

    def leaves_of(node: int) -> list[int]:
        out: list[int] = []
        stack = [node]
        while stack:
            cur = stack.pop()
            if cur < n:
                out.append(cur)
            else:
                stack.append(by_id[cur].right_id)
                stack.append(by_id[cur].left_id)
        return out

    walk = [dendrogram.root_id()]
    while walk:
        node = walk.pop()
        if node < n or by_id[node].height <= threshold:
            clusters.append(leaves_of(node))
        else:
            walk.append(by_id[node].right_id)
            walk.append(by_id[node].left_id)
    return clusters


def cluster_colors(dendrogram: Dendrogram, clusters: list[list[int]],
                   scale: ColorScale, threshold: float | None = None) -> ColorAssignment:
    """One color per cluster, placed at the midpoint of its leaf-order span.

    Each cluster from :func:`cut` occupies a contiguous run of leaf-order
    positions; its position t is the run midpoint divided by (n - 1), so
    nearby clusters receive nearby colors. A single-leaf dendrogram maps
    to t = 0.5.
    """
    n = dendrogram.n_leaves
    position_of = {leaf: i for i, leaf in enumerate(dendrogram.leaf_order)}
    positions: list[float | None] = [None] * n
    for members in clusters:
        spots = [position_of[m] for m in members]
        if n > 1:
            t = ((min(spots) + max(spots)) / 2) / (n - 1)
        else:
            t = 0.5
        for m in members:
            positions[m] = t
    return _assignment("cluster", positions, scale, threshold=threshold)


def note_pitch_color(pitch: int, piece_range: tuple[int, int]) -> Rgb:
    """Viridis over the piece's pitch range; a one-pitch range maps to 0.5."""
    lo, hi = piece_range
    if not lo <= pitch <= hi:
        raise ValueError(f"pitch {pitch} outside piece range [{lo}, {hi}]")
    t = 0.5 if hi == lo else (pitch - lo) / (hi - lo)
    return scale_color(SCALES["viridis"], t)


def _linearize(channel: int) -> float:
    c = channel / 255.0
    return c / 12.92 if c <= 0.04045 else ((c + 0.055) / 1.055) ** 2.4


def relative_luminance(color: Rgb) -> float:
    r, g, b = color
    return 0.2126 * _linearize(r) + 0.7152 * _linearize(g) + 0.0722 * _linearize(b)


def contrast_text_color(background: Rgb) -> Rgb:
    """Black on light backgrounds (luminance >= 0.45), white otherwise."""
    return (0, 0, 0) if relative_luminance(background) >= 0.45 else (255, 255, 255)
