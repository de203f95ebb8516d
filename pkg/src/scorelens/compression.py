"""Greedy compression of bar sequences into repetition trees.

Bars are first replaced by canonical ids (the first bar with identical
content, judged by distance exactly 0). The id sequence is then folded
recursively: find the best immediate repetition (a block of length L
repeated k >= 2 times back to back), wrap it in a Run with the folded
prefix and suffix, recurse into each part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .similarity import check_distance_matrix


def canonical_ids(matrix: np.ndarray) -> list[int]:
    """Map each segment to the smallest prior index at distance exactly 0.

    A segment with no earlier duplicate maps to itself, so ids are always
    indices of first occurrences.
    """
    matrix = check_distance_matrix(matrix)
    ids: list[int] = []
    for i in range(len(matrix)):
        canon = i
        for j in range(i):
            if matrix[i, j] == 0.0:
                canon = j
                break
        ids.append(canon)
    return ids


@dataclass(frozen=True)
class Leaf:
    """A single segment, by canonical id."""

    segment_id: int


@dataclass(frozen=True)
class Run:
    """``count`` back-to-back repetitions of ``body``, with whatever
    precedes/follows the repeated region folded into prefix/suffix."""

    count: int
    body: "Node"
    prefix: "Node | None" = None
    suffix: "Node | None" = None


@dataclass(frozen=True)
class Seq:
    """Flat concatenation; used when a stretch contains no repetition."""

    parts: tuple["Node", ...]


Node = Leaf | Run | Seq


def find_best_run(ids: list[int]) -> tuple[int, int, int] | None:
    """Best immediate repetition in ``ids`` as (position, length, count).

    Candidates are maximal runs: ids[p : p+L] == ids[p+L : p+2L] == ...
    k times with k >= 2, where k cannot be extended by another full block.
    The winner maximizes covered length k*L; ties prefer the earliest
    position, then the longer block, breaking remaining ties toward
    higher count. Returns None when nothing repeats.
    """
    n = len(ids)
    best: tuple[int, int, int, int] | None = None  # (cover, -p, L, k)
    for length in range(1, n // 2 + 1):
        pos = 0
        while pos + 2 * length <= n:
            block = ids[pos:pos + length]
            count = 1
            while (pos + (count + 1) * length <= n and
                   ids[pos + count * length:pos + (count + 1) * length] == block):
                count += 1
            if count >= 2:
                key = (count * length, -pos, length, count)
                if best is None or key > best:
                    best = key
                # a same-length run overlapping this one by >= length
                # would have merged into it, so skip past the region
                pos += (count - 1) * length + 1
            else:
                pos += 1
    if best is None:
        return None
    cover, neg_pos, length, count = best
    return (-neg_pos, length, count)


def _compress(ids: list[int]) -> Node:
    if len(ids) == 1:
        return Leaf(ids[0])
    run = find_best_run(ids)
    if run is None:
        return Seq(tuple(Leaf(i) for i in ids))
    pos, length, count = run
    tail = pos + count * length
    return Run(
        count=count,
        body=_compress(ids[pos:pos + length]),
        prefix=_compress(ids[:pos]) if pos > 0 else None,
        suffix=_compress(ids[tail:]) if tail < len(ids) else None,
    )


def build_repetition_tree(ids: list[int]) -> Node:
    """Fold a canonical-id sequence into a Leaf/Run/Seq tree.

    ``expand`` is the exact inverse: expand(build_repetition_tree(ids))
    == ids for every non-empty input.
    """
    if not ids:
        raise ValueError("cannot compress an empty sequence")
    return _compress(list(ids))


def expand(node: Node) -> list[int]:
    """Unfold a repetition tree back into its canonical-id sequence."""
    if isinstance(node, Leaf):
        return [node.segment_id]
    if isinstance(node, Run):
        out = expand(node.prefix) if node.prefix is not None else []
        out.extend(expand(node.body) * node.count)
        if node.suffix is not None:
            out.extend(expand(node.suffix))
        return out
    return [i for part in node.parts for i in expand(part)]


def leaf_count(node: Node) -> int:
    """Number of Leaf nodes (bar boxes a renderer will draw)."""
    if isinstance(node, Leaf):
        return 1
    if isinstance(node, Run):
        total = leaf_count(node.body)
        if node.prefix is not None:
            total += leaf_count(node.prefix)
        if node.suffix is not None:
            total += leaf_count(node.suffix)
        return total
    return sum(leaf_count(p) for p in node.parts)


def bracket_depth(node: Node) -> int:
    """Deepest stack of nested Run brackets; a run-free tree has depth 0.

    Brackets stack only through run bodies: a run in a prefix or suffix
    draws beside, not inside, the enclosing bracket.
    """
    if isinstance(node, Leaf):
        return 0
    if isinstance(node, Run):
        depth = 1 + bracket_depth(node.body)
        if node.prefix is not None:
            depth = max(depth, bracket_depth(node.prefix))
        if node.suffix is not None:
            depth = max(depth, bracket_depth(node.suffix))
        return depth
    return max((bracket_depth(p) for p in node.parts), default=0)
