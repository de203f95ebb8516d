"""Segment similarity: pitch sequences, edit distance, Jaccard, matrices.

Distance matrices are plain ``numpy`` float arrays normalized to [0, 1]
with a zero diagonal; :func:`check_distance_matrix` enforces the shape
invariants at module boundaries. Similarity = 1 - distance throughout.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .model import Track
from .segmentation import Harmony, Segment


class NonSquareMatrix(ValueError):
    pass


class AsymmetricMatrix(ValueError):
    pass


def check_distance_matrix(matrix: np.ndarray) -> np.ndarray:
    """Validate an n x n distance matrix, returning it unchanged."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NonSquareMatrix(f"expected a square matrix, got shape {matrix.shape}")
    if not np.array_equal(matrix, matrix.T):
        raise AsymmetricMatrix("distance matrix is not symmetric")
    if matrix.size:
        if np.any(np.diagonal(matrix) != 0.0):
            raise ValueError("distance matrix has a non-zero diagonal")
        if matrix.min() < 0.0 or matrix.max() > 1.0:
            raise ValueError("distance matrix entries outside [0, 1]")
    return matrix


def pitch_sequence(segment: Segment, track: Track) -> tuple[int, ...]:
    """Pitches of a segment's onset notes, sorted by (start_tick, pitch).

    Tie continuations are excluded: the sequence holds played pitch
    events only. An empty segment yields an empty sequence.
    """
    notes = []
    for bar_idx, note_idx in segment.note_refs:
        note = track.bars[bar_idx].notes[note_idx]
        if not note.tie_continuation:
            notes.append((note.start_tick, note.pitch))
    notes.sort()
    return tuple(pitch for _, pitch in notes)


def levenshtein(a: Sequence[int], b: Sequence[int]) -> int:
    """Unit-cost edit distance between two integer sequences."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        current = [i]
        for j, y in enumerate(b, start=1):
            cost = 0 if x == y else 1
            current.append(min(previous[j] + 1,
                               current[j - 1] + 1,
                               previous[j - 1] + cost))
        previous = current
    return previous[-1]


def normalized_distance(a: Sequence[int], b: Sequence[int]) -> float:
    """levenshtein(a, b) / max(|a|, |b|); two empty sequences are at 0."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 0.0
    return levenshtein(a, b) / longest


def distance_matrix(segments: Sequence[Segment], track: Track) -> np.ndarray:
    """Pairwise normalized edit distances between segment pitch sequences."""
    sequences = [pitch_sequence(seg, track) for seg in segments]
    n = len(sequences)
    values = np.zeros((n, n), dtype=float)
    for i in range(n):
        for j in range(i + 1, n):
            d = normalized_distance(sequences[i], sequences[j])
            values[i, j] = d
            values[j, i] = d
    return values


def _pitch_classes(harmony: Harmony | Iterable[int]) -> frozenset[int]:
    if isinstance(harmony, Harmony):
        return harmony.pitch_class_set
    return frozenset(harmony)


def jaccard_similarity(a: Harmony | Iterable[int], b: Harmony | Iterable[int]) -> float:
    """|A intersect B| / |A union B| over pitch-class sets; 1.0 if both empty."""
    sa, sb = _pitch_classes(a), _pitch_classes(b)
    union = len(sa | sb)
    if union == 0:
        return 1.0
    return len(sa & sb) / union


def harmony_distance_matrix(harmonies: Sequence[Harmony]) -> np.ndarray:
    """Pairwise 1 - Jaccard similarity between harmonies."""
    n = len(harmonies)
    values = np.zeros((n, n), dtype=float)
    sets = [_pitch_classes(h) for h in harmonies]
    for i in range(n):
        for j in range(i + 1, n):
            d = 1.0 - jaccard_similarity(sets[i], sets[j])
            values[i, j] = d
            values[j, i] = d
    return values
