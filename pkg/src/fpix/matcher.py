"""Euclidean comparison of index vectors and the accept/reject decision."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import IndexMismatchError
from .indexing import IndexVector


def _check_comparable(x: IndexVector, y: IndexVector):
    if x.mode != y.mode:
        raise IndexMismatchError(f"cannot compare {x.mode.name} index with {y.mode.name} index")
    if x.dim != y.dim:
        raise IndexMismatchError(f"cannot compare indexes of dimension {x.dim} and {y.dim}")


def euclidean(x: IndexVector, y: IndexVector) -> float:
    _check_comparable(x, y)
    # hypot scales internally, so tiny or huge differences neither underflow nor overflow
    return math.hypot(*(x.components - y.components).tolist())


@dataclass(frozen=True)
class SimilarityMatrix:
    labels: tuple
    d: np.ndarray

    @property
    def size(self) -> int:
        return len(self.labels)

    def off_diagonal(self) -> np.ndarray:
        return self.d[~np.eye(self.size, dtype=bool)]


def similarity_matrix(vs: Sequence[Tuple[str, IndexVector]]) -> SimilarityMatrix:
    """Pairwise distance table; each unordered pair is computed once."""
    vs = list(vs)
    if not vs:
        raise ValueError("similarity matrix needs at least one vector")
    first = vs[0][1]
    for _, v in vs[1:]:
        _check_comparable(first, v)
    n = len(vs)
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = euclidean(vs[i][1], vs[j][1])
    d.setflags(write=False)
    return SimilarityMatrix(tuple(label for label, _ in vs), d)


@dataclass(frozen=True)
class MatchDecision:
    best_id: str
    distance: float
    accepted: bool
    threshold: float


def decide(query: IndexVector, records: Sequence[Tuple[str, IndexVector]], threshold: float) -> MatchDecision:
    """Nearest enrolled record; ties go to the bytewise-smallest label."""
    if not records:
        raise ValueError("no enrolled records to compare against")
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    best = min(
        ((euclidean(query, v), label.encode("utf-8"), label) for label, v in records),
        key=lambda item: item[:2],
    )
    distance, _, label = best
    return MatchDecision(label, distance, distance <= threshold, float(threshold))


def suggest_threshold(m: SimilarityMatrix) -> float:
    """Half the smallest distance between two distinct enrolled identities."""
    if m.size < 2:
        raise ValueError("threshold suggestion needs at least two identities")
    return 0.5 * float(m.off_diagonal().min())
