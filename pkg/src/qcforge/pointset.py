"""Deduplicated, canonically ordered point collections with exact and float views.

Canonical order is numeric-lexicographic on the exact coordinates. Sorting
uses the correctly rounded float key first and falls back to exact
comparison only inside equal-float runs, so big sets stay cheap while the
order remains a property of the exact values.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np

from .golden import GoldenNum
from .linalg import Mat, Vec, mat_vec, vadd, vscale


def canonical_sort(points: Iterable[Vec]) -> list:
    pts = list(points)
    pts.sort(key=lambda p: tuple(float(c) for c in p))
    # exact repair pass over runs whose float keys collide
    i = 0
    while i < len(pts) - 1:
        j = i + 1
        fi = tuple(float(c) for c in pts[i])
        while j < len(pts) and tuple(float(c) for c in pts[j]) == fi:
            j += 1
        if j - i > 1:
            pts[i:j] = sorted(pts[i:j])
        i = j
    return pts


class PointSet:
    """Immutable exact point collection, deduplicated and canonically ordered."""

    __slots__ = ("dim", "points", "_members")

    def __init__(self, points: Iterable[Vec], dim: int | None = None):
        uniq = set(tuple(p) for p in points)
        if dim is None:
            if not uniq:
                raise ValueError("cannot infer dimension of an empty point set")
            dim = len(next(iter(uniq)))
        for p in uniq:
            if len(p) != dim:
                raise ValueError(f"point of dimension {len(p)}, expected {dim}")
        self.dim = dim
        self.points = tuple(canonical_sort(uniq))
        self._members = frozenset(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Vec]:
        return iter(self.points)

    def __contains__(self, p: Sequence[GoldenNum]) -> bool:
        return tuple(p) in self._members

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self._members == other._members

    def __hash__(self) -> int:
        return hash(self._members)

    def members(self) -> frozenset:
        return self._members

    def floats(self) -> np.ndarray:
        """(n, dim) float64 array, each coordinate correctly rounded."""
        return np.array(
            [[float(c) for c in p] for p in self.points], dtype=np.float64
        ).reshape(len(self.points), self.dim)

    # -- set algebra (exact) ----------------------------------------------

    def union(self, other: "PointSet") -> "PointSet":
        return self._rebuild(self._members | other._members)

    def intersection(self, other: "PointSet") -> "PointSet":
        return self._rebuild(self._members & other._members)

    def difference(self, other: "PointSet") -> "PointSet":
        return self._rebuild(self._members - other._members)

    def issubset(self, other: "PointSet") -> bool:
        return self._members <= other._members

    # -- geometry -----------------------------------------------------------

    def _rebuild(self, points: Iterable[Vec]) -> "PointSet":
        if type(self) is PointSet:
            return PointSet(points, dim=self.dim)
        return type(self)(points)

    def translated(self, v: Vec) -> "PointSet":
        return self._rebuild(vadd(p, v) for p in self.points)

    def scaled(self, s) -> "PointSet":
        return self._rebuild(vscale(s, p) for p in self.points)

    def transformed(self, m: Mat) -> "PointSet":
        return self._rebuild(mat_vec(m, p) for p in self.points)


class PointSet3(PointSet):
    def __init__(self, points: Iterable[Vec]):
        super().__init__(points, dim=3)


class PointSet4(PointSet):
    def __init__(self, points: Iterable[Vec]):
        super().__init__(points, dim=4)
