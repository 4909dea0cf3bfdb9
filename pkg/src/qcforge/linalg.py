"""Small exact linear algebra over golden-field scalars.

Vectors are tuples of GoldenNum, matrices are tuples of row tuples.
Pure functions only; floats appear solely in the explicit conversion
helpers.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Tuple

from .golden import GoldenLike, GoldenNum, ONE, ZERO, as_golden

Vec = Tuple[GoldenNum, ...]
Mat = Tuple[Vec, ...]


def vec(*comps: GoldenLike) -> Vec:
    out = []
    for c in comps:
        g = as_golden(c)
        if g is None:
            raise TypeError(f"not a golden scalar: {c!r}")
        out.append(g)
    return tuple(out)


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vneg(u: Vec) -> Vec:
    return tuple(-a for a in u)


def vscale(s: GoldenLike, u: Vec) -> Vec:
    g = as_golden(s)
    return tuple(g * a for a in u)


def dot(u: Vec, v: Vec) -> GoldenNum:
    acc = ZERO
    for a, b in zip(u, v):
        acc = acc + a * b
    return acc


def norm2(u: Vec) -> GoldenNum:
    return dot(u, u)


def cross(u: Vec, v: Vec) -> Vec:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def mat(*rows: Sequence[GoldenLike]) -> Mat:
    return tuple(vec(*row) for row in rows)


def identity(n: int) -> Mat:
    return tuple(
        tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)
    )


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m))


def mat_vec(m: Mat, v: Vec) -> Vec:
    return tuple(dot(row, v) for row in m)


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def mat_scale(s: GoldenLike, m: Mat) -> Mat:
    return tuple(vscale(s, row) for row in m)


def mat_eq(a: Mat, b: Mat) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def is_orthogonal(m: Mat) -> bool:
    return mat_eq(mat_mul(m, transpose(m)), identity(len(m)))


def det3(m: Mat) -> GoldenNum:
    return dot(m[0], cross(m[1], m[2]))


def to_floats(u: Vec) -> Tuple[float, ...]:
    return tuple(float(c) for c in u)


def vkey(u: Vec) -> Tuple[Tuple[int, int, int, int], ...]:
    """Hash/dict key with the same equality semantics as the exact tuple."""
    return tuple(
        (c.a.numerator, c.a.denominator, c.b.numerator, c.b.denominator)
        for c in u
    )


def centroid(points: Iterable[Vec]) -> Vec:
    pts = list(points)
    n = len(pts)
    acc = pts[0]
    for p in pts[1:]:
        acc = vadd(acc, p)
    return vscale(Fraction(1, n), acc)
