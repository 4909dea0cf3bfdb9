"""E8 roots, the icosian ring, and a 4D cut-and-project quasicrystal.

The bridge between the 8D root lattice and 4D golden-field geometry is the
icosian ring: quaternions whose coordinates live in (1/2)Z[t], spanned over
Z by the 120 unit icosians.  Writing a quaternionic norm as A + B*sqrt(5),
the rational number A + B ("Euclidean norm") turns the ring into a copy of
the E8 lattice; unit icosians and their sigma-scalings land on the 240
roots.  Points of the 4D quasicrystal are icosians selected by an exact
window test on the Galois-conjugate quaternion, which is the perpendicular
space image of the corresponding lattice point.

Frozen tables below (``_BASIS_V``, ``_IMAGE_X2``) pin one concrete ring
basis made of Euclidean-norm-1 icosians together with Gram-matched images
among the standard roots; the resulting linear map is validated by the
240 <-> 240 bijection in the test suite.  Any two such maps differ by a
lattice automorphism, so every quantity exposed here is independent of the
choice.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .golden import (
    GoldenNum,
    GoldenLike,
    ONE,
    SIGMA,
    TAU,
    ZERO,
    as_golden,
    euclidean_part,
)

__all__ = [
    "EmptyWindow",
    "Icosian",
    "ProjectionSpec",
    "QC4",
    "Window",
    "ball_window",
    "voronoi_approx_window",
    "e8_roots",
    "unit_icosians",
    "norm_one_icosians",
    "icosian_ring_contains",
    "icosian_to_e8",
    "e8_to_icosian",
    "pi_matrix",
    "projection_spec",
    "elser_sloane_points",
    "cross_section",
    "compound_qc",
]

_HALF = Fraction(1, 2)
_HALFG = GoldenNum(_HALF, 0)


class EmptyWindow(ValueError):
    """Raised when the acceptance window has nonpositive radius."""


# --------------------------------------------------------------------------
# icosians


class Icosian:
    """Quaternion with golden-field coordinates.

    Supports exact quaternion arithmetic, the two conjugations that matter
    here (quaternionic and Galois), and the two norms (quaternionic, a
    golden number; Euclidean, a rational).
    """

    __slots__ = ("q",)

    def __init__(self, a: GoldenLike = 0, b: GoldenLike = 0,
                 c: GoldenLike = 0, d: GoldenLike = 0) -> None:
        coords = []
        for v in (a, b, c, d):
            g = as_golden(v)
            if g is None:
                raise TypeError("Icosian coordinates must be golden numbers")
            coords.append(g)
        object.__setattr__(self, "q", tuple(coords))

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("Icosian is immutable")

    # -- structure ---------------------------------------------------------

    def __iter__(self):
        return iter(self.q)

    def __getitem__(self, i: int) -> GoldenNum:
        return self.q[i]

    def __add__(self, other: "Icosian") -> "Icosian":
        return Icosian(*(x + y for x, y in zip(self.q, other.q)))

    def __sub__(self, other: "Icosian") -> "Icosian":
        return Icosian(*(x - y for x, y in zip(self.q, other.q)))

    def __neg__(self) -> "Icosian":
        return Icosian(*(-x for x in self.q))

    def __mul__(self, other):
        """Quaternion product, or coordinatewise scaling by a golden number."""
        if isinstance(other, Icosian):
            a1, b1, c1, d1 = self.q
            a2, b2, c2, d2 = other.q
            return Icosian(
                a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
            )
        g = as_golden(other)
        if g is None:
            return NotImplemented
        return Icosian(*(x * g for x in self.q))

    def __rmul__(self, other):
        g = as_golden(other)
        if g is None:
            return NotImplemented
        return Icosian(*(g * x for x in self.q))

    def conjugate(self) -> "Icosian":
        """Quaternionic conjugate (negated imaginary part)."""
        a, b, c, d = self.q
        return Icosian(a, -b, -c, -d)

    def galois(self) -> "Icosian":
        """Field conjugate t -> 1 - t applied to every coordinate."""
        return Icosian(*(x.conjugate() for x in self.q))

    def qnorm(self) -> GoldenNum:
        """Quaternionic norm: the sum of coordinate squares."""
        a, b, c, d = self.q
        return a * a + b * b + c * c + d * d

    def euclidean_norm(self) -> Fraction:
        """A + B for qnorm = A + B*sqrt(5); the root-lattice quadratic form."""
        return euclidean_part(self.qnorm())

    # -- identity ----------------------------------------------------------

    def key(self) -> tuple:
        return tuple((x.a, x.b) for x in self.q)

    def float_tuple(self) -> Tuple[float, float, float, float]:
        return tuple(float(x) for x in self.q)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Icosian) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return "Icosian(%s)" % ", ".join(repr(x) for x in self.q)


def _perm_parity(p: Sequence[int]) -> int:
    par = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            par = -par
    return par


_units_cache: Optional[Tuple[Icosian, ...]] = None
_norm_one_cache: Optional[Tuple[Icosian, ...]] = None


def unit_icosians() -> Tuple[Icosian, ...]:
    """The 120 icosians of quaternionic norm 1, a group under multiplication.

    Three coordinate shapes: signed unit vectors (8), all-halves with free
    signs (16), and halved even permutations of (0, 1, sigma, tau) with free
    signs on the nonzero slots (96).
    """
    global _units_cache
    if _units_cache is not None:
        return _units_cache
    seen = {}
    for i in range(4):
        for s in (1, -1):
            co = [ZERO] * 4
            co[i] = GoldenNum(s)
            q = Icosian(*co)
            seen[q.key()] = q
    for signs in itertools.product((1, -1), repeat=4):
        q = Icosian(*(GoldenNum(Fraction(s, 2)) for s in signs))
        seen[q.key()] = q
    base = (ZERO, ONE, SIGMA, TAU)
    for p in itertools.permutations(range(4)):
        if _perm_parity(p) != 1:
            continue
        for signs in itertools.product((1, -1), repeat=4):
            co = []
            ok = True
            for i in range(4):
                v = base[p[i]]
                if v == ZERO and signs[i] == -1:
                    ok = False
                    break
                co.append(_HALFG * v * signs[i])
            if ok:
                q = Icosian(*co)
                seen[q.key()] = q
    _units_cache = tuple(sorted(seen.values(), key=Icosian.float_tuple))
    return _units_cache


def norm_one_icosians() -> Tuple[Icosian, ...]:
    """All 240 icosians of Euclidean norm 1: the units and their sigma-scalings."""
    global _norm_one_cache
    if _norm_one_cache is not None:
        return _norm_one_cache
    seen = {}
    for u in unit_icosians():
        seen[u.key()] = u
        s = u * SIGMA
        seen[s.key()] = s
    _norm_one_cache = tuple(sorted(seen.values(), key=Icosian.float_tuple))
    return _norm_one_cache


# --------------------------------------------------------------------------
# E8 roots and the ring embedding


def e8_roots() -> List[Tuple[Fraction, ...]]:
    """The 240 minimal vectors of E8 in even-coordinate form.

    112 integer roots (two entries +-1) and 128 half-integer roots (all
    entries +-1/2, even number of minus signs), every one of squared norm 2.
    """
    roots = []
    for i in range(8):
        for j in range(i + 1, 8):
            for si in (1, -1):
                for sj in (1, -1):
                    r = [Fraction(0)] * 8
                    r[i] = Fraction(si)
                    r[j] = Fraction(sj)
                    roots.append(tuple(r))
    for signs in itertools.product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            roots.append(tuple(Fraction(s, 2) for s in signs))
    roots.sort()
    return roots


# Ring basis: eight Euclidean-norm-1 icosians whose doubled golden
# coordinates (2a1, 2b1, ..., 2a4, 2b4) are the rows of _BASIS_V, together
# with Gram-matched standard roots (doubled) in _IMAGE_X2.  Chosen
# deterministically; unimodular over the ring lattice.
_BASIS_V = (
    (-1, 0, 0, -1, 1, -1, 0, 0),
    (0, -1, -1, 0, 0, 0, 1, -1),
    (0, -1, -1, 0, 0, 0, -1, 1),
    (0, -1, 1, -1, -1, 0, 0, 0),
    (0, -1, 1, -1, 1, 0, 0, 0),
    (0, -1, 0, 0, 1, -1, -1, 0),
    (0, -1, 0, 0, 1, -1, 1, 0),
    (0, -1, 0, 0, -1, 1, -1, 0),
)
_IMAGE_X2 = (
    (-2, -2, 0, 0, 0, 0, 0, 0),
    (-2, 0, -2, 0, 0, 0, 0, 0),
    (-2, 0, 0, -2, 0, 0, 0, 0),
    (-2, 0, 0, 0, -2, 0, 0, 0),
    (-2, 0, 0, 0, 0, -2, 0, 0),
    (-2, 0, 0, 0, 0, 0, -2, 0),
    (-2, 0, 0, 0, 0, 0, 0, -2),
    (-1, 1, -1, -1, -1, -1, -1, 1),
)

_vinv_cache: Optional[List[List[Fraction]]] = None
_x2inv_cache: Optional[List[List[Fraction]]] = None


def _matinv(m: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    n = len(m)
    aug = [[Fraction(m[i][j]) for j in range(n)]
           + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c])
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def _doubled_coords(q: Icosian) -> Optional[Tuple[int, ...]]:
    """(2a1, 2b1, ..., 2a4, 2b4) when every coordinate sits in (1/2)Z[t]."""
    out = []
    for c in q.q:
        da, db = 2 * c.a, 2 * c.b
        if da.denominator != 1 or db.denominator != 1:
            return None
        out.append(da.numerator)
        out.append(db.numerator)
    return tuple(out)


def icosian_ring_contains(q: Icosian) -> bool:
    """Exact ring membership.

    Coordinates must lie in (1/2)Z[t] and the doubled integer vector must
    satisfy four parity constraints; the constraints are the mod-2 form of
    the ring lattice's Hermite normal form and are checked against a basis
    solve in the test suite.
    """
    v = _doubled_coords(q)
    if v is None:
        return False
    a1, b1, a2, b2, a3, b3, a4, b4 = v
    return (
        (a3 + b1 + a2 + b2) % 2 == 0
        and (b3 + a1 + b1 + a2) % 2 == 0
        and (a4 + a1 + b1 + b2) % 2 == 0
        and (b4 + a1 + a2 + b2) % 2 == 0
    )


def icosian_to_e8(q: Icosian) -> Tuple[Fraction, ...]:
    """Image of a ring icosian in the standard root-lattice coordinates.

    Z-linear; Euclidean norm of q equals half the squared length of the
    image, so the 240 norm-1 icosians land exactly on the roots.  Raises
    ValueError outside the ring.
    """
    global _vinv_cache
    if not icosian_ring_contains(q):
        raise ValueError("icosian is not in the ring")
    if _vinv_cache is None:
        _vinv_cache = _matinv(_BASIS_V)
    v = _doubled_coords(q)
    x = []
    n = [sum(v[k] * _vinv_cache[k][j] for k in range(8)) for j in range(8)]
    for j in range(8):
        s = sum(int(n[i]) * _IMAGE_X2[i][j] for i in range(8))
        x.append(Fraction(s, 2))
    return tuple(x)


def e8_to_icosian(x: Sequence[Fraction]) -> Icosian:
    """Inverse of icosian_to_e8 on lattice vectors; ValueError off-lattice."""
    global _x2inv_cache
    if _x2inv_cache is None:
        _x2inv_cache = _matinv([[Fraction(a, 2) for a in row] for row in _IMAGE_X2])
    xs = [Fraction(a) for a in x]
    n = [sum(xs[k] * _x2inv_cache[k][j] for k in range(8)) for j in range(8)]
    coords = [Fraction(0)] * 8
    for i, ni in enumerate(n):
        if ni.denominator != 1:
            raise ValueError("vector is not in the lattice")
        for j in range(8):
            coords[j] += ni * _BASIS_V[i][j]
    q = Icosian(*(GoldenNum(coords[2 * i] * _HALF, coords[2 * i + 1] * _HALF)
                  for i in range(4)))
    return q


# --------------------------------------------------------------------------
# the projection matrix


def _h_block() -> Tuple[Tuple[GoldenNum, ...], ...]:
    signs = ((-1, -1, -1, -1), (1, -1, -1, 1), (1, 1, -1, -1), (1, -1, 1, -1))
    return tuple(tuple(_HALFG * s for s in row) for row in signs)


def pi_matrix() -> Tuple[Tuple[GoldenNum, ...], ...]:
    """The exact 8x8 projector onto the 4D physical subspace.

    Block form (1/sqrt5) [[tau*I, H], [H^T, sigma*I]] with H the signed
    half-matrix below.  H is orthogonal, which together with tau*sigma = 1
    and tau + sigma = sqrt5 makes the matrix symmetric and idempotent of
    rank 4.  Published renderings of this matrix drop the transpose and
    carry an overall minus sign; either defect breaks idempotency, so the
    corrected form is used and the defining identities are asserted in the
    test suite.
    """
    inv_sqrt5 = (2 * TAU - 1) / 5
    h = _h_block()
    m = [[ZERO] * 8 for _ in range(8)]
    for i in range(4):
        m[i][i] = TAU * inv_sqrt5
        m[i + 4][i + 4] = SIGMA * inv_sqrt5
        for j in range(4):
            m[i][j + 4] = h[i][j] * inv_sqrt5
            m[i + 4][j] = h[j][i] * inv_sqrt5
    return tuple(tuple(row) for row in m)


@dataclass(frozen=True)
class Window:
    """Perpendicular-space acceptance region (a 4D ball).

    kind "ball" carries an exact golden radius; "voronoi_approx" uses the
    float radius (2/pi^2)^(1/4), the radius of the ball whose 4-volume
    matches the unit cell it stands in for, and trades exactness of the
    boundary test for that calibration.
    """

    kind: str
    radius: object  # GoldenNum for "ball", float for "voronoi_approx"

    def radius_float(self) -> float:
        return float(self.radius)


def ball_window(radius: GoldenLike = 1) -> Window:
    r = as_golden(radius)
    if r is None:
        raise TypeError("ball window radius must be a golden number")
    return Window("ball", r)


def voronoi_approx_window() -> Window:
    return Window("voronoi_approx", (2.0 / math.pi ** 2) ** 0.25)


@dataclass(frozen=True)
class ProjectionSpec:
    """Cut-and-project configuration: the projector blocks plus the window."""

    pi: Tuple[Tuple[GoldenNum, ...], ...]
    h_block: Tuple[Tuple[GoldenNum, ...], ...]
    window: Window


def projection_spec(window: Optional[Window] = None) -> ProjectionSpec:
    return ProjectionSpec(pi_matrix(), _h_block(), window or ball_window(1))


# --------------------------------------------------------------------------
# the 4D quasicrystal


class QC4:
    """Finite sample of the 4D quasicrystal.

    points: icosians sorted by float coordinates; shell: the 8-space search
    radius; window: the acceptance region used.  Membership tests are exact.
    """

    __slots__ = ("points", "shell", "window", "_keys")

    def __init__(self, points: Iterable[Icosian], shell: GoldenNum,
                 window: Window) -> None:
        pts = sorted(points, key=Icosian.float_tuple)
        object.__setattr__(self, "points", tuple(pts))
        object.__setattr__(self, "shell", shell)
        object.__setattr__(self, "window", window)
        object.__setattr__(self, "_keys", frozenset(p.key() for p in pts))

    def __setattr__(self, name, value):
        raise AttributeError("QC4 is immutable")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, q: Icosian) -> bool:
        return q.key() in self._keys

    def point_set4(self):
        from .pointset import PointSet4

        return PointSet4([p.q for p in self.points])


def _coord_candidates(par_bound: float, perp_bound: float):
    """All c = (a + b*t)/2 in (1/2)Z[t] with |c| <= par and |galois c| <= perp.

    Integer ranges come from float bounds with a safety margin; every
    candidate is kept with exact golden values so later tests stay exact.
    """
    phi = float(TAU)
    sq5 = 2.0 * phi - 1.0
    out = []
    bmax = int((2 * par_bound + 2 * perp_bound) / sq5) + 2
    for b in range(-bmax, bmax + 1):
        lo = max(-2 * par_bound - b * phi, -2 * perp_bound - b * (1.0 - phi))
        hi = min(2 * par_bound - b * phi, 2 * perp_bound - b * (1.0 - phi))
        if lo > hi + 2:
            continue
        for a in range(int(lo) - 1, int(hi) + 2):
            c = GoldenNum(Fraction(a, 2), Fraction(b, 2))
            cf = float(c)
            if abs(cf) > par_bound + 1e-9:
                continue
            cg = c.conjugate()
            cgf = float(cg)
            if abs(cgf) > perp_bound + 1e-9:
                continue
            out.append((c, cg, a & 1, b & 1))
    return out


def elser_sloane_points(spec: Optional[ProjectionSpec] = None,
                        shell_radius: GoldenLike = 4) -> QC4:
    """Cut-and-project point sample.

    Every ring icosian whose lattice vector has squared length at most
    shell_radius^2 and whose Galois conjugate falls in the window is
    emitted.  The region test 2*(A+B) <= shell^2 and the ball window test
    are exact; enumeration is a meet-in-the-middle join over coordinate
    pairs, with the ring's parity constraints used to bucket the join.
    """
    if spec is None:
        spec = projection_spec()
    window = spec.window
    rf = window.radius_float()
    if rf <= 0:
        raise EmptyWindow("window radius must be positive")
    shell = as_golden(shell_radius)
    if shell is None or shell.sign() <= 0:
        raise ValueError("shell_radius must be a positive golden number")
    shell_sq = shell * shell
    shell_sq_f = float(shell_sq)
    exact_ball = window.kind == "ball"
    r_sq = window.radius * window.radius if exact_ball else None
    r_sq_f = rf * rf

    # |q|^2 <= sqrt5 * shell^2 / (2 tau) since both split norms are >= 0
    par_bound = (5.0 ** 0.25) * (shell_sq_f / (2.0 * float(TAU))) ** 0.5
    cands = _coord_candidates(par_bound, rf)

    # pairs (c_i, c_j) with exact partial norms
    pairs = []
    for c1, g1, pa1, pb1 in cands:
        n1 = c1 * c1
        m1 = g1 * g1
        for c2, g2, pa2, pb2 in cands:
            par = n1 + c2 * c2
            perp = m1 + g2 * g2
            fperp = float(perp)
            if fperp > r_sq_f + 1e-9:
                continue
            # half the region bound is not separable; keep the window cut only
            pairs.append((fperp, float(par), par, perp,
                          (pa1, pb1, pa2, pb2), c1, c2))

    # right pairs bucketed by parity bits, sorted by perpendicular norm
    buckets = {}
    for rec in pairs:
        buckets.setdefault(rec[4], []).append(rec)
    for v in buckets.values():
        v.sort(key=lambda rec: rec[0])

    two = Fraction(2)
    out = []
    for fperp_l, fpar_l, par_l, perp_l, (a1, b1, a2, b2), c1, c2 in pairs:
        want = ((b1 + a2 + b2) & 1, (a1 + b1 + a2) & 1,
                (a1 + b1 + b2) & 1, (a1 + a2 + b2) & 1)
        bucket = buckets.get(want)
        if not bucket:
            continue
        lim = r_sq_f - fperp_l + 1e-9
        for fperp_r, fpar_r, par_r, perp_r, _, c3, c4 in bucket:
            if fperp_r > lim:
                break
            par = par_l + par_r
            if two * euclidean_part(par) > shell_sq:
                continue
            perp = perp_l + perp_r
            if exact_ball:
                if (r_sq - perp).sign() < 0:
                    continue
            elif float(perp) > r_sq_f:
                continue
            out.append(Icosian(c1, c2, c3, c4))
    return QC4(out, shell, window)


# ---------------------------------------------------------------------------
# cross-sections of the 4D tiling


def _grids3d():
    from . import grids3d

    return grids3d


# A facet of the central unit 600-cell: four unit icosians that are
# mutually adjacent at the short (edge) distance.  Its supporting
# hyperplane, mapped through the alignment sandwich below, lands on a
# small cell of the frame-0 tetragrid.
_FACET_VERTICES: Tuple["Icosian", ...] = ()


def _facet_vertices() -> Tuple["Icosian", ...]:
    global _FACET_VERTICES
    if not _FACET_VERTICES:
        h = Fraction(1, 2)
        _FACET_VERTICES = (
            Icosian(GoldenNum(-1), ZERO, ZERO, ZERO),
            Icosian(GoldenNum(0, -h), GoldenNum(-h), ZERO, GoldenNum(h, -h)),
            Icosian(GoldenNum(0, -h), GoldenNum(-h), ZERO, GoldenNum(-h, h)),
            Icosian(GoldenNum(0, -h), GoldenNum(h, -h), GoldenNum(-h), ZERO),
        )
    return _FACET_VERTICES


# Quaternion sandwich p -> L * p * R.  The real part of the image is the
# (rescaled) offset of p against the facet hyperplane's normal direction:
# 0 selects the parallel central hyperplane, _S_ALIGN the facet plane
# itself.  The imaginary part simultaneously lands slice points on
# frame-0 tetragrid vertices at the grid's own scale (4D edge 1 maps to
# 3D edge tau/sqrt2).  Both factors are frozen exact constants; the
# right factor is a unit, the left factor folds in the facet normal and
# the scale.
_SLICE_LEFT_RIGHT: Tuple["Icosian", ...] = ()


def _slice_sandwich() -> Tuple["Icosian", "Icosian"]:
    global _SLICE_LEFT_RIGHT
    if not _SLICE_LEFT_RIGHT:
        q = Fraction(1, 4)
        h = Fraction(1, 2)
        left = Icosian(
            GoldenNum(q, q), GoldenNum(-q, -q), GoldenNum(-q, -q), GoldenNum(q, -q)
        )
        right = Icosian(
            GoldenNum(0, -h), GoldenNum(h, -h), GoldenNum(-h), ZERO
        )
        _SLICE_LEFT_RIGHT = (left, right)
    return _SLICE_LEFT_RIGHT


# Facet-plane offset in sandwich coordinates: tau^3/4, the squared
# circumradius of the facet centroid.
_S_ALIGN = GoldenNum(Fraction(1, 4), Fraction(1, 2))

# Grid registration for the facet slice.  The facet plane misses the
# grid origin, so its image sits a fixed golden translate away from the
# tetragrid vertex set; this is the positive-octant representative of
# the twelve symmetry-equivalent registrations, and it puts the origin
# inside the translated slice (the composition axis then passes through
# a shared vertex of every rotated copy).
_DELTA2: Tuple[GoldenNum, ...] = (
    GoldenNum(Fraction(1, 4), Fraction(1, 2)),
    GoldenNum(Fraction(1, 4), Fraction(1, 2)),
    GoldenNum(Fraction(1, 4)),
)


def _regular_tetra_cliques(points: Sequence[tuple], edge_sq: GoldenNum):
    """Ordered scan for 4-cliques of the exact-distance graph."""
    from .linalg import norm2, vsub

    pts = list(points)
    n = len(pts)
    fl = [tuple(float(x) for x in p) for p in pts]
    target = float(edge_sq)
    adj = [set() for _ in range(n)]
    for i in range(n):
        fi = fl[i]
        for j in range(i + 1, n):
            fj = fl[j]
            d = (
                (fi[0] - fj[0]) ** 2
                + (fi[1] - fj[1]) ** 2
                + (fi[2] - fj[2]) ** 2
            )
            if abs(d - target) > 1e-6:
                continue
            if norm2(vsub(pts[i], pts[j])) == edge_sq:
                adj[i].add(j)
                adj[j].add(i)
    out = []
    for i in range(n):
        for j in sorted(adj[i]):
            if j < i:
                continue
            comm = adj[i] & adj[j]
            for k in sorted(comm):
                if k <= j:
                    continue
                for l in sorted(comm & adj[k]):
                    if l > k:
                        out.append((pts[i], pts[j], pts[k], pts[l]))
    return out


def _cell_orientation(quad) -> Optional[str]:
    """Match centroid-to-vertex rays against the frame-0 cell axes.

    Up cells point their rays along the negated plane normals, down
    cells along the normals; anything else is unoriented.
    """
    g3 = _grids3d()
    quarter = GoldenNum(Fraction(1, 4))
    cx = [sum((v[k] for v in quad), ZERO) * quarter for k in range(3)]
    votes = {1: 0, -1: 0}
    for v in quad:
        ray = tuple(v[k] - cx[k] for k in range(3))
        for s in (1, -1):
            for nrm in g3.FRAME0_NORMALS:
                lam = None
                ok = True
                for k in range(3):
                    comp = ray[k] if (nrm[k] == ONE) == (s == 1) else -ray[k]
                    if lam is None:
                        lam = comp
                    elif comp != lam:
                        ok = False
                        break
                if ok and lam is not None and lam.sign() > 0:
                    votes[s] += 1
    if votes[-1] == 4 and votes[1] == 0:
        return "up"
    if votes[1] == 4 and votes[-1] == 0:
        return "down"
    return None


def _slice_cells(points, small_sq: GoldenNum, big_sq: GoldenNum):
    from .pointset import canonical_sort

    g3 = _grids3d()
    cells = []
    for esq in (small_sq, big_sq):
        for quad in _regular_tetra_cliques(points, esq):
            o = _cell_orientation(quad)
            cells.append(
                g3.TetraCell(
                    vertices=tuple(canonical_sort(list(quad))),
                    orientation=o or "slant",
                    grid_id=-1,
                    chirality={"up": "left", "down": "right"}.get(o, "both"),
                )
            )
    return cells


def cross_section(qc: QC4, kind: str):
    """Exact hyperplane slice of a 4D sample, re-expressed in 3D.

    kind "type1" keeps the points on the central hyperplane parallel to
    a facet of the unit 600-cell; "type2" keeps the facet plane itself,
    registered onto the tetragrid by a fixed golden translate;
    "icosahedral" keeps the pure-imaginary points, whose unit shell is
    the 30-vertex icosidodecahedron.  Membership is a golden-field
    equality, never a float threshold.  Returns the slice points plus
    the regular tetrahedra present in them at the two cell edge lengths
    (the 4D edge and tau times it, at the slice's own scale).
    """
    from .linalg import norm2
    from .pointset import PointSet3

    g3 = _grids3d()
    shell_f = math.sqrt(float(qc.shell) ** 2 / 2.0)  # max 4D quaternion norm
    if kind == "icosahedral":
        pts = [tuple(p.q[1:]) for p in qc.points if p.q[0] == ZERO]
        shell = sum(1 for p in pts if norm2(p) == ONE)
        if shell < 30:
            raise ValueError(
                "window too small to contain an icosahedral shell"
            )
        small_sq = SIGMA * SIGMA
        big_sq = ONE
        coverage = shell_f
        center = (0.0, 0.0, 0.0)
    elif kind in ("type1", "type2"):
        left, right = _slice_sandwich()
        target = ZERO if kind == "type1" else _S_ALIGN
        pts = []
        for p in qc.points:
            w = left * p * right
            if w.q[0] == target:
                v = tuple(w.q[1:])
                if kind == "type2":
                    v = tuple(a + d for a, d in zip(v, _DELTA2))
                pts.append(v)
        small_sq = _HALFG
        big_sq = GoldenNum(_HALF, _HALF)
        # conformal slice: 3D radius = |left| * 4D radius, with the fixed
        # real part carving s^2 out of the facet slice's reach
        scaled = shell_f * float(TAU) / math.sqrt(2.0)
        if kind == "type1":
            coverage = scaled
            center = (0.0, 0.0, 0.0)
        else:
            coverage = math.sqrt(scaled * scaled - float(_S_ALIGN) ** 2)
            center = tuple(float(d) for d in _DELTA2)
    else:
        raise ValueError(f"unknown cross-section kind: {kind!r}")
    cells = _slice_cells(pts, small_sq, big_sq)
    prov = {
        "construction": "cross_section",
        "kind": kind,
        "coverage_radius": coverage,
        "coverage_center": center,
    }
    return PointSet3(pts), g3.CellSet(cells, provenance=prov)


def _klein_rotations():
    """Identity plus the three axis flips mapping cell axis 1 onto 2..4."""
    from .linalg import identity

    mats = [identity(3)]
    for i in range(3):
        rows = []
        for r in range(3):
            rows.append(
                tuple(
                    (ONE if r == i else -ONE) if r == c else ZERO
                    for c in range(3)
                )
            )
        mats.append(tuple(rows))
    return mats


def compound_qc(qc: QC4, kind: str, copies: Optional[int] = None):
    """Golden composition of cross-section slices into a 3D compound.

    type1 composes 5 rotated copies of the central slice; type2 first
    spreads the facet slice over the frame's four cell axes, then
    composes, for 20 slices total.  copies=1 is the degenerate identity
    composition and returns the single cross-section unchanged.
    """
    from .linalg import identity, mat_mul

    g3 = _grids3d()
    if kind not in ("type1", "type2"):
        raise ValueError(f"unknown compound kind: {kind!r}")
    slices_per_frame = 1 if kind == "type1" else 4
    default = 5 * slices_per_frame
    if copies is None:
        copies = default
    if copies == 1:
        return cross_section(qc, kind)[1]
    if copies != default:
        raise ValueError(
            f"{kind} composes {default} copies (or 1 for the identity)"
        )
    _, cs = cross_section(qc, kind)
    ident = identity(3)
    if kind == "type2":
        base = g3.CellSet(
            (
                c.transformed(m, grid_id=0)
                for m in _klein_rotations()
                for c in cs.cells
            ),
            provenance=cs.provenance,
        )
    else:
        base = cs.transformed(ident, grid_id=0)
    origin = (ZERO, ZERO, ZERO)
    if origin not in base.points:
        raise ValueError("slice does not reach the composition axis")
    parts = [base]
    m = ident
    for k in range(1, 5):
        m = mat_mul(g3.R5_MATRIX, m)
        parts.append(base.transformed(m, grid_id=k))
    # ball about the origin covered by every rotated copy: each slice is
    # complete out to its own coverage radius around its own center
    ctr = cs.provenance["coverage_center"]
    coverage = cs.provenance["coverage_radius"] - math.sqrt(
        sum(x * x for x in ctr)
    )
    return parts[0].merged(
        *parts[1:],
        provenance={
            "construction": "compound_qc",
            "kind": kind,
            "copies": copies,
            "slices_per_frame": slices_per_frame,
            "coverage_radius": coverage,
        },
    )
