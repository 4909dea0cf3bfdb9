"""Planar multigrids and their dual rhombus tilings, exactly.

Five families of parallel lines at 72 degree increments, with periodic or
two-gap quasiperiodic spacing laws, are intersected and dualized into an
edge-to-edge rhombus tiling. All geometry runs in the golden field: a 2D
point is stored by its coefficients (x, y) in the oblique basis (e0, e1),
where e_n = (cos 72n, sin 72n). In that basis every intersection, every
tile vertex and every area (in units of sin 72) is an exact GoldenNum.

The five-family case is the validated exact path; normal vectors for other
family counts are provided for inspection but have no exact tiling engine
behind them.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .golden import GoldenLike, GoldenNum, ONE, SIGMA, TAU, ZERO, as_golden

HALF = Fraction(1, 2)

# e_n expressed in the (e0, e1) basis: e2 = -e0 + s e1, e3 = -s e0 - s e1,
# e4 = s e0 - e1, with s = 1/tau. Derived from sin 144 = s sin 72 and
# cos 72 = s/2, cos 144 = -tau/2.
_E_BASIS: Tuple[Tuple[GoldenNum, GoldenNum], ...] = (
    (ONE, ZERO),
    (ZERO, ONE),
    (-ONE, SIGMA),
    (-SIGMA, -SIGMA),
    (SIGMA, -ONE),
)

# cos(72 d) and sin(72 d)/sin(72) for d = 0..4
_COS = (ONE, SIGMA / 2, -TAU / 2, -TAU / 2, SIGMA / 2)
_SIN_UNITS = (ZERO, ONE, SIGMA, -SIGMA, -ONE)

# sin^2 72 = (2 + tau)/4, used for exact Cartesian-y comparisons
_SIN72_SQ = (TAU + 2) / 4


class DegenerateGrid(Exception):
    """Three or more lines meet at one point; the dual cell is not a rhombus."""


# ---------------------------------------------------------------------------
# spacing laws


@dataclass(frozen=True)
class SpacingLaw:
    """Offset law of one grid family.

    periodic:       x_N = T (N + gamma)
    quasiperiodic:  x_N = T (N + alpha + (1/rho) floor(N/mu + beta))

    The quasiperiodic gaps take the two values T and T (1 + 1/rho); with
    rho = mu = tau this is the Fibonacci spacing with ratio tau.
    """

    kind: str
    T: GoldenNum = ONE
    gamma: GoldenNum = ZERO
    alpha: GoldenNum = ZERO
    beta: GoldenNum = ZERO
    rho: GoldenNum = TAU
    mu: GoldenNum = TAU

    def __post_init__(self):
        if self.kind not in ("periodic", "quasiperiodic"):
            raise ValueError(f"unknown spacing kind {self.kind!r}")
        for name in ("T", "gamma", "alpha", "beta", "rho", "mu"):
            v = as_golden(getattr(self, name))
            if v is None:
                raise TypeError(f"{name} must be a golden number or rational")
            object.__setattr__(self, name, v)
        if self.T.sign() <= 0:
            raise ValueError("grid period T must be positive")
        if self.kind == "quasiperiodic":
            if self.mu.b == 0:
                raise ValueError(
                    "mu must be irrational: a rational mu degenerates the "
                    "two-gap law to a periodic structure"
                )
            if self.mu.sign() <= 0 or self.rho.sign() <= 0:
                raise ValueError("rho and mu must be positive")
            if (self.mu - 1).sign() <= 0:
                raise ValueError("mu must exceed 1 for a two-letter gap word")

    @staticmethod
    def periodic(T: GoldenLike = 1, gamma: GoldenLike = 0) -> "SpacingLaw":
        return SpacingLaw("periodic", T=as_golden(T), gamma=as_golden(gamma))

    @staticmethod
    def fibonacci(
        T: GoldenLike = 1, alpha: GoldenLike = 0, beta: GoldenLike = 0
    ) -> "SpacingLaw":
        """Quasiperiodic law with rho = mu = tau (gap ratio tau)."""
        return SpacingLaw(
            "quasiperiodic",
            T=as_golden(T),
            alpha=as_golden(alpha),
            beta=as_golden(beta),
            rho=TAU,
            mu=TAU,
        )

    def offset(self, n: int) -> GoldenNum:
        if self.kind == "periodic":
            return self.T * (self.gamma + n)
        step = (as_golden(n) / self.mu + self.beta).floor()
        return self.T * (self.alpha + n + step / self.rho)


def grid_offsets(law: SpacingLaw, n_lo: int, n_hi: int) -> List[GoldenNum]:
    """Exact offsets x_N for N = n_lo..n_hi inclusive, monotone increasing."""
    if n_lo > n_hi:
        raise ValueError("empty index range")
    return [law.offset(n) for n in range(n_lo, n_hi + 1)]


def fibonacci_word(law: SpacingLaw, count: int) -> str:
    """Gap word of a quasiperiodic law with rho = mu = tau, over {L, S}.

    Letter k compares x_{k+1} - x_k against the period: the short gap is T,
    the long gap is tau T.
    """
    if law.kind != "quasiperiodic" or law.rho != TAU or law.mu != TAU:
        raise ValueError("fibonacci_word needs the rho = mu = tau law")
    if count < 1:
        raise ValueError("count must be >= 1")
    offs = grid_offsets(law, 0, count)
    out = []
    for a, b in zip(offs, offs[1:]):
        gap = b - a
        if gap == law.T:
            out.append("S")
        elif gap == law.T * TAU:
            out.append("L")
        else:  # pragma: no cover - excluded by the law
            raise AssertionError(f"unexpected gap {gap}")
    return "".join(out)


def substitution_word(count: int, seed: str = "L") -> str:
    """Prefix of the fixed point of L -> LS, S -> L, length >= count."""
    w = seed
    while len(w) < count:
        w = "".join("LS" if ch == "L" else "L" for ch in w)
    return w[:count]


def multigrid_normals(n_families: int) -> List[Tuple[float, float]]:
    """Evenly rotated unit normals e_k = (cos 2 pi k / n, sin 2 pi k / n)."""
    if n_families < 2:
        raise ValueError("need at least 2 families")
    return [
        (math.cos(2 * math.pi * k / n_families), math.sin(2 * math.pi * k / n_families))
        for k in range(n_families)
    ]


# ---------------------------------------------------------------------------
# exact pentagrid engine


@dataclass(frozen=True)
class GridFamily:
    """One family of parallel lines: index n in 0..4, law, inclusive index range."""

    family: int
    law: SpacingLaw
    index_range: Tuple[int, int]

    def __post_init__(self):
        if not 0 <= self.family <= 4:
            raise ValueError("exact engine supports families 0..4 (pentagrid)")
        lo, hi = self.index_range
        if lo > hi:
            raise ValueError("empty index range")

    @property
    def normal(self) -> Tuple[float, float]:
        a = 2 * math.pi * self.family / 5
        return (math.cos(a), math.sin(a))

    def offsets(self) -> List[GoldenNum]:
        return grid_offsets(self.law, *self.index_range)


def pentagrid(
    laws: Sequence[SpacingLaw] | SpacingLaw,
    index_range: Tuple[int, int],
) -> List[GridFamily]:
    """Five families over a shared index range; one law or one per family."""
    if isinstance(laws, SpacingLaw):
        laws = [laws] * 5
    if len(laws) != 5:
        raise ValueError("pentagrid needs exactly 5 laws")
    return [GridFamily(n, law, tuple(index_range)) for n, law in enumerate(laws)]


# offsets with no three lines concurrent, used as the default Penrose patch
PENROSE_GAMMAS = (
    Fraction(1, 7),
    Fraction(2, 11),
    Fraction(3, 13),
    Fraction(4, 17),
    Fraction(5, 19),
)


def penrose_families(index_range: Tuple[int, int] = (-3, 3)) -> List[GridFamily]:
    laws = [SpacingLaw.periodic(1, g) for g in PENROSE_GAMMAS]
    return [GridFamily(n, law, tuple(index_range)) for n, law in enumerate(laws)]


Basis2 = Tuple[GoldenNum, GoldenNum]


def basis_point(x: GoldenLike, y: GoldenLike) -> Basis2:
    return (as_golden(x), as_golden(y))


def project(p: Basis2, n: int) -> GoldenNum:
    """Exact p . e_n for p given in (e0, e1) coefficients."""
    return p[0] * _COS[n % 5] + p[1] * _COS[(n - 1) % 5]


def cross_units(u: Basis2, v: Basis2) -> GoldenNum:
    """cross(u, v) in units of sin 72 (exact)."""
    return u[0] * v[1] - u[1] * v[0]


def cartesian_x(p: Basis2) -> GoldenNum:
    """Exact Cartesian x coordinate: x + y cos 72."""
    return p[0] + p[1] * _COS[1]


def to_cartesian(p: Basis2) -> Tuple[float, float]:
    s72 = math.sqrt(float(_SIN72_SQ))
    return (float(cartesian_x(p)), float(p[1]) * s72)


def _y_within(py: GoldenNum, lo: Fraction, hi: Fraction) -> bool:
    """Exact test lo <= py sin72 <= hi for rational bounds."""

    def le(bound_first: bool, y: GoldenNum, b: Fraction) -> bool:
        # bound_first False: test y sin72 <= b; True: test b <= y sin72
        s = y.sign()
        if not bound_first:
            if s <= 0:
                return b >= 0 or (y * y * _SIN72_SQ) > b * b
            # y > 0: need y^2 sin72^2 <= b^2 and b >= 0
            return b > 0 and (y * y * _SIN72_SQ) <= b * b
        if s >= 0:
            return b <= 0 or (y * y * _SIN72_SQ) >= b * b
        return b < 0 and (y * y * _SIN72_SQ) <= b * b

    return le(True, py, lo) and le(False, py, hi)


@dataclass(frozen=True)
class Patch:
    """Axis-aligned Cartesian box filtering which intersections are kept."""

    xmin: Fraction
    xmax: Fraction
    ymin: Fraction
    ymax: Fraction

    def __post_init__(self):
        for name in ("xmin", "xmax", "ymin", "ymax"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.xmin > self.xmax or self.ymin > self.ymax:
            raise ValueError("empty patch")

    def contains(self, p: Basis2) -> bool:
        cx = cartesian_x(p)
        if cx < self.xmin or cx > self.xmax:
            return False
        return _y_within(p[1], self.ymin, self.ymax)


@dataclass(frozen=True)
class Intersection:
    point: Basis2
    families: Tuple[Tuple[int, int], Tuple[int, int]]  # ((r, i), (s, j))
    angle_class: int  # 1 = prolate (72 deg), 2 = oblate (36 deg)


def _intersect(r: int, a: GoldenNum, s: int, b: GoldenNum) -> Basis2:
    """Point with p.e_r = a and p.e_s = b, exactly."""
    c = _COS[(s - r) % 5]
    den = ONE - c * c
    u = (a - c * b) / den
    v = (b - c * a) / den
    er, es = _E_BASIS[r], _E_BASIS[s]
    return (u * er[0] + v * es[0], u * er[1] + v * es[1])


def intersections(
    families: Sequence[GridFamily], patch: Optional[Patch] = None
) -> List[Intersection]:
    """All pairwise line intersections inside the patch, canonically ordered.

    Raises DegenerateGrid if any third line passes through an intersection
    (checked against every family's generated offsets, exactly).
    """
    fams = sorted(families, key=lambda f: f.family)
    if len({f.family for f in fams}) != len(fams):
        raise ValueError("duplicate family index")
    offsets = {f.family: f.offsets() for f in fams}
    offset_sets: Dict[int, set] = {
        n: set(offs) for n, offs in offsets.items()
    }
    out: List[Intersection] = []
    for ai in range(len(fams)):
        for bi in range(ai + 1, len(fams)):
            r, s = fams[ai].family, fams[bi].family
            d = (s - r) % 5
            angle_class = 1 if d in (1, 4) else 2
            for i, xa in enumerate(offsets[r]):
                for j, xb in enumerate(offsets[s]):
                    p = _intersect(r, xa, s, xb)
                    if patch is not None and not patch.contains(p):
                        continue
                    for m, oset in offset_sets.items():
                        if m == r or m == s:
                            continue
                        if project(p, m) in oset:
                            raise DegenerateGrid(
                                f"families {r},{s},{m} concurrent at "
                                f"offsets ({xa}, {xb})"
                            )
                    out.append(
                        Intersection(
                            point=p,
                            families=(
                                (r, fams[ai].index_range[0] + i),
                                (s, fams[bi].index_range[0] + j),
                            ),
                            angle_class=angle_class,
                        )
                    )
    out.sort(key=lambda it: it.families)
    return out


@dataclass(frozen=True)
class RhombusCell:
    """One dual cell: 4 vertices in (e0, e1) coordinates, counterclockwise."""

    vertices: Tuple[Basis2, Basis2, Basis2, Basis2]
    kind: str  # "prolate" | "oblate"
    source: Intersection

    def area_units(self) -> GoldenNum:
        """Exact area in units of sin 72."""
        v = self.vertices
        acc = ZERO
        for k in range(4):
            acc = acc + cross_units(v[k], v[(k + 1) % 4])
        return acc / 2


@dataclass
class Tiling:
    cells: List[RhombusCell]
    adjacency: List[Tuple[int, int, Tuple[int, int]]]  # cell, cell, (family, index)

    def cell_count(self) -> int:
        return len(self.cells)

    def kind_census(self) -> Dict[str, int]:
        census: Dict[str, int] = {}
        for c in self.cells:
            census[c.kind] = census.get(c.kind, 0) + 1
        return census

    # -- exact planarity bookkeeping -------------------------------------

    def edge_multiplicities(self) -> Dict[Tuple[Basis2, Basis2], int]:
        mult: Dict[Tuple[Basis2, Basis2], int] = {}
        for c in self.cells:
            v = c.vertices
            for k in range(4):
                a, b = v[k], v[(k + 1) % 4]
                key = (a, b) if a <= b else (b, a)
                mult[key] = mult.get(key, 0) + 1
        return mult

    def certify_planar(self) -> Dict[str, object]:
        """Exact overlap/gap certificate.

        Checks, all in exact arithmetic:
          * every edge is shared by at most 2 cells;
          * at every interior vertex the incident corner angles sum to
            exactly 360 degrees (10 units of 36);
          * the total cell area equals the signed area enclosed by the
            boundary edge cycles.
        Returns a report dict; raises AssertionError on violation.
        """
        mult = self.edge_multiplicities()
        if any(m > 2 for m in mult.values()):
            raise AssertionError("an edge is shared by more than two cells")

        boundary = {e for e, m in mult.items() if m == 1}
        boundary_vertices = {v for e in boundary for v in e}

        # corner angles: vertices of a rhombus cell alternate between the
        # two corner values; measure each corner exactly in 36-degree units
        corner_sum: Dict[Basis2, int] = {}
        for c in self.cells:
            v = c.vertices
            for k in range(4):
                prev_v = v[(k - 1) % 4]
                next_v = v[(k + 1) % 4]
                units = _corner_units(v[k], prev_v, next_v)
                corner_sum[v[k]] = corner_sum.get(v[k], 0) + units
        interior = 0
        for vert, units in corner_sum.items():
            if vert in boundary_vertices:
                continue
            interior += 1
            if units != 10:
                raise AssertionError(
                    f"interior vertex angle sum {units * 36} != 360"
                )

        total = ZERO
        for c in self.cells:
            a = c.area_units()
            if a.sign() <= 0:
                raise AssertionError("cell with non-positive area")
            total = total + a

        # boundary cycles: each boundary vertex must have exactly two
        # incident boundary edges; walk the cycles and shoelace them
        adj: Dict[Basis2, List[Basis2]] = {}
        for a, b in boundary:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        if any(len(nbrs) != 2 for nbrs in adj.values()):
            raise AssertionError("boundary is not a union of simple cycles")
        seen = set()
        cycle_area = ZERO
        n_cycles = 0
        for start in adj:
            if start in seen:
                continue
            n_cycles += 1
            cycle = [start]
            seen.add(start)
            prev, cur = None, start
            while True:
                nxt = None
                for cand in adj[cur]:
                    if cand != prev:
                        nxt = cand
                        break
                if nxt is None:  # two-vertex cycle cannot occur
                    nxt = adj[cur][0]
                if nxt == start:
                    break
                cycle.append(nxt)
                seen.add(nxt)
                prev, cur = cur, nxt
            acc = ZERO
            for k in range(len(cycle)):
                acc = acc + cross_units(cycle[k], cycle[(k + 1) % len(cycle)])
            cycle_area = cycle_area + abs(acc / 2)

        if total != cycle_area:
            raise AssertionError(
                f"cell area total {total} != boundary area {cycle_area}"
            )
        return {
            "cells": len(self.cells),
            "interior_vertices": interior,
            "boundary_cycles": n_cycles,
            "area_sin72_units": total,
        }


def _corner_units(at: Basis2, a: Basis2, b: Basis2) -> int:
    """Angle at `at` between rays to a and b, in exact 36-degree units.

    Edge directions of dual cells are +-e_n, so the angle is always a
    multiple of 36 degrees; identify it from the exact cosine (in halves)
    and the orientation of the pair.
    """
    u = (a[0] - at[0], a[1] - at[1])
    v = (b[0] - at[0], b[1] - at[1])
    du = _units_of(_direction_index(u))
    dv = _units_of(_direction_index(v))
    diff = (dv - du) % 10
    return min(diff, 10 - diff)


def _units_of(k: int) -> int:
    """Angle of direction index k in 36-degree units.

    Index n < 5 is +e_n at 72 n degrees; index n + 5 is -e_n at
    72 n + 180 degrees.
    """
    return (2 * k) % 10 if k < 5 else (2 * k + 5) % 10


def _direction_index(u: Basis2) -> int:
    """Index k in 0..9 with u parallel to e_{k mod 5} times sign (-1)^(k//5)."""
    for n in range(5):
        e = _E_BASIS[n]
        if cross_units(u, e) == ZERO:
            # parallel; which sign?
            d = dot_sign(u, e)
            if d > 0:
                return n
            if d < 0:
                return n + 5
    raise AssertionError("edge direction is not a grid normal")


def dot_sign(u: Basis2, v: Basis2) -> int:
    """Sign of the Euclidean dot product of two basis-coordinate vectors."""
    # gram matrix in (e0, e1): [[1, c], [c, 1]] with c = cos 72
    c = _COS[1]
    val = u[0] * v[0] + u[1] * v[1] + c * (u[0] * v[1] + u[1] * v[0])
    return val.sign()


def dual_tiling(
    families: Sequence[GridFamily], patch: Optional[Patch] = None
) -> Tiling:
    """Dual rhombus tiling of the patch intersections.

    Cells are assembled breadth-first from a seed intersection: the seed
    cell is anchored by the mesh-count rule, every further cell is placed
    by the shared-edge constraint along consecutive intersections of a
    common line. Per-component anchoring keeps disconnected patches
    consistent with the global mesh-count positions.
    """
    pts = intersections(families, patch)
    if not pts:
        return Tiling(cells=[], adjacency=[])
    fams = {f.family: f for f in families}
    offsets = {n: f.offsets() for n, f in fams.items()}
    line_offset: Dict[Tuple[int, int], GoldenNum] = {}
    for n, f in fams.items():
        lo = f.index_range[0]
        for pos, x in enumerate(offsets[n]):
            line_offset[(n, lo + pos)] = x

    # index intersections by the lines they lie on
    on_line: Dict[Tuple[int, int], List[int]] = {}
    for k, it in enumerate(pts):
        for fam_line in it.families:
            on_line.setdefault(fam_line, []).append(k)

    # sort the intersections along each line by the exact line parameter
    for (n, _i), members in on_line.items():
        members.sort(key=lambda k: _line_param(pts[k].point, n))

    neighbors: Dict[int, List[Tuple[int, Tuple[int, int]]]] = {
        k: [] for k in range(len(pts))
    }
    for fam_line, members in on_line.items():
        for a, b in zip(members, members[1:]):
            neighbors[a].append((b, fam_line))
            neighbors[b].append((a, fam_line))
    for k in neighbors:
        neighbors[k].sort()

    # BFS placement; quadrant vertex maps keyed by (eps_r, eps_s) per cell
    placed: Dict[int, Dict[Tuple[int, int], Basis2]] = {}
    order: List[int] = []
    adjacency: List[Tuple[int, int, Tuple[int, int]]] = []
    for seed in range(len(pts)):
        if seed in placed:
            continue
        placed[seed] = _anchor_cell(pts[seed], offsets)
        order.append(seed)
        queue = deque([seed])
        while queue:
            cur = queue.popleft()
            for nbr, fam_line in neighbors[cur]:
                if nbr in placed:
                    if cur < nbr:
                        adjacency.append((cur, nbr, fam_line))
                    continue
                placed[nbr] = _extend_cell(
                    pts[cur], placed[cur], pts[nbr], fam_line, line_offset
                )
                adjacency.append((cur, nbr, fam_line))
                order.append(nbr)
                queue.append(nbr)

    cells = [_quadrants_to_cell(pts[k], placed[k]) for k in range(len(pts))]
    adjacency.sort()
    return Tiling(cells=cells, adjacency=adjacency)


def _line_param(p: Basis2, n: int) -> GoldenNum:
    """Exact position of p along a family-n line (cross with the normal)."""
    return cross_units(_E_BASIS[n], p)


def _mesh_counts(p: Basis2, offsets: Dict[int, List[GoldenNum]]) -> Dict[int, int]:
    counts = {}
    for n, offs in offsets.items():
        h = project(p, n)
        counts[n] = sum(1 for x in offs if x < h)
    return counts


def _vertex_from_labels(labels: Dict[int, int]) -> Basis2:
    vx, vy = ZERO, ZERO
    for n, k in labels.items():
        e = _E_BASIS[n]
        vx = vx + e[0] * k
        vy = vy + e[1] * k
    return (vx, vy)


def _anchor_cell(
    it: Intersection, offsets: Dict[int, List[GoldenNum]]
) -> Dict[Tuple[int, int], Basis2]:
    """Place the seed cell from the mesh-count rule."""
    (r, _i), (s, _j) = it.families
    base = _mesh_counts(it.point, offsets)
    quad = {}
    for er in (0, 1):
        for es in (0, 1):
            labels = dict(base)
            labels[r] = base[r] + er
            labels[s] = base[s] + es
            quad[(er, es)] = _vertex_from_labels(labels)
    return quad


def _extend_cell(
    src: Intersection,
    src_quad: Dict[Tuple[int, int], Basis2],
    dst: Intersection,
    fam_line: Tuple[int, int],
    line_offset: Dict[Tuple[int, int], GoldenNum],
) -> Dict[Tuple[int, int], Basis2]:
    """Place dst's cell given src's cell, sharing the dual edge of fam_line.

    src and dst are consecutive intersections on the same line (family n).
    The shared dual edge has the two mesh labels split by that line; the
    companion family's side is decided exactly from which side of src's
    companion line dst lies on.
    """
    n = fam_line[0]
    (r1, i1), (s1, j1) = src.families
    comp_src = (s1, j1) if r1 == n else (r1, i1)
    (r2, i2), (s2, j2) = dst.families
    comp_dst = (s2, j2) if r2 == n else (r2, i2)

    # which side of src's companion line does dst lie on?
    h_src = line_offset[comp_src]
    side_src = 1 if (project(dst.point, comp_src[0]) - h_src).sign() > 0 else 0

    h_dst = line_offset[comp_dst]
    side_dst = 1 if (project(src.point, comp_dst[0]) - h_dst).sign() > 0 else 0
    comp_dst_fam = comp_dst[0]

    # shared edge endpoints from src's quadrants, keyed by the eps of n
    def src_key(eps_n: int) -> Tuple[int, int]:
        return (eps_n, side_src) if r1 == n else (side_src, eps_n)

    shared = {eps: src_quad[src_key(eps)] for eps in (0, 1)}

    # in dst's cell the shared edge sits on side_dst of the companion; the
    # far pair is one companion step away from the shared pair
    e_comp = _E_BASIS[comp_dst_fam]
    step = 1 if side_dst == 0 else -1  # move from shared side to far side
    quad = {}
    for eps in (0, 1):
        near = shared[eps]
        far = (near[0] + e_comp[0] * step, near[1] + e_comp[1] * step)
        if r2 == n:
            quad[(eps, side_dst)] = near
            quad[(eps, 1 - side_dst)] = far
        else:
            quad[(side_dst, eps)] = near
            quad[(1 - side_dst, eps)] = far
    return quad


def _quadrants_to_cell(
    it: Intersection, quad: Dict[Tuple[int, int], Basis2]
) -> RhombusCell:
    kind = "prolate" if it.angle_class == 1 else "oblate"
    loop = [quad[(0, 0)], quad[(1, 0)], quad[(1, 1)], quad[(0, 1)]]
    # orient counterclockwise, exactly
    acc = ZERO
    for k in range(4):
        acc = acc + cross_units(loop[k], loop[(k + 1) % 4])
    if acc.sign() < 0:
        loop.reverse()
    return RhombusCell(vertices=tuple(loop), kind=kind, source=it)
