"""Spatial plane grids: tetragrid, Fibonacci icosagrid, twenty-groups,
chirality, plane classes.

Conventions. Frame 0 is the tetragrid whose four plane families are normal
to n1 = (1,1,1), n2 = (1,-1,-1), n3 = (-1,1,-1), n4 = (-1,-1,1), the
threefold axes of a regular tetrahedron (the normals sum to zero). Planes
of family i are {x : x . n_i = t} with offsets t drawn from a spacing law
and measured against these unnormalized normals, so the unit periodic law
produces the half-integer FCC vertex set. A cell quadruple (t1..t4) with
sum S bounds a regular tetrahedron of edge |S|/sqrt(2); S > 0 cells point
one way ("up"), S < 0 the other ("down").

The five-frame compound applies powers of the exact 72-degree rotation R5
about (1, 0, tau). Consecutive copies then sit at the golden-rotation
relation of the composition: the rotation carrying one copy's frame to the
next about their shared threefold axis folds, modulo the 60-degree
symmetry of the touching faces, to arccos((3 tau - 1)/4). Working with R5
powers instead of accumulated per-step rotations keeps every vertex in
(1/4) Z[tau] per coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .golden import GoldenNum, ONE, SIGMA, TAU, ZERO, as_golden, dirichlet_flag
from .linalg import (
    Mat,
    Vec,
    centroid,
    cross,
    dot,
    identity,
    mat,
    mat_mul,
    mat_vec,
    norm2,
    to_floats,
    transpose,
    vadd,
    vscale,
    vsub,
)
from .multigrid import SpacingLaw, grid_offsets
from .pointset import PointSet3, canonical_sort

HALF = Fraction(1, 2)

# frame-0 plane normals: threefold axes of a regular tetrahedron
FRAME0_NORMALS: Tuple[Vec, ...] = (
    (ONE, ONE, ONE),
    (ONE, -ONE, -ONE),
    (-ONE, ONE, -ONE),
    (-ONE, -ONE, ONE),
)

# composition axis: a fivefold axis of the dodecahedron spanned by the
# twenty threefold directions below
COMPOSITION_AXIS: Vec = (ONE, ZERO, TAU)

# 72-degree rotation about COMPOSITION_AXIS, exact
R5_MATRIX: Mat = (
    (ONE / 2, -TAU / 2, SIGMA / 2),
    (TAU / 2, SIGMA / 2, -ONE / 2),
    (SIGMA / 2, ONE / 2, TAU / 2),
)

# rotation by arccos((3 tau - 1)/4) about (1,1,1), exact
GOLDEN_ROTATION_MATRIX: Mat = (
    ((3 * TAU + 1) / 6, (4 - 3 * TAU) / 6, ONE / 6),
    (ONE / 6, (3 * TAU + 1) / 6, (4 - 3 * TAU) / 6),
    ((4 - 3 * TAU) / 6, ONE / 6, (3 * TAU + 1) / 6),
)

# vertices of FIG constructions land in (1/4) Z[tau] per coordinate
FIG_DIRICHLET_SCALE = 4


def icosagrid_normals() -> Tuple[Vec, ...]:
    """The ten plane-class directions of the icosagrid, sign-canonical.

    These are the threefold axes of an icosahedron: four cube diagonals
    (+-1,+-1,+-1) and six of type (0, +-s, +-t) cyclic, all of squared
    norm 3, stored with the first nonzero coordinate positive.
    """
    dirs: List[Vec] = []
    for sy in (1, -1):
        for sz in (1, -1):
            dirs.append((ONE, sy * ONE, sz * ONE))
    for s2 in (1, -1):
        dirs.append((ZERO, SIGMA, s2 * TAU))
        dirs.append((TAU, ZERO, s2 * SIGMA))
        dirs.append((SIGMA, s2 * TAU, ZERO))
    return tuple(dirs)


@dataclass(frozen=True)
class GoldenRotation:
    """Exact rotation data: axis, cosine, matrix."""

    axis: Vec
    cos_theta: GoldenNum
    matrix: Mat


def golden_rotation() -> GoldenRotation:
    """The golden rotation: angle arccos((3 tau - 1)/4) about (1,1,1)."""
    return GoldenRotation(
        axis=(ONE, ONE, ONE),
        cos_theta=(3 * TAU - 1) / 4,
        matrix=GOLDEN_ROTATION_MATRIX,
    )


_ROTATIONS_CACHE: Optional[Tuple[Mat, ...]] = None


def icosahedral_rotations() -> Tuple[Mat, ...]:
    """The 60 exact rotation matrices of the chiral icosahedral group.

    Generated by closure from R5 and the coordinate 3-cycle; every entry
    is a half-Dirichlet golden number.
    """
    global _ROTATIONS_CACHE
    if _ROTATIONS_CACHE is not None:
        return _ROTATIONS_CACHE
    c3: Mat = (
        (ZERO, ZERO, ONE),
        (ONE, ZERO, ZERO),
        (ZERO, ONE, ZERO),
    )
    gens = (R5_MATRIX, c3)
    seen: Dict[tuple, Mat] = {}

    def key(m: Mat) -> tuple:
        return tuple((c.a, c.b) for row in m for c in row)

    frontier = [identity(3)]
    seen[key(frontier[0])] = frontier[0]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                prod = mat_mul(g, m)
                k = key(prod)
                if k not in seen:
                    seen[k] = prod
                    nxt.append(prod)
        frontier = nxt
    mats = tuple(seen[k] for k in sorted(seen))
    _ROTATIONS_CACHE = mats
    return mats


# ---------------------------------------------------------------------------
# cells


def _sorted_vertices(vertices: Iterable[Vec]) -> Tuple[Vec, ...]:
    return tuple(canonical_sort(list(vertices)))


@dataclass(frozen=True)
class TetraCell:
    """A regular tetrahedral cell with construction tags.

    vertices are stored canonically sorted; orientation is the sign class
    of the bounding-plane offset sum in the source frame; grid_id is the
    frame (copy) index, -1 when the cell did not come from a tetragrid;
    chirality is "left" for up cells, "right" for down cells, "both" when
    the construction carries no orientation provenance.
    """

    vertices: Tuple[Vec, Vec, Vec, Vec]
    orientation: str
    grid_id: int = -1
    chirality: str = "both"

    def edge_sqs(self) -> List:
        v = self.vertices
        return [
            norm2(vsub(v[i], v[j]))
            for i in range(4)
            for j in range(i + 1, 4)
        ]

    def is_regular(self) -> bool:
        e = self.edge_sqs()
        return all(x == e[0] for x in e[1:])

    def faces(self) -> List[Tuple[Vec, Vec, Vec]]:
        v = self.vertices
        return [
            (v[1], v[2], v[3]),
            (v[0], v[2], v[3]),
            (v[0], v[1], v[3]),
            (v[0], v[1], v[2]),
        ]

    def centroid(self) -> Vec:
        return centroid(self.vertices)

    def key(self) -> tuple:
        return tuple(self.vertices)

    def transformed(self, m: Mat, grid_id: Optional[int] = None) -> "TetraCell":
        return TetraCell(
            vertices=_sorted_vertices(mat_vec(m, v) for v in self.vertices),
            orientation=self.orientation,
            grid_id=self.grid_id if grid_id is None else grid_id,
            chirality=self.chirality,
        )

    def translated(self, t: Vec) -> "TetraCell":
        return TetraCell(
            vertices=_sorted_vertices(vadd(v, t) for v in self.vertices),
            orientation=self.orientation,
            grid_id=self.grid_id,
            chirality=self.chirality,
        )


def _sort_cells(cells: Iterable[TetraCell]) -> Tuple[TetraCell, ...]:
    def float_key(c: TetraCell):
        return (
            c.grid_id,
            c.orientation,
            tuple(float(x) for v in c.vertices for x in v),
        )

    return tuple(sorted(cells, key=float_key))


class CellSet:
    """Deduplicated cells plus their deduplicated vertex set."""

    __slots__ = ("cells", "points", "provenance")

    def __init__(self, cells: Iterable[TetraCell], provenance: Optional[dict] = None):
        uniq: Dict[tuple, TetraCell] = {}
        for c in cells:
            uniq.setdefault(c.key(), c)
        self.cells = _sort_cells(uniq.values())
        self.points = PointSet3(v for c in self.cells for v in c.vertices)
        self.provenance = dict(provenance or {})

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def transformed(self, m: Mat, grid_id: Optional[int] = None) -> "CellSet":
        return CellSet(
            (c.transformed(m, grid_id) for c in self.cells),
            provenance=self.provenance,
        )

    def merged(self, *others: "CellSet", provenance: Optional[dict] = None) -> "CellSet":
        def gen():
            yield from self.cells
            for o in others:
                yield from o.cells

        return CellSet(gen(), provenance=provenance or self.provenance)

    def filter(self, pred: Callable[[TetraCell], bool]) -> "CellSet":
        return CellSet(
            (c for c in self.cells if pred(c)), provenance=self.provenance
        )


# ---------------------------------------------------------------------------
# tetragrid cell extraction


def _frame_cells(offsets: Sequence[GoldenNum], grid_id: int) -> List[TetraCell]:
    """All regular tetra cells of one frame from one offset list per family.

    A quadruple (t1..t4), one offset per family, bounds an empty regular
    tetrahedron iff its sum S stays within every family's neighbor gap on
    the vertex side. Quadruples needing a gap beyond the generated range
    are skipped (conservative window policy). The innermost family is
    range-scanned with a float prefilter; every accepted quadruple is
    verified exactly.
    """
    from bisect import bisect_left

    offs = list(offsets)
    n = len(offs)
    for a, b in zip(offs, offs[1:]):
        if (b - a).sign() <= 0:
            raise ValueError("offsets must be strictly increasing")
    ff = [float(o) for o in offs]
    eps = 1e-9
    cells: List[TetraCell] = []
    idx = range(n)
    for i1 in idx:
        t1 = offs[i1]
        for i2 in idx:
            t2 = offs[i2]
            t12 = t1 + t2
            for i3 in idx:
                t3 = offs[i3]
                t123 = t12 + t3
                f123 = ff[i1] + ff[i2] + ff[i3]
                # up cells: 0 < S <= every gap below
                if i1 > 0 and i2 > 0 and i3 > 0:
                    gup = min(
                        ff[i1] - ff[i1 - 1],
                        ff[i2] - ff[i2 - 1],
                        ff[i3] - ff[i3 - 1],
                    )
                    i4 = bisect_left(ff, -f123 + eps)
                    while i4 < n and ff[i4] <= gup - f123 + eps:
                        if i4 > 0:
                            t4 = offs[i4]
                            s = t123 + t4
                            if s.sign() > 0 and (
                                s <= offs[i1] - offs[i1 - 1]
                                and s <= offs[i2] - offs[i2 - 1]
                                and s <= offs[i3] - offs[i3 - 1]
                                and s <= offs[i4] - offs[i4 - 1]
                            ):
                                cells.append(
                                    _cell_from_quadruple(t1, t2, t3, t4, 1, grid_id)
                                )
                        i4 += 1
                # down cells: 0 < -S <= every gap above
                if i1 < n - 1 and i2 < n - 1 and i3 < n - 1:
                    gdn = min(
                        ff[i1 + 1] - ff[i1],
                        ff[i2 + 1] - ff[i2],
                        ff[i3 + 1] - ff[i3],
                    )
                    i4 = bisect_left(ff, -gdn - f123 - eps)
                    while i4 < n and ff[i4] < -f123 - eps:
                        if i4 < n - 1:
                            t4 = offs[i4]
                            s = t123 + t4
                            m = -s
                            if m.sign() > 0 and (
                                m <= offs[i1 + 1] - offs[i1]
                                and m <= offs[i2 + 1] - offs[i2]
                                and m <= offs[i3 + 1] - offs[i3]
                                and m <= offs[i4 + 1] - offs[i4]
                            ):
                                cells.append(
                                    _cell_from_quadruple(t1, t2, t3, t4, -1, grid_id)
                                )
                        i4 += 1
    return cells


def _cell_from_quadruple(
    t1: GoldenNum,
    t2: GoldenNum,
    t3: GoldenNum,
    t4: GoldenNum,
    sign: int,
    grid_id: int,
) -> TetraCell:
    v4 = vscale(HALF, (t1 + t2, t1 + t3, -(t2 + t3)))
    v3 = vscale(HALF, (t1 + t2, -(t2 + t4), t1 + t4))
    v2 = vscale(HALF, (-(t3 + t4), t1 + t3, t1 + t4))
    v1 = vscale(HALF, (-(t3 + t4), -(t2 + t4), -(t2 + t3)))
    return TetraCell(
        vertices=_sorted_vertices((v1, v2, v3, v4)),
        orientation="up" if sign > 0 else "down",
        grid_id=grid_id,
        chirality="left" if sign > 0 else "right",
    )


def tetragrid_cells(law: SpacingLaw, extent: int) -> CellSet:
    """Regular tetrahedral cells of the frame-0 tetragrid.

    extent bounds the offset indices: N runs over [-extent, extent] for
    every family. The periodic unit law with gamma = 0 reproduces the
    half-integer FCC vertex set with its 8 tetrahedra around each interior
    vertex; octahedral voids are not emitted.
    """
    if extent < 1:
        raise ValueError("extent must be >= 1")
    offs = grid_offsets(law, -extent, extent)
    cells = _frame_cells(offs, grid_id=0)
    return CellSet(
        cells,
        provenance={
            "construction": "tetragrid",
            "extent": extent,
            "law": _law_provenance(law),
        },
    )


def _law_provenance(law: SpacingLaw) -> dict:
    d = {"kind": law.kind, "T": str(law.T)}
    if law.kind == "periodic":
        d["gamma"] = str(law.gamma)
    else:
        d.update(
            alpha=str(law.alpha),
            beta=str(law.beta),
            rho=str(law.rho),
            mu=str(law.mu),
        )
    return d


def icosagrid_cells(law: SpacingLaw, extent: int) -> CellSet:
    """Five-frame compound of the tetragrid under an arbitrary spacing law.

    Copy k is the frame-0 grid mapped by R5^k, the same construction as
    fibonacci_icosagrid but without committing to the Fibonacci law.
    """
    base = tetragrid_cells(law, extent)
    copies = [base]
    m = identity(3)
    for k in range(1, 5):
        m = mat_mul(R5_MATRIX, m)
        copies.append(base.transformed(m, grid_id=k))
    return copies[0].merged(
        *copies[1:],
        provenance={
            "construction": "icosagrid",
            "extent": extent,
            "law": _law_provenance(law),
            "copies": 5,
        },
    )


# the spacing used by the Fibonacci icosagrid: centering beta = 1/2 makes
# the offset chain odd-symmetric, which the five-frame compound needs
# because paired frames see each shared plane family from opposite sides
def fig_spacing_law() -> SpacingLaw:
    return SpacingLaw.fibonacci(T=1, alpha=0, beta=HALF)


def fibonacci_tetragrid(extent: int, grid_id: int = 0) -> CellSet:
    """Frame-0 tetragrid with Fibonacci plane spacing (two gaps, ratio tau)."""
    if extent < 1:
        raise ValueError("extent must be >= 1")
    law = fig_spacing_law()
    offs = grid_offsets(law, -extent, extent)
    cells = _frame_cells(offs, grid_id=grid_id)
    return CellSet(
        cells,
        provenance={
            "construction": "fibonacci_tetragrid",
            "extent": extent,
            "law": _law_provenance(law),
            # every family's planes reach offset max|t|, and a plane at
            # offset t sits |t|/sqrt(3) from the origin, so the sample
            # is complete inside this ball
            "coverage_radius": max(abs(float(t)) for t in offs)
            / math.sqrt(3.0),
        },
    )


def fibonacci_icosagrid(extent: int) -> CellSet:
    """Union of five golden-composed Fibonacci tetragrids.

    Copy k is the frame-0 Fibonacci tetragrid mapped by R5^k; the ten
    plane families of the compound run normal to icosagrid_normals().
    Every vertex is a Dirichlet integer per coordinate after scaling by
    FIG_DIRICHLET_SCALE.
    """
    base = fibonacci_tetragrid(extent)
    copies = [base]
    m = identity(3)
    for k in range(1, 5):
        m = mat_mul(R5_MATRIX, m)
        copies.append(base.transformed(m, grid_id=k))
    merged = copies[0].merged(
        *copies[1:],
        provenance={
            "construction": "fibonacci_icosagrid",
            "extent": extent,
            "law": _law_provenance(fig_spacing_law()),
            "copies": 5,
            "coverage_radius": base.provenance["coverage_radius"],
        },
    )
    return merged


def central_up_cells(cells: CellSet) -> CellSet:
    """The same-orientation cells sharing the origin, the 20G seed."""
    origin = (ZERO, ZERO, ZERO)
    return cells.filter(
        lambda c: c.orientation == "up" and origin in c.vertices
    )


def golden_composition(base: CellSet, rotation: Optional[Mat] = None) -> CellSet:
    """Compose five copies of a vertex-sharing base cluster.

    The default rotation is the exact 72-degree step about the composition
    axis, whose copy-to-copy relation about each shared threefold axis is
    the golden rotation (modulo the face's 60-degree symmetry). Passing an
    explicit rotation composes with that instead; the identity collapses
    all copies onto the base.
    """
    if len(base) == 0:
        raise ValueError("empty base cluster")
    common: Optional[FrozenSet] = None
    for c in base.cells:
        vs = frozenset(c.vertices)
        common = vs if common is None else (common & vs)
    if not common:
        raise ValueError("base cells do not share a common vertex")
    rot = R5_MATRIX if rotation is None else rotation
    copies = [base]
    m = identity(3)
    for k in range(1, 5):
        m = mat_mul(rot, m)
        copies.append(base.transformed(m, grid_id=k))
    return copies[0].merged(
        *copies[1:],
        provenance={
            "construction": "golden_composition",
            "base_cells": len(base),
            "copies": 5,
        },
    )


def chirality_split(cells: CellSet) -> Tuple[CellSet, CellSet]:
    """Partition an oriented cell set into its two chiralities."""
    if any(c.chirality == "both" for c in cells.cells):
        raise ValueError(
            "cells lack orientation provenance; cannot split chirality"
        )
    left = cells.filter(lambda c: c.chirality == "left")
    right = cells.filter(lambda c: c.chirality == "right")
    return left, right


# ---------------------------------------------------------------------------
# plane classes


def canonical_direction(v: Sequence) -> tuple:
    """Projective canonical form: scale so the first nonzero entry is 1."""
    lead = None
    for c in v:
        if c:
            lead = c
            break
    if lead is None:
        raise ValueError("zero vector has no direction")
    return tuple(c / lead for c in v)


def face_plane_classes(cells: CellSet) -> Dict[tuple, int]:
    """Census of parallel classes over all cell face planes."""
    census: Dict[tuple, int] = {}
    for c in cells.cells:
        for f in c.faces():
            n = cross(vsub(f[1], f[0]), vsub(f[2], f[0]))
            key = canonical_direction(n)
            census[key] = census.get(key, 0) + 1
    return census


def plane_class_count(cells: CellSet) -> int:
    """Number of distinct parallel classes among all face planes."""
    if len(cells) == 0:
        raise ValueError("empty cell set")
    return len(face_plane_classes(cells))


# ---------------------------------------------------------------------------
# the evenly distributed reference cluster (exact sqrt-2 extension scalars)


class Sqrt2Ext:
    """p + q sqrt(2) with golden p, q: scalars for the reference cluster.

    The mirror-symmetric tetra orientation splits its height and its
    face-plane radius between sqrt(2)-rational and rational parts, so this
    small quadratic extension is needed for exact plane-class counting.
    """

    __slots__ = ("p", "q")

    def __init__(self, p=0, q=0):
        gp = p if isinstance(p, GoldenNum) else as_golden(p)
        gq = q if isinstance(q, GoldenNum) else as_golden(q)
        if gp is None or gq is None:
            raise TypeError("Sqrt2Ext components must be golden or rational")
        self.p = gp
        self.q = gq

    @staticmethod
    def _coerce(v) -> Optional["Sqrt2Ext"]:
        if isinstance(v, Sqrt2Ext):
            return v
        g = as_golden(v)
        return None if g is None else Sqrt2Ext(g, ZERO)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Sqrt2Ext(self.p + o.p, self.q + o.q)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Sqrt2Ext(self.p - o.p, self.q - o.q)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Sqrt2Ext(o.p - self.p, o.q - self.q)

    def __neg__(self):
        return Sqrt2Ext(-self.p, -self.q)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Sqrt2Ext(
            self.p * o.p + 2 * (self.q * o.q), self.p * o.q + self.q * o.p
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        den = o.p * o.p - 2 * (o.q * o.q)
        if not den:
            raise ZeroDivisionError("division by zero Sqrt2Ext")
        num = self * Sqrt2Ext(o.p, -o.q)
        return Sqrt2Ext(num.p / den, num.q / den)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.p == o.p and self.q == o.q

    def __hash__(self):
        if self.q == ZERO:
            return hash(self.p)
        return hash((self.p, self.q))

    def __bool__(self):
        return bool(self.p) or bool(self.q)

    def __float__(self):
        return float(self.p) + float(self.q) * 1.4142135623730951

    def __repr__(self):
        return f"Sqrt2Ext({self.p!r}, {self.q!r})"


def even_reference_cluster() -> CellSet:
    """Twenty mirror-symmetric tetrahedra sharing the origin, one per
    threefold axis, forming the evenly distributed reference cluster.

    Each tetra has its far-face vertices in the mirror planes through its
    axis, so the full cluster carries the achiral icosahedral symmetry; no
    two side faces of different tetrahedra are parallel, which is what
    drives the plane-class count up to 70.
    """
    d: Vec = (ONE, ONE, ONE)
    mirrors = (
        (ONE, SIGMA, -TAU),
        (-TAU, ONE, SIGMA),
        (SIGMA, -TAU, ONE),
    )
    half = Sqrt2Ext(ZERO, GoldenNum(Fraction(1, 2)))  # sqrt(2)/2
    verts: List[tuple] = [
        (Sqrt2Ext(ZERO), Sqrt2Ext(ZERO), Sqrt2Ext(ZERO))
    ]
    for mu in mirrors:
        c = cross(d, mu)
        w = tuple(
            Sqrt2Ext(2 * dk) + half * ck for dk, ck in zip(d, c)
        )
        verts.append(w)
    base = TetraCell(
        vertices=_sorted_vertices(verts),
        orientation="up",
        grid_id=-1,
        chirality="both",
    )
    cells = [base.transformed(m) for m in icosahedral_rotations()]
    return CellSet(
        cells,
        provenance={"construction": "even_reference_cluster", "copies": 20},
    )


# ---------------------------------------------------------------------------
# twenty-group detection


def _signed_nodes() -> Tuple[Vec, ...]:
    base = icosagrid_normals()
    return base + tuple(tuple(-x for x in n) for n in base)


def _node_from_apex(cell: TetraCell, v: Vec) -> Optional[Vec]:
    """The threefold node the cell points along as seen from vertex v.

    Exact: centroid - v = (S/4) node with S = edge*sqrt(2) > 0, so the
    test compares squares coordinatewise plus signs.
    """
    d = vsub(cell.centroid(), v)
    s2 = 2 * cell.edge_sqs()[0]
    for node in _signed_nodes():
        hit = True
        for di, ni in zip(d, node):
            if (4 * di) * (4 * di) != s2 * (ni * ni) or di.sign() * ni.sign() < 0:
                hit = False
                break
        if hit:
            return node
    return None


def find_twenty_groups(cells: CellSet) -> List[Tuple[Vec, str, CellSet]]:
    """Centers where twenty same-chirality cells meet in a twenty-group.

    At a candidate vertex the incident cells of one chirality must point
    along all twenty threefold nodes (sizes may differ node to node); the
    covering cluster must then have 61 distinct vertices and 10 face-plane
    classes. Returns (center, chirality, cluster) triples.
    """
    incident: Dict[Tuple[str, Vec], List[TetraCell]] = {}
    for c in cells.cells:
        for v in c.vertices:
            incident.setdefault((c.chirality, v), []).append(c)
    out = []
    for (chir, v), cs in sorted(
        incident.items(), key=lambda kv: (kv[0][0], to_floats(kv[0][1]))
    ):
        if len(cs) < 20:
            continue
        per_node: Dict[Vec, TetraCell] = {}
        for c in cs:
            node = _node_from_apex(c, v)
            if node is not None and node not in per_node:
                per_node[node] = c
        if len(per_node) != 20:
            continue
        cluster = CellSet(
            per_node.values(), provenance={"construction": "twenty_group"}
        )
        if len(cluster.points) != 61:
            continue
        if plane_class_count(cluster) != 10:
            continue
        out.append((v, chir, cluster))
    return out
