"""Point-pattern diagnostics: diffraction images, vertex stars, edge
crossings, cell centers.

Diffraction is a direct structure-factor sum (no FFT: the patterns are
aperiodic and the point counts are small), normalized so the central
intensity is exactly 1. The k-samples are chunked at a fixed size and the
chunks farmed out to a thread pool; because every chunk is reduced
internally in a fixed order and chunks never interact, the output bytes do
not depend on the thread count.

Vertex configurations are compared up to the 60 rotations of the chiral
icosahedral group, following the convention that mirror-image stars are
distinct. The edge graph used is the one spanned by the largest cell
family present: in a Fibonacci tetragrid compound that family is the one
whose cells span a long plane gap in every family, the same cells that
participate in golden composition, and its graph is the one realizing the
degree bounds 3..60.
"""

from __future__ import annotations

import math
import os
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .golden import GoldenNum, ZERO, as_golden
from .grids3d import CellSet, TetraCell, icosahedral_rotations
from .kernels import structure_factor_chunk
from .linalg import Vec, cross, dot, mat_vec, norm2, vadd, vscale, vsub
from .pointset import PointSet3

__all__ = [
    "AXIS_DIRECTIONS",
    "CrossingCensus",
    "DiffractionImage",
    "EdgeCrossing",
    "VertexCensus",
    "VertexConfig",
    "diffraction_image",
    "edge_crossing_catalog",
    "rotational_invariance_rms",
    "tetra_center_points",
    "thread_count",
    "vertex_configurations",
]

# k-rows per kernel call; fixed so scheduling cannot reorder reductions
_CHUNK = 2048

_TAU_F = (1.0 + math.sqrt(5.0)) / 2.0

# named symmetry axes of the icosagrid frame used throughout: the fivefold
# composition axis, a threefold cube diagonal, a twofold coordinate axis
AXIS_DIRECTIONS: Dict[str, Tuple[float, float, float]] = {
    "5-fold": (1.0, 0.0, _TAU_F),
    "3-fold": (1.0, 1.0, 1.0),
    "2-fold": (0.0, 0.0, 1.0),
}


def thread_count(threads: Optional[int] = None) -> int:
    """Worker count: explicit argument, else QCFORGE_THREADS, else 1."""
    if threads is None:
        env = os.environ.get("QCFORGE_THREADS", "")
        threads = int(env) if env.strip() else 1
    if threads < 1:
        raise ValueError("thread count must be >= 1")
    return threads


@dataclass(frozen=True, eq=False)
class DiffractionImage:
    """|structure factor|^2 sampled on a square k-grid.

    The grid lies in the plane orthogonal to axis_vector, spanned by the
    orthonormal pair (basis_u, basis_v); sample (i, j) sits at
    k = kval(i) * basis_u + kval(j) * basis_v with
    kval(i) = (i - resolution//2) * (2 * extent / resolution), so k = 0 is
    always on the grid. intensity is normalized by n_points^2: the center
    sample is exactly 1 and is the global maximum.
    """

    axis: str
    axis_vector: Tuple[float, float, float]
    basis_u: Tuple[float, float, float]
    basis_v: Tuple[float, float, float]
    extent: float
    resolution: int
    n_points: int
    intensity: np.ndarray

    def k_values(self) -> np.ndarray:
        step = 2.0 * self.extent / self.resolution
        return (np.arange(self.resolution) - self.resolution // 2) * step

    def center_index(self) -> int:
        return self.resolution // 2


def _unit(v: Sequence[float]) -> np.ndarray:
    a = np.asarray(v, dtype=np.float64)
    n = math.sqrt(float(a @ a))
    if n == 0.0:
        raise ValueError("axis must be nonzero")
    return a / n


def _plane_basis(w: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    # seed with the coordinate axis least aligned with w (ties: lowest index)
    seed = np.zeros(3)
    seed[int(np.argmin(np.abs(w)))] = 1.0
    u = np.cross(seed, w)
    u /= math.sqrt(float(u @ u))
    v = np.cross(w, u)
    return u, v


def _as_float_points(points) -> np.ndarray:
    if isinstance(points, PointSet3):
        return points.floats()
    if isinstance(points, CellSet):
        return points.points.floats()
    arr = np.asarray(
        [[float(c) for c in p] for p in points], dtype=np.float64
    )
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError("points must be 3-dimensional")
    return arr


def diffraction_image(
    points,
    axis: Union[str, Sequence[float]] = "5-fold",
    extent: float = 15.0,
    resolution: int = 256,
    threads: Optional[int] = None,
    basis: Optional[Tuple[Sequence[float], Sequence[float]]] = None,
) -> DiffractionImage:
    """Structure-factor intensity on a 2D k-grid orthogonal to axis.

    axis may be one of the AXIS_DIRECTIONS labels or an explicit direction.
    basis, when given, overrides the in-plane sampling directions (both
    must be unit vectors orthogonal to the axis and to each other); it is
    how rotational_invariance_rms resamples the same pattern in a rotated
    frame without interpolating.
    """
    xyz = _as_float_points(points)
    n = xyz.shape[0]
    if n < 1:
        raise ValueError("need at least one point")
    if resolution < 16:
        raise ValueError("resolution must be >= 16")
    if not (extent > 0.0):
        raise ValueError("extent must be positive")

    if isinstance(axis, str):
        try:
            axis_vec = AXIS_DIRECTIONS[axis]
        except KeyError:
            raise ValueError(
                f"unknown axis label {axis!r}; known: "
                f"{sorted(AXIS_DIRECTIONS)}"
            ) from None
        label = axis
    else:
        axis_vec = tuple(float(c) for c in axis)
        label = "custom"
    w = _unit(axis_vec)
    if basis is None:
        u, v = _plane_basis(w)
    else:
        u = np.asarray(basis[0], dtype=np.float64)
        v = np.asarray(basis[1], dtype=np.float64)
        for name, b in (("u", u), ("v", v)):
            if abs(float(b @ b) - 1.0) > 1e-9 or abs(float(b @ w)) > 1e-9:
                raise ValueError(f"basis {name} must be unit and orthogonal to axis")
        if abs(float(u @ v)) > 1e-9:
            raise ValueError("basis vectors must be orthogonal")

    res = resolution
    step = 2.0 * extent / res
    kvals = (np.arange(res) - res // 2) * step
    kpts = (
        kvals[:, None, None] * u[None, None, :]
        + kvals[None, :, None] * v[None, None, :]
    ).reshape(res * res, 3)

    amps = np.empty(res * res, dtype=np.complex128)
    spans = [(i, min(i + _CHUNK, res * res)) for i in range(0, res * res, _CHUNK)]
    workers = thread_count(threads)
    if workers == 1:
        for lo, hi in spans:
            amps[lo:hi] = structure_factor_chunk(kpts[lo:hi], xyz)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futs = [
                (lo, hi, pool.submit(structure_factor_chunk, kpts[lo:hi], xyz))
                for lo, hi in spans
            ]
            for lo, hi, f in futs:
                amps[lo:hi] = f.result()

    inten = (amps.real * amps.real + amps.imag * amps.imag) / float(n * n)
    inten = inten.reshape(res, res)
    return DiffractionImage(
        axis=label,
        axis_vector=(float(w[0]), float(w[1]), float(w[2])),
        basis_u=(float(u[0]), float(u[1]), float(u[2])),
        basis_v=(float(v[0]), float(v[1]), float(v[2])),
        extent=float(extent),
        resolution=res,
        n_points=n,
        intensity=inten,
    )


def _rodrigues(axis: np.ndarray, angle_rad: float) -> np.ndarray:
    x, y, z = axis
    c = math.cos(angle_rad)
    s = math.sin(angle_rad)
    t = 1.0 - c
    return np.array(
        [
            [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
            [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
            [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
        ]
    )


def rotational_invariance_rms(
    points,
    image: DiffractionImage,
    angle_degrees: float,
    threads: Optional[int] = None,
) -> float:
    """Relative RMS between an image and the same pattern resampled in a
    frame rotated about the image axis.

    Rotating the sampling basis instead of the pixel raster keeps the
    comparison interpolation-free: sample (i, j) of the second image sits
    exactly at R k(i, j). A point set invariant under the rotation gives a
    value at rounding level; 5-fold icosagrid patterns land around 1e-13.
    """
    w = np.asarray(image.axis_vector)
    rot = _rodrigues(w, math.radians(angle_degrees))
    u2 = rot @ np.asarray(image.basis_u)
    v2 = rot @ np.asarray(image.basis_v)
    other = diffraction_image(
        points,
        axis=image.axis_vector,
        extent=image.extent,
        resolution=image.resolution,
        threads=threads,
        basis=(u2, v2),
    )
    diff = image.intensity - other.intensity
    denom = math.sqrt(float(np.mean(image.intensity**2)))
    return math.sqrt(float(np.mean(diff**2))) / denom


# ---------------------------------------------------------------------------
# vertex configurations


@dataclass(frozen=True)
class VertexConfig:
    """A vertex with its star of outgoing unit-family edge directions.

    star is the canonical signature: the lexicographically minimal
    encoding of the direction multiset over the 60 chiral icosahedral
    rotations. Mirror images are distinct.
    """

    center: Vec
    degree: int
    star: tuple


@dataclass(frozen=True)
class VertexCensus:
    counts: Dict[tuple, int]
    representatives: Tuple[VertexConfig, ...]
    min_degree: int
    max_degree: int
    direction_classes: int
    unit_edge_sq: GoldenNum
    n_vertices: int


def _cell_edges(cells: Iterable[TetraCell], edge_sq: GoldenNum):
    seen = set()
    for c in cells:
        if c.edge_sqs()[0] != edge_sq:
            continue
        v = c.vertices
        for i in range(4):
            for j in range(i + 1, 4):
                e = (v[i], v[j])
                if e not in seen:
                    seen.add(e)
                    yield e


def _coord_key(x: GoldenNum) -> tuple:
    return (
        x.a.numerator,
        x.a.denominator,
        x.b.numerator,
        x.b.denominator,
    )


def _vec_key(v: Vec) -> tuple:
    return tuple(k for c in v for k in _coord_key(c))


def vertex_configurations(
    cells: CellSet,
    unit_edge_sq: Optional[GoldenNum] = None,
) -> VertexCensus:
    """Census of vertex stars in the unit-family edge graph.

    unit_edge_sq selects the cell family by squared edge length; the
    default is the largest family present (see the module docstring). Two
    stars count as the same configuration when a chiral icosahedral
    rotation carries one direction multiset to the other.
    """
    cell_list = list(cells.cells) if isinstance(cells, CellSet) else list(cells)
    if not cell_list:
        raise ValueError("empty cell set")
    if unit_edge_sq is None:
        unit_edge_sq = max(
            (c.edge_sqs()[0] for c in cell_list),
            key=lambda g: float(g),
        )
    else:
        coerced = as_golden(unit_edge_sq)
        if coerced is None:
            raise TypeError("unit_edge_sq must be a golden number or rational")
        unit_edge_sq = coerced

    stars: Dict[Vec, List[Vec]] = defaultdict(list)
    undirected = set()
    for a, b in _cell_edges(cell_list, unit_edge_sq):
        d = vsub(b, a)
        stars[a].append(d)
        stars[b].append(tuple(-c for c in d))
        undirected.add(min(d, tuple(-c for c in d)))
    if not stars:
        raise ValueError(
            f"no cell of squared edge {unit_edge_sq} present"
        )

    rots = icosahedral_rotations()
    vocab = sorted({tuple(d) for ds in stars.values() for d in ds}, key=_vec_key)
    index = {d: i for i, d in enumerate(vocab)}

    # fast path: direction vocabulary closed under the group, so each
    # rotation is a permutation of small integer ids
    perms: Optional[List[Tuple[int, ...]]] = []
    for m in rots:
        row = []
        for d in vocab:
            md = tuple(mat_vec(m, d))
            j = index.get(md)
            if j is None:
                perms = None
                break
            row.append(j)
        if perms is None:
            break
        perms.append(tuple(row))

    def canon(ds: List[Vec]) -> tuple:
        if perms is not None:
            ids = [index[tuple(d)] for d in ds]
            return min(tuple(sorted(p[i] for i in ids)) for p in perms)
        return min(
            tuple(sorted(_vec_key(mat_vec(m, d)) for d in ds)) for m in rots
        )

    counts: Dict[tuple, int] = {}
    reps: Dict[tuple, VertexConfig] = {}
    memo: Dict[tuple, tuple] = {}
    dmin = dmax = None
    for center in sorted(stars, key=_vec_key):
        ds = stars[center]
        raw = tuple(sorted(_vec_key(d) for d in ds))
        sig = memo.get(raw)
        if sig is None:
            sig = canon(ds)
            memo[raw] = sig
        counts[sig] = counts.get(sig, 0) + 1
        if sig not in reps:
            reps[sig] = VertexConfig(center=center, degree=len(ds), star=sig)
        deg = len(ds)
        dmin = deg if dmin is None else min(dmin, deg)
        dmax = deg if dmax is None else max(dmax, deg)

    return VertexCensus(
        counts=counts,
        representatives=tuple(reps[s] for s in sorted(reps)),
        min_degree=dmin,
        max_degree=dmax,
        direction_classes=len(undirected),
        unit_edge_sq=unit_edge_sq,
        n_vertices=len(stars),
    )


# ---------------------------------------------------------------------------
# edge crossings


@dataclass(frozen=True)
class EdgeCrossing:
    """An interior intersection of two cell edges.

    p and q are the division ratios along the two segments, stored in
    canonical (sorted) order so the record does not depend on which edge
    came first; both are strictly between 0 and 1.
    """

    point: Vec
    p: GoldenNum
    q: GoldenNum


@dataclass(frozen=True)
class CrossingCensus:
    crossings: Tuple[EdgeCrossing, ...]
    counts: Dict[Tuple[GoldenNum, GoldenNum], int]


def _golden_lt(x: GoldenNum, y: GoldenNum) -> bool:
    return (y - x).sign() > 0


def edge_crossing_catalog(cells: CellSet) -> CrossingCensus:
    """All interior pairwise intersections of cell edges, exactly.

    Edges are the tetrahedron edges of every cell (all families). A float
    prescreen with wide margins culls the candidate pairs; every survivor
    is solved in exact golden arithmetic, so the catalog itself carries no
    float error. Pairs meeting at a shared endpoint are not crossings.
    """
    cell_list = list(cells.cells) if isinstance(cells, CellSet) else list(cells)
    edges: List[Tuple[Vec, Vec]] = []
    seen = set()
    for c in cell_list:
        v = c.vertices
        for i in range(4):
            for j in range(i + 1, 4):
                e = (v[i], v[j])
                if e not in seen:
                    seen.add(e)
                    edges.append(e)

    a = np.asarray(
        [[float(c) for c in e[0]] for e in edges], dtype=np.float64
    )
    b = np.asarray(
        [[float(c) for c in e[1]] for e in edges], dtype=np.float64
    )
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    h = float(np.max(np.linalg.norm(b - a, axis=1))) if edges else 1.0

    buckets: Dict[Tuple[int, int, int], List[int]] = defaultdict(list)
    for idx in range(len(edges)):
        c0 = np.floor(lo[idx] / h).astype(int)
        c1 = np.floor(hi[idx] / h).astype(int)
        for cx in range(c0[0], c1[0] + 1):
            for cy in range(c0[1], c1[1] + 1):
                for cz in range(c0[2], c1[2] + 1):
                    buckets[(cx, cy, cz)].append(idx)

    pairs = set()
    for members in buckets.values():
        for ii in range(len(members)):
            for jj in range(ii + 1, len(members)):
                e1, e2 = members[ii], members[jj]
                if e1 > e2:
                    e1, e2 = e2, e1
                pairs.add((e1, e2))

    crossings: List[EdgeCrossing] = []
    counts: Counter = Counter()
    eps = 1e-7
    for e1, e2 in sorted(pairs):
        # AABB overlap
        if np.any(lo[e1] > hi[e2] + eps) or np.any(lo[e2] > hi[e1] + eps):
            continue
        r = b[e1] - a[e1]
        s = b[e2] - a[e2]
        t = a[e2] - a[e1]
        nf = np.cross(r, s)
        n2 = float(nf @ nf)
        if n2 < 1e-9:
            continue  # parallel (exact parallels are exact zeros here)
        if abs(float(t @ nf)) > eps:
            continue  # skew
        pf = float(np.cross(t, s) @ nf) / n2
        qf = float(np.cross(t, r) @ nf) / n2
        if not (-eps < pf < 1.0 + eps and -eps < qf < 1.0 + eps):
            continue
        # exact stage
        A, B = edges[e1]
        C, D = edges[e2]
        re = vsub(B, A)
        se = vsub(D, C)
        te = vsub(C, A)
        ne = cross(re, se)
        nn = norm2(ne)
        if nn.sign() == 0:
            continue
        if dot(te, ne).sign() != 0:
            continue
        p = dot(cross(te, se), ne) / nn
        q = dot(cross(te, re), ne) / nn
        if p.sign() <= 0 or (p - 1).sign() >= 0:
            continue
        if q.sign() <= 0 or (q - 1).sign() >= 0:
            continue
        point = vadd(A, vscale(p, re))
        if point != vadd(C, vscale(q, se)):
            raise AssertionError("inconsistent exact intersection")
        if _golden_lt(q, p):
            p, q = q, p
        crossings.append(EdgeCrossing(point=point, p=p, q=q))
        counts[(p, q)] += 1

    return CrossingCensus(crossings=tuple(crossings), counts=dict(counts))


# ---------------------------------------------------------------------------
# cell centers


def tetra_center_points(cells: CellSet) -> PointSet3:
    """Exact centroids of all cells, deduplicated.

    Concentric opposite-orientation cell pairs (they do occur in icosagrid
    compounds) collapse to a single point here; single-frame grids and
    single-chirality families have no such twins.
    """
    cell_list = list(cells.cells) if isinstance(cells, CellSet) else list(cells)
    if not cell_list:
        raise ValueError("empty cell set")
    return PointSet3(c.centroid() for c in cell_list)
