"""Subset verification between compound quasicrystals and the icosagrid.

The compound point sets produced by the 4D slicing pipeline live on the
same golden-field coordinates as the Fibonacci icosagrid, so containment
questions can be decided exactly.  The checks here normalize two point
sets against their central vertex clusters, restrict the comparison to
the region where both samples are complete, and then test exact
membership.  Enrichment rebuilds each attributed tetragrid frame in
full, which by construction turns any frame-complete compound into the
icosagrid itself.  The convergence sweep quantifies how the five-copy
composition locks in at the golden rotation and nowhere else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from .golden import GoldenNum, ONE, TAU, ZERO
from .grids3d import (
    CellSet,
    R5_MATRIX,
    central_up_cells,
    fibonacci_tetragrid,
    icosahedral_rotations,
)
from .linalg import Mat, Vec, identity, mat_mul, mat_vec, norm2
from .pointset import PointSet3

__all__ = [
    "AlignmentReport",
    "MissingProvenance",
    "NoCentral20G",
    "align_and_subset_check",
    "convergence_sweep",
    "enrich",
    "golden_rotation_degrees",
]


class NoCentral20G(LookupError):
    """A point set lacks the central cluster needed as alignment anchor."""


class MissingProvenance(ValueError):
    """Cells cannot be attributed to tetragrid frames."""


# one icosagrid cell edge; comparison windows shrink by this margin so
# truncation near a sample's boundary can never fake a verdict
UNIT_CELL_MARGIN = float(TAU) / math.sqrt(2.0)


@dataclass(frozen=True)
class AlignmentReport:
    """Outcome of an anchored subset check.

    transform holds the normalization applied to the inner set (scale,
    rotation, translation and whether it was exact); window records the
    coverage radii and the interior actually compared, because a verdict
    is only meaningful together with the region it was decided on.
    verdict is "subset" iff unmatched is empty.
    """

    transform: dict
    matched: int
    unmatched: Tuple[Tuple[float, float, float], ...]
    verdict: str
    window: dict

    def to_json_dict(self) -> dict:
        return {
            "transform": self.transform,
            "matched": self.matched,
            "unmatched": [list(p) for p in self.unmatched],
            "verdict": self.verdict,
            "window": self.window,
        }


PointsLike = Union[PointSet3, CellSet]


def _coerce(obj: PointsLike) -> Tuple[PointSet3, Optional[float]]:
    if isinstance(obj, CellSet):
        cov = obj.provenance.get("coverage_radius")
        return obj.points, (float(cov) if cov is not None else None)
    if isinstance(obj, PointSet3):
        return obj, None
    raise TypeError(f"expected a point or cell set, got {type(obj)!r}")


def _max_radius(points: PointSet3) -> float:
    best = 0.0
    for p in points:
        r = math.sqrt(sum(float(x) ** 2 for x in p))
        if r > best:
            best = r
    return best


_ORIGIN = (ZERO, ZERO, ZERO)


def _central_anchor(points: PointSet3):
    """The origin plus its equidistant first shell, 12 points or more.

    This is the point-level signature of a central twenty-group: the
    shared apex and the equal-radius ring its cells pin around it.
    """
    if _ORIGIN not in points:
        raise NoCentral20G("no vertex at the center")
    best: Optional[GoldenNum] = None
    best_f = math.inf
    for p in points:
        f = sum(float(x) ** 2 for x in p)
        if f < 1e-18:
            continue
        if f < best_f - 1e-9:
            best_f = f
            best = norm2(p)
    if best is None:
        raise NoCentral20G("center has no neighbors")
    shell = [p for p in points if norm2(p) == best]
    if len(shell) < 12:
        raise NoCentral20G(
            f"first shell has {len(shell)} vertices, need at least 12"
        )
    return best, shell


def _exact_sqrt(ratio: GoldenNum) -> Optional[GoldenNum]:
    """Square root in the golden field for the ratios that occur here."""
    candidates = [ONE, TAU, TAU * TAU, TAU ** 3, ONE / TAU, ONE / (TAU * TAU)]
    half = GoldenNum(1) / 2
    candidates += [c * 2 for c in candidates] + [c * half for c in candidates]
    for c in candidates:
        if c * c == ratio:
            return c
    return None


def align_and_subset_check(
    inner: PointsLike,
    outer: PointsLike,
    margin: float = UNIT_CELL_MARGIN,
) -> AlignmentReport:
    """Anchor, normalize, and test exact containment of inner in outer.

    Both sets must carry a central-cluster anchor.  The inner set is
    scaled by the ratio of first-shell radii and, if needed, rotated by
    an icosahedral group element that maps its shell into the outer
    shell.  Containment is then decided by exact golden-field membership
    inside the common interior: the smaller of the two coverage radii
    minus one cell-edge margin.  Witness points are reported in the
    outer set's coordinates.
    """
    pts_i, cov_i = _coerce(inner)
    pts_o, cov_o = _coerce(outer)
    if len(pts_i) == 0 or len(pts_o) == 0:
        raise ValueError("subset check needs two nonempty point sets")
    norm_i, shell_i = _central_anchor(pts_i)
    norm_o, shell_o = _central_anchor(pts_o)

    scale = _exact_sqrt(norm_o / norm_i)
    exact = scale is not None
    scale_f = math.sqrt(float(norm_o) / float(norm_i))
    members_o = pts_o.members()
    shell_o_set = set(shell_o)

    rotation: Optional[Mat] = None
    if exact:
        scaled_shell = [tuple(x * scale for x in p) for p in shell_i]
        if all(p in shell_o_set for p in scaled_shell):
            rotation = identity(3)
        else:
            for m in icosahedral_rotations():
                if all(
                    tuple(mat_vec(m, p)) in shell_o_set for p in scaled_shell
                ):
                    rotation = m
                    break
        if rotation is None:
            raise NoCentral20G("anchor shells cannot be aligned")

    if cov_i is None:
        cov_i = _max_radius(pts_i)
    if cov_o is None:
        cov_o = _max_radius(pts_o)
    interior = max(min(cov_i * scale_f, cov_o) - margin, 0.0)

    matched = 0
    unmatched: List[Tuple[float, float, float]] = []
    if exact:
        for p in pts_i:
            q = tuple(mat_vec(rotation, tuple(x * scale for x in p)))
            fq = tuple(float(x) for x in q)
            if fq[0] ** 2 + fq[1] ** 2 + fq[2] ** 2 > interior * interior:
                continue
            if q in members_o:
                matched += 1
            else:
                unmatched.append(fq)
    else:
        # float fallback: no exact field relation between the two scales
        fo = sorted(tuple(float(x) for x in p) for p in pts_o)
        for p in pts_i:
            fq = tuple(float(x) * scale_f for x in p)
            if fq[0] ** 2 + fq[1] ** 2 + fq[2] ** 2 > interior * interior:
                continue
            hit = any(
                abs(fq[0] - w[0]) < 1e-9
                and abs(fq[1] - w[1]) < 1e-9
                and abs(fq[2] - w[2]) < 1e-9
                for w in fo
            )
            if hit:
                matched += 1
            else:
                unmatched.append(fq)

    unmatched.sort(key=lambda w: w[0] ** 2 + w[1] ** 2 + w[2] ** 2)
    report = AlignmentReport(
        transform={
            "scale": str(scale) if exact else scale_f,
            "scale_float": scale_f,
            "rotation_identity": exact and rotation == identity(3),
            "translation": (0.0, 0.0, 0.0),
            "exact": exact,
        },
        matched=matched,
        unmatched=tuple(unmatched),
        verdict="subset" if not unmatched else "not_subset",
        window={
            "inner_coverage": cov_i,
            "outer_coverage": cov_o,
            "margin": margin,
            "interior_radius": interior,
        },
    )
    return report


def enrich(cqc: CellSet, extent: int = 6) -> CellSet:
    """Complete every attributed frame of a compound to a full tetragrid.

    Each distinct grid_id names one golden-composition copy; the partial
    plane families a cross-section inherited from its frame are replaced
    by the frame's full Fibonacci plane sets at the requested extent and
    the cells are regenerated.  A compound carrying all five frames
    therefore becomes the Fibonacci icosagrid itself.  Idempotent, and
    monotone on frame-complete compounds.
    """
    frames = sorted({c.grid_id for c in cqc.cells})
    if not frames:
        raise MissingProvenance("empty compound")
    if any(k < 0 or k > 4 for k in frames):
        raise MissingProvenance(
            f"cells carry no tetragrid frame attribution: {frames}"
        )
    parts: List[CellSet] = []
    m: Mat = identity(3)
    for k in range(5):
        if k:
            m = mat_mul(R5_MATRIX, m)
        if k in frames:
            frame = fibonacci_tetragrid(extent, grid_id=k)
            if k:
                frame = frame.transformed(m, grid_id=k)
            parts.append(frame)
    out = parts[0].merged(
        *parts[1:],
        provenance={
            "construction": "enrich",
            "source": cqc.provenance.get("construction"),
            "extent": extent,
            "frames": tuple(frames),
        },
    )
    return out


def golden_rotation_degrees() -> float:
    """Angle of the golden rotation, arccos((3 tau - 1)/4), in degrees."""
    return math.degrees(math.acos(float((3 * TAU - 1) / 4)))


def _rodrigues(axis, angle: float):
    ux, uy, uz = axis
    c = math.cos(angle)
    s = math.sin(angle)
    d = 1.0 - c
    return (
        (c + ux * ux * d, ux * uy * d - uz * s, ux * uz * d + uy * s),
        (uy * ux * d + uz * s, c + uy * uy * d, uy * uz * d - ux * s),
        (uz * ux * d - uy * s, uz * uy * d + ux * s, c + uz * uz * d),
    )


def _greedy_bijective(a, b) -> float:
    """Sum of greedily matched pairwise distances between equal-size sets."""
    pairs = sorted(
        (math.dist(p, q), i, j)
        for i, p in enumerate(a)
        for j, q in enumerate(b)
    )
    used_i = set()
    used_j = set()
    total = 0.0
    for d, i, j in pairs:
        if i in used_i or j in used_j:
            continue
        used_i.add(i)
        used_j.add(j)
        total += d
        if len(used_i) == len(a):
            break
    return total


def convergence_sweep(
    angle_steps: int, extent: int = 2
) -> Tuple[Tuple[float, float], ...]:
    """Mismatch of the five-copy composition as the twist angle grows.

    The base cluster is one frame's central cell group.  Copy k is the
    base rotated about the composition axis by k fifths of the sweep
    angle; the reference is the exact golden composition.  The metric
    sums, over copies, the bijectively matched nearest-vertex distances
    between the copy's off-center cluster vertices and the reference
    copy's.  Zero copies of rotation misalign every off-center vertex,
    so the metric starts strictly positive and reaches zero only when
    the sweep hits the golden rotation, where copy-to-copy relations
    about the shared threefold axes become the golden rotation itself.
    Angles are reported in degrees of the equivalent threefold twist.
    """
    if angle_steps < 2:
        raise ValueError("angle_steps must be at least 2")
    base = central_up_cells(fibonacci_tetragrid(extent))
    if len(base) != 4:
        raise ValueError(f"central cluster has {len(base)} cells, need 4")
    outer = [
        tuple(float(x) for x in p)
        for p in base.points
        if p != _ORIGIN
    ]

    refs = []
    m: Mat = identity(3)
    for k in range(5):
        if k:
            m = mat_mul(R5_MATRIX, m)
        refs.append(
            [tuple(float(x) for x in mat_vec(m, p)) for p in base.points
             if p != _ORIGIN]
        )

    axis_f = (1.0, 0.0, float(TAU))
    nrm = math.sqrt(sum(x * x for x in axis_f))
    axis = tuple(x / nrm for x in axis_f)
    full = 2.0 * math.pi / 5.0
    out = []
    golden_deg = golden_rotation_degrees()
    for step in range(angle_steps):
        t = step / (angle_steps - 1)
        metric = 0.0
        for k in range(1, 5):
            rot = _rodrigues(axis, k * t * full)
            moved = [
                (
                    rot[0][0] * p[0] + rot[0][1] * p[1] + rot[0][2] * p[2],
                    rot[1][0] * p[0] + rot[1][1] * p[1] + rot[1][2] * p[2],
                    rot[2][0] * p[0] + rot[2][1] * p[1] + rot[2][2] * p[2],
                )
                for p in outer
            ]
            metric += _greedy_bijective(moved, refs[k])
        out.append((t * golden_deg, metric))
    return tuple(out)
