"""Exporters and importers for all artifact formats.

Every writer is deterministic: canonical point ordering, sorted JSON keys,
floats at 17 significant digits, LF newlines, no timestamps. JSON carries
exact coordinates as [a_num, a_den, b_num, b_den] integer quadruples (the
two rational components of a + b*t); all other formats carry floats.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .analysis import CrossingCensus, DiffractionImage, VertexCensus
from .golden import GoldenNum
from .grids3d import CellSet, TetraCell
from .linalg import Vec
from .multigrid import Tiling, to_cartesian
from .pointset import PointSet, PointSet3, PointSet4

__all__ = [
    "export_alignment_report",
    "export_cells",
    "export_crossing_census",
    "export_diffraction_csv",
    "export_diffraction_pgm",
    "export_plane_classes",
    "export_points",
    "export_sweep_csv",
    "export_tiling_json",
    "export_tiling_svg",
    "export_vertex_census",
    "import_cells",
    "import_points",
    "write_json",
]

POINT_FORMATS = ("xyz", "csv", "json", "obj")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _g_enc(x: GoldenNum) -> List[int]:
    return [
        x.a.numerator,
        x.a.denominator,
        x.b.numerator,
        x.b.denominator,
    ]


def _g_dec(v: Sequence[int]) -> GoldenNum:
    return GoldenNum(Fraction(v[0], v[1]), Fraction(v[2], v[3]))


def _vec_enc(v: Sequence[GoldenNum]) -> List[List[int]]:
    return [_g_enc(c) for c in v]


def _vec_dec(v: Sequence[Sequence[int]]) -> tuple:
    return tuple(_g_dec(c) for c in v)


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_json(path: str, obj) -> str:
    with open(path, "w", newline="\n") as fh:
        fh.write(_dump_json(_json_safe(obj)))
    return path


def _json_safe(value):
    """Provenance values into JSON types; exact numbers become quadruples."""
    if isinstance(value, GoldenNum):
        return {"golden": _g_enc(value)}
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


# ---------------------------------------------------------------------------
# point sets


def export_points(points: PointSet, format: str, path: str) -> str:
    """Write a point set; xyz and obj are 3D formats, json keeps exactness."""
    if format not in POINT_FORMATS:
        raise ValueError(
            f"unsupported format {format!r}; supported: {POINT_FORMATS}"
        )
    if len(points) == 0:
        raise ValueError("refusing to export an empty point set")
    if format in ("xyz", "obj") and points.dim != 3:
        raise ValueError(f"{format} export requires 3D points")

    if format == "json":
        payload = {
            "kind": "point_set",
            "dim": points.dim,
            "coordinate_encoding": "[a_num, a_den, b_num, b_den] for a + b*t",
            "points": [_vec_enc(p) for p in points],
        }
        return write_json(path, payload)

    rows = points.floats()
    lines: List[str] = []
    if format == "xyz":
        lines.append(str(len(points)))
        lines.append("quasicrystal point set")
        for r in rows:
            lines.append("X " + " ".join(_fmt(c) for c in r))
    elif format == "csv":
        lines.append(",".join(f"x{i}" for i in range(points.dim)))
        for r in rows:
            lines.append(",".join(_fmt(c) for c in r))
    else:  # obj
        for r in rows:
            lines.append("v " + " ".join(_fmt(c) for c in r))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def import_points(path: str) -> PointSet:
    with open(path) as fh:
        data = json.load(fh)
    if data.get("kind") != "point_set":
        raise ValueError(f"{path} does not hold a point set")
    pts = [_vec_dec(p) for p in data["points"]]
    cls = {3: PointSet3, 4: PointSet4}.get(data["dim"])
    if cls is None:
        return PointSet(pts, dim=data["dim"])
    return cls(pts)


# ---------------------------------------------------------------------------
# cell sets


def export_cells(cells: CellSet, path: str) -> str:
    payload = {
        "kind": "cell_set",
        "provenance": _json_safe(cells.provenance),
        "cells": [
            {
                "vertices": [_vec_enc(v) for v in c.vertices],
                "orientation": c.orientation,
                "grid_id": c.grid_id,
                "chirality": c.chirality,
            }
            for c in cells.cells
        ],
    }
    return write_json(path, payload)


def import_cells(path: str) -> CellSet:
    with open(path) as fh:
        data = json.load(fh)
    if data.get("kind") != "cell_set":
        raise ValueError(f"{path} does not hold a cell set")
    cells = [
        TetraCell(
            vertices=tuple(_vec_dec(v) for v in c["vertices"]),
            orientation=c["orientation"],
            grid_id=c["grid_id"],
            chirality=c["chirality"],
        )
        for c in data["cells"]
    ]
    return CellSet(cells, provenance=data.get("provenance") or {})


# ---------------------------------------------------------------------------
# 2D tilings


def export_tiling_json(tiling: Tiling, path: str) -> str:
    payload = {
        "kind": "tiling",
        "census": tiling.kind_census(),
        "cells": [
            {
                "kind": c.kind,
                "vertices": [_vec_enc(v) for v in c.vertices],
            }
            for c in tiling.cells
        ],
        "adjacency": [
            [a, b, [f, i]] for a, b, (f, i) in tiling.adjacency
        ],
    }
    return write_json(path, payload)


_TILE_FILL = {"prolate": "#7f9fc4", "oblate": "#d8b86a"}


def export_tiling_svg(tiling: Tiling, path: str, scale: float = 48.0) -> str:
    """Flat drawing of the rhombi, prolate and oblate fills distinguished."""
    if not tiling.cells:
        raise ValueError("refusing to draw an empty tiling")
    polys: List[Tuple[str, List[Tuple[float, float]]]] = []
    for c in tiling.cells:
        polys.append((c.kind, [to_cartesian(v) for v in c.vertices]))
    xs = [x for _, pts in polys for x, _ in pts]
    ys = [y for _, pts in polys for _, y in pts]
    pad = 0.05 * max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    x0, y0 = min(xs) - pad, min(ys) - pad
    w = (max(xs) - min(xs) + 2 * pad) * scale
    h = (max(ys) - min(ys) + 2 * pad) * scale

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1f}" '
        f'height="{h:.1f}" viewBox="0 0 {w:.1f} {h:.1f}">',
        f'<g stroke="#333333" stroke-width="{0.02 * scale:.3f}" '
        'stroke-linejoin="round">',
    ]
    for kind, pts in polys:
        # flip y so the drawing is not mirrored
        coords = " ".join(
            f"{(x - x0) * scale:.3f},{h - (y - y0) * scale:.3f}"
            for x, y in pts
        )
        lines.append(
            f'<polygon points="{coords}" fill="{_TILE_FILL[kind]}"/>'
        )
    lines.append("</g>")
    lines.append("</svg>")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


# ---------------------------------------------------------------------------
# diffraction


def export_diffraction_pgm(image: DiffractionImage, path: str) -> str:
    """Binary PGM, 16-bit big-endian, max-normalized, row-major."""
    inten = image.intensity
    peak = float(inten.max())
    if peak <= 0.0:
        raise ValueError("image has no intensity")
    scaled = np.round(inten / peak * 65535.0).astype(">u2")
    header = f"P5\n{image.resolution} {image.resolution}\n65535\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(scaled.tobytes())
    return path


def export_diffraction_csv(image: DiffractionImage, path: str) -> str:
    lines = ["# " + _dump_json(
        {
            "axis": image.axis,
            "axis_vector": [_fmt(c) for c in image.axis_vector],
            "basis_u": [_fmt(c) for c in image.basis_u],
            "basis_v": [_fmt(c) for c in image.basis_v],
            "extent": _fmt(image.extent),
            "n_points": image.n_points,
            "resolution": image.resolution,
        }
    ).replace("\n", " ").strip()]
    for row in image.intensity:
        lines.append(",".join(_fmt(x) for x in row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


# ---------------------------------------------------------------------------
# censuses and reports


def export_vertex_census(census: VertexCensus, path: str) -> str:
    payload = {
        "kind": "vertex_census",
        "unit_edge_sq": {"golden": _g_enc(census.unit_edge_sq)},
        "n_vertices": census.n_vertices,
        "min_degree": census.min_degree,
        "max_degree": census.max_degree,
        "direction_classes": census.direction_classes,
        "configurations": [
            {
                "degree": rep.degree,
                "count": census.counts[rep.star],
                "center": _vec_enc(rep.center),
            }
            for rep in census.representatives
        ],
    }
    return write_json(path, payload)


def export_crossing_census(census: CrossingCensus, path: str) -> str:
    payload = {
        "kind": "edge_crossing_census",
        "n_crossings": len(census.crossings),
        "classes": [
            {
                "p": {"golden": _g_enc(p)},
                "q": {"golden": _g_enc(q)},
                "count": n,
            }
            for (p, q), n in sorted(
                census.counts.items(),
                key=lambda kv: (float(kv[0][0]), float(kv[0][1])),
            )
        ],
        "crossings": [
            {
                "point": _vec_enc(c.point),
                "p": {"golden": _g_enc(c.p)},
                "q": {"golden": _g_enc(c.q)},
            }
            for c in census.crossings
        ],
    }
    return write_json(path, payload)


def export_plane_classes(census: Dict[tuple, int], path: str) -> str:
    payload = {
        "kind": "plane_classes",
        "n_classes": len(census),
        "classes": [
            {"direction": _vec_enc(d), "count": n}
            for d, n in sorted(
                census.items(),
                key=lambda kv: tuple(float(c) for c in kv[0]),
            )
        ],
    }
    return write_json(path, payload)


def export_alignment_report(report, path: str) -> str:
    return write_json(path, {"kind": "alignment_report", **report.to_json_dict()})


def export_sweep_csv(sweep: Sequence[Tuple[float, float]], path: str) -> str:
    lines = ["angle_degrees,misfit"]
    for ang, met in sweep:
        lines.append(f"{_fmt(ang)},{_fmt(met)}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path
