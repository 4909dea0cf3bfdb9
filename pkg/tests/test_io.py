"""Serialization round trips and artifact formats."""

import json
from fractions import Fraction

import numpy as np
import pytest

from qcforge.golden import ONE, SIGMA, TAU, ZERO, GoldenNum
from qcforge.grids3d import CellSet, fibonacci_icosagrid
from qcforge.multigrid import dual_tiling, penrose_families
from qcforge.pointset import PointSet3, PointSet4
from qcforge.analysis import (
    diffraction_image,
    edge_crossing_catalog,
    vertex_configurations,
)
from qcforge import io


@pytest.fixture(scope="module")
def fig2():
    return fibonacci_icosagrid(2)


@pytest.fixture(scope="module")
def some_points():
    h = GoldenNum(Fraction(1, 2))
    return PointSet3(
        [
            (ZERO, ZERO, ZERO),
            (TAU, -SIGMA, h),
            (GoldenNum(Fraction(-7, 3), Fraction(2, 5)), ONE, TAU * TAU),
        ]
    )


# ---------------------------------------------------------------------------
# point formats


def test_json_round_trip_is_exact(tmp_path, some_points):
    path = str(tmp_path / "pts.json")
    io.export_points(some_points, "json", path)
    back = io.import_points(path)
    assert isinstance(back, PointSet3)
    assert back == some_points


def test_json_round_trip_4d(tmp_path):
    pts = PointSet4([(ONE, ZERO, TAU, -SIGMA)])
    path = str(tmp_path / "pts4.json")
    io.export_points(pts, "json", path)
    back = io.import_points(path)
    assert isinstance(back, PointSet4)
    assert back == pts


def test_xyz_format(tmp_path, some_points):
    path = str(tmp_path / "pts.xyz")
    io.export_points(some_points, "xyz", path)
    lines = open(path).read().splitlines()
    assert lines[0] == "3"
    assert len(lines) == 2 + 3
    fields = lines[2].split()
    assert fields[0] == "X" and len(fields) == 4
    float(fields[1])


def test_xyz_rejects_4d(tmp_path):
    pts = PointSet4([(ONE, ZERO, TAU, -SIGMA)])
    with pytest.raises(ValueError):
        io.export_points(pts, "xyz", str(tmp_path / "x.xyz"))


def test_csv_format(tmp_path, some_points):
    path = str(tmp_path / "pts.csv")
    io.export_points(some_points, "csv", path)
    lines = open(path).read().splitlines()
    assert lines[0] == "x0,x1,x2"
    assert len(lines) == 4


def test_obj_format(tmp_path, some_points):
    path = str(tmp_path / "pts.obj")
    io.export_points(some_points, "obj", path)
    content = open(path).read()
    assert content.count("v ") == 3


def test_empty_export_refused(tmp_path):
    with pytest.raises(ValueError, match="empty"):
        io.export_points(PointSet3([]), "json", str(tmp_path / "e.json"))


def test_unknown_format_refused(tmp_path, some_points):
    with pytest.raises(ValueError, match="format"):
        io.export_points(some_points, "vtk", str(tmp_path / "e.vtk"))


def test_import_rejects_wrong_kind(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"kind": "something_else"}))
    with pytest.raises(ValueError):
        io.import_points(str(path))


# ---------------------------------------------------------------------------
# cells


def test_cells_round_trip(tmp_path, fig2):
    p1 = str(tmp_path / "cells.json")
    p2 = str(tmp_path / "cells2.json")
    io.export_cells(fig2, p1)
    back = io.import_cells(p1)
    assert isinstance(back, CellSet)
    assert [c.key() for c in back.cells] == [c.key() for c in fig2.cells]
    assert [c.grid_id for c in back.cells] == [c.grid_id for c in fig2.cells]
    assert [c.chirality for c in back.cells] == [c.chirality for c in fig2.cells]
    assert [c.orientation for c in back.cells] == [
        c.orientation for c in fig2.cells
    ]
    # provenance survives, including the float coverage radius
    assert back.provenance["coverage_radius"] == fig2.provenance["coverage_radius"]
    io.export_cells(back, p2)
    assert open(p1, "rb").read() == open(p2, "rb").read()


# ---------------------------------------------------------------------------
# tilings


def test_tiling_exports(tmp_path):
    tiling = dual_tiling(penrose_families((-2, 2)))
    jpath = tmp_path / "tiling.json"
    spath = tmp_path / "tiling.svg"
    io.export_tiling_json(tiling, str(jpath))
    io.export_tiling_svg(tiling, str(spath))
    doc = json.loads(jpath.read_text())
    assert doc["kind"] == "tiling"
    assert len(doc["cells"]) == tiling.cell_count()
    svg = spath.read_text()
    assert svg.startswith("<?xml")
    assert "<svg" in svg
    assert svg.count("<polygon") == tiling.cell_count()


# ---------------------------------------------------------------------------
# diffraction artifacts


def test_pgm_format(tmp_path):
    img = diffraction_image(PointSet3([(ZERO, ZERO, ZERO)]), "2-fold", 4.0, 16)
    path = tmp_path / "img.pgm"
    io.export_diffraction_pgm(img, str(path))
    raw = path.read_bytes()
    header = b"P5\n16 16\n65535\n"
    assert raw.startswith(header)
    pixels = np.frombuffer(raw[len(header) :], dtype=">u2")
    assert pixels.shape == (256,)
    assert pixels.max() == 65535  # max-normalized


def test_diffraction_csv(tmp_path, fig2):
    img = diffraction_image(fig2.points, "2-fold", 6.0, 16)
    path = tmp_path / "img.csv"
    io.export_diffraction_csv(img, str(path))
    lines = path.read_text().splitlines()
    meta = json.loads(lines[0][2:])
    assert meta["resolution"] == 16
    assert meta["n_points"] == len(fig2.points)
    assert len(lines) == 1 + 16  # one comment header, one line per row
    assert all(len(line.split(",")) == 16 for line in lines[1:])


# ---------------------------------------------------------------------------
# censuses and reports


def test_vertex_census_export(tmp_path, fig2):
    census = vertex_configurations(fig2)
    path = tmp_path / "census.json"
    io.export_vertex_census(census, str(path))
    doc = json.loads(path.read_text())
    assert doc["kind"] == "vertex_census"
    assert doc["n_vertices"] == census.n_vertices
    assert doc["direction_classes"] == census.direction_classes


def test_crossing_census_export(tmp_path, fig2):
    census = edge_crossing_catalog(fig2)
    path = tmp_path / "crossings.json"
    io.export_crossing_census(census, str(path))
    doc = json.loads(path.read_text())
    assert doc["kind"] == "edge_crossing_census"
    assert doc["n_crossings"] == 1140
    assert len(doc["classes"]) == 16
    assert sum(c["count"] for c in doc["classes"]) == 1140


def test_json_writer_is_stable(tmp_path):
    payload = {"b": 1.5, "a": [Fraction(1, 3), GoldenNum(0, 1)]}
    p1 = tmp_path / "a.json"
    p2 = tmp_path / "b.json"
    io.write_json(str(p1), payload)
    io.write_json(str(p2), payload)
    b1 = p1.read_bytes()
    assert b1 == p2.read_bytes()
    assert b1.endswith(b"\n")
    doc = json.loads(b1)
    assert doc["a"][0] == "1/3"
    assert doc["a"][1] == {"golden": [0, 1, 1, 1]}
