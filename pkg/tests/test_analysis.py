"""Vertex stars, edge crossings, cell centers, and diffraction images."""

import math
import os
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from qcforge.golden import ONE, SIGMA, TAU, ZERO, GoldenNum, dirichlet_flag
from qcforge.grids3d import CellSet, fibonacci_tetragrid, icosahedral_rotations, tetragrid_cells
from qcforge.multigrid import SpacingLaw
from qcforge.pointset import PointSet3
from qcforge.analysis import (
    AXIS_DIRECTIONS,
    diffraction_image,
    edge_crossing_catalog,
    rotational_invariance_rms,
    tetra_center_points,
    thread_count,
    vertex_configurations,
)

UNIT_SQ = (TAU * TAU) / 2


# ---------------------------------------------------------------------------
# vertex configurations


def test_census_on_composition_edges(fig3):
    census = vertex_configurations(fig3)
    assert census.unit_edge_sq == UNIT_SQ
    assert census.n_vertices == 331
    assert (census.min_degree, census.max_degree) == (3, 60)
    assert census.direction_classes == 30
    assert sorted(census.counts.values(), reverse=True) == [180, 60, 60, 30, 1]
    degree_hist = Counter(r.degree for r in census.representatives)
    assert degree_hist == {3: 2, 5: 1, 12: 1, 60: 1}


def test_census_stable_between_extents(fig3, fig4):
    c3 = vertex_configurations(fig3)
    c4 = vertex_configurations(fig4)
    assert sorted(c3.counts.values()) == sorted(c4.counts.values())
    assert (c4.min_degree, c4.max_degree) == (3, 60)
    assert c4.direction_classes == 30


def test_census_is_rotation_invariant(fig3):
    rot = icosahedral_rotations()[17]
    base = vertex_configurations(fig3)
    turned = vertex_configurations(fig3.transformed(rot))
    assert sorted(base.counts.values()) == sorted(turned.counts.values())
    assert (base.min_degree, base.max_degree) == (
        turned.min_degree,
        turned.max_degree,
    )


def test_census_single_cell(fig3):
    one = CellSet([next(iter(fig3.cells))])
    census = vertex_configurations(one)
    assert census.min_degree == census.max_degree == 3
    assert list(census.counts.values()) == [4]


def test_census_edge_family_override(fig4):
    small = vertex_configurations(fig4, unit_edge_sq=SIGMA**4 / 2)
    assert (small.min_degree, small.max_degree) == (3, 6)


def test_census_rejects_absent_edge_family(fig3):
    with pytest.raises(ValueError):
        vertex_configurations(fig3, unit_edge_sq=GoldenNum(17))


# ---------------------------------------------------------------------------
# edge crossings


def test_single_frame_has_no_crossings(frame3):
    cat = edge_crossing_catalog(frame3)
    assert len(cat.crossings) == 0
    assert cat.counts == {}


def test_crossing_catalog_counts():
    from qcforge.grids3d import fibonacci_icosagrid

    cat = edge_crossing_catalog(fibonacci_icosagrid(2))
    assert len(cat.crossings) == 1140
    assert len(cat.counts) == 16
    assert sum(cat.counts.values()) == 1140
    top = max(cat.counts.items(), key=lambda kv: kv[1])
    assert top[0] == (GoldenNum(2, -1), GoldenNum(-1, 1))
    assert top[1] == 300

    twenty = GoldenNum(20)
    for cr in cat.crossings:
        # split ratios stay in (0, 1), canonically ordered
        assert ZERO < cr.p < ONE and ZERO < cr.q < ONE
        assert cr.p <= cr.q
        for x in cr.point:
            assert dirichlet_flag(x * twenty).is_dirichlet
    # every ratio is a small golden fraction
    comps = [
        abs(v)
        for pq in cat.counts
        for g in pq
        for v in (g.a.numerator, g.a.denominator, g.b.numerator, g.b.denominator)
    ]
    assert max(comps) <= 7


def test_crossing_census_grows_with_extent(fig3):
    cat = edge_crossing_catalog(fig3)
    assert len(cat.crossings) == 4080
    assert len(cat.counts) == 24


# ---------------------------------------------------------------------------
# cell centers


def test_single_frame_centers_are_distinct(frame3):
    pts = tetra_center_points(frame3)
    assert len(pts) == len(frame3.cells) == 176


def test_concentric_twins_deduplicate(fig3):
    pts = tetra_center_points(fig3)
    assert len(pts) == 500
    assert len(fig3) == 880


def test_centers_reject_empty():
    with pytest.raises(ValueError):
        tetra_center_points(CellSet([]))


# ---------------------------------------------------------------------------
# diffraction


def test_thread_count_resolution():
    assert thread_count(None) == 1
    assert thread_count(5) == 5
    os.environ["QCFORGE_THREADS"] = "3"
    try:
        assert thread_count(None) == 3
        assert thread_count(2) == 2
    finally:
        del os.environ["QCFORGE_THREADS"]
    with pytest.raises(ValueError):
        thread_count(0)


def test_single_point_is_uniform():
    img = diffraction_image(PointSet3([(ZERO, ZERO, ZERO)]), "2-fold", 5.0, 16)
    assert img.intensity.shape == (16, 16)
    assert np.all(img.intensity == 1.0)
    assert img.k_values()[img.center_index()] == 0.0


def test_input_validation(fig3):
    with pytest.raises(ValueError):
        diffraction_image(PointSet3([]), "5-fold")
    with pytest.raises(ValueError):
        diffraction_image(fig3.points, "7-fold")
    with pytest.raises(ValueError):
        diffraction_image(fig3.points, "5-fold", extent=-1.0)
    with pytest.raises(ValueError):
        diffraction_image(fig3.points, "5-fold", resolution=8)


def test_axes_table():
    assert set(AXIS_DIRECTIONS) == {"5-fold", "3-fold", "2-fold"}
    img = diffraction_image(
        PointSet3([(ZERO, ZERO, ZERO)]), (0.3, 0.2, 0.9), 2.0, 16
    )
    assert img.axis == "custom"


def test_center_is_global_max(fig3):
    img = diffraction_image(fig3.points, "5-fold", 12.0, 64)
    c = img.center_index()
    assert img.intensity[c, c] == 1.0
    assert img.intensity.max() == 1.0
    assert np.unravel_index(np.argmax(img.intensity), img.intensity.shape) == (c, c)


def test_five_fold_rotational_invariance(fig3):
    img = diffraction_image(fig3.points, "5-fold", 12.0, 96)
    rms = rotational_invariance_rms(fig3.points, img, 72.0)
    assert rms < 1e-9


def test_inversion_symmetry_bit_exact(fig3):
    img = diffraction_image(fig3.points, "5-fold", 12.0, 64)
    paired = img.intensity[1:, 1:]
    assert np.array_equal(paired, paired[::-1, ::-1])


def test_translation_invariance(fig3):
    img = diffraction_image(fig3.points, "5-fold", 12.0, 64)
    shift = (GoldenNum(Fraction(7, 3)), -TAU, GoldenNum(Fraction(1, 7), Fraction(2, 5)))
    moved = fig3.points.translated(shift)
    img_t = diffraction_image(moved, "5-fold", 12.0, 64)
    assert float(np.max(np.abs(img_t.intensity - img.intensity))) < 1e-9


def test_thread_schedule_does_not_change_bytes(fig3):
    a = diffraction_image(fig3.points, "5-fold", 12.0, 64, threads=1)
    b = diffraction_image(fig3.points, "5-fold", 12.0, 64, threads=4)
    os.environ["QCFORGE_THREADS"] = "3"
    try:
        c = diffraction_image(fig3.points, "5-fold", 12.0, 64)
    finally:
        del os.environ["QCFORGE_THREADS"]
    assert np.array_equal(a.intensity, b.intensity)
    assert np.array_equal(a.intensity, c.intensity)


def test_periodic_control_reproduces_reciprocal_lattice():
    fcc = tetragrid_cells(SpacingLaw.periodic(1, 0), 5)
    extent, res = 15.0, 128
    img = diffraction_image(fcc.points, "2-fold", extent, res)
    inten = img.intensity
    step = 2 * extent / res

    strong = [
        (i, j)
        for i in range(1, res - 1)
        for j in range(1, res - 1)
        if inten[i, j] > 0.5 and inten[i, j] == inten[i - 1 : i + 2, j - 1 : j + 2].max()
    ]
    assert len(strong) == 9

    four_pi = 4 * math.pi
    for m in (-1, 0, 1):
        for n in (-1, 0, 1):
            # in-plane reciprocal node (4pi m, 4pi n, 0) -> ku = -4pi n, kv = 4pi m
            ku, kv = -four_pi * n, four_pi * m
            ii = round(ku / step) + res // 2
            jj = round(kv / step) + res // 2
            assert any(
                abs(i - ii) <= 1 and abs(j - jj) <= 1 for i, j in strong
            ), (m, n)
    center = img.center_index()
    assert inten[center, center] == 1.0
