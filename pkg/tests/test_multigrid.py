"""Quasiperiodic spacing laws, the pentagrid, and its dual rhombus tiling."""

from fractions import Fraction

import pytest

from qcforge.golden import ONE, SIGMA, TAU, ZERO, GoldenNum
from qcforge.multigrid import (
    DegenerateGrid,
    Patch,
    PENROSE_GAMMAS,
    SpacingLaw,
    dual_tiling,
    fibonacci_word,
    grid_offsets,
    intersections,
    multigrid_normals,
    penrose_families,
    pentagrid,
    substitution_word,
)


# ---------------------------------------------------------------------------
# spacing laws and the gap word


def test_periodic_offsets():
    law = SpacingLaw.periodic(2, Fraction(1, 7))
    assert law.offset(0) == GoldenNum(Fraction(2, 7))
    assert law.offset(3) == GoldenNum(Fraction(2, 7) + 6)
    assert grid_offsets(law, -1, 1) == [law.offset(n) for n in (-1, 0, 1)]


def test_quasiperiodic_offsets_exact():
    law = SpacingLaw.fibonacci()
    assert law.offset(0) == ZERO
    assert law.offset(1) == ONE
    assert law.offset(2) == 2 + SIGMA
    assert law.offset(-1) == -1 - SIGMA


def test_centered_law_is_odd_symmetric():
    # beta = 1/2 centers the ladder: offsets come in exact +/- pairs
    law = SpacingLaw.fibonacci(1, 0, Fraction(1, 2))
    offs = grid_offsets(law, -12, 12)
    assert all(a + b == ZERO for a, b in zip(offs, reversed(offs)))


def test_gap_ratio_is_exactly_golden():
    offs = grid_offsets(SpacingLaw.fibonacci(), -40, 40)
    gaps = {offs[i + 1] - offs[i] for i in range(len(offs) - 1)}
    assert len(gaps) == 2
    big, small = max(gaps), min(gaps)
    assert big / small == TAU


def test_gap_word_matches_substitution_fixed_point():
    word = fibonacci_word(SpacingLaw.fibonacci(), 1000)
    sub = substitution_word(1000)
    assert len(word) == len(sub) == 1000
    for length in range(1, 11):
        factors = {word[i : i + length] for i in range(len(word) - length + 1)}
        expected = {sub[i : i + length] for i in range(len(sub) - length + 1)}
        assert factors == expected, length
    assert "SS" not in word


def test_substitution_word_is_self_similar():
    # the fixed point reproduces itself under L -> LS, S -> L
    w = substitution_word(400)
    image = "".join("LS" if ch == "L" else "L" for ch in w)
    assert len(image) >= 400
    assert image[:400] == w


def test_letter_frequencies_approach_golden_ratio():
    word = fibonacci_word(SpacingLaw.fibonacci(), 1000)
    n_l, n_s = word.count("L"), word.count("S")
    assert n_l + n_s == 1000
    assert abs(n_l / n_s - float(TAU)) < 5e-3


# ---------------------------------------------------------------------------
# pentagrid geometry


def test_normals_close_up():
    nv = multigrid_normals(5)
    assert len(nv) == 5
    assert abs(sum(v[0] for v in nv)) < 1e-14
    assert abs(sum(v[1] for v in nv)) < 1e-14
    assert nv[1][0] == pytest.approx(0.3090169943749474, abs=1e-15)
    assert nv[1][1] == pytest.approx(0.9510565162951535, abs=1e-15)


def test_pentagrid_family_count_enforced():
    with pytest.raises(ValueError):
        pentagrid([SpacingLaw.periodic()] * 4, (-2, 2))


def test_concurrent_lines_detected():
    # a single shared law puts five lines through one point
    bad = pentagrid(SpacingLaw.periodic(1, 0), (-2, 2))
    with pytest.raises(DegenerateGrid):
        intersections(bad)


def test_reference_offsets_sum_to_small_integer_free_phases():
    assert len(PENROSE_GAMMAS) == 5
    assert len(set(PENROSE_GAMMAS)) == 5
    assert all(isinstance(g, Fraction) for g in PENROSE_GAMMAS)


# ---------------------------------------------------------------------------
# dual tiling (frozen counts at index range 3 and 5)


@pytest.fixture(scope="module")
def tiling3():
    return dual_tiling(penrose_families((-3, 3)))


def test_dual_tiling_counts(tiling3):
    fams = penrose_families((-3, 3))
    pts = intersections(fams)
    assert tiling3.cell_count() == len(pts) == 490
    assert tiling3.kind_census() == {"prolate": 245, "oblate": 245}


def test_two_rhombus_shapes_only(tiling3):
    kinds = {c.kind for c in tiling3.cells}
    assert kinds == {"prolate", "oblate"}
    areas = {c.kind: c.area_units() for c in tiling3.cells}
    # oblate/prolate area ratio is 1/tau in sin-72 units
    assert areas["oblate"] / areas["prolate"] == SIGMA


def test_planarity_certificate(tiling3):
    rep = tiling3.certify_planar()
    assert rep["cells"] == 490
    assert rep["interior_vertices"] == 456
    assert rep["boundary_cycles"] == 1
    assert rep["area_sin72_units"] == GoldenNum(0, 245)


def test_edges_shared_by_at_most_two_cells(tiling3):
    mult = tiling3.edge_multiplicities()
    assert set(mult.values()) <= {1, 2}
    boundary = sum(1 for m in mult.values() if m == 1)
    assert boundary > 0


def test_larger_patch_counts():
    til = dual_tiling(penrose_families((-5, 5)))
    assert til.cell_count() == 1210
    assert til.kind_census() == {"prolate": 605, "oblate": 605}


def test_patch_restriction():
    fams = penrose_families((-5, 5))
    patch = Patch(Fraction(-2), Fraction(2), Fraction(-2), Fraction(2))
    til = dual_tiling(fams, patch)
    assert 0 < til.cell_count() < 1210
    til.certify_planar()


def test_staggered_quasiperiodic_pentagrid():
    laws = [
        SpacingLaw.fibonacci(1, Fraction(0) + g, Fraction(0))
        for g in PENROSE_GAMMAS
    ]
    til = dual_tiling(pentagrid(laws, (-3, 3)))
    assert til.cell_count() == 490
    census = til.kind_census()
    assert set(census) == {"prolate", "oblate"}
    til.certify_planar()
