"""Anchored subset verdicts, grid enrichment, and the rotation-angle sweep."""

import math

import pytest

from qcforge.golden import ONE, TAU, ZERO
from qcforge.grids3d import CellSet
from qcforge.pointset import PointSet3
from qcforge.correspondence import (
    MissingProvenance,
    NoCentral20G,
    UNIT_CELL_MARGIN,
    align_and_subset_check,
    convergence_sweep,
    enrich,
    golden_rotation_degrees,
)


def test_margin_is_one_cell_edge():
    assert UNIT_CELL_MARGIN == pytest.approx(float(TAU) / math.sqrt(2.0))


def test_golden_rotation_angle():
    assert golden_rotation_degrees() == pytest.approx(15.522487814070076, abs=1e-12)


# ---------------------------------------------------------------------------
# subset chain


def test_small_compound_inside_large_compound(compound1, compound2):
    rep = align_and_subset_check(compound2, compound1)
    assert rep.verdict == "subset"
    assert rep.unmatched == ()
    assert rep.transform["exact"] is True
    assert rep.transform["rotation_identity"] is True
    assert rep.transform["scale"] == "1 + 0 t"
    assert rep.window["interior_radius"] == pytest.approx(0.3954, abs=2e-4)
    assert rep.matched >= 1


def test_large_compound_inside_icosagrid(compound1, fig6):
    rep = align_and_subset_check(compound1, fig6)
    assert rep.verdict == "subset"
    assert rep.unmatched == ()
    assert rep.matched == 121
    assert rep.window["interior_radius"] == pytest.approx(2.0920, abs=2e-4)


def test_small_compound_inside_icosagrid(compound2, fig6):
    rep = align_and_subset_check(compound2, fig6)
    assert rep.verdict == "subset"
    assert rep.matched >= 1


def test_icosagrid_not_inside_compound(compound1, fig6):
    rep = align_and_subset_check(fig6, compound1)
    assert rep.verdict == "not_subset"
    assert len(rep.unmatched) >= 1
    # nearest witness sits one golden unit out on a coordinate axis
    first = rep.unmatched[0]
    assert sorted(abs(x) for x in first) == pytest.approx(
        [0.0, 0.0, float(TAU)], abs=1e-12
    )


def test_report_serializes(compound1, fig6):
    rep = align_and_subset_check(compound1, fig6)
    d = rep.to_json_dict()
    assert d["verdict"] == "subset"
    assert set(d) == {"transform", "matched", "unmatched", "verdict", "window"}


def test_anchorless_input_rejected(fig6):
    lone = PointSet3([(ONE, ZERO, ZERO)])
    with pytest.raises(NoCentral20G):
        align_and_subset_check(lone, fig6)


def test_empty_input_rejected(fig6):
    with pytest.raises(ValueError):
        align_and_subset_check(PointSet3([]), fig6)


# ---------------------------------------------------------------------------
# enrichment


def test_enrich_reaches_the_icosagrid(compound1, fig6):
    full = enrich(compound1, extent=6)
    assert len(full) == len(fig6) == 7640
    assert full.points == fig6.points
    assert len(full.points) == 11903
    assert compound1.points.issubset(full.points)


def test_enrich_is_idempotent_and_fixes_the_grid(compound1, fig6):
    once = enrich(compound1, extent=6)
    twice = enrich(once, extent=6)
    assert [c.key() for c in twice.cells] == [c.key() for c in once.cells]
    fixed = enrich(fig6, extent=6)
    assert [c.key() for c in fixed.cells] == [c.key() for c in fig6.cells]


def test_enrich_requires_frame_attribution(qc4):
    from qcforge.e8qc import cross_section

    _, cells = cross_section(qc4, "type1")
    unattributed = CellSet(list(cells.cells))
    with pytest.raises(MissingProvenance):
        enrich(unattributed)


# ---------------------------------------------------------------------------
# angle sweep


def test_sweep_minimizes_at_golden_angle():
    sweep = convergence_sweep(16)
    angles = [a for a, _ in sweep]
    misfit = [m for _, m in sweep]
    assert len(sweep) == 16
    assert angles[0] == 0.0
    assert angles[-1] == pytest.approx(golden_rotation_degrees())
    assert misfit[0] > 0.1
    assert misfit[-1] <= 1e-9
    assert misfit.index(min(misfit)) == len(misfit) - 1


def test_sweep_needs_at_least_two_steps():
    with pytest.raises(ValueError):
        convergence_sweep(1)
