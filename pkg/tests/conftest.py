"""Shared fixtures for the heavy geometry objects.

Session scope: the 4D point set, the icosagrids and the compounds take
seconds each to build, and several modules assert against the same
frozen censuses.
"""

import pytest

from qcforge.e8qc import (
    ball_window,
    compound_qc,
    elser_sloane_points,
    projection_spec,
)
from qcforge.grids3d import fibonacci_icosagrid, fibonacci_tetragrid


@pytest.fixture(scope="session")
def qc4():
    """Ball-window 4D quasicrystal out to shell radius 4 (1681 points)."""
    return elser_sloane_points(projection_spec(ball_window(1)), shell_radius=4)


@pytest.fixture(scope="session")
def fig3():
    return fibonacci_icosagrid(3)


@pytest.fixture(scope="session")
def fig4():
    return fibonacci_icosagrid(4)


@pytest.fixture(scope="session")
def fig6():
    return fibonacci_icosagrid(6)


@pytest.fixture(scope="session")
def frame3():
    """Single-frame grid, extent 3."""
    return fibonacci_tetragrid(3)


@pytest.fixture(scope="session")
def compound1(qc4):
    return compound_qc(qc4, "type1")


@pytest.fixture(scope="session")
def compound2(qc4):
    return compound_qc(qc4, "type2")
