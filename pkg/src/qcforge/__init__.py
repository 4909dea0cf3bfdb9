"""qcforge: exact golden-field multigrids, icosahedral tetrahedral packings,
and root-lattice projection quasicrystals, with a reproducible CLI."""

__version__ = "0.1.0"

from .golden import (  # noqa: F401
    DirichletFlag,
    GoldenNum,
    SIGMA,
    SQRT5,
    TAU,
    dirichlet_flag,
    golden,
    golden_conjugate,
    golden_mul,
    golden_sign,
)
