"""Kernel backend selection.

Prefers the compiled extension when it imported cleanly, otherwise the
NumPy implementation. QCFORGE_FORCE_PY_KERNELS=1 forces the NumPy path
(used by the parity test and the benchmark). The active backend name is
recorded in run manifests because the two backends differ in float
summation order (equal within 1e-9 relative, not bit-equal).
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
structure_factor_chunk = _kernels_py.structure_factor_chunk

if not os.environ.get("QCFORGE_FORCE_PY_KERNELS"):
    try:
        from . import _kernels  # type: ignore[attr-defined]

        BACKEND = "compiled"
        structure_factor_chunk = _kernels.structure_factor_chunk
    except ImportError:
        pass
