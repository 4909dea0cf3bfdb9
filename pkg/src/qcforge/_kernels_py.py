"""NumPy implementation of the structure-factor kernel.

Reference semantics for the compiled extension. Accumulation runs over
fixed-size point blocks in a fixed order, so results are bit-stable for a
given input regardless of how callers schedule chunks across threads.
"""

from __future__ import annotations

import numpy as np

_BLOCK = 4096


def structure_factor_chunk(kpts: np.ndarray, xyz: np.ndarray) -> np.ndarray:
    """Complex amplitudes A(k) = sum_j exp(i k . x_j) for a chunk of k-vectors.

    kpts: (m, d) float64, xyz: (n, d) float64 -> (m,) complex128.
    """
    kpts = np.ascontiguousarray(kpts, dtype=np.float64)
    xyz = np.ascontiguousarray(xyz, dtype=np.float64)
    m = kpts.shape[0]
    re = np.zeros(m, dtype=np.float64)
    im = np.zeros(m, dtype=np.float64)
    for j0 in range(0, xyz.shape[0], _BLOCK):
        phase = kpts @ xyz[j0 : j0 + _BLOCK].T
        re += np.cos(phase).sum(axis=1)
        im += np.sin(phase).sum(axis=1)
    return re + 1j * im
