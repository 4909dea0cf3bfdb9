# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled structure-factor kernel: direct cos/sin summation.

Same contract as _kernels_py.structure_factor_chunk; summation order is
sequential over points, so each chunk's result is reproducible.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()


def structure_factor_chunk(object kpts_in, object xyz_in):
    cdef double[:, ::1] kpts = np.ascontiguousarray(kpts_in, dtype=np.float64)
    cdef double[:, ::1] xyz = np.ascontiguousarray(xyz_in, dtype=np.float64)
    cdef Py_ssize_t m = kpts.shape[0]
    cdef Py_ssize_t n = xyz.shape[0]
    cdef Py_ssize_t d = kpts.shape[1]
    if xyz.shape[1] != d:
        raise ValueError("dimension mismatch between k-vectors and points")
    cdef cnp.ndarray out = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] outv = out
    cdef Py_ssize_t i, j, c
    cdef double t, sre, sim
    for i in range(m):
        sre = 0.0
        sim = 0.0
        for j in range(n):
            t = 0.0
            for c in range(d):
                t += kpts[i, c] * xyz[j, c]
            sre += cos(t)
            sim += sin(t)
        outv[i] = sre + 1j * sim
    return out
