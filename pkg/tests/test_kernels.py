"""Backend parity for the structure-factor kernel."""

import os
import subprocess
import sys

import numpy as np
import pytest

from qcforge import _kernels_py
from qcforge.kernels import BACKEND, structure_factor_chunk


def _random_batch(seed, m=700, n=900, d=3):
    rng = np.random.default_rng(seed)
    kpts = rng.uniform(-30.0, 30.0, size=(m, d))
    xyz = rng.uniform(-8.0, 8.0, size=(n, d))
    return kpts, xyz


def test_backend_is_declared():
    assert BACKEND in ("compiled", "python")


def test_amplitude_at_zero_counts_points():
    kpts, xyz = _random_batch(1)
    kpts[0] = 0.0
    out = structure_factor_chunk(kpts, xyz)
    assert out.shape == (kpts.shape[0],)
    assert out.dtype == np.complex128
    assert out[0] == pytest.approx(xyz.shape[0] + 0j, abs=1e-12)


def test_conjugate_symmetry_bit_exact():
    kpts, xyz = _random_batch(2)
    pos = structure_factor_chunk(kpts, xyz)
    neg = structure_factor_chunk(-kpts, xyz)
    assert np.array_equal(neg, np.conj(pos))


def test_linearity_over_point_sets():
    kpts, xyz = _random_batch(3, n=800)
    whole = structure_factor_chunk(kpts, xyz)
    # split on the internal block boundary: partial sums must recombine
    a = structure_factor_chunk(kpts, xyz[:4096])
    b = structure_factor_chunk(kpts, xyz[4096:])
    assert np.allclose(whole, a + b, rtol=0, atol=1e-9)


def test_kernel_results_repeat_exactly():
    kpts, xyz = _random_batch(4)
    assert np.array_equal(
        structure_factor_chunk(kpts, xyz), structure_factor_chunk(kpts, xyz)
    )


def test_backends_agree_within_tolerance():
    compiled = pytest.importorskip("qcforge._kernels")
    kpts, xyz = _random_batch(5, m=1200, n=5000)
    a = compiled.structure_factor_chunk(kpts, xyz)
    b = _kernels_py.structure_factor_chunk(kpts, xyz)
    scale = np.abs(a).max()
    assert np.abs(a - b).max() <= 1e-9 * max(scale, 1.0)


def test_env_flag_forces_python_backend():
    env = dict(os.environ, QCFORGE_FORCE_PY_KERNELS="1")
    out = subprocess.run(
        [sys.executable, "-c", "from qcforge.kernels import BACKEND; print(BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    assert out.stdout.strip() == "python"
