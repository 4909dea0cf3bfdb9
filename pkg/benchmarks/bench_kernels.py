"""Compare the compiled structure-factor kernel against the NumPy one.

Builds a quasiperiodic point cloud, lays out the same k-grid the imaging
pipeline uses, and times both backends on identical chunks. Also reports
the worst relative disagreement so a speedup never hides a wrong answer.

Usage: python benchmarks/bench_kernels.py [--extent N] [--resolution R]
"""

import argparse
import time

import numpy as np

from qcforge import _kernels_py
from qcforge.analysis import diffraction_image
from qcforge.grids3d import fibonacci_icosagrid

try:
    from qcforge import _kernels
except ImportError:
    _kernels = None


def k_grid(img) -> np.ndarray:
    """Rebuild the (res*res, 3) k-point layout of a rendered image."""
    res = img.resolution
    step = 2.0 * img.extent / res
    idx = step * (np.arange(res) - res // 2)
    u = np.asarray(img.basis_u)
    v = np.asarray(img.basis_v)
    return (idx[:, None, None] * u + idx[None, :, None] * v).reshape(-1, 3)


def best_of(fn, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--extent", type=int, default=3, help="grid extent")
    ap.add_argument("--resolution", type=int, default=256)
    ap.add_argument("--k-extent", type=float, default=12.0)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    grid = fibonacci_icosagrid(args.extent)
    xyz = np.array(
        [[float(x) for x in p] for p in grid.points], dtype=np.float64
    )
    img = diffraction_image(
        grid.points, "5-fold", args.k_extent, args.resolution
    )
    kpts = k_grid(img)
    pairs = kpts.shape[0] * xyz.shape[0]
    print(
        f"workload: {xyz.shape[0]} points x {kpts.shape[0]} k-vectors "
        f"({pairs / 1e6:.0f}M pairs), best of {args.repeats}"
    )

    a_py = _kernels_py.structure_factor_chunk(kpts, xyz)
    t_py = best_of(
        lambda: _kernels_py.structure_factor_chunk(kpts, xyz), args.repeats
    )
    print(f"  numpy    {t_py:8.3f}s   {pairs / t_py / 1e6:8.1f}M pairs/s")

    if _kernels is None:
        print("  compiled   (extension not built)")
        return
    a_c = _kernels.structure_factor_chunk(kpts, xyz)
    t_c = best_of(
        lambda: _kernels.structure_factor_chunk(kpts, xyz), args.repeats
    )
    print(f"  compiled {t_c:8.3f}s   {pairs / t_c / 1e6:8.1f}M pairs/s")
    print(f"  speedup  {t_py / t_c:8.2f}x")

    scale = np.abs(a_py).max()
    worst = np.abs(a_c - a_py).max() / scale
    print(f"  max relative difference {worst:.2e}")


if __name__ == "__main__":
    main()
