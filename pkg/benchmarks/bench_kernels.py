"""Compare the compiled kernels against the numpy fallback.

Run with ``python benchmarks/bench_kernels.py``. Both backends are imported
directly, so the comparison does not depend on ``SUDOQ_PURE_PYTHON``.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from sudoq import _pykernels
from sudoq.constructions import hw_sudoq
from sudoq.model import SudoQGrid

try:
    from sudoq import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _violation_case(n: int, seed: int):
    rng = np.random.default_rng(seed)
    grid = hw_sudoq(n)
    dim = grid.dim
    z = grid.flat_vectors() + 0.05 * (rng.standard_normal((dim * dim, dim))
                                      + 1j * rng.standard_normal((dim * dim, dim)))
    groups = np.array([m for _, _, m in SudoQGrid.empty(n).constraint_groups()], dtype=np.int64)
    free = rng.random(dim * dim) < 0.75
    return z, groups, grid.flat_vectors(), free


def cases(seed: int = 0):
    vs2 = hw_sudoq(2).flat_vectors()
    vs3 = hw_sudoq(3).flat_vectors()
    z2, g2, r2, f2 = _violation_case(2, seed)
    z3, g3, r3, f3 = _violation_case(3, seed)
    return {
        "phase_clusters N=2 (16 vecs)": ("phase_clusters", (vs2, 1.0 - 1e-9)),
        "phase_clusters N=3 (81 vecs)": ("phase_clusters", (vs3, 1.0 - 1e-9)),
        "overlap_power_sums N=3 tmax=6": ("overlap_power_sums", (vs3, 6)),
        "violation_grad N=2": ("violation_grad", (z2, g2, r2, f2, 1.0, 1.0)),
        "violation_grad N=3": ("violation_grad", (z3, g3, r3, f3, 1.0, 1.0)),
    }


def run(repeat: int = 5, number: int = 200) -> list[tuple[str, float, float | None]]:
    rows = []
    for label, (fname, args) in cases().items():
        py = getattr(_pykernels, fname)
        t_py = min(timeit.repeat(lambda: py(*args), repeat=repeat, number=number)) / number
        t_c = None
        if _ckernels is not None:
            cy = getattr(_ckernels, fname)
            t_c = min(timeit.repeat(lambda: cy(*args), repeat=repeat, number=number)) / number
        rows.append((label, t_py, t_c))
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--number", type=int, default=200)
    args = parser.parse_args()
    print(f"{'kernel':34s} {'numpy (us)':>12s} {'cython (us)':>12s} {'speedup':>8s}")
    for label, t_py, t_c in run(args.repeat, args.number):
        if t_c is None:
            print(f"{label:34s} {t_py * 1e6:12.1f} {'n/a':>12s} {'':>8s}")
        else:
            print(f"{label:34s} {t_py * 1e6:12.1f} {t_c * 1e6:12.1f} {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()
