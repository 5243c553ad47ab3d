from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sudoq import _pykernels, kernels
from sudoq.constructions import hw_sudoq
from sudoq.model import SudoQGrid

try:
    from sudoq import _ckernels
except ImportError:  # pragma: no cover - build without a compiler
    _ckernels = None

BACKENDS = [pytest.param(_pykernels, id="python"),
            pytest.param(_ckernels, id="cython",
                         marks=pytest.mark.skipif(_ckernels is None, reason="extension not built"))]

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def _random_case(seed, n=2, frac=0.6):
    rng = np.random.default_rng(seed)
    grid = hw_sudoq(n)
    dim = grid.dim
    z = rng.standard_normal((dim * dim, dim)) + 1j * rng.standard_normal((dim * dim, dim))
    groups = np.array([m for _, _, m in SudoQGrid.empty(n).constraint_groups()], dtype=np.int64)
    free = rng.random(dim * dim) < frac
    return z, groups, grid.flat_vectors(), free


def test_backend_flag():
    assert kernels.BACKEND in ("cython", "python")
    if _ckernels is not None and not os.environ.get("SUDOQ_PURE_PYTHON"):
        assert kernels.BACKEND == "cython"


def test_pure_python_override_in_subprocess():
    env = dict(os.environ, SUDOQ_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import sudoq; print(sudoq.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@pytest.mark.parametrize("impl", BACKENDS)
class TestPhaseClusters:
    def test_labels_in_first_seen_order(self, impl):
        e = np.eye(3, dtype=complex)
        vs = np.array([e[2], e[0], 1j * e[2], e[1], -e[0]])
        np.testing.assert_array_equal(impl.phase_clusters(vs, 1 - 1e-9), [0, 1, 0, 2, 1])

    def test_transitive_chain(self, impl):
        # a ~ b and b ~ c join a and c even if |<a|c>| falls under the threshold
        th = np.array([0.0, 0.03, 0.06])
        vs = np.stack([np.cos(th), np.sin(th)], axis=1).astype(complex)
        assert impl.phase_clusters(vs, np.cos(0.04)).tolist() == [0, 0, 0]

    def test_read_only_input(self, impl):
        vs = hw_sudoq(2).flat_vectors()
        assert not vs.flags.writeable
        assert impl.phase_clusters(vs, 1 - 1e-9).max() == 15


@pytest.mark.parametrize("impl", BACKENDS)
def test_power_sums_basis(impl):
    out = impl.overlap_power_sums(np.eye(4, dtype=complex), 3)
    np.testing.assert_allclose(out, [16, 4, 4, 4])


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(2, 12), st.integers(2, 5))
def test_backends_agree(seed, count, d):
    if _ckernels is None:
        pytest.skip("extension not built")
    rng = np.random.default_rng(seed)
    vs = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
    vs /= np.linalg.norm(vs, axis=1)[:, None]
    vs = np.concatenate([vs, vs[: count // 2] * np.exp(1j * rng.random())])
    np.testing.assert_array_equal(_pykernels.phase_clusters(vs, 1 - 1e-9),
                                  _ckernels.phase_clusters(vs, 1 - 1e-9))
    np.testing.assert_allclose(_pykernels.overlap_power_sums(vs, 6),
                               _ckernels.overlap_power_sums(vs, 6), rtol=1e-12)
    z, groups, ref, free = _random_case(seed)
    fp, gp = _pykernels.violation_grad(z, groups, ref, free, 20.0, 0.5)
    fc, gc = _ckernels.violation_grad(z, groups, ref, free, 20.0, 0.5)
    assert fc == pytest.approx(fp, rel=1e-12)
    np.testing.assert_allclose(gc, gp, rtol=1e-10, atol=1e-10)


@pytest.mark.parametrize("impl", BACKENDS)
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_gradient_matches_finite_differences(impl, seed):
    z, groups, ref, free = _random_case(seed)
    # target large enough that the distance penalty is active
    target, weight = 20.0, 0.7
    f0, g = impl.violation_grad(z, groups, ref, free, target, weight)
    rng = np.random.default_rng(100 + seed)
    h = 1e-6
    for _ in range(12):
        cell = int(rng.choice(np.flatnonzero(free)))
        comp = int(rng.integers(z.shape[1]))
        for direction, part in ((1.0, "real"), (1j, "imag")):
            zp, zm = z.copy(), z.copy()
            zp[cell, comp] += direction * h
            zm[cell, comp] -= direction * h
            fd = (impl.violation_grad(zp, groups, ref, free, target, weight)[0]
                  - impl.violation_grad(zm, groups, ref, free, target, weight)[0]) / (2 * h)
            an = getattr(g[cell, comp], part)
            assert an == pytest.approx(fd, rel=1e-5, abs=1e-5 * max(1.0, abs(f0)) ** 0.5)
    assert np.all(g[~free] == 0)


@pytest.mark.parametrize("impl", BACKENDS)
def test_violation_zero_on_solution(impl):
    grid = hw_sudoq(2)
    groups = np.array([m for _, _, m in grid.constraint_groups()], dtype=np.int64)
    z = grid.flat_vectors()
    f, g = impl.violation_grad(z, groups, z, np.ones(16, dtype=bool), 0.0, 0.0)
    assert f < 1e-28 and np.max(np.abs(g)) < 1e-13
