"""Generators for grids, cubes, hypercubes and the bases they are built from.

Unitary families are arrays of shape ``(N, N, N)``: ``family[m]`` is the
``m``-th member and its columns are the basis vectors it contributes. All
index arithmetic is mod ``N`` with 0-based labels.
"""

from __future__ import annotations

import itertools
from functools import reduce
from math import isqrt

import numpy as np

from .linalg import (DEFAULT_TOL, Tolerances, canonical_phase, haar_random_unitary,
                     is_unitary, phase_matrix, shift_matrix)
from .model import SudoQGrid, SudoQHypercube, cardinality, cell_coords


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, isqrt(n) + 1))


def _require_prime(n: int) -> None:
    if not is_prime(n):
        raise ValueError(f"N={n} is not prime")


def check_family(family, n: int | None = None, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Coerce to an ``(N, N, N)`` array and check every member is unitary."""
    fam = np.asarray(family, dtype=np.complex128)
    if fam.ndim != 3 or fam.shape[1] != fam.shape[2]:
        raise ValueError(f"a family is a stack of square matrices, got shape {fam.shape}")
    size = fam.shape[1]
    if fam.shape[0] != size:
        raise ValueError(f"a family for N={size} needs {size} members, got {fam.shape[0]}")
    if n is not None and size != n:
        raise ValueError(f"family has N={size}, expected N={n}")
    for m, u in enumerate(fam):
        if not is_unitary(u, tol):
            raise ValueError(f"family member {m} is not unitary")
    return fam


def identity_family(n: int) -> np.ndarray:
    return np.broadcast_to(np.eye(n, dtype=np.complex128), (n, n, n)).copy()


def haar_family(n: int, seed) -> np.ndarray:
    """``N`` independent Haar unitaries drawn from one seed or generator."""
    if isinstance(seed, np.random.Generator):
        children = seed.spawn(n)
    else:
        children = np.random.SeedSequence(seed).spawn(n)
    return np.stack([haar_random_unitary(n, c) for c in children])


def classical_cyclic_grid(n: int) -> SudoQGrid:
    """Cell ``(i, j, k, l)`` is ``|N*((j+k) mod N) + (i+l) mod N>``."""
    if n < 2:
        raise ValueError("N must be at least 2")
    dim = n * n
    cells = np.zeros((dim, dim, dim), dtype=np.complex128)
    for i, j, k, l in itertools.product(range(n), repeat=4):
        r, c = cell_coords(n, i, j, k, l)
        cells[r, c, n * ((j + k) % n) + (i + l) % n] = 1.0
    return SudoQGrid.from_array(n, cells)


def grid_from_unitary_families(us, vs, tol: Tolerances = DEFAULT_TOL) -> SudoQGrid:
    """Cell ``(i, j, k, l) = U_i[:, j+k] (x) V_j[:, i+l]``."""
    us = check_family(us, tol=tol)
    n = us.shape[0]
    vs = check_family(vs, n, tol)
    dim = n * n
    cells = np.zeros((dim, dim, dim), dtype=np.complex128)
    for i, j, k, l in itertools.product(range(n), repeat=4):
        r, c = cell_coords(n, i, j, k, l)
        cells[r, c] = np.kron(us[i][:, (j + k) % n], vs[j][:, (i + l) % n])
    return SudoQGrid.from_array(n, cells)


def distinct_columns(family, tol: Tolerances = DEFAULT_TOL) -> int:
    """Phase-distinct columns across all members of a family."""
    fam = np.asarray(family, dtype=np.complex128)
    cols = np.concatenate([u.T for u in fam])
    return cardinality(cols, tol).c


def predicted_cardinality(us, vs, tol: Tolerances = DEFAULT_TOL) -> int:
    """``c1 * c2`` from the phase-distinct columns of each family."""
    return distinct_columns(us, tol) * distinct_columns(vs, tol)


def hw_operator(n: int, t: int) -> np.ndarray:
    """Operator whose eigenbasis is ``hw_basis(n, t)``: ``Z`` for t=0, else ``X Z^(t-1)``."""
    if not 0 <= t <= n:
        raise ValueError(f"basis index t={t} out of range 0..{n}")
    if t == 0:
        return phase_matrix(n)
    return shift_matrix(n) @ np.linalg.matrix_power(phase_matrix(n), t - 1)


def hw_basis(n: int, t: int, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Eigenbasis of a Heisenberg-Weyl operator, as rows.

    ``t = 0`` gives the computational basis. For ``t >= 1`` with ``k = t - 1``
    the rows are the eigenvectors of ``X Z^k``::

        v_j(m) = exp(2 pi i / N * (j m + k m (N - m) / 2)) / sqrt(N)

    ``m (N - m) / 2`` is the sum ``1 + 2 + ... + (m - 1)`` shifted so the
    phase is well defined mod ``N`` for every ``N``, odd or even. For
    ``N = 2`` the bases ``t = 1, 2`` are the ``X`` and ``Y`` eigenbases.
    ``t`` runs over ``0..N``; the ``N + 1`` bases are mutually unbiased when
    ``N`` is prime.
    """
    if n < 2:
        raise ValueError("N must be at least 2")
    if not 0 <= t <= n:
        raise ValueError(f"basis index t={t} out of range 0..{n}")
    if t == 0:
        return np.eye(n, dtype=np.complex128)
    k = t - 1
    m = np.arange(n)
    j = np.arange(n)[:, None]
    phase = (j * m + k * m * (n - m) / 2.0) / n
    basis = np.exp(2j * np.pi * phase) / np.sqrt(n)
    return np.array([canonical_phase(v, tol) for v in basis])


def hw_mub_set(n: int) -> list[np.ndarray]:
    """``N + 1`` mutually unbiased bases for prime ``N`` (rows are vectors)."""
    _require_prime(n)
    return [hw_basis(n, t) for t in range(n + 1)]


def check_unbiased(b, c, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Every cross overlap ``|<b|c>|^2`` equals ``1/d`` within ``orth_tol``."""
    b = np.asarray(b, dtype=np.complex128)
    c = np.asarray(c, dtype=np.complex128)
    if b.shape[1] != c.shape[1]:
        raise ValueError(f"dimension mismatch: {b.shape[1]} vs {c.shape[1]}")
    d = b.shape[1]
    ov = np.abs(b.conj() @ c.T) ** 2
    return bool(np.max(np.abs(ov - 1.0 / d)) <= tol.orth_tol)


def hw_family(n: int) -> np.ndarray:
    """Family whose member ``t`` has the vectors of ``hw_basis(n, t)`` as columns."""
    return np.stack([hw_basis(n, t).T for t in range(n)])


def hw_sudoq(n: int) -> SudoQGrid:
    """Grid built from two copies of :func:`hw_family`; maximal cardinality for prime N."""
    fam = hw_family(n)
    return grid_from_unitary_families(fam, fam)


def _hypercube_cells(families: list[np.ndarray], member_index) -> np.ndarray:
    dd = len(families)
    n = families[0].shape[0]
    cells = np.zeros((n ** (2 * dd), n ** dd), dtype=np.complex128)
    for f, idx in enumerate(itertools.product(range(n), repeat=2 * dd)):
        i, k = idx[:dd], idx[dd:]
        factors = [families[t][member_index(t, i) % n][:, (k[t] + i[t]) % n] for t in range(dd)]
        cells[f] = reduce(np.kron, factors)
    return cells


def hypercube_from_families(d_sides: int, families, tol: Tolerances = DEFAULT_TOL) -> SudoQHypercube:
    """Factor ``t`` uses member ``sum_{s != t} i_s`` and column ``k_t + i_t`` (mod N)."""
    if d_sides < 2:
        raise ValueError("hypercubes need D >= 2")
    if len(families) != d_sides:
        raise ValueError(f"need {d_sides} families, got {len(families)}")
    fams = [check_family(f, tol=tol) for f in families]
    n = fams[0].shape[0]
    if any(f.shape[0] != n for f in fams):
        raise ValueError("all families must share N")

    def member(t, i):
        return sum(i) - i[t]

    return SudoQHypercube.from_array(n, d_sides, _hypercube_cells(fams, member))


def cube_from_families(us, vs, ws, variant: str = "standard",
                       tol: Tolerances = DEFAULT_TOL) -> SudoQHypercube:
    """Three-sided hypercube.

    ``standard`` uses members ``(i2+i3, i1+i3, i1+i2)``. ``even_modified``
    replaces the last by ``i1 + 2 i2``; for even N this lifts the cardinality
    from ``N**6 / 2`` to ``N**6`` on generic families.
    """
    if variant not in ("standard", "even_modified"):
        raise ValueError(f"unknown cube variant {variant!r}")
    fams = [check_family(f, tol=tol) for f in (us, vs, ws)]
    n = fams[0].shape[0]
    if any(f.shape[0] != n for f in fams):
        raise ValueError("all families must share N")

    def member(t, i):
        if t == 2 and variant == "even_modified":
            return i[0] + 2 * i[1]
        return sum(i) - i[t]

    return SudoQHypercube.from_array(n, 3, _hypercube_cells(fams, member))


def local_mub_product_bases(n: int) -> list[np.ndarray]:
    """``N + 1`` product bases ``{b (x) b' : b, b' in B_t}`` of dimension ``N**2``."""
    out = []
    for basis in hw_mub_set(n):
        out.append(np.array([np.kron(b, bp) for b in basis for bp in basis]))
    return out


def is_product_vector(v, n: int, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Schmidt rank one across the ``N x N`` split."""
    s = np.linalg.svd(np.asarray(v, dtype=np.complex128).reshape(n, n), compute_uv=False)
    return bool(s[1] <= tol.orth_tol * s[0])
