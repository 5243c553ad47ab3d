"""Small dense complex linear algebra with explicit tolerances.

Vectors are 1-D ``complex128`` arrays and matrices are 2-D ``complex128``
arrays. Basis labels are 0-based throughout: the ket written ``|m>`` with
1-based ``m`` in the literature is index ``m - 1`` here.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by every check in the package.

    Attributes
    ----------
    eq_tol : float
        Two unit vectors are equal up to phase when ``|<u|v>| >= 1 - eq_tol``.
    orth_tol : float
        Largest accepted entry of ``G - I`` for a Gram matrix ``G``; also the
        relative singular-value cutoff used for numerical rank.
    solve_tol : float
        Fill threshold for the solver; a numerical witness must reach a total
        squared violation of at most ``solve_tol**2``.
    """

    eq_tol: float = 1e-9
    orth_tol: float = 1e-9
    solve_tol: float = 1e-8

    def __post_init__(self) -> None:
        for name in ("eq_tol", "orth_tol", "solve_tol"):
            value = getattr(self, name)
            if not (value > 0 and np.isfinite(value)):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")
        if self.eq_tol > self.solve_tol:
            raise ValueError("eq_tol must not exceed solve_tol")

    @classmethod
    def uniform(cls, tol: float) -> Tolerances:
        """Use ``tol`` for equality and orthonormality, ``10 * tol`` for solving."""
        return cls(eq_tol=tol, orth_tol=tol, solve_tol=10 * tol)

    @classmethod
    def from_env(cls, var: str = "SUDOQ_TOL") -> Tolerances:
        raw = os.environ.get(var)
        if not raw:
            return cls()
        return cls.uniform(float(raw))


DEFAULT_TOL = Tolerances()


def as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=np.complex128)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"expected a non-empty 1-D vector, got shape {arr.shape}")
    return arr


def as_matrix(m) -> np.ndarray:
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    return arr


def basis_vector(dim: int, index: int) -> np.ndarray:
    """Computational basis vector ``|index>`` (0-based) in dimension ``dim``."""
    if not 0 <= index < dim:
        raise ValueError(f"index {index} out of range for dimension {dim}")
    e = np.zeros(dim, dtype=np.complex128)
    e[index] = 1.0
    return e


def inner(u, v) -> complex:
    """Inner product ``<u|v>``, conjugate-linear in the first argument."""
    u, v = as_vector(u), as_vector(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.size} vs {v.size}")
    return complex(np.vdot(u, v))


def is_unit(v, tol: Tolerances = DEFAULT_TOL) -> bool:
    return abs(np.linalg.norm(as_vector(v)) - 1.0) <= tol.orth_tol


def _require_unit(v: np.ndarray, tol: Tolerances) -> None:
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > tol.orth_tol:
        raise ValueError(f"expected a unit vector, got norm {norm!r}")


def equal_up_to_phase(u, v, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff the unit vectors ``u`` and ``v`` differ only by a global phase."""
    u, v = as_vector(u), as_vector(v)
    _require_unit(u, tol)
    _require_unit(v, tol)
    return abs(inner(u, v)) >= 1.0 - tol.eq_tol


def canonical_phase(v, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Rotate ``v`` so its first component with modulus above ``eq_tol`` is real positive.

    The anchor is the first such component, not the largest, so the result is
    cheap and deterministic. Applying the function twice changes nothing.
    """
    v = as_vector(v)
    mags = np.abs(v)
    idx = np.flatnonzero(mags > tol.eq_tol)
    if idx.size == 0:
        raise ValueError("cannot fix the phase of a zero vector")
    anchor, m = v[idx[0]], mags[idx[0]]
    # componentwise so an already canonical vector is left bit-for-bit unchanged
    out = v * complex(anchor.real / m, -anchor.imag / m)
    out[idx[0]] = mags[idx[0]]
    return out


def gram(vs) -> np.ndarray:
    """Gram matrix ``G[a, b] = <v_a|v_b>`` of the rows of ``vs``."""
    vs = np.asarray(vs, dtype=np.complex128)
    return vs.conj() @ vs.T


def orthonormality_residual(vs) -> float:
    """``max |<v_a|v_b> - delta_ab|`` over the rows of ``vs``."""
    g = gram(vs)
    g[np.diag_indices_from(g)] -= 1.0
    return float(np.max(np.abs(g)))


def is_orthonormal_set(vs, tol: Tolerances = DEFAULT_TOL) -> tuple[bool, float]:
    """Check orthonormality of a list of vectors.

    Returns
    -------
    (bool, float)
        Whether the maximal Gram residual is within ``orth_tol``, and that
        residual.
    """
    vs = np.asarray(vs, dtype=np.complex128)
    if vs.ndim != 2 or vs.shape[0] == 0:
        raise ValueError("is_orthonormal_set needs a non-empty list of vectors")
    res = orthonormality_residual(vs)
    return res <= tol.orth_tol, res


def numerical_rank(vs, tol: Tolerances = DEFAULT_TOL) -> int:
    vs = np.asarray(vs, dtype=np.complex128)
    if vs.size == 0:
        return 0
    s = np.linalg.svd(vs, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.count_nonzero(s > tol.orth_tol * s[0]))


def orthogonal_complement(vs, dim: int, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of ``span(vs)``.

    Rank is decided by singular values above ``orth_tol`` times the largest
    one. The basis vectors are the rows of the returned ``(dim - rank, dim)``
    array; an empty input yields the computational basis.
    """
    vs = np.asarray(vs, dtype=np.complex128).reshape(-1, dim)
    if vs.shape[0] == 0:
        return np.eye(dim, dtype=np.complex128)
    # <v|x> = 0 for all rows v  <=>  conj(A) x = 0
    _, s, vh = np.linalg.svd(vs.conj(), full_matrices=True)
    rank = int(np.count_nonzero(s > tol.orth_tol * s[0])) if s[0] > 0 else 0
    return vh[rank:].conj()


def is_unitary(m, tol: Tolerances = DEFAULT_TOL) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"is_unitary needs a square matrix, got {m.shape}")
    dev = m.conj().T @ m - np.eye(m.shape[0])
    return float(np.max(np.abs(dev))) <= tol.orth_tol


def haar_random_unitary(n: int, seed) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary.

    QR of a complex Ginibre matrix, with the phases of ``diag(R)`` pushed back
    into ``Q`` so the distribution is exactly Haar (Mezzadri's correction).
    ``seed`` is anything accepted by :func:`numpy.random.default_rng`.
    """
    if n < 1:
        raise ValueError("haar_random_unitary needs n >= 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def eigencheck(m, v, tol: Tolerances = DEFAULT_TOL) -> tuple[complex, float]:
    """Rayleigh quotient ``<v|M v>`` and eigen-residual ``||M v - lambda v||``.

    ``v`` counts as an eigenvector of ``M`` when the residual is at most
    ``tol.orth_tol``.
    """
    m, v = as_matrix(m), as_vector(v)
    if m.shape[0] != m.shape[1]:
        raise ValueError("eigencheck needs a square matrix")
    if m.shape[1] != v.size:
        raise ValueError(f"dimension mismatch: matrix {m.shape} vs vector {v.size}")
    mv = m @ v
    lam = complex(np.vdot(v, mv))
    return lam, float(np.linalg.norm(mv - lam * v))


def is_eigenvector(m, v, tol: Tolerances = DEFAULT_TOL) -> bool:
    return eigencheck(m, v, tol)[1] <= tol.orth_tol


def shift_matrix(n: int) -> np.ndarray:
    """Shift ``X = sum_j |j><j+1|`` (indices mod ``n``)."""
    x = np.zeros((n, n), dtype=np.complex128)
    for j in range(n):
        x[j, (j + 1) % n] = 1.0
    return x


def phase_matrix(n: int) -> np.ndarray:
    """Clock ``Z`` with ``Z |m> = omega^(m+1) |m>`` for 0-based ``m``, ``omega = exp(2 pi i / n)``.

    This is ``sum_j omega^j |j><j|`` over 1-based labels ``j``; it satisfies
    ``X Z = omega Z X`` with :func:`shift_matrix`.
    """
    return np.diag(np.exp(2j * np.pi * (np.arange(n) + 1) / n))
