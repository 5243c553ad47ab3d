"""Closed-form 4x4 solutions, their cardinalities, entropy and clue patterns.

Every 4x4 solution here is laid out as::

    e1 e2 | f1 f2
    e3 e4 | f3 f4
    ------+------
    v1 v2 | u1 u2
    v3 v4 | u3 u4

with ``e_i`` the computational basis and ``f_i``, ``v_i``, ``u_i`` the
columns of the unitaries ``U_ef``, ``U_ev`` and ``U_eu``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import DEFAULT_TOL, Tolerances
from .model import SudoQGrid, cardinality, validate

ADMISSIBLE_4X4 = frozenset({4, 6, 8, 16})
FOUR_CLUE_POSITIONS = ((0, 0), (1, 2), (2, 1), (3, 3))


@dataclass(frozen=True)
class C16Params:
    """Angles ``alpha, gamma`` in ``[0, pi]`` and phases ``phi, varphi, eta``.

    The fourth phase is fixed by ``zeta = phi + eta - varphi``.
    """

    alpha: float
    gamma: float
    phi: float = 0.0
    varphi: float = 0.0
    eta: float = 0.0

    @property
    def zeta(self) -> float:
        return self.phi + self.eta - self.varphi

    @property
    def p(self) -> float:
        return float(np.cos(self.alpha / 2) ** 2)

    @property
    def q(self) -> float:
        return float(np.cos(self.gamma / 2) ** 2)


@dataclass(frozen=True)
class C8Params:
    """One of the four cardinality-8 families with angles ``alpha, beta``."""

    family: int
    alpha: float
    beta: float
    phi: float = 0.0
    varphi: float = 0.0

    def __post_init__(self) -> None:
        if self.family not in (1, 2, 3, 4):
            raise ValueError(f"family must be 1..4, got {self.family}")


def _grid_from_unitaries(u_ef, u_ev, u_eu) -> SudoQGrid:
    e = np.eye(4, dtype=np.complex128)
    f, v, u = u_ef.T, u_ev.T, u_eu.T
    rows = [
        [e[0], e[1], f[0], f[1]],
        [e[2], e[3], f[2], f[3]],
        [v[0], v[1], u[0], u[1]],
        [v[2], v[3], u[2], u[3]],
    ]
    return SudoQGrid.from_array(2, np.array(rows))


def _bloch_pair_block(angle: float, phase: float) -> np.ndarray:
    # columns (c, e^{i phase} s) and (s, -e^{i phase} c) on a 2-dim subspace
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    w = np.exp(1j * phase)
    return np.array([[c, s], [w * s, -w * c]])


def _rotated_pair_block(angle: float, phase: float) -> np.ndarray:
    # columns (s, -e^{i phase} c) and (c, e^{i phase} s)
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    w = np.exp(1j * phase)
    return np.array([[s, c], [-w * c, w * s]])


def c16_unitaries(p: C16Params) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    ca, sa = np.cos(p.alpha / 2), np.sin(p.alpha / 2)
    cg, sg = np.cos(p.gamma / 2), np.sin(p.gamma / 2)
    w_phi, w_vphi = np.exp(1j * p.phi), np.exp(1j * p.varphi)
    w_eta, w_zeta = np.exp(1j * p.eta), np.exp(1j * p.zeta)
    w_pe = np.exp(1j * (p.phi + p.eta))
    u_ef = np.array([
        [0, 0, ca, sa],
        [0, 0, w_phi * sa, -w_phi * ca],
        [ca, sa, 0, 0],
        [w_vphi * sa, -w_vphi * ca, 0, 0],
    ], dtype=np.complex128)
    u_ev = np.array([
        [0, cg, 0, sg],
        [cg, 0, sg, 0],
        [0, w_zeta * sg, 0, -w_zeta * cg],
        [w_eta * sg, 0, -w_eta * cg, 0],
    ], dtype=np.complex128)
    u_eu = np.array([
        [sa * sg, ca * sg, sa * cg, ca * cg],
        [-w_phi * ca * sg, w_phi * sa * sg, -w_phi * ca * cg, w_phi * sa * cg],
        [-w_zeta * sa * cg, -w_zeta * ca * cg, w_zeta * sa * sg, w_zeta * ca * sg],
        [w_pe * ca * cg, -w_pe * sa * cg, -w_pe * ca * sg, w_pe * sa * sg],
    ], dtype=np.complex128)
    return u_ef, u_ev, u_eu


def solution_c16(p: C16Params) -> SudoQGrid:
    """Cardinality-16 family (16 for generic angles, 8 or 4 at the poles)."""
    return _grid_from_unitaries(*c16_unitaries(p))


def _perm(cols) -> np.ndarray:
    # permutation matrix whose column j is |cols[j]>
    m = np.zeros((4, 4), dtype=np.complex128)
    for j, r in enumerate(cols):
        m[r, j] = 1.0
    return m


def c8_unitaries(p: C8Params) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    a = _bloch_pair_block(p.alpha, p.varphi)
    b = _bloch_pair_block(p.beta, p.phi)
    ar = _rotated_pair_block(p.alpha, p.varphi)
    br = _rotated_pair_block(p.beta, p.phi)
    z = np.zeros((4, 4), dtype=np.complex128)

    if p.family in (1, 2):
        u_ef = z.copy()
        u_ef[0:2, 2:4] = b
        u_ef[2:4, 0:2] = a
        u_eu = z.copy()
        if p.family == 1:
            u_ev = _perm([1, 0, 3, 2])
            u_eu[0:2, 2:4] = br
            u_eu[2:4, 0:2] = ar
        else:
            u_ev = _perm([3, 2, 1, 0])
            u_eu[0:2, 0:2] = br
            u_eu[2:4, 2:4] = ar
        return u_ef, u_ev, u_eu

    # families 3 and 4 put the angles into U_ev on the (1,3) / (2,4) subspaces
    u_ev = z.copy()
    u_ev[np.ix_([1, 3], [0, 2])] = a
    u_ev[np.ix_([0, 2], [1, 3])] = b
    u_eu = z.copy()
    if p.family == 3:
        u_ef = _perm([2, 3, 0, 1])
        u_eu[np.ix_([1, 3], [0, 2])] = ar
        u_eu[np.ix_([0, 2], [1, 3])] = br
    else:
        u_ef = _perm([3, 2, 1, 0])
        u_eu[np.ix_([0, 2], [0, 2])] = br
        u_eu[np.ix_([1, 3], [1, 3])] = ar
    return u_ef, u_ev, u_eu


def solution_c8(p: C8Params) -> SudoQGrid:
    """Cardinality-8 families (6 when one angle sits at a pole, 4 when both do)."""
    return _grid_from_unitaries(*c8_unitaries(p))


class Cardinality4x4(NamedTuple):
    c: int
    anomaly: bool


def classify_cardinality_4x4(grid: SudoQGrid, tol: Tolerances = DEFAULT_TOL) -> Cardinality4x4:
    """Cardinality of a complete valid 4x4 solution, flagged if outside ``{4, 6, 8, 16}``."""
    if grid.n != 2:
        raise ValueError("classify_cardinality_4x4 needs a 4x4 grid")
    if not grid.is_complete:
        raise ValueError("grid has blank cells")
    report = validate(grid, tol)
    if not report.valid:
        raise ValueError(f"grid is not a valid solution (max residual {report.max_residual:.3e})")
    c = cardinality(grid, tol).c
    return Cardinality4x4(c, c not in ADMISSIBLE_4X4)


def _xlogx(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log2(x[pos])
    return out


def shannon_entropy(v) -> float:
    """Entropy in bits of the computational-basis distribution of ``v / ||v||``."""
    v = np.asarray(v, dtype=np.complex128)
    probs = np.abs(v) ** 2
    probs = probs / probs.sum()
    return float(-np.sum(_xlogx(probs))) + 0.0


def binary_entropy(x: float) -> float:
    return float(-_xlogx(x) - _xlogx(1.0 - x)) + 0.0


def h4(x: float, y: float) -> float:
    """Entropy of the product distribution ``(x, 1-x) x (y, 1-y)``."""
    probs = np.array([x * y, x * (1 - y), (1 - x) * y, (1 - x) * (1 - y)])
    return float(-np.sum(_xlogx(probs))) + 0.0


def entropy_closed_form(p: float, q: float) -> float:
    """``2 h2(p) + 2 h2(q) + 4 h4(p, q)`` for the cardinality-16 family."""
    return 2 * binary_entropy(p) + 2 * binary_entropy(q) + 4 * h4(p, q)


@dataclass(frozen=True)
class EntropyReport:
    per_cell: np.ndarray
    total: float
    closed_form: float | None = None

    def to_dict(self) -> dict:
        return {"per_cell": self.per_cell.tolist(), "total": self.total,
                "closed_form": self.closed_form}


def entropy(grid: SudoQGrid, p: float | None = None, q: float | None = None) -> EntropyReport:
    """Per-cell Shannon entropies in bits, their sum, and optionally the closed form.

    The closed form counts a different vector multiset than the per-cell sum
    (it gives 12 bits at ``p = q = 1/2`` where the sum is 16), so the two are
    reported side by side rather than compared.
    """
    if not grid.is_complete:
        raise ValueError("entropy needs a complete grid")
    per_cell = np.array([[shannon_entropy(grid.cells[r, c]) for c in range(grid.dim)]
                         for r in range(grid.dim)])
    closed = entropy_closed_form(p, q) if p is not None and q is not None else None
    return EntropyReport(per_cell, float(per_cell.sum()), closed)


def params_from_pq(p: float, q: float) -> C16Params:
    """Angles with ``cos^2(alpha/2) = p`` and ``cos^2(gamma/2) = q``, phases zero."""
    return C16Params(2 * np.arccos(np.sqrt(p)), 2 * np.arccos(np.sqrt(q)))


def entropy_sweep(steps: int = 101) -> list[tuple[float, float, float, float]]:
    """Rows ``(p, q, closed_form, direct_total)`` on a ``steps x steps`` lattice of ``[0, 1]**2``."""
    grid_pts = np.linspace(0.0, 1.0, steps)
    rows = []
    for p in grid_pts:
        for q in grid_pts:
            total = entropy(solution_c16(params_from_pq(p, q))).total
            rows.append((float(p), float(q), entropy_closed_form(p, q), total))
    return rows


def closed_form_maximizer(steps: int = 101) -> tuple[float, float, float]:
    """``(p, q, value)`` maximizing the closed form over the lattice."""
    pts = np.linspace(0.0, 1.0, steps)
    vals = np.array([[entropy_closed_form(p, q) for q in pts] for p in pts])
    a, b = np.unravel_index(np.argmax(vals), vals.shape)
    return float(pts[a]), float(pts[b]), float(vals[a, b])


def four_clue_grid(solution: SudoQGrid) -> SudoQGrid:
    """Keep only cells ``e1, f3, v2, u4`` of a complete 4x4 solution."""
    if solution.n != 2:
        raise ValueError("four_clue_grid needs a 4x4 grid")
    if not solution.is_complete:
        raise ValueError("four_clue_grid needs a complete grid")
    return solution.keep_only(FOUR_CLUE_POSITIONS)


def random_c16_params(rng: np.random.Generator, degenerate: str = "none") -> C16Params:
    """Random parameters; ``degenerate`` pins ``"one"`` or ``"both"`` angles to a pole."""
    alpha, gamma = rng.uniform(0.0, np.pi, size=2)
    phi, varphi, eta = rng.uniform(0.0, 2 * np.pi, size=3)
    if degenerate in ("one", "both"):
        pole = rng.choice([0.0, np.pi])
        if degenerate == "both" or rng.random() < 0.5:
            alpha = pole
        if degenerate == "both":
            gamma = rng.choice([0.0, np.pi])
        elif alpha != pole:
            gamma = pole
    return C16Params(alpha, gamma, phi, varphi, eta)


def random_c8_params(rng: np.random.Generator, family: int | None = None,
                     degenerate: str = "none") -> C8Params:
    fam = int(rng.integers(1, 5)) if family is None else family
    alpha, beta = rng.uniform(0.0, np.pi, size=2)
    phi, varphi = rng.uniform(0.0, 2 * np.pi, size=2)
    if degenerate in ("one", "both"):
        pole = rng.choice([0.0, np.pi])
        if degenerate == "both" or rng.random() < 0.5:
            alpha = pole
        if degenerate == "both":
            beta = rng.choice([0.0, np.pi])
        elif alpha != pole:
            beta = pole
    return C8Params(fam, alpha, beta, phi, varphi)
