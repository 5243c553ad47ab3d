"""Grids, cubes and hypercubes of unit vectors, with validation and cardinality.

Index convention (0-based). A grid of block size ``N`` has ``N**2`` rows and
columns and every cell holds a vector in dimension ``N**2``. The cell with
block coordinates ``(i, j)`` and in-block offsets ``(k, l)`` sits at
``row = N*i + k`` and ``col = N*j + l``. Rows fix ``(i, k)``, columns fix
``(j, l)`` and blocks fix ``(i, j)``.

A hypercube with ``D`` sides stores ``N**(2D)`` cells indexed by
``(i_1..i_D, k_1..k_D)`` in row-major order, each a vector in dimension
``N**D``. Its constraint groups are the blocks (all ``i`` fixed) and, for each
side ``t``, the groups obtained by swapping the roles of ``i_t`` and ``k_t``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .linalg import DEFAULT_TOL, Tolerances, canonical_phase, is_unitary, orthonormality_residual

INGEST_NORM_TOL = 1e-6


def cell_coords(n: int, i: int, j: int, k: int, l: int) -> tuple[int, int]:
    """Map block/offset indices to ``(row, col)``."""
    for name, v in (("i", i), ("j", j), ("k", k), ("l", l)):
        if not 0 <= v < n:
            raise ValueError(f"index {name}={v} out of range for N={n}")
    return n * i + k, n * j + l


def cell_indices(n: int, row: int, col: int) -> tuple[int, int, int, int]:
    """Inverse of :func:`cell_coords`: ``(row, col) -> (i, j, k, l)``."""
    dim = n * n
    if not (0 <= row < dim and 0 <= col < dim):
        raise ValueError(f"cell ({row}, {col}) out of range for N={n}")
    i, k = divmod(row, n)
    j, l = divmod(col, n)
    return i, j, k, l


def _check_cells(cells: np.ndarray, present: np.ndarray, dim: int) -> None:
    if cells.shape[-1] != dim:
        raise ValueError(f"cells must have dimension {dim}, got {cells.shape[-1]}")
    norms = np.linalg.norm(cells[present], axis=-1)
    bad = np.abs(norms - 1.0) > INGEST_NORM_TOL
    if np.any(bad):
        raise ValueError(f"present cells must be unit vectors (worst norm {norms[bad][0]!r})")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


class _Design:
    """Shared behaviour of grids and hypercubes over a flat cell list."""

    n: int
    _flat: np.ndarray
    _mask: np.ndarray

    @property
    def dim(self) -> int:
        return self._flat.shape[-1]

    @property
    def is_complete(self) -> bool:
        return bool(self._mask.all())

    @property
    def n_present(self) -> int:
        return int(self._mask.sum())

    def flat_vectors(self) -> np.ndarray:
        """All cells as an ``(ncells, dim)`` array; blank rows are zero."""
        return self._flat

    def flat_mask(self) -> np.ndarray:
        return self._mask

    def constraint_groups(self) -> list[tuple[str, int, np.ndarray]]:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class SudoQGrid(_Design):
    """An ``N**2 x N**2`` grid of optional unit vectors in dimension ``N**2``.

    Use :meth:`from_cells` or :meth:`from_array` rather than the raw
    constructor.
    """

    n: int
    cells: np.ndarray  # (dim, dim, dim) complex, zero where blank
    present: np.ndarray  # (dim, dim) bool
    _flat: np.ndarray = field(init=False, repr=False)
    _mask: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("block size N must be at least 2")
        dim = self.n * self.n
        cells = np.asarray(self.cells, dtype=np.complex128)
        present = np.asarray(self.present, dtype=bool)
        if cells.ndim != 3 or cells.shape[:2] != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} grid of vectors, got shape {cells.shape}")
        if present.shape != (dim, dim):
            raise ValueError("presence mask has the wrong shape")
        _check_cells(cells, present, dim)
        cells = np.where(present[..., None], cells, 0.0)
        object.__setattr__(self, "cells", _frozen(cells))
        object.__setattr__(self, "present", _frozen(present))
        object.__setattr__(self, "_flat", self.cells.reshape(dim * dim, dim))
        object.__setattr__(self, "_mask", self.present.reshape(-1))

    @classmethod
    def from_array(cls, n: int, cells) -> SudoQGrid:
        """Complete grid from a ``(dim, dim, dim)`` array."""
        cells = np.asarray(cells, dtype=np.complex128)
        dim = n * n
        return cls(n, cells, np.ones((dim, dim), dtype=bool))

    @classmethod
    def from_cells(cls, n: int, rows) -> SudoQGrid:
        """Grid from nested lists where blank cells are ``None``."""
        dim = n * n
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise ValueError(f"expected {dim} rows of {dim} cells")
        cells = np.zeros((dim, dim, dim), dtype=np.complex128)
        present = np.zeros((dim, dim), dtype=bool)
        for r, row in enumerate(rows):
            for c, v in enumerate(row):
                if v is None:
                    continue
                v = np.asarray(v, dtype=np.complex128)
                if v.shape != (dim,):
                    raise ValueError(f"cell ({r}, {c}) has shape {v.shape}, expected ({dim},)")
                cells[r, c] = v
                present[r, c] = True
        return cls(n, cells, present)

    @classmethod
    def empty(cls, n: int) -> SudoQGrid:
        dim = n * n
        return cls(n, np.zeros((dim, dim, dim)), np.zeros((dim, dim), dtype=bool))

    def get(self, row: int, col: int) -> np.ndarray | None:
        return self.cells[row, col] if self.present[row, col] else None

    def at(self, i: int, j: int, k: int, l: int) -> np.ndarray | None:
        return self.get(*cell_coords(self.n, i, j, k, l))

    def with_cell(self, row: int, col: int, v) -> SudoQGrid:
        """Copy with one cell replaced; ``v=None`` blanks it."""
        cells = self.cells.copy()
        present = self.present.copy()
        if v is None:
            cells[row, col] = 0.0
            present[row, col] = False
        else:
            cells[row, col] = v
            present[row, col] = True
        return SudoQGrid(self.n, cells, present)

    def keep_only(self, positions) -> SudoQGrid:
        """Copy with every cell outside ``positions`` blanked."""
        present = np.zeros_like(self.present)
        for r, c in positions:
            if not self.present[r, c]:
                raise ValueError(f"cell ({r}, {c}) is blank")
            present[r, c] = True
        return SudoQGrid(self.n, self.cells, present)

    def constraint_groups(self) -> list[tuple[str, int, np.ndarray]]:
        """``(kind, index, flat cell indices)`` for every row, column and block.

        Members are listed in ascending flat (row-major) order.
        """
        return _grid_groups(self.n)

    def groups_of(self, row: int, col: int) -> list[tuple[str, int]]:
        i, j, k, _ = cell_indices(self.n, row, col)
        return [("row", row), ("col", col), ("block", self.n * i + j)]

    def neighbors(self, row: int, col: int) -> list[tuple[int, int]]:
        """Cells sharing a row, column or block with ``(row, col)``, excluding itself."""
        n, dim = self.n, self.dim
        out = {(row, c) for c in range(dim)} | {(r, col) for r in range(dim)}
        br, bc = n * (row // n), n * (col // n)
        out |= {(br + a, bc + b) for a in range(n) for b in range(n)}
        out.discard((row, col))
        return sorted(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SudoQGrid):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.present, other.present)
                and np.array_equal(self.cells, other.cells))

    __hash__ = None


_GROUP_CACHE: dict = {}


def _grid_groups(n: int) -> list[tuple[str, int, np.ndarray]]:
    key = ("grid", n)
    if key not in _GROUP_CACHE:
        dim = n * n
        idx = np.arange(dim * dim).reshape(dim, dim)
        groups = [("row", r, idx[r, :].copy()) for r in range(dim)]
        groups += [("col", c, idx[:, c].copy()) for c in range(dim)]
        for i in range(n):
            for j in range(n):
                groups.append(("block", n * i + j,
                               idx[n * i:n * i + n, n * j:n * j + n].reshape(-1).copy()))
        _GROUP_CACHE[key] = groups
    return _GROUP_CACHE[key]


@dataclass(frozen=True, eq=False)
class SudoQHypercube(_Design):
    """``N**(2D)`` optional unit vectors in dimension ``N**D``.

    ``cells`` is flat, row-major over ``(i_1..i_D, k_1..k_D)``.
    """

    n: int
    d_sides: int
    cells: np.ndarray  # (N**(2D), N**D)
    present: np.ndarray  # (N**(2D),)
    _flat: np.ndarray = field(init=False, repr=False)
    _mask: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.n < 2 or self.d_sides < 2:
            raise ValueError("hypercubes need N >= 2 and D >= 2")
        dim = self.n ** self.d_sides
        ncell = self.n ** (2 * self.d_sides)
        cells = np.asarray(self.cells, dtype=np.complex128)
        present = np.asarray(self.present, dtype=bool)
        if cells.shape != (ncell, dim) or present.shape != (ncell,):
            raise ValueError(f"expected {ncell} cells of dimension {dim}, got {cells.shape}")
        _check_cells(cells, present, dim)
        cells = np.where(present[:, None], cells, 0.0)
        object.__setattr__(self, "cells", _frozen(cells))
        object.__setattr__(self, "present", _frozen(present))
        object.__setattr__(self, "_flat", self.cells)
        object.__setattr__(self, "_mask", self.present)

    @classmethod
    def from_array(cls, n: int, d_sides: int, cells) -> SudoQHypercube:
        cells = np.asarray(cells, dtype=np.complex128)
        return cls(n, d_sides, cells, np.ones(cells.shape[0], dtype=bool))

    def flat_index(self, i: tuple[int, ...], k: tuple[int, ...]) -> int:
        return hypercube_flat_index(self.n, tuple(i) + tuple(k))

    def get(self, i, k) -> np.ndarray | None:
        f = self.flat_index(i, k)
        return self.cells[f] if self.present[f] else None

    def constraint_groups(self) -> list[tuple[str, int, np.ndarray]]:
        return _hypercube_groups(self.n, self.d_sides)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SudoQHypercube):
            return NotImplemented
        return (self.n == other.n and self.d_sides == other.d_sides
                and np.array_equal(self.present, other.present)
                and np.array_equal(self.cells, other.cells))

    __hash__ = None


def hypercube_flat_index(n: int, index: tuple[int, ...]) -> int:
    out = 0
    for v in index:
        if not 0 <= v < n:
            raise ValueError(f"index {v} out of range for N={n}")
        out = out * n + v
    return out


def _hypercube_groups(n: int, dd: int) -> list[tuple[str, int, np.ndarray]]:
    key = ("hyper", n, dd)
    if key in _GROUP_CACHE:
        return _GROUP_CACHE[key]
    idx = np.arange(n ** (2 * dd)).reshape((n,) * (2 * dd))
    groups = []
    # block: all i fixed, k free
    for g, ituple in enumerate(itertools.product(range(n), repeat=dd)):
        groups.append(("block", g, idx[ituple].reshape(-1).copy()))
    # swap_t: k_t and i_s (s != t) fixed, i_t and k_s (s != t) free
    for t in range(dd):
        fixed_axes = [s for s in range(dd) if s != t] + [dd + t]
        for g, vals in enumerate(itertools.product(range(n), repeat=dd)):
            sel = [slice(None)] * (2 * dd)
            for ax, v in zip(fixed_axes, vals):
                sel[ax] = v
            groups.append((f"swap{t + 1}", g, idx[tuple(sel)].reshape(-1).copy()))
    _GROUP_CACHE[key] = groups
    return groups


def grid_to_hypercube(grid: SudoQGrid) -> SudoQHypercube:
    """Relabel a grid as a 2-sided hypercube: ``i=i_2, j=i_1, k=k_1, l=k_2``."""
    n = grid.n
    cells = np.zeros((n ** 4, n * n), dtype=np.complex128)
    present = np.zeros(n ** 4, dtype=bool)
    for i1, i2, k1, k2 in itertools.product(range(n), repeat=4):
        r, c = cell_coords(n, i2, i1, k1, k2)
        f = hypercube_flat_index(n, (i1, i2, k1, k2))
        cells[f] = grid.cells[r, c]
        present[f] = grid.present[r, c]
    return SudoQHypercube(n, 2, cells, present)


def hypercube_to_grid(cube: SudoQHypercube) -> SudoQGrid:
    if cube.d_sides != 2:
        raise ValueError("only 2-sided hypercubes are grids")
    n = cube.n
    dim = n * n
    cells = np.zeros((dim, dim, dim), dtype=np.complex128)
    present = np.zeros((dim, dim), dtype=bool)
    for i1, i2, k1, k2 in itertools.product(range(n), repeat=4):
        r, c = cell_coords(n, i2, i1, k1, k2)
        f = hypercube_flat_index(n, (i1, i2, k1, k2))
        cells[r, c] = cube.cells[f]
        present[r, c] = cube.present[f]
    return SudoQGrid(n, cells, present)


# hypercube family names that play the role of grid rows and columns
GRID_FAMILY_OF_SWAP = {"swap1": "row", "swap2": "col", "block": "block"}


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of checking every constraint group.

    ``worst`` maps each constraint family (``row``/``col``/``block`` for
    grids, ``block``/``swap1``..``swapD`` for hypercubes) to its largest
    Gram residual. ``violated`` lists ``(family, index, residual)``.
    """

    valid: bool
    worst: dict[str, float]
    violated: list[tuple[str, int, float]]
    complete: bool

    @property
    def worst_row(self) -> float:
        return self.worst.get("row", self.worst.get("swap1", 0.0))

    @property
    def worst_col(self) -> float:
        return self.worst.get("col", self.worst.get("swap2", 0.0))

    @property
    def worst_block(self) -> float:
        return self.worst.get("block", 0.0)

    @property
    def max_residual(self) -> float:
        return max(self.worst.values(), default=0.0)

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "complete": self.complete,
            "worst": dict(self.worst),
            "violated": [{"family": f, "index": i, "residual": r} for f, i, r in self.violated],
        }


def validate(design: _Design, tol: Tolerances = DEFAULT_TOL) -> ValidationReport:
    """Check orthonormality of every constraint group.

    For partial designs only the present members of each group are checked,
    so a valid partial design is one whose clues are pairwise orthonormal.
    """
    flat, mask = design.flat_vectors(), design.flat_mask()
    worst: dict[str, float] = {}
    violated = []
    for family, index, members in design.constraint_groups():
        members = members[mask[members]]
        res = orthonormality_residual(flat[members]) if members.size else 0.0
        worst[family] = max(worst.get(family, 0.0), res)
        if res > tol.orth_tol:
            violated.append((family, index, res))
    return ValidationReport(not violated, worst, violated, design.is_complete)


@dataclass(frozen=True)
class CardinalityReport:
    """Phase-distinct vector count.

    ``labels`` assigns a cluster id to each input vector (flat order for
    grids); ``representatives[c]`` is the canonical-phase first member of
    cluster ``c``.
    """

    c: int
    representatives: np.ndarray
    labels: np.ndarray

    def to_dict(self, shape=None) -> dict:
        labels = self.labels if shape is None else self.labels.reshape(shape)
        return {
            "c": self.c,
            "labels": labels.tolist(),
            "representatives": [[[float(z.real), float(z.imag)] for z in v]
                                for v in self.representatives],
        }


def cardinality(obj, tol: Tolerances = DEFAULT_TOL) -> CardinalityReport:
    """Number of vectors distinct up to a global phase.

    ``obj`` is a complete grid/hypercube or an ``(m, d)`` array of unit
    vectors. Clusters are the connected components of the relation
    ``|<u|v>| >= 1 - eq_tol``.
    """
    if isinstance(obj, _Design):
        if not obj.is_complete:
            raise ValueError("cardinality needs a complete design (blank cells present)")
        vs = obj.flat_vectors()
    else:
        vs = np.asarray(obj, dtype=np.complex128)
        if vs.ndim != 2 or vs.shape[0] == 0:
            raise ValueError("cardinality needs a non-empty list of vectors")
    labels = kernels.phase_clusters(vs, 1.0 - tol.eq_tol)
    c = int(labels.max()) + 1
    first = np.array([np.flatnonzero(labels == g)[0] for g in range(c)])
    reps = np.array([canonical_phase(vs[f], tol) for f in first])
    return CardinalityReport(c, reps, labels)


class GridClass(str, enum.Enum):
    CLASSICAL = "classical"
    APPARENTLY_QUANTUM = "apparently_quantum"
    GENUINELY_QUANTUM = "genuinely_quantum"


def is_classical(design: _Design, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Every present cell equals a computational basis vector up to phase."""
    vs = design.flat_vectors()[design.flat_mask()]
    return bool(np.all(np.max(np.abs(vs), axis=1) >= 1.0 - tol.eq_tol))


def classify(design: _Design, tol: Tolerances = DEFAULT_TOL) -> GridClass:
    """Label a complete valid design by its cardinality.

    ``c == dim`` with non-computational entries is reported as apparently
    quantum without searching for the unitary back to a classical design.
    """
    if not design.is_complete:
        raise ValueError("classify needs a complete design")
    report = validate(design, tol)
    if not report.valid:
        raise ValueError(f"classify needs a valid design (max residual {report.max_residual:.3e})")
    if is_classical(design, tol):
        return GridClass.CLASSICAL
    c = cardinality(design, tol).c
    if c > design.dim:
        return GridClass.GENUINELY_QUANTUM
    return GridClass.APPARENTLY_QUANTUM


def apply_global_unitary(design, u, tol: Tolerances = DEFAULT_TOL):
    """Replace every present cell ``v`` by ``U v``."""
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (design.dim, design.dim):
        raise ValueError(f"unitary must be {design.dim}x{design.dim}")
    if not is_unitary(u, tol):
        raise ValueError("apply_global_unitary needs a unitary matrix")
    if isinstance(design, SudoQGrid):
        cells = np.einsum("ab,rcb->rca", u, design.cells)
        return SudoQGrid(design.n, cells, design.present)
    cells = design.cells @ u.T
    return SudoQHypercube(design.n, design.d_sides, cells, design.present)
