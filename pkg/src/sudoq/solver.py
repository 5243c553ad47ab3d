"""Completing partial grids and auditing uniqueness.

``propagate`` only makes forced moves: a blank cell is filled when the
orthogonal complement of its row, column and block neighbours is
one-dimensional. When propagation completes the grid, the completion is
unique. When it stalls nothing is concluded, except for grids with
computational clues, where classical backtracking can exhibit two distinct
completions.

``alternative_search`` is a numerical auditor: it looks for a valid
completion far from a reference solution. Finding none is evidence, not
proof, that the reference is the only completion.
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize

from . import kernels
from .linalg import DEFAULT_TOL, Tolerances, canonical_phase, orthogonal_complement
from .model import SudoQGrid, is_classical, validate


class SolveStatus(str, enum.Enum):
    UNIQUE = "Unique"
    NOT_UNIQUE = "NotUnique"
    UNSOLVABLE = "Unsolvable"
    STALLED = "Stalled"


@dataclass(frozen=True)
class FillStep:
    row: int
    col: int
    sweep: int
    candidates: int  # complement dimension when the sweep ordered the cell


@dataclass(frozen=True)
class PropagationResult:
    grid: SudoQGrid
    trace: list[FillStep]
    dead_cell: tuple[int, int] | None = None

    @property
    def unsolvable(self) -> bool:
        return self.dead_cell is not None


def _rank_tol(tol: Tolerances) -> Tolerances:
    # vectors produced by earlier fills carry round-off, so rank decisions
    # inside the solver use the looser solve tolerance
    return replace(tol, orth_tol=max(tol.orth_tol, tol.solve_tol))


def cell_complement(grid: SudoQGrid, row: int, col: int,
                    tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (rows) of the space left free by the neighbours of a cell."""
    nb = [grid.cells[r, c] for r, c in grid.neighbors(row, col) if grid.present[r, c]]
    return orthogonal_complement(np.array(nb).reshape(-1, grid.dim), grid.dim, _rank_tol(tol))


def propagate(grid: SudoQGrid, tol: Tolerances = DEFAULT_TOL,
              order_seed: int | None = None) -> PropagationResult:
    """Fill forced cells until nothing changes.

    Each sweep orders the blank cells by complement dimension, ties broken by
    ``(row, col)``; ``order_seed`` shuffles the visit order instead, which is
    how confluence is tested. A blank cell whose complement is empty stops
    the run and is reported as ``dead_cell``.
    """
    rng = np.random.default_rng(order_seed) if order_seed is not None else None
    trace: list[FillStep] = []
    sweep = 0
    while True:
        blanks = [(r, c) for r in range(grid.dim) for c in range(grid.dim)
                  if not grid.present[r, c]]
        if not blanks:
            break
        dims = {cell: cell_complement(grid, *cell, tol).shape[0] for cell in blanks}
        dead = [cell for cell in blanks if dims[cell] == 0]
        if dead:
            return PropagationResult(grid, trace, dead[0])
        if rng is None:
            order = sorted(blanks, key=lambda cell: (dims[cell], cell))
        else:
            order = [blanks[i] for i in rng.permutation(len(blanks))]
        filled = False
        for r, c in order:
            comp = cell_complement(grid, r, c, tol)
            if comp.shape[0] == 0:
                return PropagationResult(grid, trace, (r, c))
            if comp.shape[0] == 1:
                grid = grid.with_cell(r, c, canonical_phase(comp[0], tol))
                trace.append(FillStep(r, c, sweep, dims[(r, c)]))
                filled = True
        if not filled:
            break
        sweep += 1
    return PropagationResult(grid, trace)


@dataclass(frozen=True)
class SolveOutcome:
    """Result of :func:`solve_unique`.

    ``witness`` is a second completion for ``NotUnique``; for ``Unsolvable``
    ``violation`` names the failing constraint or dead cell.
    """

    status: SolveStatus
    solution: SudoQGrid | None = None
    witness: SudoQGrid | None = None
    partial: SudoQGrid | None = None
    trace: list[FillStep] = field(default_factory=list)
    violation: str | None = None

    def forcedness(self, clues: SudoQGrid) -> list[list[str]]:
        """Per-cell origin: ``clue``, ``forced@<sweep>`` or ``blank``."""
        out = [["clue" if clues.present[r, c] else "blank" for c in range(clues.dim)]
               for r in range(clues.dim)]
        for step in self.trace:
            out[step.row][step.col] = f"forced@{step.sweep}"
        return out


def solve_unique(grid: SudoQGrid, tol: Tolerances = DEFAULT_TOL) -> SolveOutcome:
    """Certify a unique completion by forced propagation.

    ``Unique`` when propagation completes the grid into a valid solution,
    ``Unsolvable`` on inconsistent clues or a dead cell, ``Stalled`` when
    forced moves run out. A stalled grid whose clues (at least one) are all
    computational is settled classically: two distinct classical completions
    make it ``NotUnique``.
    """
    if not isinstance(grid, SudoQGrid):
        raise TypeError("solve_unique needs a SudoQGrid")
    pre = validate(grid, tol)
    if not pre.valid:
        fam, idx, res = pre.violated[0]
        return SolveOutcome(SolveStatus.UNSOLVABLE, partial=grid,
                            violation=f"{fam} {idx} residual {res:.3e}")
    prop = propagate(grid, tol)
    if prop.unsolvable:
        r, c = prop.dead_cell
        return SolveOutcome(SolveStatus.UNSOLVABLE, partial=prop.grid, trace=prop.trace,
                            violation=f"cell ({r}, {c}) has no admissible vector")
    if prop.grid.is_complete:
        post = validate(prop.grid, _rank_tol(tol))
        if not post.valid:
            fam, idx, res = post.violated[0]
            return SolveOutcome(SolveStatus.UNSOLVABLE, partial=prop.grid, trace=prop.trace,
                                violation=f"{fam} {idx} residual {res:.3e}")
        return SolveOutcome(SolveStatus.UNIQUE, solution=prop.grid, trace=prop.trace)
    if grid.n_present > 0 and is_classical(grid, tol):
        sols = classical_completions(grid, limit=2, tol=tol)
        if len(sols) >= 2:
            return SolveOutcome(SolveStatus.NOT_UNIQUE, solution=sols[0], witness=sols[1],
                                partial=prop.grid, trace=prop.trace)
        if not sols:
            return SolveOutcome(SolveStatus.UNSOLVABLE, partial=prop.grid, trace=prop.trace,
                                violation="no classical completion")
    return SolveOutcome(SolveStatus.STALLED, partial=prop.grid, trace=prop.trace)


def classical_symbols(grid: SudoQGrid, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Computational index of each present cell, ``-1`` for blanks."""
    out = np.full((grid.dim, grid.dim), -1, dtype=int)
    for r in range(grid.dim):
        for c in range(grid.dim):
            if grid.present[r, c]:
                v = grid.cells[r, c]
                s = int(np.argmax(np.abs(v)))
                if abs(v[s]) < 1.0 - tol.eq_tol:
                    raise ValueError(f"clue at ({r}, {c}) is not a computational basis vector")
                out[r, c] = s
    return out


def grid_from_symbols(n: int, symbols) -> SudoQGrid:
    symbols = np.asarray(symbols)
    dim = n * n
    cells = np.zeros((dim, dim, dim), dtype=np.complex128)
    present = symbols >= 0
    for r, c in zip(*np.nonzero(present)):
        cells[r, c, symbols[r, c]] = 1.0
    return SudoQGrid(n, cells, present)


def classical_symbol_completions(n: int, symbols, limit: int | None = None) -> list[np.ndarray]:
    """Backtracking over symbol assignments with row/column/block distinctness.

    Always branches on the blank cell with the fewest candidates; solutions
    come out in a deterministic order.
    """
    dim = n * n
    board = np.array(symbols, dtype=int).reshape(dim, dim)
    full = (1 << dim) - 1
    rows = [0] * dim
    cols = [0] * dim
    blocks = [0] * dim
    for r in range(dim):
        for c in range(dim):
            s = board[r, c]
            if s < 0:
                continue
            bit = 1 << s
            b = n * (r // n) + c // n
            if rows[r] & bit or cols[c] & bit or blocks[b] & bit:
                return []
            rows[r] |= bit
            cols[c] |= bit
            blocks[b] |= bit
    blanks = [(r, c) for r in range(dim) for c in range(dim) if board[r, c] < 0]
    out: list[np.ndarray] = []

    def recurse(remaining):
        if limit is not None and len(out) >= limit:
            return
        if not remaining:
            out.append(board.copy())
            return
        best, best_mask, best_count = None, 0, dim + 1
        for idx, (r, c) in enumerate(remaining):
            mask = full & ~(rows[r] | cols[c] | blocks[n * (r // n) + c // n])
            count = bin(mask).count("1")
            if count < best_count:
                best, best_mask, best_count = idx, mask, count
                if count <= 1:
                    break
        if best_count == 0:
            return
        r, c = remaining[best]
        rest = remaining[:best] + remaining[best + 1:]
        b = n * (r // n) + c // n
        for s in range(dim):
            bit = 1 << s
            if not best_mask & bit:
                continue
            rows[r] |= bit
            cols[c] |= bit
            blocks[b] |= bit
            board[r, c] = s
            recurse(rest)
            board[r, c] = -1
            rows[r] &= ~bit
            cols[c] &= ~bit
            blocks[b] &= ~bit
            if limit is not None and len(out) >= limit:
                return

    recurse(blanks)
    return out


def classical_completions(grid: SudoQGrid, limit: int | None = None,
                          tol: Tolerances = DEFAULT_TOL) -> list[SudoQGrid]:
    """All (or up to ``limit``) classical completions of a grid with computational clues."""
    symbols = classical_symbols(grid, tol)
    return [grid_from_symbols(grid.n, s)
            for s in classical_symbol_completions(grid.n, symbols, limit)]


@dataclass(frozen=True)
class SearchConfig:
    """Settings for :func:`alternative_search`.

    A completion counts as a witness when its total squared Gram residual
    is at most ``solve_tol**2`` and some blank cell has
    ``1 - |<ref|z>|**2 >= distance_floor``. During the first optimization
    stage the penalty ``penalty_weight * max(0, penalty_target - D)**2``
    pushes the summed deviation ``D`` of blank cells away from the reference.
    """

    restarts: int = 200
    max_iters: int = 2000
    seed: int = 0
    distance_floor: float = 0.1
    penalty_target: float = 1.0
    penalty_weight: float = 1.0
    workers: int | None = None

    def __post_init__(self) -> None:
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if not self.distance_floor > 0:
            raise ValueError("distance_floor must be positive")


@dataclass(frozen=True)
class SearchReport:
    witness: SudoQGrid | None
    restart: int | None
    restarts_run: int
    best_violation: float
    best_deviation: float


@dataclass(frozen=True)
class _Problem:
    z0: np.ndarray  # (ncell, d) clues and reference-shaped placeholders
    ref: np.ndarray
    free: np.ndarray
    groups: np.ndarray
    n: int


def _problem(grid: SudoQGrid, reference: SudoQGrid, tol: Tolerances) -> _Problem:
    if reference.n != grid.n or not reference.is_complete:
        raise ValueError("reference must be a complete grid of the same size")
    flat_g, flat_r = grid.flat_vectors(), reference.flat_vectors()
    mask = grid.flat_mask()
    ov = np.abs(np.einsum("ci,ci->c", flat_g[mask].conj(), flat_r[mask]))
    if np.any(ov < 1.0 - tol.solve_tol):
        raise ValueError("reference is inconsistent with the clues")
    groups = np.array([m for _, _, m in grid.constraint_groups()], dtype=np.int64)
    return _Problem(np.array(flat_g), np.array(flat_r), ~mask, groups, grid.n)


def _objective(prob: _Problem, target: float, weight: float):
    free = prob.free
    nfree, d = int(free.sum()), prob.z0.shape[1]

    def unpack(x):
        z = prob.z0.copy()
        z[free] = (x[:nfree * d] + 1j * x[nfree * d:]).reshape(nfree, d)
        return z

    def fun(x):
        f, g = kernels.violation_grad(unpack(x), prob.groups, prob.ref, free, target, weight)
        gf = g[free].reshape(-1)
        return f, np.concatenate([gf.real, gf.imag])

    return fun, unpack


def _normalized_violation(prob: _Problem, z: np.ndarray) -> tuple[np.ndarray, float, float]:
    z = z.copy()
    z[prob.free] /= np.linalg.norm(z[prob.free], axis=1)[:, None]
    f, _ = kernels.violation_grad(z, prob.groups, prob.ref, prob.free, 0.0, 0.0)
    dev = 1.0 - np.abs(np.einsum("ci,ci->c", prob.ref[prob.free].conj(), z[prob.free])) ** 2
    return z, f, float(dev.max()) if dev.size else 0.0


def _one_restart(prob: _Problem, cfg: SearchConfig, tol: Tolerances, seed_seq):
    rng = np.random.default_rng(seed_seq)
    nfree, d = int(prob.free.sum()), prob.z0.shape[1]
    init = rng.standard_normal((nfree, d)) + 1j * rng.standard_normal((nfree, d))
    init /= np.linalg.norm(init, axis=1)[:, None]
    x = np.concatenate([init.real.ravel(), init.imag.ravel()])

    fun, unpack = _objective(prob, cfg.penalty_target, cfg.penalty_weight)
    res = minimize(fun, x, jac=True, method="L-BFGS-B",
                   options={"maxiter": cfg.max_iters, "ftol": 1e-15, "gtol": 1e-12})
    _, viol, dev = _normalized_violation(prob, unpack(res.x))
    # polish only promising points; a penalty-free run from a far point
    # either stays on a distinct solution or slides back to the reference
    if viol < 1e-4 and dev >= cfg.distance_floor / 2:
        fun0, _ = _objective(prob, 0.0, 0.0)
        res = minimize(fun0, res.x, jac=True, method="L-BFGS-B",
                       options={"maxiter": cfg.max_iters, "ftol": 0.0, "gtol": 1e-18,
                                "maxcor": 30})
    z, viol, dev = _normalized_violation(prob, unpack(res.x))
    ok = viol <= tol.solve_tol ** 2 and dev >= cfg.distance_floor
    return ok, z, viol, dev


def _run_chunk(args):
    prob, cfg, tol, seeds, start = args
    out = []
    for offset, s in enumerate(seeds):
        ok, z, viol, dev = _one_restart(prob, cfg, tol, s)
        out.append((start + offset, ok, z if ok else None, viol, dev))
        if ok:
            break
    return out


def search_alternatives(grid: SudoQGrid, reference: SudoQGrid, cfg: SearchConfig = SearchConfig(),
                        tol: Tolerances = DEFAULT_TOL) -> SearchReport:
    """Multi-restart search for a valid completion away from ``reference``.

    Restart ``r`` draws its start point from child ``r`` of
    ``SeedSequence(cfg.seed)``. With ``cfg.workers`` the restarts run in
    worker processes; the reported witness is always the one with the
    lowest restart index, so the result does not depend on scheduling.
    """
    prob = _problem(grid, reference, tol)
    if not prob.free.any():
        return SearchReport(None, None, 0, 0.0, 0.0)
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    workers = cfg.workers if cfg.workers is not None else 1
    if workers <= 1:
        results = _run_chunk((prob, cfg, tol, seeds, 0))
    else:
        size = max(1, -(-cfg.restarts // (4 * workers)))
        chunks = [(prob, cfg, tol, seeds[i:i + size], i) for i in range(0, cfg.restarts, size)]
        with ProcessPoolExecutor(max_workers=min(workers, os.cpu_count() or 1)) as pool:
            results = [item for part in pool.map(_run_chunk, chunks) for item in part]
    results.sort(key=lambda item: item[0])
    best_viol = min(item[3] for item in results)
    best_dev = max(item[4] for item in results)
    for idx, ok, z, _, _ in results:
        if ok:
            n, dim = grid.n, grid.dim
            witness = SudoQGrid.from_array(n, np.array([canonical_phase(v, tol) for v in z])
                                           .reshape(dim, dim, dim))
            return SearchReport(witness, idx, idx + 1, best_viol, best_dev)
    return SearchReport(None, None, len(results), best_viol, best_dev)


def alternative_search(grid: SudoQGrid, reference: SudoQGrid, cfg: SearchConfig = SearchConfig(),
                       tol: Tolerances = DEFAULT_TOL) -> SudoQGrid | None:
    """Witness completion differing from ``reference``, or ``None`` if none was found."""
    return search_alternatives(grid, reference, cfg, tol).witness
