"""Seeded sampling audits of the 4x4 results and the eigenbasis property.

Each audit returns a plain report object with counts, so the CLI and the
test suite share one implementation.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .constructions import hw_basis, hw_operator
from .linalg import DEFAULT_TOL, Tolerances, haar_random_unitary, is_eigenvector
from .model import SudoQGrid, apply_global_unitary
from .param4x4 import (ADMISSIBLE_4X4, classify_cardinality_4x4, four_clue_grid,
                       random_c8_params, random_c16_params, solution_c8, solution_c16)
from .solver import (SearchConfig, SolveStatus, classical_completions, search_alternatives,
                     solve_unique)


@dataclass(frozen=True)
class FourClueReport:
    draws: int
    unique: int
    min_overlap: float
    statuses: dict[str, int]

    @property
    def passed(self) -> bool:
        return self.unique == self.draws and self.min_overlap >= 1.0 - 1e-8

    def to_dict(self) -> dict:
        return {"audit": "theorem2", "draws": self.draws, "unique": self.unique,
                "min_overlap": self.min_overlap, "statuses": self.statuses,
                "passed": self.passed}


def four_clue_audit(draws: int = 100, seed: int = 0, tol: Tolerances = DEFAULT_TOL) -> FourClueReport:
    """Four clues ``e1, f3, v2, u4`` of random cardinality-16 solutions must force the rest."""
    rng = np.random.default_rng(seed)
    statuses: Counter = Counter()
    unique, min_ov = 0, 1.0
    for _ in range(draws):
        source = solution_c16(random_c16_params(rng))
        out = solve_unique(four_clue_grid(source), tol)
        statuses[out.status.value] += 1
        if out.status is SolveStatus.UNIQUE:
            unique += 1
            ov = np.abs(np.einsum("rci,rci->rc", out.solution.cells.conj(), source.cells))
            min_ov = min(min_ov, float(ov.min()))
        else:
            min_ov = 0.0
    return FourClueReport(draws, unique, min_ov, dict(statuses))


@dataclass(frozen=True)
class CardinalitySampleReport:
    draws: int
    counts: dict[int, int]
    anomalies: list[dict] = field(default_factory=list)

    @property
    def observed(self) -> set[int]:
        return set(self.counts)

    @property
    def passed(self) -> bool:
        return not self.anomalies and self.observed == set(ADMISSIBLE_4X4)

    def to_dict(self) -> dict:
        return {"audit": "theorem1-sample", "draws": self.draws,
                "counts": {str(k): v for k, v in sorted(self.counts.items())},
                "anomalies": self.anomalies, "passed": self.passed}


def cardinality_sample(draws: int = 1000, seed: int = 0, tol: Tolerances = DEFAULT_TOL) -> CardinalitySampleReport:
    """Cardinalities of random closed-form solutions, with poles and global unitaries mixed in."""
    rng = np.random.default_rng(seed)
    counts: Counter = Counter()
    anomalies = []
    for k in range(draws):
        degenerate = rng.choice(["none", "one", "both"], p=[0.5, 0.3, 0.2])
        if rng.random() < 0.4:
            params = random_c16_params(rng, degenerate)
            grid = solution_c16(params)
        else:
            params = random_c8_params(rng, degenerate=degenerate)
            grid = solution_c8(params)
        if rng.random() < 0.5:
            grid = apply_global_unitary(grid, haar_random_unitary(4, rng))
        c, anomaly = classify_cardinality_4x4(grid, tol)
        counts[c] += 1
        if anomaly:
            anomalies.append({"draw": k, "c": c, "params": repr(params)})
    return CardinalitySampleReport(draws, dict(counts), anomalies)


@dataclass(frozen=True)
class ClassicalUniquenessReport:
    patterns: int
    restarts: int
    witnesses_on_unique: int
    best_violation_on_unique: float
    two_row_witness: bool
    cells: list[list[tuple[int, int]]]

    @property
    def passed(self) -> bool:
        return self.witnesses_on_unique == 0 and self.two_row_witness

    def to_dict(self) -> dict:
        return {"audit": "prop5", "patterns": self.patterns, "restarts": self.restarts,
                "witnesses_on_unique": self.witnesses_on_unique,
                "best_violation_on_unique": self.best_violation_on_unique,
                "two_row_witness": self.two_row_witness,
                "pattern_cells": [[list(c) for c in p] for p in self.cells],
                "passed": self.passed}


def unique_classical_patterns(count: int, n_clues: int = 4, seed: int = 0,
                              max_tries: int = 100_000) -> list[tuple[SudoQGrid, SudoQGrid]]:
    """Distinct clue sets with exactly one classical completion, and that completion."""
    rng = np.random.default_rng(seed)
    solutions = classical_completions(SudoQGrid.empty(2))
    seen = set()
    out = []
    for _ in range(max_tries):
        if len(out) >= count:
            break
        sol = solutions[int(rng.integers(len(solutions)))]
        flat = sorted(int(f) for f in rng.choice(16, n_clues, replace=False))
        cells = [divmod(f, 4) for f in flat]
        pattern = sol.keep_only(cells)
        key = pattern.cells.tobytes() + pattern.present.tobytes()
        if key in seen:
            continue
        seen.add(key)
        if len(classical_completions(pattern, limit=2)) == 1:
            out.append((pattern, sol))
    if len(out) < count:
        raise RuntimeError(f"found only {len(out)} uniquely completable patterns")
    return out


def classical_uniqueness_audit(patterns: int = 10, restarts: int = 200, seed: int = 0,
                workers: int | None = None, tol: Tolerances = DEFAULT_TOL) -> ClassicalUniquenessReport:
    """No completion away from the classical one for uniquely completable clue sets.

    As a positive control, two full rows of a classical solution must admit a
    witness (swapping the remaining two rows gives one).
    """
    chosen = unique_classical_patterns(patterns, seed=seed)
    ss = np.random.SeedSequence(seed)
    child_seeds = [int(s.generate_state(1)[0]) for s in ss.spawn(patterns + 1)]
    hits, best = 0, np.inf
    cells = []
    for (pattern, sol), s in zip(chosen, child_seeds):
        cfg = SearchConfig(restarts=restarts, seed=s, workers=workers)
        rep = search_alternatives(pattern, sol, cfg, tol)
        hits += rep.witness is not None
        best = min(best, rep.best_violation)
        cells.append([(int(r), int(c)) for r, c in zip(*np.nonzero(pattern.present))])
    ref = chosen[0][1]
    two_rows = ref.keep_only([(r, c) for r in range(2) for c in range(4)])
    cfg = SearchConfig(restarts=restarts, seed=child_seeds[-1], workers=workers)
    control = search_alternatives(two_rows, ref, cfg, tol)
    return ClassicalUniquenessReport(patterns, restarts, hits, float(best), control.witness is not None, cells)


@dataclass(frozen=True)
class EigenbasisReport:
    n: int
    max_cross_overlap: float
    shared_eigenvectors: int

    @property
    def passed(self) -> bool:
        return (self.max_cross_overlap <= 1.0 / np.sqrt(self.n) + 1e-9
                and self.max_cross_overlap < 1.0 and self.shared_eigenvectors == 0)

    def to_dict(self) -> dict:
        return {"n": self.n, "max_cross_overlap": self.max_cross_overlap,
                "shared_eigenvectors": self.shared_eigenvectors, "passed": self.passed}


def eigenbasis_distinctness(n: int, tol: Tolerances = DEFAULT_TOL) -> EigenbasisReport:
    """Overlaps and eigen-equation checks between all pairs of distinct bases ``t = 0..N``."""
    bases = [hw_basis(n, t) for t in range(n + 1)]
    ops = [hw_operator(n, t) for t in range(n + 1)]
    worst, shared = 0.0, 0
    for a in range(n + 1):
        for b in range(n + 1):
            if a == b:
                continue
            if a < b:
                worst = max(worst, float(np.max(np.abs(bases[a].conj() @ bases[b].T))))
            shared += sum(is_eigenvector(ops[b], v, tol) for v in bases[a])
    return EigenbasisReport(n, worst, shared)
