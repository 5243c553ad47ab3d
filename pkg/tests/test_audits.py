from __future__ import annotations

import numpy as np
import pytest

from sudoq.audits import (eigenbasis_distinctness, classical_uniqueness_audit, cardinality_sample, four_clue_audit,
                          unique_classical_patterns)
from sudoq.param4x4 import ADMISSIBLE_4X4
from sudoq.solver import classical_completions


def test_four_clue_small():
    rep = four_clue_audit(draws=15, seed=11)
    assert rep.passed and rep.statuses == {"Unique": 15}
    assert rep.to_dict()["passed"] is True


def test_four_clue_is_seeded():
    assert four_clue_audit(5, seed=3) == four_clue_audit(5, seed=3)


def test_cardinality_sample_small():
    rep = cardinality_sample(draws=60, seed=2)
    assert not rep.anomalies
    assert rep.observed <= set(ADMISSIBLE_4X4)
    assert sum(rep.counts.values()) == 60
    assert list(rep.to_dict()["counts"]) == sorted(rep.to_dict()["counts"], key=int)


def test_unique_patterns_are_certified_and_distinct():
    pats = unique_classical_patterns(5, seed=9)
    keys = {p.present.tobytes() + p.cells.tobytes() for p, _ in pats}
    assert len(keys) == 5
    for pattern, sol in pats:
        assert pattern.n_present == 4
        assert classical_completions(pattern) == [sol]


def test_unique_patterns_exhaustion():
    with pytest.raises(RuntimeError):
        unique_classical_patterns(1, n_clues=0, max_tries=5)


def test_classical_uniqueness_small():
    rep = classical_uniqueness_audit(patterns=2, restarts=6, seed=1)
    assert rep.witnesses_on_unique == 0 and rep.two_row_witness and rep.passed
    assert rep.best_violation_on_unique > 0
    assert len(rep.cells) == 2 and all(len(c) == 4 for c in rep.cells)


@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_eigenbasis_distinctness(n):
    rep = eigenbasis_distinctness(n)
    assert rep.passed and rep.shared_eigenvectors == 0
    assert rep.max_cross_overlap == pytest.approx(1 / np.sqrt(n), abs=1e-12)
