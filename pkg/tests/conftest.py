from __future__ import annotations

import json

import numpy as np
import pytest

from sudoq.gridio import loads
from sudoq.model import SudoQGrid, cell_coords

S = 1.0 / np.sqrt(3.0)
W = np.exp(2j * np.pi / 3)


def ket(dim: int, *terms) -> list:
    """Unnormalized vector from ``(coefficient, 1-based label)`` pairs."""
    v = np.zeros(dim, dtype=np.complex128)
    for coef, label in terms:
        v[label - 1] += coef
    return v


def _example_grid_rows() -> list:
    k = lambda *t: ket(4, *t)  # noqa: E731
    return [
        [k((1, 1)), k((1, 2)), k((1, 3), (1, 4)), k((1, 3), (-1, 4))],
        [k((1, 3)), k((1, 4)), k((1, 1), (-1, 2)), k((1, 1), (1, 2))],
        [k((1, 2), (1, 4)), k((1, 1), (-1, 3)),
         k((1, 1), (1, 2), (1, 3), (-1, 4)), k((1, 1), (-1, 2), (1, 3), (1, 4))],
        [k((1, 2), (-1, 4)), k((1, 1), (1, 3)),
         k((1, 1), (1, 2), (-1, 3), (1, 4)), k((1, 1), (-1, 2), (-1, 3), (-1, 4))],
    ]


def example_grid_json() -> str:
    """The maximal-cardinality 4x4 example as printed, unnormalized."""
    cells = [[[[float(z.real), float(z.imag)] for z in v] for v in row]
             for row in _example_grid_rows()]
    return json.dumps({"n": 2, "dim": 4, "cells": cells})


@pytest.fixture
def example_grid() -> SudoQGrid:
    return loads(example_grid_json(), normalize=True)


def printed_hw_grid() -> SudoQGrid:
    """9x9 grid assembled from the printed eigenvectors of ``Z``, ``X`` and ``XZ``.

    Member ``i`` of the family is the matrix whose columns are the printed
    eigenvectors ``|1_i>, |2_i>, |3_i>``; cells follow
    ``u^(i)_(j+k) (x) v^(j)_(i+l)``.
    """
    z_basis = np.eye(3, dtype=np.complex128)
    x_basis = S * np.array([[1, 1, 1], [1, W, W ** 2], [1, W ** 2, W]]).T
    xz_basis = S * np.array([[1, W, W], [1, W ** 2, 1], [1, 1, W ** 2]]).T
    fam = [z_basis, x_basis, xz_basis]
    cells = np.zeros((9, 9, 9), dtype=np.complex128)
    for i in range(3):
        for j in range(3):
            for k in range(3):
                for l in range(3):
                    r, c = cell_coords(3, i, j, k, l)
                    cells[r, c] = np.kron(fam[i][:, (j + k) % 3], fam[j][:, (i + l) % 3])
    return SudoQGrid.from_array(3, cells)


@pytest.fixture
def printed_hw() -> SudoQGrid:
    return printed_hw_grid()


def uniquely_solvable_rows() -> list:
    """Ten-clue 4x4 grid with (|1> +- |2>)/sqrt(2) entries; six blanks."""
    r2 = 1.0 / np.sqrt(2.0)
    e = np.eye(4, dtype=np.complex128)
    plus = r2 * (e[0] + e[1])
    minus = r2 * (e[0] - e[1])
    return [
        [e[0], e[1], e[2], e[3]],
        [e[2], e[3], plus, minus],
        [e[1], e[0], None, None],
        [None, None, None, None],
    ]


@pytest.fixture
def uniquely_solvable() -> SudoQGrid:
    return SudoQGrid.from_cells(2, uniquely_solvable_rows())
