"""JSON serialization of grids and hypercubes.

Grid object::

    {"n": N, "dim": N*N, "cells": [[null | [[re, im], ...], ...], ...]}

Hypercubes add ``"d_sides"`` and store ``"cells"`` as one flat list in
row-major order over ``(i_1..i_D, k_1..k_D)``; their ``"dim"`` is ``N**D``.
Output uses sorted keys, compact separators and Python's shortest
round-trip float repr, so save -> load -> save is byte-identical.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .model import INGEST_NORM_TOL, SudoQGrid, SudoQHypercube


class GridFormatError(ValueError):
    """Input is not a well-formed grid document."""


def _vec_to_json(v: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in v]


def design_to_dict(design) -> dict:
    if isinstance(design, SudoQGrid):
        cells = [[_vec_to_json(design.cells[r, c]) if design.present[r, c] else None
                  for c in range(design.dim)] for r in range(design.dim)]
        return {"n": design.n, "dim": design.dim, "cells": cells}
    if isinstance(design, SudoQHypercube):
        cells = [_vec_to_json(v) if p else None for v, p in zip(design.cells, design.present)]
        return {"n": design.n, "d_sides": design.d_sides, "dim": design.dim, "cells": cells}
    raise TypeError(f"cannot serialize {type(design).__name__}")


def dumps(design) -> str:
    return json.dumps(design_to_dict(design), sort_keys=True, separators=(",", ":"))


def _parse_vec(raw, dim: int, where: str) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != dim:
        raise GridFormatError(f"{where}: expected {dim} amplitudes")
    out = np.empty(dim, dtype=np.complex128)
    for a, pair in enumerate(raw):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)):
            raise GridFormatError(f"{where}: amplitude {a} must be [re, im]")
        if not all(math.isfinite(x) for x in pair):
            raise GridFormatError(f"{where}: amplitude {a} is not finite")
        out[a] = complex(pair[0], pair[1])
    return out


def _ingest(v: np.ndarray, normalize: bool, where: str) -> np.ndarray:
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise GridFormatError(f"{where}: zero vector")
    if normalize:
        return v / norm
    if abs(norm - 1.0) > INGEST_NORM_TOL:
        raise GridFormatError(f"{where}: norm {norm!r} is not 1 (use normalize=True "
                              "for unnormalized data)")
    return v


def design_from_dict(doc, normalize: bool = False):
    """Build a grid or hypercube from a parsed JSON document.

    Cells within ``1e-6`` of unit norm are kept verbatim so that round trips
    are exact; other cells are rejected unless ``normalize`` is set, in which
    case every present cell is divided by its norm.
    """
    if not isinstance(doc, dict):
        raise GridFormatError("top level must be an object")
    for key in ("n", "dim", "cells"):
        if key not in doc:
            raise GridFormatError(f"missing field {key!r}")
    n, dim = doc["n"], doc["dim"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise GridFormatError("'n' must be an integer >= 2")
    cells = doc["cells"]
    if "d_sides" in doc:
        d_sides = doc["d_sides"]
        if not isinstance(d_sides, int) or isinstance(d_sides, bool) or d_sides < 2:
            raise GridFormatError("'d_sides' must be an integer >= 2")
        if dim != n ** d_sides:
            raise GridFormatError(f"'dim' must equal n**d_sides = {n ** d_sides}")
        ncell = n ** (2 * d_sides)
        if not isinstance(cells, list) or len(cells) != ncell:
            raise GridFormatError(f"'cells' must be a flat list of {ncell} entries")
        arr = np.zeros((ncell, dim), dtype=np.complex128)
        present = np.zeros(ncell, dtype=bool)
        for f, raw in enumerate(cells):
            if raw is None:
                continue
            where = f"cell {f}"
            arr[f] = _ingest(_parse_vec(raw, dim, where), normalize, where)
            present[f] = True
        return SudoQHypercube(n, d_sides, arr, present)

    if dim != n * n:
        raise GridFormatError(f"'dim' must equal n**2 = {n * n}")
    if not isinstance(cells, list) or len(cells) != dim or any(
            not isinstance(r, list) or len(r) != dim for r in cells):
        raise GridFormatError(f"'cells' must be {dim} rows of {dim} entries")
    arr = np.zeros((dim, dim, dim), dtype=np.complex128)
    present = np.zeros((dim, dim), dtype=bool)
    for r, row in enumerate(cells):
        for c, raw in enumerate(row):
            if raw is None:
                continue
            where = f"cell ({r}, {c})"
            arr[r, c] = _ingest(_parse_vec(raw, dim, where), normalize, where)
            present[r, c] = True
    return SudoQGrid(n, arr, present)


def loads(text: str, normalize: bool = False):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GridFormatError(f"invalid JSON: {exc}") from exc
    return design_from_dict(doc, normalize=normalize)


def save(design, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(design))


def load(path, normalize: bool = False):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), normalize=normalize)
