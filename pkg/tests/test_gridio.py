from __future__ import annotations

import json

import numpy as np
import pytest

from conftest import example_grid_json
from sudoq.constructions import (classical_cyclic_grid, cube_from_families, haar_family,
                                 hw_sudoq, identity_family)
from sudoq.gridio import GridFormatError, dumps, load, loads, save
from sudoq.model import SudoQGrid, SudoQHypercube
from sudoq.param4x4 import C8Params, C16Params, solution_c8, solution_c16


def generator_outputs():
    return [
        classical_cyclic_grid(2),
        hw_sudoq(3),
        solution_c16(C16Params(0.7, 2.1, 0.4, 1.3, 5.0)),
        solution_c8(C8Params(3, 0.9, 2.2, 0.1, 0.2)),
        cube_from_families(haar_family(2, 1), haar_family(2, 2), haar_family(2, 3)),
        cube_from_families(*(identity_family(2),) * 3, variant="even_modified"),
    ]


@pytest.mark.parametrize("design", generator_outputs())
def test_byte_identical_round_trip(design, tmp_path):
    path = tmp_path / "g.json"
    save(design, path)
    first = path.read_bytes()
    again = load(path)
    assert again == design
    save(again, path)
    assert path.read_bytes() == first


def test_canonical_layout():
    text = dumps(classical_cyclic_grid(2))
    doc = json.loads(text)
    assert list(doc) == ["cells", "dim", "n"]
    assert " " not in text
    assert doc["cells"][0][0] == [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]


def test_partial_grid_nulls():
    g = classical_cyclic_grid(2).keep_only([(0, 0)])
    doc = json.loads(dumps(g))
    assert doc["cells"][0][1] is None
    assert loads(dumps(g)) == g


def test_hypercube_document():
    cube = cube_from_families(*(identity_family(2),) * 3)
    doc = json.loads(dumps(cube))
    assert doc["d_sides"] == 3 and doc["dim"] == 8 and len(doc["cells"]) == 64
    assert isinstance(loads(dumps(cube)), SudoQHypercube)


def test_unnormalized_needs_flag():
    with pytest.raises(GridFormatError):
        loads(example_grid_json())
    g = loads(example_grid_json(), normalize=True)
    assert isinstance(g, SudoQGrid)
    np.testing.assert_allclose(np.linalg.norm(g.cells, axis=-1), 1.0, atol=1e-15)


def test_near_unit_cells_kept_verbatim():
    doc = json.loads(dumps(classical_cyclic_grid(2)))
    doc["cells"][0][0][0][0] = 1.0 + 1e-8
    g = loads(json.dumps(doc))
    assert g.cells[0, 0, 0] == 1.0 + 1e-8


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("n"),
    lambda d: d.update(n="2"),
    lambda d: d.update(dim=5),
    lambda d: d.update(cells=d["cells"][:3]),
    lambda d: d["cells"][0].__setitem__(0, [[1, 0]] * 3),
    lambda d: d["cells"][0].__setitem__(0, [[1, 0, 0]] * 4),
    lambda d: d["cells"][0].__setitem__(0, [[0, 0]] * 4),
    lambda d: d["cells"][0].__setitem__(0, [[True, 0]] * 4),
])
def test_malformed(mutate):
    doc = json.loads(dumps(classical_cyclic_grid(2)))
    mutate(doc)
    with pytest.raises(GridFormatError):
        loads(json.dumps(doc))


def test_invalid_json_and_non_finite():
    with pytest.raises(GridFormatError):
        loads("{not json")
    with pytest.raises(GridFormatError):
        loads("[]")
    doc = json.loads(dumps(classical_cyclic_grid(2)))
    text = json.dumps(doc).replace("1.0", "NaN", 1)
    with pytest.raises(GridFormatError):
        loads(text)


def test_format_error_is_value_error():
    assert issubclass(GridFormatError, ValueError)
