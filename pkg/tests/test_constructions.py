from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sudoq.analysis import angle_set
from sudoq.constructions import (check_family, check_unbiased, classical_cyclic_grid,
                                 cube_from_families, distinct_columns, grid_from_unitary_families,
                                 haar_family, hw_basis, hw_family, hw_mub_set, hw_operator,
                                 hw_sudoq, hypercube_from_families, identity_family, is_prime,
                                 is_product_vector, local_mub_product_bases,
                                 predicted_cardinality)
from sudoq.linalg import eigencheck, equal_up_to_phase, is_orthonormal_set
from sudoq.model import SudoQGrid, cardinality, cell_coords, classify, hypercube_to_grid, validate

W3 = np.exp(2j * np.pi / 3)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def block_vectors(grid: SudoQGrid, i: int, j: int) -> np.ndarray:
    n = grid.n
    return np.array([grid.at(i, j, k, l) for k in range(n) for l in range(n)])


class TestCyclic:
    def test_origin_cell(self):
        np.testing.assert_array_equal(classical_cyclic_grid(2).get(0, 0), [1, 0, 0, 0])

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_valid_classical(self, n):
        g = classical_cyclic_grid(n)
        assert validate(g).valid
        assert cardinality(g).c == n * n
        assert classify(g).value == "classical"

    @pytest.mark.parametrize("n", [2, 3])
    def test_formula(self, n):
        g = classical_cyclic_grid(n)
        for i, j, k, l in itertools.product(range(n), repeat=4):
            idx = n * ((j + k) % n) + (i + l) % n
            assert g.at(i, j, k, l)[idx] == 1.0


class TestUnitaryFamilies:
    @pytest.mark.parametrize("n", [2, 3])
    def test_identity_families_give_cyclic(self, n):
        assert grid_from_unitary_families(identity_family(n), identity_family(n)) == \
            classical_cyclic_grid(n)

    def test_haar_gives_maximal(self):
        g = grid_from_unitary_families(haar_family(2, 0), haar_family(2, 1))
        assert validate(g).valid and cardinality(g).c == 16

    def test_repeated_member(self):
        us = haar_family(2, 3)
        us[1] = us[0]
        g = grid_from_unitary_families(us, identity_family(2))
        assert validate(g).valid
        assert predicted_cardinality(us, identity_family(2)) == 2 * 2
        assert cardinality(g).c == 4

    def test_predictions(self):
        assert predicted_cardinality(identity_family(3), identity_family(3)) == 9
        assert distinct_columns(identity_family(3)) == 3
        assert predicted_cardinality(haar_family(2, 5), haar_family(2, 6)) == 16
        us, vs = haar_family(2, 7), identity_family(2)
        assert predicted_cardinality(us, vs) == 8
        assert cardinality(grid_from_unitary_families(us, vs)).c == 8

    def test_cell_rule(self):
        us, vs = haar_family(3, 8), haar_family(3, 9)
        g = grid_from_unitary_families(us, vs)
        for i, j, k, l in itertools.product(range(3), repeat=4):
            expect = np.kron(us[i][:, (j + k) % 3], vs[j][:, (i + l) % 3])
            np.testing.assert_array_equal(g.at(i, j, k, l), expect)

    def test_bad_family(self):
        with pytest.raises(ValueError):
            check_family(np.ones((2, 2, 2)))
        with pytest.raises(ValueError):
            grid_from_unitary_families(identity_family(2), identity_family(3))

    @settings(max_examples=20, deadline=None)
    @given(seeds, st.sampled_from([2, 3, 4]))
    def test_always_valid_and_predicted(self, seed, n):
        rng = np.random.default_rng(seed)
        us = haar_family(n, rng)
        vs = haar_family(n, rng)
        # collapse some members so the predicted count is not always maximal
        if rng.random() < 0.5:
            us[1] = us[0]
        if rng.random() < 0.5:
            vs = identity_family(n)
        g = grid_from_unitary_families(us, vs)
        assert validate(g).valid
        assert cardinality(g).c == predicted_cardinality(us, vs)


class TestHWBases:
    def test_printed_vectors(self):
        np.testing.assert_allclose(hw_basis(3, 1)[0], np.ones(3) / np.sqrt(3), atol=1e-15)
        np.testing.assert_allclose(hw_basis(3, 2)[1], np.array([1, W3 ** 2, 1]) / np.sqrt(3),
                                   atol=1e-15)

    def test_eigen_equation(self):
        for v in hw_basis(5, 3):
            _, res = eigencheck(hw_operator(5, 3), v)
            assert res < 1e-12

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7])
    def test_orthonormal_eigenbases(self, n):
        for t in range(n + 1):
            b = hw_basis(n, t)
            assert is_orthonormal_set(b)[0]
            assert max(eigencheck(hw_operator(n, t), v)[1] for v in b) < 1e-12

    def test_qubit_triple(self):
        bases = hw_mub_set(2)
        assert len(bases) == 3
        for a, b in itertools.combinations(bases, 2):
            np.testing.assert_allclose(np.abs(a.conj() @ b.T) ** 2, 0.5, atol=1e-15)

    @pytest.mark.parametrize("n", [3, 5, 7])
    def test_complete_mub_sets(self, n):
        bases = hw_mub_set(n)
        assert len(bases) == n + 1
        for a, b in itertools.combinations(bases, 2):
            assert check_unbiased(a, b)

    def test_non_prime_rejected(self):
        with pytest.raises(ValueError):
            hw_mub_set(4)
        with pytest.raises(ValueError):
            hw_basis(3, 4)

    def test_check_unbiased(self):
        f = hw_basis(3, 1)
        assert check_unbiased(np.eye(3), f)
        assert not check_unbiased(np.eye(3), np.eye(3))
        with pytest.raises(ValueError):
            check_unbiased(np.eye(2), np.eye(3))

    @pytest.mark.parametrize("n", [2, 3, 5, 7])
    def test_no_shared_eigenvectors(self, n):
        for t, tp in itertools.permutations(range(1, n + 1), 2):
            for v in hw_basis(n, t):
                assert eigencheck(hw_operator(n, tp), v)[1] > 1e-3

    def test_is_prime(self):
        assert [p for p in range(12) if is_prime(p)] == [2, 3, 5, 7, 11]


class TestHWSudoQ:
    def test_n2(self):
        g = hw_sudoq(2)
        assert validate(g).valid and cardinality(g).c == 16

    def test_matches_printed_grid(self, printed_hw):
        g = hw_sudoq(3)
        for r, c in itertools.product(range(9), repeat=2):
            assert equal_up_to_phase(g.get(r, c), printed_hw.get(r, c)), (r, c)

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_maximal_and_blocks_unbiased(self, n):
        g = hw_sudoq(n)
        assert validate(g).valid
        assert cardinality(g).c == n ** 4
        for (i, j), (ip, jp) in itertools.product(itertools.product(range(n), repeat=2), repeat=2):
            if i != ip and j != jp:
                assert check_unbiased(block_vectors(g, i, j), block_vectors(g, ip, jp))

    def test_block_pair_overlaps(self):
        g = hw_sudoq(3)
        ov = np.abs(block_vectors(g, 0, 0).conj() @ block_vectors(g, 1, 1).T)
        np.testing.assert_allclose(ov, 1 / 3, atol=1e-12)

    @pytest.mark.parametrize("n", [2, 3])
    def test_angle_set(self, n):
        values = [v for v, _ in angle_set(hw_sudoq(n).flat_vectors())]
        allowed = [0.0, 1.0 / n, 1.0 / n ** 2]
        assert all(min(abs(v - a) for a in allowed) < 1e-9 for v in values)

    def test_family_shape(self):
        fam = hw_family(3)
        assert fam.shape == (3, 3, 3)
        np.testing.assert_array_equal(fam[0], np.eye(3))


class TestCubes:
    def test_standard_n2(self):
        cube = cube_from_families(haar_family(2, 1), haar_family(2, 2), haar_family(2, 3))
        rep = validate(cube)
        assert rep.valid and set(rep.worst) == {"block", "swap1", "swap2", "swap3"}
        assert cardinality(cube).c == 32

    def test_even_modified_n2(self):
        fams = [haar_family(2, s) for s in (4, 5, 6)]
        assert all(distinct_columns(f) == 4 for f in fams)
        cube = cube_from_families(*fams, variant="even_modified")
        assert validate(cube).valid and cardinality(cube).c == 64

    def test_standard_n3(self):
        cube = cube_from_families(haar_family(3, 7), haar_family(3, 8), haar_family(3, 9))
        assert validate(cube).valid and cardinality(cube).c == 729

    def test_identity_n3(self):
        cube = hypercube_from_families(3, [identity_family(3)] * 3)
        assert validate(cube).valid and cardinality(cube).c == 27

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            cube_from_families(*(identity_family(2),) * 3, variant="odd")

    def test_matches_general_hypercube(self):
        fams = [haar_family(2, s) for s in (1, 2, 3)]
        assert cube_from_families(*fams) == hypercube_from_families(3, fams)


class TestHypercubes:
    def test_d2_identity_is_cyclic(self):
        cube = hypercube_from_families(2, [identity_family(2)] * 2)
        assert hypercube_to_grid(cube) == classical_cyclic_grid(2)

    @pytest.mark.parametrize("n", [2, 3])
    def test_d2_equals_grid_construction(self, n):
        us, vs = haar_family(n, 10), haar_family(n, 11)
        cube = hypercube_from_families(2, [us, vs])
        assert hypercube_to_grid(cube) == grid_from_unitary_families(us, vs)

    def test_d4(self):
        cube = hypercube_from_families(4, [haar_family(2, s) for s in range(4)])
        rep = validate(cube)
        assert rep.valid and rep.max_residual < 1e-9
        assert cardinality(cube).c == 256

    def test_errors(self):
        with pytest.raises(ValueError):
            hypercube_from_families(3, [identity_family(2)] * 2)
        with pytest.raises(ValueError):
            hypercube_from_families(2, [identity_family(2), identity_family(3)])


class TestLocalMUB:
    def test_n2(self):
        bases = local_mub_product_bases(2)
        assert len(bases) == 3 and bases[0].shape == (4, 4)
        for a, b in itertools.combinations(bases, 2):
            np.testing.assert_allclose(np.abs(a.conj() @ b.T) ** 2, 0.25, atol=1e-12)

    def test_n3(self):
        bases = local_mub_product_bases(3)
        assert len(bases) == 4 and all(b.shape == (9, 9) for b in bases)
        for a, b in itertools.combinations(bases, 2):
            assert check_unbiased(a, b)

    def test_separable(self):
        for b in local_mub_product_bases(3):
            assert all(is_product_vector(v, 3) for v in b)
        entangled = np.array([1, 0, 0, 1]) / np.sqrt(2)
        assert not is_product_vector(entangled, 2)

    def test_non_prime(self):
        with pytest.raises(ValueError):
            local_mub_product_bases(4)
