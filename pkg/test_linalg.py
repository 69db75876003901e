"""
Tests for exact linear algebra over F_p.
"""
import numpy as np
import pytest

from linalg import (
    FpMatrix,
    column_space,
    hstack,
    inverse,
    kernel_basis,
    left_inverse,
    quotient_map,
    rank,
    rref,
    solve,
    vstack,
)


class TestFpMatrix:
    """Construction and arithmetic."""

    def test_entries_reduced_mod_p(self):
        m = FpMatrix.from_array(5, np.array([[7, -1], [10, 3]]))
        assert m.to_list() == [[2, 4], [0, 3]]

    def test_ints_is_writeable_copy(self):
        m = FpMatrix.identity(3, 2)
        a = m.ints
        a[0, 0] = 2
        assert m.to_list() == [[1, 0], [0, 1]]

    def test_product_and_sum(self):
        a = FpMatrix.from_rows(3, [[1, 2], [0, 1]])
        b = FpMatrix.from_rows(3, [[2, 0], [1, 1]])
        assert (a @ b).to_list() == [[1, 2], [1, 1]]
        assert (a + b).to_list() == [[0, 2], [1, 2]]

    def test_mixed_fields_rejected(self):
        with pytest.raises(ValueError):
            FpMatrix.identity(2, 2) @ FpMatrix.identity(3, 2)

    def test_empty_stacks_keep_shape(self):
        assert hstack(2, [], rows=3).shape == (3, 0)
        assert vstack(2, [], cols=4).shape == (0, 4)


class TestRowReduction:
    """rref, rank and kernels."""

    def test_identity(self):
        reduced, r, pivots = rref(FpMatrix.identity(2, 2))
        assert reduced == FpMatrix.identity(2, 2)
        assert r == 2
        assert pivots == [0, 1]

    def test_zero(self):
        reduced, r, pivots = rref(FpMatrix.zeros(3, 3, 2))
        assert reduced.is_zero()
        assert (r, pivots) == (0, [])

    def test_dependent_rows(self):
        reduced, r, _ = rref(FpMatrix.from_rows(5, [[1, 2], [2, 4]]))
        assert reduced.to_list() == [[1, 2], [0, 0]]
        assert r == 1

    def test_kernel_of_identity_is_empty(self):
        assert kernel_basis(FpMatrix.identity(2, 3)).rows == 0

    def test_kernel_of_zero_is_everything(self):
        assert kernel_basis(FpMatrix.zeros(2, 3, 3)) == FpMatrix.identity(2, 3)

    def test_kernel_of_sum_row(self):
        assert kernel_basis(FpMatrix.from_rows(2, [[1, 1]])).to_list() == [[1, 1]]

    def test_rank_nullity(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            m = FpMatrix.from_array(3, rng.integers(0, 3, size=(4, 6)))
            ker = kernel_basis(m)
            assert rank(m) + ker.rows == 6
            assert (m @ ker.T).is_zero()

    def test_column_space_is_canonical(self):
        m = FpMatrix.from_rows(2, [[1, 1], [1, 1]])
        assert column_space(m).to_list() == [[1, 1]]


class TestSolve:
    """Linear systems."""

    def test_identity(self):
        b = FpMatrix.column_vector(5, [3, 4])
        assert solve(FpMatrix.identity(5, 2), b) == b

    def test_inconsistent(self):
        assert solve(FpMatrix.zeros(2, 2, 2), FpMatrix.column_vector(2, [1, 0])) is None

    def test_free_variable_zeroed(self):
        a = FpMatrix.from_rows(2, [[1, 1], [0, 0]])
        x = solve(a, FpMatrix.column_vector(2, [1, 0]))
        assert x.to_list() == [[1], [0]]

    def test_inverse_and_left_inverse(self):
        m = FpMatrix.from_rows(3, [[1, 2], [0, 1]])
        assert m @ inverse(m) == FpMatrix.identity(3, 2)
        assert inverse(FpMatrix.from_rows(3, [[1, 1], [1, 1]])) is None
        b = FpMatrix.from_rows(3, [[1, 0], [2, 1], [0, 1]])
        assert left_inverse(b) @ b == FpMatrix.identity(3, 2)


class TestQuotientMap:
    """Coordinates on quotient spaces."""

    def test_section_and_kill(self):
        sub = FpMatrix.from_rows(3, [[1, 1, 0]])
        q, s = quotient_map(3, sub)
        assert q.shape == (2, 3)
        assert q @ s == FpMatrix.identity(3, 2)
        assert (q @ sub.T).is_zero()

    def test_trivial_subspace(self):
        q, s = quotient_map(2, FpMatrix.zeros(2, 0, 2))
        assert q == FpMatrix.identity(2, 2)
        assert s == FpMatrix.identity(2, 2)
