from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from diocurve.errors import SingularMatrixError
from diocurve.linalg import (as_matrix, det, identity, inverse, mat_mul,
                             mat_vec, null_space, rank, rref, rref_tracked,
                             solve, transpose)

entry_st = st.fractions(min_value=Fraction(-9), max_value=Fraction(9),
                        max_denominator=6)


def square_st(n):
    return st.lists(st.lists(entry_st, min_size=n, max_size=n),
                    min_size=n, max_size=n).map(as_matrix)


any_square_st = st.integers(min_value=1, max_value=4).flatmap(square_st)


def rect_st(rows, cols):
    return st.lists(st.lists(entry_st, min_size=cols, max_size=cols),
                    min_size=rows, max_size=rows).map(as_matrix)


class TestBasics:
    def test_as_matrix_coerces(self):
        m = as_matrix([[1, "1/2"], [0.5, 2]])
        assert m[0][1] == Fraction(1, 2)
        assert m[1][0] == Fraction(1, 2)
        assert all(isinstance(x, Fraction) for row in m for x in row)

    def test_identity_multiplication(self):
        a = as_matrix([[1, 2, 3], [4, 5, 6]])
        assert mat_mul(a, identity(3)) == a
        assert mat_mul(identity(2), a) == a

    def test_shape_errors(self):
        a = as_matrix([[1, 2]])
        with pytest.raises(ValueError):
            mat_mul(a, a)
        with pytest.raises(ValueError):
            mat_vec(a, (Fraction(1),))

    def test_transpose_involution(self):
        a = as_matrix([[1, 2, 3], [4, 5, 6]])
        assert transpose(transpose(a)) == a
        assert transpose(a)[2] == (Fraction(3), Fraction(6))


class TestRref:
    def test_known_reduction(self):
        a = as_matrix([[1, 2, 1], [2, 4, 0], [0, 0, 1]])
        red, pivots = rref(a)
        assert pivots == (0, 2)
        assert red == as_matrix([[1, 2, 0], [0, 0, 1], [0, 0, 0]])

    def test_rank_examples(self):
        assert rank(as_matrix([[1, 2], [2, 4]])) == 1
        assert rank(identity(4)) == 4
        assert rank(as_matrix([[0, 0], [0, 0]])) == 0

    @given(rect_st(3, 4))
    def test_tracked_transform_reproduces_reduction(self, a):
        red, t = rref_tracked(a)
        assert mat_mul(t, a) == red
        assert det(t) != 0

    @given(any_square_st)
    def test_rank_equals_transpose_rank(self, a):
        assert rank(a) == rank(transpose(a))


class TestDetInverse:
    def test_det_examples(self):
        assert det(as_matrix([[2, 0], [0, 3]])) == 6
        assert det(as_matrix([[0, 1], [1, 0]])) == -1
        assert det(as_matrix([[1, 2], [2, 4]])) == 0
        with pytest.raises(ValueError):
            det(as_matrix([[1, 2, 3]]))

    def test_inverse_known(self):
        a = as_matrix([[2, 1], [1, 1]])
        assert inverse(a) == as_matrix([[1, -1], [-1, 2]])

    def test_inverse_singular(self):
        with pytest.raises(SingularMatrixError):
            inverse(as_matrix([[1, 2], [2, 4]]))

    @given(any_square_st)
    def test_det_zero_iff_rank_deficient(self, a):
        assert (det(a) == 0) == (rank(a) < len(a))

    @given(any_square_st)
    def test_inverse_round_trip(self, a):
        if det(a) == 0:
            with pytest.raises(SingularMatrixError):
                inverse(a)
        else:
            inv = inverse(a)
            n = len(a)
            assert mat_mul(a, inv) == identity(n)
            assert mat_mul(inv, a) == identity(n)

    @given(square_st(3), square_st(3))
    def test_det_multiplicative(self, a, b):
        assert det(mat_mul(a, b)) == det(a) * det(b)


class TestSolveNullSpace:
    def test_unique_solution(self):
        a = as_matrix([[2, 1], [1, 1]])
        x = solve(a, (Fraction(3), Fraction(2)))
        assert x == (Fraction(1), Fraction(1))

    def test_inconsistent(self):
        a = as_matrix([[1, 1], [1, 1]])
        assert solve(a, (Fraction(1), Fraction(2))) is None

    def test_underdetermined_free_vars_zeroed(self):
        a = as_matrix([[1, 1, 0]])
        x = solve(a, (Fraction(5),))
        assert x is not None
        assert mat_vec(a, x) == (Fraction(5),)
        assert x[1] == 0 and x[2] == 0

    def test_null_space_example(self):
        a = as_matrix([[1, 2], [2, 4]])
        basis = null_space(a)
        assert len(basis) == 1
        assert mat_vec(a, basis[0]) == (Fraction(0), Fraction(0))

    @given(rect_st(3, 4))
    def test_null_space_dimension_theorem(self, a):
        basis = null_space(a)
        assert len(basis) == 4 - rank(a)
        for v in basis:
            assert mat_vec(a, v) == (Fraction(0),) * 3
        # spanning vectors are independent: stack them and check rank
        if basis:
            assert rank(tuple(basis)) == len(basis)

    @given(rect_st(3, 3), st.lists(entry_st, min_size=3, max_size=3))
    def test_solve_verifies(self, a, b):
        b = tuple(b)
        x = solve(a, b)
        if x is not None:
            assert mat_vec(a, x) == b
        else:
            assert rank(a) < rank(tuple(r + (bi,) for r, bi in zip(a, b)))
