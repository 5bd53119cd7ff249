from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nncomplete import ExactMatrix, det, inverse, matmul, minor, rank, solve_linear

from conftest import rnd_fraction
from oracles import det_cofactor, matrix_rank_float

fractions = st.fractions(
    min_value=-20, max_value=20, max_denominator=8
)


def sq_matrix(n):
    return st.lists(
        st.lists(fractions, min_size=n, max_size=n), min_size=n, max_size=n
    ).map(ExactMatrix)


class TestBasics:
    def test_identity_and_indexing(self):
        m = ExactMatrix.identity(3)
        assert m.entry(1, 1) == 1 and m.entry(1, 2) == 0
        assert m[3, 3] == 1

    def test_one_based_submatrix(self):
        m = ExactMatrix([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        assert m.submatrix([1, 3], [2, 3]) == ExactMatrix([[2, 3], [8, 9]])

    def test_stacking(self):
        a = ExactMatrix([[1], [2]])
        b = ExactMatrix([[3], [4]])
        assert a.hstack(b) == ExactMatrix([[1, 3], [2, 4]])
        assert a.vstack(b) == ExactMatrix([[1], [2], [3], [4]])


class TestDet:
    @settings(max_examples=60, deadline=None)
    @given(sq_matrix(3) | sq_matrix(4))
    def test_matches_cofactor_expansion(self, m):
        assert det(m) == det_cofactor(m.to_lists())

    @settings(max_examples=40, deadline=None)
    @given(sq_matrix(3), sq_matrix(3))
    def test_multiplicative(self, a, b):
        assert det(matmul(a, b)) == det(a) * det(b)

    def test_minor_is_submatrix_det(self):
        m = ExactMatrix([[12, 2, 1, 9], [8, 6, 3, 10], [4, 16, 13, 9], [12, 4, 6, 5]])
        assert minor(m, [3, 4], [3, 4]) == Fraction(11)


class TestRank:
    def test_regression_matrix_rank(self):
        m = ExactMatrix([[12, 2, 1, 9], [8, 6, 3, 10], [4, 16, 13, 9], [12, 4, 6, 5]])
        assert rank(m) == 3

    @settings(max_examples=60, deadline=None)
    @given(sq_matrix(3) | sq_matrix(4))
    def test_rank_matches_float_oracle(self, m):
        assert rank(m) == matrix_rank_float(m)

    def test_outer_product_rank(self, rng):
        for _ in range(25):
            u = [rnd_fraction(rng, -6, 6) for _ in range(4)]
            v = [rnd_fraction(rng, -6, 6) for _ in range(5)]
            m = ExactMatrix([[x * y for y in v] for x in u])
            expected = 1 if any(u) and any(v) else 0
            assert rank(m) == expected


class TestSolveAndInverse:
    @settings(max_examples=40, deadline=None)
    @given(sq_matrix(3))
    def test_inverse_roundtrip(self, m):
        if det(m) == 0:
            with pytest.raises(ValueError):
                inverse(m)
        else:
            assert matmul(m, inverse(m)) == ExactMatrix.identity(3)

    def test_solve_consistent(self, rng):
        for _ in range(25):
            a = ExactMatrix([[rnd_fraction(rng, -5, 5) for _ in range(2)] for _ in range(4)])
            x = ExactMatrix([[rnd_fraction(rng, -5, 5)] for _ in range(2)])
            rhs = matmul(a, x)
            sol = solve_linear(a, rhs)
            assert sol.consistent
            assert matmul(a, sol.particular) == rhs

    def test_solve_inconsistent(self):
        a = ExactMatrix([[1, 0], [1, 0]])
        rhs = ExactMatrix([[1], [2]])
        assert not solve_linear(a, rhs).consistent

    def test_kernel_dimension(self):
        a = ExactMatrix([[1, 2, 3], [2, 4, 6]])
        sol = solve_linear(a, ExactMatrix.zeros(2, 1))
        assert sol.kernel_dimension == 2
        for k in sol.kernel_basis:
            assert matmul(a, k).is_zero()
