from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nncomplete import Poly, RationalFunction

coeffs = st.lists(
    st.fractions(min_value=-9, max_value=9, max_denominator=6), min_size=0, max_size=5
)
polys = coeffs.map(Poly)
points = st.fractions(min_value=-8, max_value=8, max_denominator=12)


class TestArithmetic:
    @settings(max_examples=80, deadline=None)
    @given(polys, polys, points)
    def test_ring_ops_match_evaluation(self, p, q, t):
        assert (p + q)(t) == p(t) + q(t)
        assert (p - q)(t) == p(t) - q(t)
        assert (p * q)(t) == p(t) * q(t)

    @settings(max_examples=60, deadline=None)
    @given(polys, polys)
    def test_divmod_identity(self, p, q):
        if q.is_zero():
            with pytest.raises(ZeroDivisionError):
                p.divmod(q)
            return
        quot, rem = p.divmod(q)
        assert quot * q + rem == p
        assert rem.degree < q.degree or rem.is_zero()

    def test_derivative(self):
        p = Poly([1, -3, 0, 2])  # 1 - 3t + 2t^3
        assert p.derivative() == Poly([-3, 0, 6])


class TestRoots:
    def test_rational_roots_of_factored_poly(self):
        # (t - 2)(t + 1/3)(t - 5/7)
        p = Poly([-2, 1]) * Poly([Fraction(1, 3), 1]) * Poly([Fraction(-5, 7), 1])
        assert p.rational_roots() == [Fraction(-1, 3), Fraction(5, 7), Fraction(2)]

    def test_zero_root_extraction(self):
        p = Poly([0, 0, 1, 1])  # t^2 (t + 1)
        assert p.rational_roots() == [Fraction(-1), Fraction(0)]

    @settings(max_examples=50, deadline=None)
    @given(st.lists(points, min_size=1, max_size=4))
    def test_roots_found_for_products_of_linear_factors(self, roots):
        p = Poly([1])
        for r in roots:
            p = p * Poly([-r, 1])
        assert p.rational_roots() == sorted(set(roots))

    def test_sturm_counts_irrational_roots(self):
        p = Poly([-2, 0, 1])  # t^2 - 2
        assert p.count_roots(Fraction(0), Fraction(2)) == 1
        assert p.count_roots(Fraction(-2), Fraction(2)) == 2

    def test_isolation_separates_all_real_roots(self):
        # (t^2 - 2)(t - 1): roots -sqrt2, 1, sqrt2
        p = Poly([-2, 0, 1]) * Poly([-1, 1])
        intervals = p.isolate_real_roots()
        assert len(intervals) == 3
        assert (Fraction(1), Fraction(1)) in intervals
        for (a, b) in intervals:
            assert a <= b
        # intervals are pairwise disjoint and ordered
        for (a1, b1), (a2, b2) in zip(intervals, intervals[1:]):
            assert b1 <= a2

    @settings(max_examples=40, deadline=None)
    @given(st.lists(points, min_size=1, max_size=3, unique=True))
    def test_isolation_degenerate_for_rational_roots(self, roots):
        p = Poly([1])
        for r in roots:
            p = p * Poly([-r, 1])
        got = p.isolate_real_roots()
        assert got == sorted((r, r) for r in roots)


class TestRationalFunction:
    def test_lowest_terms(self):
        f = RationalFunction(Poly([0, 1, 1]), Poly([0, 1]))  # (t^2+t)/t
        assert f == RationalFunction(Poly([1, 1]))

    @settings(max_examples=60, deadline=None)
    @given(polys, polys, points)
    def test_field_ops_match_evaluation(self, p, q, t):
        if q.is_zero():
            return
        f = RationalFunction(p, q)
        g = RationalFunction(q, Poly([1]))
        if f.defined_at(t):
            assert (f + g)(t) == f(t) + g(t)
            assert (f * g)(t) == f(t) * g(t)

    def test_pole_raises(self):
        f = RationalFunction(Poly([1]), Poly([-3, 1]))
        assert not f.defined_at(3)
        with pytest.raises(ZeroDivisionError):
            f(3)
