"""Polynomial rings: orders, arithmetic, parsing, gcd."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fatpoints import (
    GF,
    QQ,
    Block,
    GrevLex,
    Monomial,
    Ordering,
    Polynomial,
    Ring,
    RingMismatch,
    compare_monomials,
    monomials_of_degree,
    polynomial_gcd,
)

R3 = Ring(QQ, 3)
x0, x1, x2 = R3.gens


class TestOrders:
    def test_grevlex_degree_two_chain(self):
        # Classical grevlex on three variables, total degree two.
        chain = ["x0^2", "x0*x1", "x1^2", "x0*x2", "x1*x2", "x2^2"]
        order = GrevLex()
        for hi, lo in zip(chain, chain[1:]):
            a = R3.parse(hi).leading_monomial()
            b = R3.parse(lo).leading_monomial()
            assert compare_monomials(a, b, order) == Ordering.GT

    def test_grevlex_grades_by_total_degree(self):
        assert compare_monomials((0, 0, 3), (1, 1, 0), GrevLex()) == Ordering.GT

    def test_block_order_eliminates_leading_variables(self):
        # Any power of an eliminated variable dominates everything without it.
        order = Block(1)
        assert compare_monomials((1, 0, 0), (0, 5, 5), order) == Ordering.GT
        assert compare_monomials((0, 2, 0), (0, 0, 2), order) == Ordering.GT

    def test_leading_monomial_respects_ring_order(self):
        f = R3.parse("x2^3 + x0*x1 + x1^2")
        assert f.leading_monomial() == Monomial((0, 0, 3))


class TestArithmetic:
    def test_add_mul_pow(self):
        f = (x0 + x1) ** 2
        assert f == x0**2 + 2 * x0 * x1 + x1**2
        assert (f - f).is_zero()

    def test_degree_and_homogeneity(self):
        assert ((x0 + x1) ** 3).degree == 3
        assert ((x0 + x1) ** 3).is_homogeneous()
        assert not (x0**2 + x1).is_homogeneous()

    def test_scalar_coercion(self):
        assert 2 * x0 == x0 + x0
        assert (x0 + Fraction(1, 2)) - Fraction(1, 2) == x0

    def test_cross_ring_rejected(self):
        other = Ring(QQ, 2)
        with pytest.raises(RingMismatch):
            x0 + other.var(0)

    def test_monic(self):
        f = 3 * x0**2 + 6 * x1**2
        assert f.monic() == x0**2 + 2 * x1**2

    def test_dehomogenize(self):
        f = x0**2 * x2 + x1 * x2**2
        # Substituting x2 = 1 stays in the same ring with that slot zeroed.
        assert f.dehomogenize(2) == R3.parse("x0^2 + x1")
        assert (x2**3 + x0 * x2).dehomogenize(2) == x0 + 1

    def test_map_variables(self):
        target = Ring(QQ, 4)
        f = x0 * x1 + x2**2
        g = f.map_variables(target, [1, 2, 3])
        assert g == target.parse("x1*x2 + x3^2")

    def test_prime_field_arithmetic_wraps(self):
        S = Ring(GF(3), 2)
        y0, y1 = S.gens
        assert (y0 + y1) ** 3 == y0**3 + y1**3


class TestParsing:
    def test_parse_example(self):
        f = R3.parse("2*x0^2*x1 - x2^3")
        assert f.coefficient(Monomial((2, 1, 0))).value == 2
        assert f.coefficient(Monomial((0, 0, 3))).value == -1

    def test_parse_rational_coefficients(self):
        f = R3.parse("1/2*x0 + 3/4*x1")
        assert f.coefficient(Monomial((1, 0, 0))).value == Fraction(1, 2)

    def test_parse_rejects_unknown_variable(self):
        with pytest.raises(ValueError):
            R3.parse("x7 + 1")

    def test_str_round_trip(self):
        for text in ("x0", "2*x0^2*x1 - x2^3", "x0*x1 + x1^2 - 5"):
            f = R3.parse(text)
            assert R3.parse(str(f)) == f


class TestMonomials:
    def test_monomials_of_degree_count(self):
        for d in range(6):
            assert len(monomials_of_degree(R3, d)) == math.comb(d + 2, 2)

    def test_monomials_sorted_descending(self):
        mons = monomials_of_degree(R3, 3)
        keys = [R3.sort_key(e) for e in mons]
        assert keys == sorted(keys, reverse=True)

    def test_divides(self):
        assert Monomial((1, 0, 2)).divides(Monomial((2, 0, 2)))
        assert not Monomial((1, 1, 0)).divides(Monomial((2, 0, 2)))


class TestGcd:
    def test_univariate_style(self):
        f = (x0 + x1) ** 2 * (x0 - x1)
        g = (x0 + x1) * (x0 - x1) ** 2
        got = polynomial_gcd(f, g).monic()
        assert got == ((x0 + x1) * (x0 - x1)).monic()

    def test_coprime(self):
        assert polynomial_gcd(x0 + x1, x0 + x2).degree == 0

    def test_content_is_not_dropped(self):
        f = (2 * x0 + 4 * x1) * x2
        g = (x0 + 2 * x1) * x1
        assert polynomial_gcd(f, g).monic() == (x0 + 2 * x1).monic()

    def test_prime_field(self):
        S = Ring(GF(7), 2)
        y0, y1 = S.gens
        f = (y0 + y1) ** 2 * (y0 + 2 * y1)
        g = (y0 + y1) * (y0 + 3 * y1)
        assert polynomial_gcd(f, g).monic() == (y0 + y1).monic()


def small_polys(ring=R3, max_terms=4, max_degree=3):
    exponent = st.tuples(*[st.integers(0, max_degree)] * ring.nvars)
    coeff = st.integers(-4, 4)
    return st.lists(
        st.tuples(exponent, coeff), min_size=0, max_size=max_terms
    ).map(lambda terms: ring.from_terms(terms))


class TestAlgebraProperties:
    @settings(max_examples=60, deadline=None)
    @given(small_polys(), small_polys(), small_polys())
    def test_distributive(self, f, g, h):
        assert (f + g) * h == f * h + g * h

    @settings(max_examples=60, deadline=None)
    @given(small_polys(), small_polys())
    def test_degree_of_product_adds(self, f, g):
        if not f.is_zero() and not g.is_zero():
            assert (f * g).degree == f.degree + g.degree

    @settings(max_examples=60, deadline=None)
    @given(small_polys())
    def test_str_parse_round_trip(self, f):
        assert R3.parse(str(f)) == f

    @settings(max_examples=25, deadline=None)
    @given(small_polys(max_terms=3, max_degree=2),
           small_polys(max_terms=3, max_degree=2),
           small_polys(max_terms=2, max_degree=1))
    def test_gcd_of_common_multiple(self, f, g, h):
        # gcd(fh, gh) is divisible by h (checked via a second gcd).
        if f.is_zero() or g.is_zero() or h.is_zero():
            return
        d = polynomial_gcd(f * h, g * h)
        assert polynomial_gcd(d, h).monic() == h.monic()
