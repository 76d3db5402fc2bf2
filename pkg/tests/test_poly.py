from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from diocurve.errors import CurveFormatError
from diocurve.poly import RatPoly, X, format_poly, parse_poly

coeff_st = st.fractions(min_value=Fraction(-50), max_value=Fraction(50),
                        max_denominator=30)
poly_st = st.lists(coeff_st, min_size=0, max_size=7).map(
    lambda cs: RatPoly(tuple(cs)))


class TestConstruction:
    def test_trailing_zeros_stripped(self):
        p = RatPoly((Fraction(1), Fraction(0), Fraction(0)))
        assert p.degree == 0
        assert p.coeffs == (Fraction(1),)

    def test_zero(self):
        z = RatPoly.zero()
        assert z.is_zero
        assert z.degree == -1
        with pytest.raises(ValueError):
            z.leading

    def test_monomial(self):
        m = RatPoly.monomial(3, Fraction(2, 7))
        assert m.degree == 3
        assert m.leading == Fraction(2, 7)
        assert m.coeff(0) == 0
        assert m.coeff(99) == 0
        with pytest.raises(ValueError):
            RatPoly.monomial(-1)

    def test_x(self):
        assert X.degree == 1
        assert X(Fraction(5, 3)) == Fraction(5, 3)


class TestArithmetic:
    def test_cancellation_drops_degree(self):
        p = RatPoly.monomial(4) + X
        q = RatPoly.monomial(4)
        assert (p - q).coeffs == X.coeffs
        assert (p - p).is_zero

    def test_derivative(self):
        p = parse_poly("1/3 + 5*X^2 - 11/2*X + X^3")
        assert p.derivative() == parse_poly("-11/2 + 10*X + 3*X^2")
        assert RatPoly.const(9).derivative().is_zero

    def test_without_constant(self):
        p = parse_poly("7 + 2*X")
        assert p.without_constant() == parse_poly("2*X")
        assert RatPoly.zero().without_constant().is_zero

    @given(poly_st, poly_st, coeff_st)
    def test_ring_identities_at_a_point(self, p, q, x):
        assert (p + q)(x) == p(x) + q(x)
        assert (p - q)(x) == p(x) - q(x)
        assert (-p)(x) == -p(x)
        assert p.scale(3)(x) == 3 * p(x)

    @given(poly_st)
    def test_sum_with_negation_is_zero(self, p):
        assert (p + (-p)).is_zero


class TestIntegerHelpers:
    def test_denominator_lcm(self):
        assert parse_poly("1/6*X^3 + 5*X^2").denominator_lcm() == 6
        assert parse_poly("X^3 - 11/2*X + 1/3").denominator_lcm() == 6
        assert RatPoly.zero().denominator_lcm() == 1

    def test_content(self):
        assert parse_poly("6*X^2 + 9*X - 15").content() == 3
        assert RatPoly.zero().content() == 0
        with pytest.raises(ValueError):
            parse_poly("1/2*X").content()

    def test_eval_cleared_matches_fraction_eval(self):
        p = parse_poly("2/13*X^7 - 11*X^3 - 1")
        num, den = p.eval_cleared(7, 3)
        assert Fraction(num, den) == p(Fraction(7, 3))
        assert den == 13 * 3**7

    def test_eval_cleared_zero_poly(self):
        assert RatPoly.zero().eval_cleared(5, 2) == (0, 1)

    def test_eval_cleared_rejects_bad_den(self):
        with pytest.raises(ValueError):
            X.eval_cleared(1, 0)

    @given(poly_st, st.integers(min_value=-10**6, max_value=10**6),
           st.integers(min_value=1, max_value=10**6))
    def test_eval_cleared_agrees_everywhere(self, p, num, den):
        n, d = p.eval_cleared(num, den)
        assert Fraction(n, d) == p(Fraction(num, den))

    def test_abs_coeff_sum_dominates_on_interval(self):
        p = parse_poly("3/4*X^9 + 3/8*X^5 + 1/2")
        r = Fraction(2)
        bound = p.abs_coeff_sum_at(r)
        for i in range(-20, 21):
            x = Fraction(i, 10)
            assert abs(p(x)) <= bound


class TestParsing:
    def test_basic_forms(self):
        assert parse_poly("X") == X
        assert parse_poly("-X") == -X
        assert parse_poly("0") == RatPoly.zero()
        assert parse_poly("2X^2") == RatPoly.monomial(2, 2)
        assert parse_poly("2*X^2") == RatPoly.monomial(2, 2)
        assert parse_poly("(1/2)*X") == X.scale(Fraction(1, 2))

    def test_spec_style_lines(self):
        p = parse_poly("2/7*X^8 + 5/2*X^3")
        assert p.degree == 8
        assert p.leading == Fraction(2, 7)
        assert p.coeff(3) == Fraction(5, 2)

    def test_term_merging(self):
        assert parse_poly("X + X") == X.scale(2)
        assert parse_poly("X^2 - X^2") == RatPoly.zero()

    def test_rejects_garbage(self):
        for bad in ("", "  ", "X^", "^2", "1/2/3*X", "2**X", "Y", "X + ", "1.5*X"):
            with pytest.raises(CurveFormatError):
                parse_poly(bad)

    @given(poly_st)
    def test_format_parse_round_trip(self, p):
        assert parse_poly(format_poly(p)) == p

    def test_format_examples(self):
        assert format_poly(RatPoly.zero()) == "0"
        assert format_poly(parse_poly("X^3 - 11/2*X + 1/3")) == "1/3 - 11/2*X + X^3"
        assert format_poly(-X) == "-X"
