import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from diocurve.errors import CurveFormatError
from diocurve.numutil import (ceil_fraction, floor_fraction, flog2,
                              flog2_fraction, format_fraction, int_desc,
                              nearest_int, padic_valuation, parse_fraction,
                              pow_check_le, pow_check_lt,
                              sqrt2_minus1_bit_positions)

fractions_st = st.fractions(
    min_value=Fraction(-10**6), max_value=Fraction(10**6), max_denominator=10**6)


class TestFlog2:
    def test_matches_math_log2_in_range(self):
        for n in (1, 2, 3, 7, 1000, 2**52 + 1):
            assert flog2(n) == pytest.approx(math.log2(n), abs=1e-12)

    def test_huge_argument(self):
        # 2^100000 would overflow float conversion inside math.log2
        assert flog2(2**100000) == pytest.approx(100000.0, abs=1e-9)
        assert flog2(3 * 2**100000) == pytest.approx(100000 + math.log2(3), abs=1e-9)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            flog2(0)
        with pytest.raises(ValueError):
            flog2(-5)

    def test_fraction_variant(self):
        assert flog2_fraction(Fraction(1, 8)) == pytest.approx(-3.0, abs=1e-12)
        big = Fraction(3**5000, 2**9000)
        assert flog2_fraction(big) == pytest.approx(
            5000 * math.log2(3) - 9000, abs=1e-6)
        with pytest.raises(ValueError):
            flog2_fraction(Fraction(0))


class TestPadicValuation:
    def test_known_values(self):
        assert padic_valuation(12, 2) == 2
        assert padic_valuation(12, 3) == 1
        assert padic_valuation(12, 5) == 0
        assert padic_valuation(-8, 2) == 3
        assert padic_valuation(1, 7) == 0

    def test_rejects_zero_and_bad_p(self):
        with pytest.raises(ValueError):
            padic_valuation(0, 2)
        with pytest.raises(ValueError):
            padic_valuation(6, 1)

    @given(st.integers(min_value=1, max_value=10**9),
           st.sampled_from([2, 3, 5, 7, 11]))
    def test_divides_exactly(self, n, p):
        v = padic_valuation(n, p)
        assert n % p**v == 0
        assert n % p**(v + 1) != 0


class TestNearestInt:
    def test_plain_rounding(self):
        assert nearest_int(Fraction(7, 3)) == 2
        assert nearest_int(Fraction(8, 3)) == 3
        assert nearest_int(Fraction(-7, 3)) == -2
        assert nearest_int(Fraction(5)) == 5

    def test_half_ties_go_even(self):
        assert nearest_int(Fraction(1, 2)) == 0
        assert nearest_int(Fraction(3, 2)) == 2
        assert nearest_int(Fraction(5, 2)) == 2
        assert nearest_int(Fraction(-1, 2)) == 0
        assert nearest_int(Fraction(-3, 2)) == -2

    @given(fractions_st)
    def test_is_a_closest_integer(self, x):
        n = nearest_int(x)
        assert abs(x - n) <= Fraction(1, 2)

    @given(fractions_st)
    def test_floor_ceil_bracket(self, x):
        assert floor_fraction(x) <= x <= ceil_fraction(x)
        assert ceil_fraction(x) - floor_fraction(x) <= 1
        if x.denominator == 1:
            assert floor_fraction(x) == ceil_fraction(x) == x


class TestParseFormat:
    def test_parse_forms(self):
        assert parse_fraction("3/4") == Fraction(3, 4)
        assert parse_fraction(" -7 ") == Fraction(-7)
        assert parse_fraction("(1/2)") == Fraction(1, 2)
        assert parse_fraction("-11/2") == Fraction(-11, 2)

    def test_parse_rejects(self):
        for bad in ("", "()", "1.5", "a/b", "1/0", "1//2"):
            with pytest.raises(CurveFormatError):
                parse_fraction(bad)

    def test_format(self):
        assert format_fraction(Fraction(3, 4)) == "3/4"
        assert format_fraction(Fraction(-8, 2)) == "-4"
        assert format_fraction(Fraction(0)) == "0"

    @given(fractions_st)
    def test_round_trip(self, x):
        assert parse_fraction(format_fraction(x)) == x


class TestPowChecks:
    def test_against_float_far_from_boundary(self):
        # 3 <= 10^(1/2) and not 4 <= 10^(1/2)
        assert pow_check_le(Fraction(3), 1, 2, Fraction(10))
        assert not pow_check_le(Fraction(4), 1, 2, Fraction(10))

    def test_negative_exponent(self):
        # 10^(-1/2) ~ 0.316
        assert pow_check_le(Fraction(3, 10), -1, 2, Fraction(10))
        assert not pow_check_le(Fraction(1, 3), -1, 2, Fraction(10))

    def test_boundary_exactness(self):
        # 8 == 4^(3/2) exactly: le accepts, lt refuses
        assert pow_check_le(Fraction(8), 3, 2, Fraction(4))
        assert not pow_check_lt(Fraction(8), 3, 2, Fraction(4))
        assert pow_check_lt(Fraction(8) - Fraction(1, 10**30), 3, 2, Fraction(4))

    def test_rejects_bad_operands(self):
        with pytest.raises(ValueError):
            pow_check_le(Fraction(-1), 1, 2, Fraction(2))
        with pytest.raises(ValueError):
            pow_check_le(Fraction(1), 1, 0, Fraction(2))

    @given(st.fractions(min_value=Fraction(1, 100), max_value=Fraction(100),
                        max_denominator=1000),
           st.integers(min_value=-6, max_value=6),
           st.integers(min_value=1, max_value=4),
           st.fractions(min_value=Fraction(1, 100), max_value=Fraction(100),
                        max_denominator=1000))
    def test_agrees_with_exact_powering(self, base, en, ed, bound):
        lhs = base**ed
        rhs = bound**en if en >= 0 else 1 / bound**(-en)
        assert pow_check_le(base, en, ed, bound) == (lhs <= rhs)
        assert pow_check_lt(base, en, ed, bound) == (lhs < rhs)


class TestIntDesc:
    def test_small_verbatim(self):
        assert int_desc(123) == "123"
        assert int_desc(-(10**39)) == str(-(10**39))

    def test_large_capped(self):
        assert int_desc(2**400) == "~2^400"
        assert int_desc(-(2**400 + 5)) == "~2^400"


class TestSqrtBits:
    def test_prefix_stability(self):
        # deeper expansions agree on the shared prefix
        a, b = sqrt2_minus1_bit_positions(40), sqrt2_minus1_bit_positions(80)
        assert a == [p for p in b if p <= 40]

    def test_matches_isqrt_digits(self):
        n = 64
        scaled = math.isqrt(2 << (2 * n)) - (1 << n)
        expect = [pos for pos in range(1, n + 1) if (scaled >> (n - pos)) & 1]
        assert sqrt2_minus1_bit_positions(n) == expect
        # leading digits of sqrt(2)-1 = 0.0110101000001... in binary
        assert expect[:5] == [2, 3, 5, 7, 13]

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            sqrt2_minus1_bit_positions(0)
