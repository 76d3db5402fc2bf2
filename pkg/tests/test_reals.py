import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from diocurve.errors import InsufficientDepthError, RealFormatError
from diocurve.reals import (TRUNC_COST_CAP, DyadicSeries, ExactRational,
                            PartialQuotients, Truncation, geometric_dyadic,
                            parse_real)
from tests.conftest import exact_value


class TestTruncation:
    def test_width_and_tail_radius(self):
        t = Truncation(Fraction(1, 2), Fraction(1, 2), Fraction(3, 4), 3)
        assert t.width == Fraction(1, 4)
        assert t.tail_radius == Fraction(1, 4)

    def test_value_may_sit_on_boundary(self):
        # positive-tail series: enclosure entirely above the truncated sum
        t = Truncation(Fraction(0), Fraction(1, 8), Fraction(1, 4), 1)
        assert t.tail_radius == Fraction(1, 4)

    def test_empty_enclosure_rejected(self):
        with pytest.raises(ValueError):
            Truncation(Fraction(0), Fraction(1), Fraction(0), 1)


class TestExactRational:
    def test_truncation_is_exact_at_any_depth(self):
        r = ExactRational(Fraction(3, 7))
        for depth in (1, 5, 100):
            t = r.truncation(depth)
            assert t.exact
            assert t.lo == t.hi == t.value == Fraction(3, 7)

    def test_flags(self):
        r = ExactRational(Fraction(3, 7))
        assert r.known_rational
        assert not r.extendable
        assert r.materialize(50) is r
        assert r.describe() == "rat:3/7"


class TestDyadicSeries:
    def test_validation(self):
        with pytest.raises(RealFormatError):
            DyadicSeries(())
        with pytest.raises(RealFormatError):
            DyadicSeries((0, 3))
        with pytest.raises(RealFormatError):
            DyadicSeries((2, 2))
        with pytest.raises(RealFormatError):
            DyadicSeries((4, 3))

    def test_truncation_values(self):
        s = DyadicSeries((2, 16, 128, 1024))
        t2 = s.truncation(2)
        assert t2.value == Fraction(1, 4) + Fraction(1, 2**16)
        # next term known: tail within [2^-128, 2^-127]
        assert t2.lo == t2.value + Fraction(1, 2**128)
        assert t2.hi == t2.value + Fraction(2, 2**128)
        assert not t2.exact

    def test_exhausted_list_keeps_open_tail(self):
        s = DyadicSeries((2, 5))
        t = s.truncation(2)
        # continuation unknown: anything from nothing up to 2^-5 more
        assert t.lo == t.value
        assert t.hi == t.value + Fraction(1, 32)
        assert not t.exact
        assert t.depth == 2

    def test_deepening_without_extension_rule_raises(self):
        s = DyadicSeries((2, 5))
        with pytest.raises(InsufficientDepthError):
            s.truncation(10)
        with pytest.raises(InsufficientDepthError):
            s.materialize(3)

    def test_extension(self):
        g = geometric_dyadic(2, 8, 2)
        assert g.exponents == (2, 16)
        deeper = g.materialize(4)
        assert deeper.exponents == (2, 16, 128, 1024)
        assert g.exponents == (2, 16)  # original untouched
        assert deeper.extendable

    def test_enclosures_nest_and_shrink(self):
        g = geometric_dyadic(1, 2, 1)
        prev = g.truncation(1)
        for depth in range(2, 8):
            t = g.truncation(depth)
            assert prev.lo <= t.lo and t.hi <= prev.hi
            assert t.width < prev.width
            prev = t

    def test_trunc_cost_tracks_last_exponent(self):
        s = DyadicSeries((2, 16, 128, 1024))
        assert s.trunc_cost(2) == 17
        assert s.trunc_cost(4) == 1025
        g = geometric_dyadic(2, 8, 2)
        assert g.trunc_cost(4) == 1025

    def test_trunc_cost_is_cheap_far_beyond_the_cap(self):
        # cost doubles per level, so by level ~30 the denominator would
        # have ~2^30 bits; asking for the cost must stay instant
        g = geometric_dyadic(1, 2, 1)
        cost = g.trunc_cost(40)
        assert cost == 2**39 + 1
        assert cost > TRUNC_COST_CAP

    def test_describe_round_trip(self):
        s = DyadicSeries((2, 16, 128, 1024))
        assert parse_real(s.describe()) == s
        g = geometric_dyadic(2, 8, 6)
        assert g.describe() == "dyadic:geom(2,8,6)"
        assert parse_real(g.describe()) == g

    @given(st.lists(st.integers(min_value=1, max_value=60), min_size=1,
                    max_size=8, unique=True))
    def test_truncation_brackets_exact_value(self, exps):
        exps = sorted(exps)
        s = DyadicSeries(exps)
        v = exact_value(s)
        for depth in range(1, len(exps) + 1):
            t = s.truncation(depth)
            assert t.lo <= v <= t.hi
            assert t.value <= v


class TestPartialQuotients:
    def test_validation(self):
        with pytest.raises(RealFormatError):
            PartialQuotients(())
        with pytest.raises(RealFormatError):
            PartialQuotients((1, 0))
        PartialQuotients((-3, 1))  # negative a0 is fine

    def test_finite_cf_is_rational(self):
        r = PartialQuotients((1, 2, 2))
        assert r.known_rational
        t = r.truncation(3)
        assert t.exact
        assert t.value == 1 + Fraction(1, 2 + Fraction(1, 2))

    def test_repeating_cf_enclosure_brackets_limit(self):
        # [0; 2, 2, 2, ...] = sqrt(2) - 1
        r = parse_real("cf:0;2,...")
        assert not r.known_rational
        assert r.extendable
        target = Fraction(math.isqrt(2 * 10**60), 10**30) - 1
        for depth in range(2, 12):
            t = r.truncation(depth)
            assert t.lo <= target + Fraction(1, 10**29)
            assert target - Fraction(1, 10**29) <= t.hi

    def test_convergents_alternate_around_value(self):
        golden = parse_real("cf:1;1,...")
        vals = [golden.truncation(d).value for d in range(1, 10)]
        for a, b, c in zip(vals, vals[1:], vals[2:]):
            assert min(a, b) < c < max(a, b)

    def test_enclosures_nest(self):
        golden = parse_real("cf:1;1,...")
        prev = golden.truncation(1)
        for depth in range(2, 15):
            t = golden.truncation(depth)
            assert prev.lo <= t.lo and t.hi <= prev.hi
            prev = t

    def test_trunc_cost_bounds_denominator(self):
        golden = parse_real("cf:1;1,...")
        for depth in (5, 10, 20):
            t = golden.truncation(depth)
            assert t.value.denominator.bit_length() <= golden.trunc_cost(depth)

    def test_describe_round_trip(self):
        for spec in ("cf:3", "cf:1;2,2", "cf:0;2,...", "cf:1;1,..."):
            r = parse_real(spec)
            assert parse_real(r.describe()) == r


class TestParseReal:
    def test_rat(self):
        assert parse_real("rat:3/7").value == Fraction(3, 7)
        assert parse_real("rat:0.25").value == Fraction(1, 4)

    def test_dyadic(self):
        assert parse_real("dyadic:2,16").exponents == (2, 16)
        assert parse_real("dyadic: 2, 16").exponents == (2, 16)

    def test_cf_forms(self):
        assert parse_real("cf:1;2,3").quotients == (1, 2, 3)
        assert parse_real("cf:5").quotients == (5,)
        ell = parse_real("cf:0;2,…")
        assert ell.extendable and ell.quotients == (0, 2)

    def test_rejects(self):
        for bad in ("7/3", "foo:1", "rat:1/0", "dyadic:", "dyadic:3,2",
                    "cf:", "cf:1;0", "cf:1;...", "dyadic:geom(0,2,3)"):
            with pytest.raises(RealFormatError):
                parse_real(bad)
