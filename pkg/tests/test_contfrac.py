"""Continued-fraction kernels tested against direct Fraction arithmetic."""

from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from diocurve.contfrac import (Convergent, Decomposition, certified_digits,
                               cf_expand, convergents, decompose, dist_to_int,
                               lambda1_estimate)
from diocurve.errors import (EnclosureError, InsufficientDepthError,
                             PreconditionError)
from diocurve.numutil import nearest_int
from diocurve.reals import DyadicSeries, ExactRational, parse_real
from tests.conftest import exact_value


def euclid_cf(x: Fraction) -> list[int]:
    """Floor-based continued fraction of a rational, the classic algorithm."""
    out = []
    while True:
        fl = x.numerator // x.denominator
        out.append(fl)
        frac = x - fl
        if frac == 0:
            return out
        x = 1 / frac


rational_st = st.fractions(min_value=Fraction(-20), max_value=Fraction(20),
                           max_denominator=500)


class TestDistToInt:
    def test_known(self):
        assert dist_to_int(7, 3, 1) == Fraction(1, 3)
        assert dist_to_int(7, 3, 3) == 0
        assert dist_to_int(1, 2, 5) == Fraction(1, 2)
        assert dist_to_int(-1, 3, 1) == Fraction(1, 3)

    def test_rejects(self):
        with pytest.raises(PreconditionError):
            dist_to_int(1, 0, 1)
        with pytest.raises(PreconditionError):
            dist_to_int(1, 2, 0)

    @given(st.integers(min_value=-10**6, max_value=10**6),
           st.integers(min_value=1, max_value=10**4),
           st.integers(min_value=1, max_value=10**6))
    def test_matches_fraction_distance(self, a, b, q):
        x = Fraction(q * a, b)
        expect = abs(x - nearest_int(x))
        assert dist_to_int(a, b, q) == expect


class TestConvergents:
    def test_fibonacci(self):
        cs = convergents([1, 1, 1, 1, 1])
        assert cs == (Convergent(0, 1, 1), Convergent(1, 2, 1),
                      Convergent(2, 3, 2), Convergent(3, 5, 3),
                      Convergent(4, 8, 5))

    @given(st.lists(st.integers(min_value=1, max_value=30), min_size=1,
                    max_size=10))
    def test_last_convergent_is_the_exact_value(self, quotients):
        # fold the fraction bottom-up with exact arithmetic
        acc = Fraction(quotients[-1])
        for a in reversed(quotients[:-1]):
            acc = a + 1 / acc
        last = convergents(quotients)[-1]
        assert Fraction(last.p, last.q) == acc

    @given(st.lists(st.integers(min_value=1, max_value=30), min_size=2,
                    max_size=10))
    def test_determinant_identity(self, quotients):
        cs = convergents(quotients)
        for a, b in zip(cs, cs[1:]):
            assert b.p * a.q - a.p * b.q in (1, -1)
            assert b.q >= a.q


class TestCfExpand:
    def test_rational_matches_euclid(self):
        assert cf_expand(ExactRational(Fraction(7, 3)), 8) == (2, 3)
        assert cf_expand(ExactRational(Fraction(355, 113)), 8) == (3, 7, 16)
        assert cf_expand(ExactRational(Fraction(-7, 3)), 8) == (-3, 1, 2)

    def test_rational_prefix(self):
        assert cf_expand(ExactRational(Fraction(355, 113)), 2) == (3, 7)

    @given(rational_st)
    def test_rational_oracle(self, x):
        assert list(cf_expand(ExactRational(x), 30)) == euclid_cf(x)

    def test_periodic_cf_source(self):
        golden = parse_real("cf:1;1,...")
        assert cf_expand(golden, 8) == (1,) * 8

    def test_dyadic_series_digits_match_truncated_value(self):
        dy = parse_real("dyadic:2,16,128,1024")
        digits = cf_expand(dy, 6)
        assert list(digits) == euclid_cf(exact_value(dy))[:6]
        assert digits[:4] == (0, 3, 1, 4095)

    def test_budget_exhaustion_is_reported(self):
        dy = parse_real("dyadic:2,16,128,1024")
        with pytest.raises(InsufficientDepthError):
            cf_expand(dy, 50)

    @given(st.lists(st.integers(min_value=1, max_value=40), min_size=2,
                    max_size=6, unique=True), st.integers(min_value=1, max_value=5))
    def test_dyadic_oracle(self, exps, n):
        series = DyadicSeries(sorted(exps))
        try:
            digits = cf_expand(series, n)
        except InsufficientDepthError:
            assume(False)
        assert list(digits) == euclid_cf(exact_value(series))[:n]


class TestCertifiedDigits:
    def test_anchors(self):
        v = Fraction(355, 113)
        assert certified_digits(v, v, 10) == [3, 7, 16]
        assert certified_digits(v, v, 2) == [3, 7]
        assert certified_digits(Fraction(1), Fraction(2), 10) == []
        near = certified_digits(v - Fraction(1, 10**8), v + Fraction(1, 10**8), 10)
        assert near[:2] == [3, 7]

    @given(rational_st, rational_st, st.integers(min_value=1, max_value=12))
    def test_digits_hold_for_the_whole_interval(self, a, b, limit):
        lo, hi = min(a, b), max(a, b)
        digits = certified_digits(lo, hi, limit)
        assert len(digits) <= limit
        if not digits:
            return
        # rebuild the cylinder of reals starting with these digits; the
        # input interval must sit inside its closure
        cs = convergents(digits)
        last = Fraction(cs[-1].p, cs[-1].q)
        if len(cs) == 1:
            left, right = last, last + 1
        else:
            med = Fraction(cs[-1].p + cs[-2].p, cs[-1].q + cs[-2].q)
            left, right = min(last, med), max(last, med)
        assert left <= lo and hi <= right


class TestDecompose:
    def test_quadratic_surd_denominators(self):
        sq = parse_real("cf:0;2,...")
        assert decompose(sq, 29) == Decomposition(29, 12, 1)
        passed = []
        for x in range(1, 71):
            try:
                decompose(sq, x)
                passed.append(x)
            except PreconditionError:
                pass
        assert passed == [1, 2, 5, 12, 29, 70]

    def test_golden_denominators_are_fibonacci(self):
        golden = parse_real("cf:1;1,...")
        assert decompose(golden, 8) == Decomposition(8, 13, 1)
        passed = []
        for x in range(1, 90):
            try:
                decompose(golden, x)
                passed.append(x)
            except PreconditionError:
                pass
        assert passed == [1, 2, 3, 5, 8, 13, 21, 34, 55, 89]

    def test_composite_multiplier(self):
        dy = parse_real("dyadic:2,16,128,1024")
        d = decompose(dy, 2**18)
        assert d == Decomposition(2**16, 2**14 + 1, 4)

    def test_rational_zeta(self):
        assert decompose(ExactRational(Fraction(1, 3)), 6) == Decomposition(3, 1, 2)

    def test_rejects_bad_x(self):
        with pytest.raises(PreconditionError):
            decompose(ExactRational(Fraction(1, 3)), 0)

    def test_threshold_failure(self):
        sq = parse_real("cf:0;2,...")
        with pytest.raises(PreconditionError):
            decompose(sq, 3)

    def test_undecidable_enclosure(self):
        # open tail [v, v + 1/32] straddles the threshold at x = 7 and the
        # series has no extension rule to refine it
        series = DyadicSeries((2, 5))
        with pytest.raises(EnclosureError):
            decompose(series, 7)

    @given(st.fractions(min_value=Fraction(-3), max_value=Fraction(3),
                        max_denominator=400),
           st.integers(min_value=1, max_value=5000))
    def test_rational_oracle(self, zeta, x):
        prod = zeta * x
        y = nearest_int(prod)
        err = abs(prod - y)
        thr = Fraction(1, 2 * x)
        if err < thr:
            import math
            g = math.gcd(x, abs(y))
            assert decompose(ExactRational(zeta), x) == Decomposition(
                x // g, y // g, g)
        else:
            with pytest.raises(PreconditionError):
                decompose(ExactRational(zeta), x)

    @given(st.lists(st.integers(min_value=1, max_value=9), min_size=3,
                    max_size=10).map(lambda qs: [0] + qs),
           st.integers(min_value=2, max_value=6))
    def test_multiplier_identity_on_cf_convergents(self, quotients, idx):
        real = parse_real("cf:" + str(quotients[0]) + ";" +
                          ",".join(str(a) for a in quotients[1:]) + ",...")
        cs = convergents(cf_expand(real, len(quotients) + 6))
        q = cs[min(idx, len(cs) - 2)].q
        assume(q >= 2)
        try:
            d = decompose(real, q)
        except PreconditionError:
            # only one of two consecutive convergents must clear the
            # strict 1/(2q) threshold, so rejection here is legitimate
            return
        # convergent denominators are already reduced best approximants
        assert d.m0 == 1
        assert d.x0 == q


class TestLambda1Estimate:
    def test_ratio_schedule_is_exact(self):
        dy = parse_real("dyadic:2,16,128,1024")
        est = lambda1_estimate(dy, 4)
        assert est.estimate == Fraction(7)
        assert not est.rational
        assert est.trace == ((0, Fraction(7)), (1, Fraction(7)),
                             (2, Fraction(7)))

    def test_depth_beyond_explicit_terms_is_capped(self):
        dy = parse_real("dyadic:2,16,128,1024")
        assert lambda1_estimate(dy, 9).estimate == Fraction(7)

    def test_doubling_schedule(self):
        doubling = parse_real("dyadic:geom(1,2,4)")
        assert lambda1_estimate(doubling, 12).estimate == Fraction(1)

    def test_golden_ratio_descends_toward_one(self):
        golden = parse_real("cf:1;1,...")
        e10 = lambda1_estimate(golden, 10).estimate
        e20 = lambda1_estimate(golden, 20).estimate
        e30 = lambda1_estimate(golden, 30).estimate
        assert e10 == pytest.approx(1.1201056069590947)
        assert e10 > e20 > e30 > 1
        assert e20 < 1.06

    def test_bounded_quotients_stay_near_one(self):
        sq = parse_real("cf:0;2,...")
        est = lambda1_estimate(sq, 20).estimate
        assert 1 < est < 1.1

    def test_rational_has_no_exponent(self):
        est = lambda1_estimate(ExactRational(Fraction(3, 7)), 5)
        assert est.estimate is None
        assert est.rational
        assert len(est.trace) == 1

    def test_depth_floor(self):
        with pytest.raises(InsufficientDepthError):
            lambda1_estimate(parse_real("cf:1;1,..."), 1)
