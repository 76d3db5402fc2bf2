"""Continued fractions, convergents, and the reduction x = M0*x0.

Everything here is exact.  Partial quotients of a rule-described real are
extracted by running the Euclidean algorithm simultaneously on both
endpoints of a certified enclosure: a digit is emitted only while the whole
interval agrees on it, so reported digits never change when the truncation
deepens.  The reduction decompose() splits an integer x with small ||zeta*x||
into a convergent denominator x0 and a cofactor M0 = x/x0 with
||zeta*x|| = M0*||zeta*x0|| holding exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import (EnclosureError, InsufficientDepthError, PreconditionError,
                     RealFormatError)
from .numutil import int_desc
from .reals import (TRUNC_COST_CAP, DyadicSeries, ExactRational,
                    PartialQuotients, ProgrammaticReal)


@dataclass(frozen=True)
class Convergent:
    """p/q in lowest terms, the n-th convergent (n starts at 0)."""

    n: int
    p: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 1:
            raise ValueError("convergent denominator must be positive")
        if math.gcd(abs(self.p), self.q) != 1:
            raise ValueError("convergent must be in lowest terms")

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


@dataclass(frozen=True)
class Decomposition:
    """x = m0*x0 with y0/x0 reduced and ||zeta*x|| = m0*||zeta*x0||."""

    x0: int
    y0: int
    m0: int

    def __post_init__(self) -> None:
        if self.x0 < 1 or self.m0 < 1:
            raise ValueError("x0 and m0 must be positive")
        if math.gcd(self.x0, abs(self.y0)) != 1:
            raise ValueError("y0/x0 must be reduced")

    @property
    def x(self) -> int:
        return self.m0 * self.x0


def _euclid_digits(x: Fraction, limit: int) -> list[int]:
    """Canonical partial quotients of an exact rational, at most limit."""
    digits: list[int] = []
    while len(digits) < limit:
        a = x.numerator // x.denominator
        digits.append(a)
        if x == a:
            break
        x = 1 / (x - a)
    return digits


def certified_digits(lo: Fraction, hi: Fraction, limit: int) -> list[int]:
    """Partial quotients shared by every real in [lo, hi], at most limit.

    Runs the Euclidean algorithm on both endpoints at once and stops as
    soon as they disagree on a floor, or an endpoint lands exactly on an
    integer (the next digit then depends on which side the true value
    falls).  The result is a prefix of the expansion of every point of the
    interval, so deepening an enclosure can only extend it.
    """
    if lo > hi:
        raise ValueError("empty interval")
    digits: list[int] = []
    while len(digits) < limit:
        flo = lo.numerator // lo.denominator
        fhi = hi.numerator // hi.denominator
        if flo != fhi:
            break
        digits.append(flo)
        rlo = lo - flo
        rhi = hi - flo
        if rlo == 0 or rhi == 0:
            break
        lo, hi = 1 / rhi, 1 / rlo
    return digits


def cf_expand(real: ProgrammaticReal, n: int) -> tuple[int, ...]:
    """First n partial quotients of the real (fewer if its CF terminates).

    For series variants the digits come from interval agreement on a
    certified enclosure; the truncation is deepened (when the series is
    extendable) until n digits stabilize, and InsufficientDepthError is
    raised when the available terms cannot pin down that many.
    """
    if n < 1:
        raise ValueError("need n >= 1 partial quotients")
    if isinstance(real, PartialQuotients):
        if real.extend is not None:
            return real.materialize(n).quotients[:n]
        return tuple(_euclid_digits(real.truncation(real.levels()).value, n))
    if real.known_rational:
        return tuple(_euclid_digits(real.truncation(real.levels()).value, n))
    best: list[int] = []
    for depth in _probe_depths(real):
        t = real.truncation(depth)
        digits = certified_digits(t.lo, t.hi, n)
        if len(digits) >= n:
            return tuple(digits[:n])
        if len(digits) > len(best):
            best = digits
    raise InsufficientDepthError(
        f"only {len(best)} partial quotients are stable at the deepest "
        f"affordable truncation; {n} requested")


def convergents(pqs: Sequence[int]) -> tuple[Convergent, ...]:
    """Convergents p_n/q_n of a partial-quotient sequence [a0; a1, ...]."""
    qs = [int(a) for a in pqs]
    if not qs:
        raise RealFormatError("empty partial-quotient sequence")
    for a in qs[1:]:
        if a < 1:
            raise RealFormatError(f"partial quotients after a0 must be >= 1, got {a}")
    out = []
    p_prev, q_prev = 1, 0
    p, q = qs[0], 1
    out.append(Convergent(0, p, q))
    for i, a in enumerate(qs[1:], start=1):
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        out.append(Convergent(i, p, q))
    return tuple(out)


def _probe_depths(real: ProgrammaticReal, extra: int = 64) -> list[int]:
    """Doubling truncation depths, shallow first, within the cost budget.

    Starting shallow lets cheap truncations decide most questions; the
    budget drops depths whose denominator would be too large to build,
    which matters for schedules with doubling exponents.
    """
    lv = real.levels()
    steps = []
    d = 1
    while d < lv:
        steps.append(d)
        d *= 2
    steps.append(lv)
    if real.extendable:
        s = 1
        while s <= extra:
            steps.append(lv + s)
            s *= 2
    return [d for d in steps if real.trunc_cost(d) <= TRUNC_COST_CAP]


def decompose(real: ProgrammaticReal, x: int) -> Decomposition:
    """Split x into m0*x0 with y0/x0 the reduced nearest fraction.

    Requires ||zeta*x|| < 1/(2x), certified against the enclosure;
    PreconditionError when the inequality certifiably fails,
    EnclosureError when the available truncations cannot decide it.
    """
    if x < 1:
        raise PreconditionError("x must be a positive integer")
    half = Fraction(1, 2)
    thr = Fraction(1, 2 * x)
    for depth in _probe_depths(real):
        t = real.truncation(depth)
        xlo, xhi = x * t.lo, x * t.hi
        y_lo = (xlo + half).numerator // (xlo + half).denominator
        y_hi = (xhi + half).numerator // (xhi + half).denominator
        if y_lo != y_hi:
            if t.exact:
                # exact tie at a half-integer: distance is exactly 1/2
                raise PreconditionError(
                    f"||zeta*x|| = 1/2 is not below 1/(2x) for x = {int_desc(x)}")
            continue  # enclosure straddles a rounding boundary: deepen
        y = y_lo
        s_lo, s_hi = xlo - y, xhi - y
        if s_lo <= 0 <= s_hi:
            d_min = Fraction(0)
        else:
            d_min = min(abs(s_lo), abs(s_hi))
        d_max = max(abs(s_lo), abs(s_hi))
        if d_max < thr:
            g = math.gcd(x, abs(y))
            return Decomposition(x // g, y // g, g)
        if d_min >= thr:
            raise PreconditionError(
                f"||zeta*x|| is certifiably not below 1/(2x) for x = {int_desc(x)}")
        if t.exact:  # exact value sitting on the threshold
            raise PreconditionError(
                f"||zeta*x|| is not strictly below 1/(2x) for x = {int_desc(x)}")
    raise EnclosureError(
        f"cannot certify ||zeta*x|| against 1/(2x) for x = {int_desc(x)} "
        "at any available depth")


@dataclass(frozen=True)
class Lambda1Estimate:
    """Growth-exponent estimate at the deepest level plus its trace.

    estimate is an exact Fraction for dyadic schedules (ratio formula
    b_{n+1}/b_n - 1 at the last pair), a float for continued-fraction
    growth ratios, and None when the real is rational (exponent
    infinite).  trace holds every (level, ratio) pair, so callers can
    see the approach toward the limit; the estimate itself uses only
    the deepest pair, which converges as depth grows.
    """

    estimate: Optional[Union[Fraction, float]]
    rational: bool
    trace: tuple


def lambda1_estimate(real: ProgrammaticReal, depth: int) -> Lambda1Estimate:
    if depth < 2:
        raise InsufficientDepthError("lambda1 estimation needs depth >= 2")
    if real.known_rational:
        trace: tuple = ()
        if isinstance(real, (ExactRational, PartialQuotients)):
            digits = cf_expand(real, depth + 1)
            cs = convergents(digits)
            trace = tuple(
                (c.n, math.log(cn.q) / math.log(c.q))
                for c, cn in zip(cs, cs[1:]) if c.q >= 2)
        return Lambda1Estimate(None, True, trace)
    if isinstance(real, DyadicSeries):
        have = real.materialize(depth + 1) if real.extendable else real
        exps = have.exponents[: depth + 1]
        if len(exps) < 2:
            raise InsufficientDepthError("need at least two schedule terms")
        trace = tuple(
            (i, Fraction(b_next, b) - 1)
            for i, (b, b_next) in enumerate(zip(exps, exps[1:])))
        # deepest ratio: early levels carry start-up noise, the tail is
        # what the growth exponent measures
        return Lambda1Estimate(trace[-1][1], False, trace)
    # irrational continued fraction: growth of convergent denominators
    digits = cf_expand(real, depth + 1)
    cs = convergents(digits)
    trace = tuple(
        (c.n, math.log(cn.q) / math.log(c.q))
        for c, cn in zip(cs, cs[1:]) if c.q >= 2)
    if not trace:
        raise InsufficientDepthError("no usable denominator ratios at this depth")
    return Lambda1Estimate(trace[-1][1], False, trace)


def dist_to_int(a: int, b: int, q: int) -> Fraction:
    """||q * a/b|| computed exactly as min(s, b-s)/b with s = q*a mod b."""
    if b <= 0:
        raise PreconditionError("denominator b must be positive")
    if q <= 0:
        raise PreconditionError("q must be positive")
    s = (q * a) % b
    return Fraction(min(s, b - s), b)
