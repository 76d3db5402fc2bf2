"""Reals given by rule rather than by value.

A programmatic real is a recipe that can produce, for any requested depth,
an exact rational truncation together with a certified closed interval
containing the true value.  Three concrete recipes are supported: exact
rationals, lacunary dyadic series sum(2^-b_i) with strictly increasing
exponents, and continued fractions given by their partial quotients.  The
dyadic and continued-fraction recipes may carry an extension rule that
produces further terms on demand, so a finite description can stand for an
infinite object.

String syntax accepted by parse_real:

    rat:3/7
    dyadic:2,16,128,1024
    dyadic:geom(2,8,6)          first exponent 2, ratio 8, 6 terms, extendable
    cf:1;2,2,2
    cf:0;2,2,...                trailing ellipsis repeats the last quotient
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import InsufficientDepthError, RealFormatError

# Given the terms so far, produce the next one.
Extender = Callable[[tuple[int, ...]], int]


@dataclass(frozen=True)
class Truncation:
    """Exact finite approximation plus a certified enclosure.

    value is the truncated sum or convergent; [lo, hi] is a closed interval
    guaranteed to contain the untruncated real.  When exact is set the real
    is known to equal value and lo == hi == value.
    """

    value: Fraction
    lo: Fraction
    hi: Fraction
    depth: int
    exact: bool = False

    def __post_init__(self) -> None:
        # value need not lie inside [lo, hi]: for a series with a strictly
        # positive tail the enclosure sits wholly above the truncated sum
        if self.lo > self.hi:
            raise ValueError("empty enclosure")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def tail_radius(self) -> Fraction:
        """Max distance from value to a point of the enclosure."""
        return max(self.hi - self.value, self.value - self.lo)


# Largest truncation denominator, in bits, that consumers should build
# while refining an enclosure.  Schedules with doubling exponents make
# the denominator doubly exponential in the depth, so depth-based caps
# alone do not keep refinement affordable; deepening loops consult
# trunc_cost against this budget before materializing anything.
TRUNC_COST_CAP = 1 << 24


class ProgrammaticReal:
    """Common interface of the rule-described reals."""

    kind: str = "abstract"

    def truncation(self, depth: int) -> Truncation:
        """Exact truncation at the given depth with a certified enclosure."""
        raise NotImplementedError

    def trunc_cost(self, depth: int) -> int:
        """Upper bound in bits of the truncation denominator at this depth.

        Must be cheap: computed from the term rules alone, never by
        building the truncation itself.
        """
        raise NotImplementedError

    def levels(self) -> int:
        """Number of terms available without invoking the extension rule."""
        raise NotImplementedError

    @property
    def extendable(self) -> bool:
        return False

    @property
    def known_rational(self) -> bool:
        return False

    def materialize(self, depth: int) -> "ProgrammaticReal":
        """A copy holding at least depth explicit terms."""
        raise NotImplementedError

    def describe(self) -> str:
        """Round-trippable spec string (parse_real inverse)."""
        raise NotImplementedError

    def __repr__(self) -> str:  # pragma: no cover
        return f"<{type(self).__name__} {self.describe()}>"


class ExactRational(ProgrammaticReal):
    """A plain rational; every truncation is exact."""

    kind = "rational"

    def __init__(self, value: Fraction):
        self.value = Fraction(value)

    def truncation(self, depth: int) -> Truncation:
        return Truncation(self.value, self.value, self.value, depth, exact=True)

    def trunc_cost(self, depth: int) -> int:
        return self.value.denominator.bit_length()

    def levels(self) -> int:
        return 1

    @property
    def known_rational(self) -> bool:
        return True

    def materialize(self, depth: int) -> "ExactRational":
        return self

    def describe(self) -> str:
        return f"rat:{self.value.numerator}/{self.value.denominator}"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExactRational) and self.value == other.value

    def __hash__(self) -> int:
        return hash(("ExactRational", self.value))


class DyadicSeries(ProgrammaticReal):
    """sum of 2^-b_i over strictly increasing integer exponents b_i >= 1.

    An optional extender maps the exponent tuple seen so far to the next
    exponent; materialize uses it to pin down more explicit terms.  Without
    an extender the series is treated as possibly continuing with unknown
    exponents beyond the last one, so the tail enclosure after exhausting
    the list is [0, 2^-b_last] rather than a point.
    """

    kind = "dyadic"

    def __init__(self, exponents: Sequence[int],
                 extend: Optional[Extender] = None,
                 label: Optional[str] = None):
        exps = tuple(int(b) for b in exponents)
        if not exps:
            raise RealFormatError("dyadic series needs at least one exponent")
        if exps[0] < 1:
            raise RealFormatError("dyadic exponents must be >= 1")
        for a, b in zip(exps, exps[1:]):
            if b <= a:
                raise RealFormatError(
                    f"dyadic exponents must be strictly increasing, got {a} then {b}")
        self.exponents = exps
        self.extend = extend
        self._label = label

    def levels(self) -> int:
        return len(self.exponents)

    @property
    def extendable(self) -> bool:
        return self.extend is not None

    def materialize(self, depth: int) -> "DyadicSeries":
        if depth <= len(self.exponents):
            return self
        if self.extend is None:
            raise InsufficientDepthError(
                f"series has {len(self.exponents)} terms and no extension rule; "
                f"{depth} requested")
        exps = list(self.exponents)
        while len(exps) < depth:
            nxt = int(self.extend(tuple(exps)))
            if nxt <= exps[-1]:
                raise RealFormatError(
                    f"extension rule produced non-increasing exponent {nxt}")
            exps.append(nxt)
        return DyadicSeries(exps, self.extend, self._label)

    def trunc_cost(self, depth: int) -> int:
        # exponent values are cheap to extend; only 2**-b is expensive
        if depth > len(self.exponents) and self.extend is not None:
            have = self.materialize(depth)
        else:
            have = self
        idx = min(depth, len(have.exponents)) - 1
        return have.exponents[idx] + 1

    def _peek_next(self, exps: tuple[int, ...]) -> Optional[int]:
        """Next exponent after exps, from the list or the extender."""
        n = len(exps)
        if n < len(self.exponents):
            return self.exponents[n]
        if self.extend is not None:
            return int(self.extend(exps))
        return None

    def truncation(self, depth: int) -> Truncation:
        if depth < 1:
            raise ValueError("depth must be >= 1")
        have = self.materialize(depth) if depth > len(self.exponents) else self
        exps = have.exponents[:depth]
        used = len(exps)
        value = Fraction(
            sum(1 << (exps[-1] - b) for b in exps), 1 << exps[-1])
        nxt = have._peek_next(exps)
        if nxt is not None:
            # tail = 2^-nxt + smaller distinct powers < 2 * 2^-nxt
            lo = value + Fraction(1, 1 << nxt)
            hi = value + Fraction(2, 1 << nxt)
            return Truncation(value, lo, hi, used)
        # list exhausted, continuation unknown: tail in [0, 2^-b_last]
        hi = value + Fraction(1, 1 << exps[-1])
        return Truncation(value, value, hi, used)

    def describe(self) -> str:
        if self._label is not None:
            return self._label
        return "dyadic:" + ",".join(str(b) for b in self.exponents)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, DyadicSeries)
                and self.exponents == other.exponents
                and self.extend == other.extend)

    def __hash__(self) -> int:
        return hash(("DyadicSeries", self.exponents, self.extend))


class PartialQuotients(ProgrammaticReal):
    """A real given by continued fraction digits [a0; a1, a2, ...].

    a0 may be any integer, later quotients must be >= 1.  The enclosure at
    depth d is the closed interval between the convergent p_d/q_d and the
    mediant (p_d + p_{d-1})/(q_d + q_{d-1}), which brackets every possible
    continuation; successive enclosures are nested.
    """

    kind = "cf"

    def __init__(self, quotients: Sequence[int],
                 extend: Optional[Extender] = None):
        qs = tuple(int(a) for a in quotients)
        if not qs:
            raise RealFormatError("continued fraction needs at least a0")
        for a in qs[1:]:
            if a < 1:
                raise RealFormatError(
                    f"partial quotients after a0 must be >= 1, got {a}")
        self.quotients = qs
        self.extend = extend

    def levels(self) -> int:
        return len(self.quotients)

    @property
    def extendable(self) -> bool:
        return self.extend is not None

    @property
    def known_rational(self) -> bool:
        return self.extend is None

    def materialize(self, depth: int) -> "PartialQuotients":
        if depth <= len(self.quotients):
            return self
        if self.extend is None:
            raise InsufficientDepthError(
                f"continued fraction has {len(self.quotients)} quotients and "
                f"no extension rule; {depth} requested")
        qs = list(self.quotients)
        while len(qs) < depth:
            nxt = int(self.extend(tuple(qs)))
            if nxt < 1:
                raise RealFormatError(
                    f"extension rule produced invalid quotient {nxt}")
            qs.append(nxt)
        return PartialQuotients(qs, self.extend)

    def trunc_cost(self, depth: int) -> int:
        # q_n <= prod (a_i + 1), so bit lengths of the quotients bound it
        if depth > len(self.quotients) and self.extend is not None:
            have = self.materialize(depth)
        else:
            have = self
        used = min(depth, len(have.quotients))
        return sum((a + 1).bit_length() for a in have.quotients[:used]) + used

    def _convergent_pair(self, depth: int) -> tuple[int, int, int, int]:
        """(p_prev, q_prev, p, q) after consuming depth quotients."""
        p_prev, q_prev = 1, 0
        p, q = self.quotients[0], 1
        for a in self.quotients[1:depth]:
            p, p_prev = a * p + p_prev, p
            q, q_prev = a * q + q_prev, q
        return p_prev, q_prev, p, q

    def truncation(self, depth: int) -> Truncation:
        if depth < 1:
            raise ValueError("depth must be >= 1")
        have = self.materialize(depth) if depth > len(self.quotients) else self
        used = min(depth, len(have.quotients))
        p_prev, q_prev, p, q = have._convergent_pair(used)
        value = Fraction(p, q)
        if used == len(have.quotients) and have.extend is None:
            return Truncation(value, value, value, used, exact=True)
        # any continuation lies between p/q and the mediant with the
        # previous convergent, endpoints included
        mediant = Fraction(p + p_prev, q + q_prev)
        lo, hi = (value, mediant) if value <= mediant else (mediant, value)
        return Truncation(value, lo, hi, used)

    def describe(self) -> str:
        head = str(self.quotients[0])
        rest = ",".join(str(a) for a in self.quotients[1:])
        tail = ",..." if self.extend is not None else ""
        if rest or tail:
            return f"cf:{head};{rest}{tail}" if rest else f"cf:{head};{self.quotients[-1]}{tail}"
        return f"cf:{head}"

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, PartialQuotients)
                and self.quotients == other.quotients
                and self.extend == other.extend)

    def __hash__(self) -> int:
        return hash(("PartialQuotients", self.quotients, self.extend))


def _repeat_last(terms: tuple[int, ...]) -> int:
    return terms[-1]


@dataclass(frozen=True)
class _GeometricNext:
    # plain functions and partials compare by identity; a frozen dataclass
    # keeps parse_real(describe()) == original
    ratio: int

    def __call__(self, terms: tuple[int, ...]) -> int:
        return terms[-1] * self.ratio


def geometric_dyadic(first: int, ratio: int, count: int) -> DyadicSeries:
    """Dyadic series with exponents first * ratio^i, extendable forever."""
    if first < 1:
        raise RealFormatError("geometric series needs first exponent >= 1")
    if ratio < 2:
        raise RealFormatError("geometric exponent ratio must be >= 2")
    if count < 1:
        raise RealFormatError("geometric series needs at least one term")
    exps = [first]
    while len(exps) < count:
        exps.append(exps[-1] * ratio)
    label = f"dyadic:geom({first},{ratio},{count})"
    return DyadicSeries(exps, _GeometricNext(ratio), label)


_GEOM_RE = re.compile(r"^geom\((\d+),(\d+),(\d+)\)$")


def parse_real(spec: str) -> ProgrammaticReal:
    """Parse a real spec string; see the module docstring for the syntax."""
    spec = spec.strip()
    if ":" not in spec:
        raise RealFormatError(
            f"real spec needs a kind prefix 'rat:', 'dyadic:' or 'cf:': {spec!r}")
    kind, _, body = spec.partition(":")
    body = body.strip()
    if kind == "rat":
        try:
            value = Fraction(body)
        except (ValueError, ZeroDivisionError) as exc:
            raise RealFormatError(f"bad rational {body!r}: {exc}") from None
        return ExactRational(value)
    if kind == "dyadic":
        m = _GEOM_RE.match(body.replace(" ", ""))
        if m:
            first, ratio, count = (int(g) for g in m.groups())
            return geometric_dyadic(first, ratio, count)
        try:
            exps = [int(p) for p in body.split(",") if p.strip() != ""]
        except ValueError as exc:
            raise RealFormatError(f"bad dyadic exponent list {body!r}: {exc}") from None
        if not exps:
            raise RealFormatError("dyadic spec has no exponents")
        return DyadicSeries(exps)
    if kind == "cf":
        repeat = False
        if ";" in body:
            head, _, rest = body.partition(";")
            rest = rest.strip()
            for suffix in ("...", "…"):
                if rest.endswith(suffix):
                    repeat = True
                    rest = rest[: -len(suffix)].rstrip().rstrip(",")
                    break
            parts = [head] + [p for p in rest.split(",") if p.strip() != ""]
        else:
            parts = [body]
        try:
            qs = [int(p) for p in parts]
        except ValueError as exc:
            raise RealFormatError(f"bad continued fraction {body!r}: {exc}") from None
        if repeat and len(qs) < 2:
            raise RealFormatError("repeating continued fraction needs a quotient to repeat")
        return PartialQuotients(qs, _repeat_last if repeat else None)
    raise RealFormatError(f"unknown real kind {kind!r}")
