"""Univariate polynomials with exact rational coefficients.

Coefficients are stored constant-first with trailing zeros stripped, so the
zero polynomial has an empty coefficient tuple and degree -1.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import CurveFormatError
from .numutil import format_fraction, parse_fraction

_TERM_RE = re.compile(
    r"""^\s*
    (?P<sign>[+-])?\s*
    (?P<coef>\(?\s*\d+\s*(?:/\s*\d+)?\s*\)?)?   # optional unsigned rational
    (?P<star>\s*\*\s*)?
    (?P<var>X)?
    (?:\^(?P<pow>\d+))?
    \s*$""",
    re.VERBOSE,
)


def _strip(coeffs: Iterable[Fraction]) -> tuple[Fraction, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class RatPoly:
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(Fraction(c) for c in self.coeffs))

    @classmethod
    def zero(cls) -> "RatPoly":
        return cls(())

    @classmethod
    def const(cls, c) -> "RatPoly":
        return cls((Fraction(c),))

    @classmethod
    def x(cls) -> "RatPoly":
        return cls((Fraction(0), Fraction(1)))

    @classmethod
    def monomial(cls, power: int, coeff=1) -> "RatPoly":
        if power < 0:
            raise ValueError("power must be non-negative")
        return cls((Fraction(0),) * power + (Fraction(coeff),))

    @property
    def degree(self) -> int:
        """Degree; -1 marks the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __add__(self, other: "RatPoly") -> "RatPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return RatPoly(tuple(self.coeff(i) + other.coeff(i) for i in range(n)))

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return RatPoly(tuple(self.coeff(i) - other.coeff(i) for i in range(n)))

    def __neg__(self) -> "RatPoly":
        return RatPoly(tuple(-c for c in self.coeffs))

    def scale(self, c) -> "RatPoly":
        c = Fraction(c)
        return RatPoly(tuple(c * a for a in self.coeffs))

    def derivative(self) -> "RatPoly":
        return RatPoly(tuple(i * self.coeffs[i] for i in range(1, len(self.coeffs))))

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def without_constant(self) -> "RatPoly":
        if not self.coeffs:
            return self
        return RatPoly((Fraction(0),) + self.coeffs[1:])

    def denominator_lcm(self) -> int:
        """Least common multiple of the reduced coefficient denominators."""
        out = 1
        for c in self.coeffs:
            out = math.lcm(out, c.denominator)
        return out

    def content(self) -> int:
        """gcd of the numerators of an integer-coefficient polynomial."""
        if any(c.denominator != 1 for c in self.coeffs):
            raise ValueError("content is defined for integer coefficients")
        return math.gcd(*(abs(c.numerator) for c in self.coeffs)) if self.coeffs else 0

    def eval_cleared(self, num: int, den: int) -> tuple[int, int]:
        """Evaluate at num/den, returning an unreduced (numerator, denominator).

        Pure integer Horner; avoids Fraction gcd work on the huge operands the
        search kernels feed in.  The denominator is L * den**degree with L the
        coefficient-denominator lcm.
        """
        if den <= 0:
            raise ValueError("den must be positive")
        if self.is_zero:
            return 0, 1
        lcm = self.denominator_lcm()
        ints = [c.numerator * (lcm // c.denominator) for c in self.coeffs]
        acc = ints[-1]
        power = 1
        for c in reversed(ints[:-1]):
            power *= den
            acc = acc * num + c * power
        return acc, lcm * den ** self.degree

    def abs_coeff_sum_at(self, radius: Fraction) -> Fraction:
        """sum |c_i| * radius**i, an upper bound for |P| on [-radius, radius]."""
        acc = Fraction(0)
        power = Fraction(1)
        for c in self.coeffs:
            acc += abs(c) * power
            power *= radius
        return acc


X = RatPoly.x()


def parse_poly(text: str) -> RatPoly:
    """Parse sparse text form like '1/3 + 5*X^2 - 11/2*X + X^3'."""
    s = text.strip()
    if not s:
        raise CurveFormatError("empty polynomial line")
    # split into signed terms at top level
    terms: list[str] = []
    buf = ""
    for i, ch in enumerate(s):
        if ch in "+-" and buf.strip() and buf.rstrip()[-1] not in "+-*/^(":
            terms.append(buf)
            buf = ch
        else:
            buf += ch
    terms.append(buf)

    coeffs: dict[int, Fraction] = {}
    for term in terms:
        t = term.strip()
        if not t:
            raise CurveFormatError(f"dangling sign in {text!r}")
        m = _TERM_RE.match(t)
        if not m or (m.group("coef") is None and m.group("var") is None):
            raise CurveFormatError(f"cannot parse term {t!r} in {text!r}")
        sign = -1 if m.group("sign") == "-" else 1
        coef_tok = m.group("coef")
        if coef_tok is None:
            coef = Fraction(sign)
        else:
            coef = sign * parse_fraction(coef_tok.replace(" ", ""))
        if m.group("star") and not m.group("var"):
            raise CurveFormatError(f"dangling '*' in term {t!r}")
        if m.group("var"):
            power = int(m.group("pow")) if m.group("pow") else 1
        else:
            if m.group("pow"):
                raise CurveFormatError(f"power without X in term {t!r}")
            power = 0
        coeffs[power] = coeffs.get(power, Fraction(0)) + coef
    size = max(coeffs) + 1 if coeffs else 0
    return RatPoly(tuple(coeffs.get(i, Fraction(0)) for i in range(size)))


def format_poly(p: RatPoly) -> str:
    """Sparse text form, parseable back by parse_poly."""
    if p.is_zero:
        return "0"
    parts: list[str] = []
    for i, c in enumerate(p.coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = format_fraction(mag)
        elif mag == 1:
            body = "X" if i == 1 else f"X^{i}"
        else:
            body = f"{format_fraction(mag)}*X" + ("" if i == 1 else f"^{i}")
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)
