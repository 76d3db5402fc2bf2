"""Small exact-arithmetic helpers used throughout the package."""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import CurveFormatError


def flog2(n: int) -> float:
    """log2 of a positive integer, safe for values far beyond float range."""
    if n <= 0:
        raise ValueError("flog2 needs a positive integer")
    bl = n.bit_length()
    if bl <= 500:
        return math.log2(n)
    shift = bl - 53
    return shift + math.log2(n >> shift)


def flog2_fraction(x: Fraction) -> float:
    """log2 of a positive rational, via numerator/denominator bit lengths."""
    if x <= 0:
        raise ValueError("flog2_fraction needs a positive rational")
    return flog2(x.numerator) - flog2(x.denominator)


def padic_valuation(n: int, p: int) -> int:
    """Exponent of the prime p in n (n != 0)."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    if p < 2:
        raise ValueError("p must be at least 2")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def nearest_int(x: Fraction) -> int:
    """Closest integer to x, ties rounded to the even integer."""
    fl = x.numerator // x.denominator
    frac2 = 2 * (x - fl)  # in [0, 2)
    if frac2 < 1:
        return fl
    if frac2 > 1:
        return fl + 1
    return fl if fl % 2 == 0 else fl + 1


def ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def floor_fraction(x: Fraction) -> int:
    return x.numerator // x.denominator


def parse_fraction(tok: str) -> Fraction:
    """Parse 'p/q' or 'p' (optionally signed, optionally parenthesised)."""
    s = tok.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1].strip()
    if not s:
        raise CurveFormatError("empty rational literal")
    try:
        if "/" in s:
            num, den = s.split("/", 1)
            return Fraction(int(num.strip()), int(den.strip()))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise CurveFormatError(f"bad rational literal {tok!r}") from exc


def format_fraction(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def pow_check_le(base: Fraction, expo_num: int, expo_den: int, bound: Fraction) -> bool:
    """Exact test  base <= bound**(expo_num/expo_den)  for base, bound > 0.

    Used for rational-exponent thresholds: both sides are raised to the
    exponent's denominator so only integer powering is involved.
    """
    if base <= 0 or bound <= 0:
        raise ValueError("pow_check_le needs positive operands")
    if expo_den <= 0:
        raise ValueError("exponent denominator must be positive")
    # base**expo_den <= bound**expo_num
    lhs_n = base.numerator ** expo_den
    lhs_d = base.denominator ** expo_den
    if expo_num >= 0:
        rhs_n = bound.numerator ** expo_num
        rhs_d = bound.denominator ** expo_num
    else:
        rhs_n = bound.denominator ** (-expo_num)
        rhs_d = bound.numerator ** (-expo_num)
    return lhs_n * rhs_d <= rhs_n * lhs_d


def pow_check_lt(base: Fraction, expo_num: int, expo_den: int, bound: Fraction) -> bool:
    """Strict companion of pow_check_le:  base < bound**(expo_num/expo_den)."""
    if base <= 0 or bound <= 0:
        raise ValueError("pow_check_lt needs positive operands")
    if expo_den <= 0:
        raise ValueError("exponent denominator must be positive")
    lhs_n = base.numerator ** expo_den
    lhs_d = base.denominator ** expo_den
    if expo_num >= 0:
        rhs_n = bound.numerator ** expo_num
        rhs_d = bound.denominator ** expo_num
    else:
        rhs_n = bound.denominator ** (-expo_num)
        rhs_d = bound.numerator ** (-expo_num)
    return lhs_n * rhs_d < rhs_n * lhs_d


def int_desc(n: int) -> str:
    """Integer rendered for an error message, size-capped.

    Structural denominators can run to millions of bits; interpolating
    them verbatim would blow the interpreter's digit limit for str().
    """
    if abs(n) < 10 ** 40:
        return str(n)
    return f"~2^{abs(n).bit_length() - 1}"


def sqrt2_minus1_bit_positions(nbits: int) -> list[int]:
    """Positions n with a 1-bit in the binary expansion of sqrt(2)-1.

    Position n means the digit of weight 2**-n; computed exactly with isqrt.
    Deterministic seed material for constructions that need a badly
    approximable head.
    """
    if nbits < 1:
        raise ValueError("nbits must be positive")
    scaled = math.isqrt(2 << (2 * nbits)) - (1 << nbits)  # floor((sqrt2-1)*2^n)
    out = []
    for pos in range(1, nbits + 1):
        if (scaled >> (nbits - pos)) & 1:
            out.append(pos)
    return out
