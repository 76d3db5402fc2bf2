"""Curves (X, P_2(X), ..., P_k(X)) over Q and their invariants.

A curve is an ordered tuple of rational polynomials whose first coordinate
is the identity X.  This module computes the summary invariants (type
vector, diameter, degeneracy), clears denominators to get the integer data
Delta, D, K used by the divisibility certificate, normalizes a curve to
strictly increasing degrees by invertible row operations, decides
birational equivalence constructively, and evaluates the dimension-bound
formulas for the intersection sets at a given exponent.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .errors import CurveFormatError, DimensionMismatchError, PreconditionError
from .numutil import ceil_fraction, parse_fraction
from .poly import RatPoly, X, format_poly, parse_poly


@dataclass(frozen=True)
class Curve:
    """Ordered coordinate polynomials; graph form means polys[0] == X."""

    polys: tuple[RatPoly, ...]

    def __post_init__(self) -> None:
        if not self.polys:
            raise CurveFormatError("curve needs at least one coordinate")
        object.__setattr__(self, "polys", tuple(self.polys))

    @property
    def k(self) -> int:
        return len(self.polys)

    @property
    def is_graph(self) -> bool:
        return self.polys[0] == X

    @property
    def d_max(self) -> int:
        return max(p.degree for p in self.polys)

    def require_graph(self) -> None:
        if not self.is_graph:
            raise PreconditionError("first coordinate must be X")

    def __iter__(self):
        return iter(self.polys)


def curve_of(*polys: RatPoly) -> Curve:
    return Curve(tuple(polys))


@dataclass(frozen=True)
class CurveProfile:
    """Derived invariants; norm_* fields describe the normalization."""

    k: int
    type_vec: tuple[int, ...]
    diameter: int
    d_max: int
    m: int
    degenerate: bool
    norm_type_vec: tuple[int, ...]
    norm_diameter: int


@dataclass(frozen=True)
class IntegerizedCurve:
    """Q_j = K_j * P_j with integer coefficients, plus Delta, D, K."""

    qs: tuple[RatPoly, ...]
    ks: tuple[int, ...]
    K: int
    delta: int
    D: int

    @property
    def as_curve(self) -> Curve:
        return Curve(self.qs)


@dataclass(frozen=True)
class Normalization:
    """Result of normalize: M*(original - constants) = curve exactly."""

    curve: Curve
    matrix: linalg.Matrix
    m: int
    constants: tuple[Fraction, ...]

    @property
    def degenerate(self) -> bool:
        return self.m < self.curve.k


def canonical_sort(curve: Curve) -> tuple[Curve, tuple[int, ...]]:
    """Reorder by non-decreasing degree, first coordinate pinned in place.

    The permutation lists, for each output position, the 1-based original
    index of the polynomial now there.  Zero polynomials sort last; the
    sort is stable otherwise.
    """
    rest = list(enumerate(curve.polys))[1:]
    rest.sort(key=lambda ip: (ip[1].is_zero, ip[1].degree))
    order = [0] + [i for i, _ in rest]
    return (Curve(tuple(curve.polys[i] for i in order)),
            tuple(i + 1 for i in order))


def _degree_gaps(degrees: Sequence[int]) -> int:
    if len(degrees) <= 1:
        return 0
    return max(b - a for a, b in zip(degrees, degrees[1:]))


def profile(curve: Curve) -> CurveProfile:
    """Type vector, diameter, and degeneracy data of a curve."""
    sorted_curve, _ = canonical_sort(curve)
    type_vec = tuple(p.degree for p in sorted_curve.polys)
    norm = normalize(curve) if curve.is_graph else None
    if norm is not None:
        live = [p.degree for p in norm.curve.polys[: norm.m]]
        norm_type = tuple(p.degree for p in norm.curve.polys)
        m = norm.m
    else:
        live = [d for d in type_vec if d >= 1]
        norm_type = type_vec
        m = len(live)
    return CurveProfile(
        k=curve.k,
        type_vec=type_vec,
        diameter=_degree_gaps(type_vec),
        d_max=max(type_vec),
        m=m,
        degenerate=m < curve.k,
        norm_type_vec=norm_type,
        norm_diameter=_degree_gaps(live),
    )


def integerize(curve: Curve) -> IntegerizedCurve:
    """Clear denominators with the least positive K_j per coordinate.

    K_j is the lcm of the reduced coefficient denominators, so it is the
    smallest positive integer making K_j*P_j integral; any prime dividing
    both K_j and the content of Q_j would contradict that minimality, so
    content(Q_j) is coprime to K_j (it can still exceed 1, e.g. for 2X^2).
    """
    qs, ks = [], []
    for p in curve.polys:
        kj = p.denominator_lcm()
        qs.append(p.scale(Fraction(kj)))
        ks.append(kj)
    delta = 1
    for q in qs:
        if not q.is_zero:
            delta *= abs(q.leading.numerator)
    d_k = curve.d_max
    prod_k = math.prod(ks)
    return IntegerizedCurve(tuple(qs), tuple(ks), prod_k, delta, delta ** d_k)


def normalize(curve: Curve) -> Normalization:
    """Reduce to strictly increasing degrees d_1 < ... < d_m, zeros last.

    Constant terms are dropped first (they are recorded for
    reconstruction), linear terms of the later coordinates are removed
    against the first, and whenever a degree is still shared the
    highest such degree h is eliminated by subtracting multiples of the
    smallest-index polynomial of degree h from the others.  Every step is
    an invertible row operation on the coordinate tuple; the returned
    matrix composes them all.
    """
    curve.require_graph()
    k = curve.k
    constants = tuple(p.coeff(0) for p in curve.polys)
    work = [p.without_constant() for p in curve.polys]
    rows = [list(r) for r in linalg.identity(k)]

    def subtract(j: int, factor: Fraction, e: int) -> None:
        work[j] = work[j] - work[e].scale(factor)
        rows[j] = [a - factor * b for a, b in zip(rows[j], rows[e])]

    # remove linear terms of the later coordinates against P_1 = X;
    # afterwards every nonzero work[j], j >= 2, has only terms of
    # degree >= 2, a property preserved by all later eliminations
    for j in range(1, k):
        lin = work[j].coeff(1)
        if lin != 0:
            subtract(j, lin, 0)

    while True:
        by_degree: dict[int, list[int]] = {}
        for j, p in enumerate(work):
            if not p.is_zero:
                by_degree.setdefault(p.degree, []).append(j)
        repeated = [d for d, js in by_degree.items() if len(js) > 1]
        if not repeated:
            break
        h = max(repeated)
        js = by_degree[h]
        e = 0 if h == 1 else min(js)
        for j in js:
            if j != e:
                subtract(j, work[j].leading / work[e].leading, e)

    order = [0] + sorted(
        range(1, k), key=lambda j: (work[j].is_zero, work[j].degree))
    final = tuple(work[j] for j in order)
    matrix = tuple(tuple(rows[j]) for j in order)
    m = sum(1 for p in final if not p.is_zero)
    degrees = [p.degree for p in final[:m]]
    assert degrees == sorted(set(degrees)), "normalization left a repeated degree"
    return Normalization(Curve(final), matrix, m, constants)


def _coefficient_rows(curve: Curve, width: int) -> linalg.Matrix:
    """Rows of coefficients for powers 1..width, constants dropped."""
    return tuple(
        tuple(p.coeff(i) for i in range(1, width + 1)) for p in curve.polys)


def is_degenerate(curve: Curve) -> bool:
    """True iff {1, P_1, ..., P_k} are linearly dependent over Q."""
    width = max(0, curve.d_max) + 1
    rows = [tuple(Fraction(1 if i == 0 else 0) for i in range(width))]
    for p in curve.polys:
        rows.append(tuple(p.coeff(i) for i in range(width)))
    return linalg.rank(tuple(rows)) < curve.k + 1


def equivalent(c1: Curve, c2: Curve) -> Optional[linalg.Matrix]:
    """Invertible T with T applied to c1 giving c2, constants ignored.

    Both coefficient matrices (constant terms removed) are row reduced
    with tracked transforms; the reduced form is a canonical basis of the
    row space, so the two agree exactly iff the curves are related by an
    invertible matrix, and composing the tracked transforms produces one.
    """
    if c1.k != c2.k:
        raise DimensionMismatchError(
            f"curves have dimensions {c1.k} and {c2.k}")
    width = max(c1.d_max, c2.d_max, 1)
    a = _coefficient_rows(c1, width)
    b = _coefficient_rows(c2, width)
    red_a, tr_a = linalg.rref_tracked(a)
    red_b, tr_b = linalg.rref_tracked(b)
    if red_a != red_b:
        return None
    witness = linalg.mat_mul(linalg.inverse(tr_b), tr_a)
    return witness


def apply_transform(curve: Curve, m: linalg.Matrix) -> Curve:
    """Replace coordinates by the matrix-combinations of the originals."""
    k = curve.k
    if len(m) != k or any(len(row) != k for row in m):
        raise DimensionMismatchError(
            f"matrix is not {k}x{k}")
    m = linalg.as_matrix(m)
    if linalg.det(m) == 0:
        raise linalg.SingularMatrixError("transform matrix is singular")
    out = []
    for row in m:
        acc = RatPoly.zero()
        for coef, p in zip(row, curve.polys):
            if coef != 0:
                acc = acc + p.scale(Fraction(coef))
        out.append(acc)
    return Curve(tuple(out))


def project(curve: Curve, s: int) -> Curve:
    """First s coordinate polynomials."""
    if not 1 <= s <= curve.k:
        raise DimensionMismatchError(
            f"projection index {s} outside 1..{curve.k}")
    return Curve(curve.polys[:s])


def sigma_bound(curve: Curve, zeta: Fraction) -> Fraction:
    """Upper bound for max_j sup |P_j'(z)| over |z - zeta| <= 1/2.

    Triangle inequality on the derivative coefficients at radius
    max(1, |zeta| + 1/2); overestimating only shrinks the certificate
    threshold, which keeps it sound.
    """
    radius = max(Fraction(1), abs(Fraction(zeta)) + Fraction(1, 2))
    best = Fraction(0)
    for p in curve.polys:
        best = max(best, p.derivative().abs_coeff_sum_at(radius))
    return max(best, Fraction(1))


def c0_constant(curve: Curve, zeta: Fraction) -> Fraction:
    """Certificate threshold constant 1/(2*D*Sigma), always <= 1/2.

    Computed on the integerized curve: both D and the slope bound refer
    to the integer polynomials Q_j the certificate works with.
    """
    ic = integerize(curve)
    sig = sigma_bound(ic.as_curve, zeta)
    return Fraction(1, 2) / (ic.D * sig)


def r_index(prof: CurveProfile, tau: Fraction) -> tuple[int, int]:
    """Smallest index r with d_{r+1} - d_r > tau, else r = k; returns (r, d_r).

    The strict inequality is taken literally; 1-based indices into the
    sorted type vector.
    """
    tau = Fraction(tau)
    tv = prof.type_vec
    for j in range(len(tv) - 1):
        if tv[j + 1] - tv[j] > tau:
            return j + 1, tv[j]
    return len(tv), tv[-1]


@dataclass(frozen=True)
class BoundResult:
    """Dimension-bound interval for the lambda-approximable set."""

    lower: Fraction
    upper: Fraction
    exact: bool
    provenance: str
    note: Optional[str] = None


def dimension_bounds(prof: CurveProfile, lam: Fraction) -> BoundResult:
    """Best-known dimension interval at exponent lam.

    Cascade: trivial full measure up to 1/k; an exact value
    2/(d_max*(1+lam)) whenever lam exceeds the normalized diameter; else
    the two-sided interval with the gap index evaluated just below lam
    (at integer lam the strict-gap comparison is closed, reflecting that
    the gap-index machinery needs a non-integer parameter).  All values
    are capped at 1.
    """
    lam = Fraction(lam)
    if lam <= 0:
        raise PreconditionError(f"exponent must be positive, got {lam}")
    one = Fraction(1)
    if lam <= Fraction(1, prof.k):
        return BoundResult(one, one, True, "dirichlet-regime")
    d_k = prof.d_max
    base = Fraction(2, 1) / (d_k * (1 + lam))
    if lam > prof.norm_diameter:
        v = min(one, base)
        return BoundResult(v, v, True, "diameter-threshold-exact")
    # gap index with the closed comparison: gap >= ceil(lam) matches the
    # strict comparison at every admissible parameter below lam
    need = ceil_fraction(lam)
    tv = prof.type_vec
    r = len(tv)
    for j in range(len(tv) - 1):
        if tv[j + 1] - tv[j] >= need:
            r = j + 1
            break
    d_r = tv[r - 1]
    # a non-positive d_r can only come from constant coordinates of a
    # pathological input; the gap bound then carries no information
    upper = one if d_r < 1 else min(one, Fraction(2, 1) / (d_r * (1 + lam)))
    lower = min(one, base)
    note = None
    if lam == max(d_k - 1, 1):
        note = ("boundary exponent: equality of the one-dimensional sets is "
                "known for the closed-inequality variant here; exactness for "
                "the open variant needs a strictly larger exponent")
    return BoundResult(lower, upper, False, "gap-index-band", note)


def parse_curve(text: str) -> Curve:
    """Parse a curve from text lines or from the JSON dict format."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_curve_json(stripped)
    polys = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            polys.append(parse_poly(line))
        except CurveFormatError as exc:
            raise CurveFormatError(f"line {lineno}: {exc}") from None
    if not polys:
        raise CurveFormatError("empty curve description")
    if polys[0] != X:
        raise CurveFormatError("first coordinate must be X")
    return Curve(tuple(polys))


def _parse_curve_json(text: str) -> Curve:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CurveFormatError(f"bad JSON: {exc}") from None
    if not isinstance(doc, dict) or "polys" not in doc:
        raise CurveFormatError("JSON curve needs a 'polys' field")
    entries = doc["polys"]
    if not isinstance(entries, list) or not entries:
        raise CurveFormatError("'polys' must be a non-empty list")
    polys = []
    for idx, terms in enumerate(entries, start=1):
        if not isinstance(terms, list):
            raise CurveFormatError(f"polynomial {idx}: expected a term list")
        coeffs: dict[int, Fraction] = {}
        for term in terms:
            try:
                (num, den), power = term
                num_i, den_i, power_i = int(str(num)), int(str(den)), int(power)
            except (TypeError, ValueError) as exc:
                raise CurveFormatError(
                    f"polynomial {idx}: bad term {term!r}: {exc}") from None
            if den_i == 0:
                raise CurveFormatError(f"polynomial {idx}: zero denominator")
            if power_i < 0:
                raise CurveFormatError(f"polynomial {idx}: negative power")
            coeffs[power_i] = coeffs.get(power_i, Fraction(0)) + Fraction(num_i, den_i)
        width = max(coeffs) + 1 if coeffs else 0
        polys.append(RatPoly(tuple(coeffs.get(i, Fraction(0)) for i in range(width))))
    if "k" in doc and doc["k"] != len(polys):
        raise CurveFormatError(
            f"'k' is {doc['k']} but {len(polys)} polynomials given")
    if polys[0] != X:
        raise CurveFormatError("first coordinate must be X")
    return Curve(tuple(polys))


def format_curve(curve: Curve) -> str:
    """One polynomial per line, parseable back by parse_curve."""
    return "\n".join(format_poly(p) for p in curve.polys) + "\n"
