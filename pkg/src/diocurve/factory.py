"""Reals engineered to approximate a curve at a prescribed rate.

Two constructions are provided.  make_lambda1 builds a lacunary dyadic
series whose one-dimensional approximation exponent equals a chosen
rational L, by driving the exponent schedule with the recurrence
b_{n+1} = floor((L+1) * b_n).  make_prescribed_psi builds, for a given
curve, a series whose simultaneous error at the structured denominators
q = K * D * x0^{d_k} is squeezed into the window [c' * Psi(q), Psi(q)]
with an explicitly certified constant c'.

All decisions are made in exact rational arithmetic.  The threshold
function Psi is never evaluated as a number; it is only compared against
rationals by cross powering, so irrational values like x^(-7/2) cost
nothing in precision.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

# window scans and witness certification reuse the engine's internal
# grid-evaluation contexts rather than duplicating them
from .engine import _EvalContext, _depth_ladder, _scan_context
from .errors import EnclosureError, PreconditionError
from .numutil import (flog2, flog2_fraction, format_fraction, int_desc,
                      sqrt2_minus1_bit_positions)
from .polycurve import Curve, integerize, profile
from .reals import DyadicSeries, ProgrammaticReal, geometric_dyadic

_HALF = Fraction(1, 2)

# accepted sandwich window, as fractions of Psi(q): the greedy targets
# errors at most _TARGET_HI and the mantissa refinement fills upward
_TARGET_HI = Fraction(197, 200)

# minimum separation between a witness exponent and the next block; the
# certification slack of level n is 2^-GAP relative to its error
_GAP = 56


def _floor_ratio_next(ratio: Fraction, terms: tuple[int, ...]) -> int:
    v = ratio * terms[-1]
    return v.numerator // v.denominator


def make_lambda1(length, b1: int = 2, depth: int = 8) -> ProgrammaticReal:
    """Dyadic series with one-dimensional exponent exactly the given value.

    The schedule b_{n+1} = floor((L+1) b_n) keeps the ratio b_{n+1}/b_n - 1
    inside [L - 1/b_n, L], so the exponent trace converges to L from below.
    Integer L gives a purely geometric schedule and an extendable series
    that round-trips through the dyadic:geom spec string.
    """
    L = Fraction(length)
    if L <= 1:
        raise PreconditionError(
            f"target exponent must exceed 1, got {format_fraction(L)}")
    if b1 < 2:
        raise PreconditionError(f"seed exponent must be >= 2, got {b1}")
    if depth < 2:
        raise PreconditionError("need at least two schedule terms")
    if L.denominator == 1:
        return geometric_dyadic(b1, int(L) + 1, depth)
    ratio = L + 1
    terms = [b1]
    while len(terms) < depth:
        terms.append(_floor_ratio_next(ratio, tuple(terms)))
    return DyadicSeries(terms, functools.partial(_floor_ratio_next, ratio))


@dataclass(frozen=True)
class PsiSpec:
    """Decay target for prescribed approximation.

    kind "power" is Psi(x) = x^(-lam).  kind "scheduled" is a right
    continuous step table over integer knots, extended beyond the last
    knot by the power tail Psi(x) = psi_last * (x_last/x)^tail_lam.  The
    decay witness (lam respectively tail_lam) is the exponent proving
    Psi(x) * x^t -> 0; validate_for checks it against a curve's diameter.
    """

    kind: str
    lam: Optional[Fraction] = None
    knots: tuple[tuple[int, Fraction], ...] = ()
    tail_lam: Optional[Fraction] = None

    def __post_init__(self) -> None:
        if self.kind == "power":
            if self.lam is None or self.lam <= 0:
                raise PreconditionError("power law needs a positive exponent")
        elif self.kind == "scheduled":
            if not self.knots:
                raise PreconditionError("scheduled Psi needs at least one knot")
            if self.tail_lam is None or self.tail_lam <= 0:
                raise PreconditionError("scheduled Psi needs a positive tail exponent")
            prev_x = 0
            prev_v: Optional[Fraction] = None
            for x, v in self.knots:
                if x <= prev_x:
                    raise PreconditionError("knot positions must increase")
                if v <= 0:
                    raise PreconditionError("Psi values must be positive")
                if prev_v is not None and v > prev_v:
                    raise PreconditionError("Psi values must be non-increasing")
                prev_x, prev_v = x, v
        else:
            raise PreconditionError(f"unknown Psi kind {self.kind!r}")

    @classmethod
    def power(cls, lam) -> "PsiSpec":
        return cls("power", lam=Fraction(lam))

    @classmethod
    def scheduled(cls, knots: Sequence[tuple[int, Fraction]], tail_lam) -> "PsiSpec":
        pts = tuple((int(x), Fraction(v)) for x, v in knots)
        return cls("scheduled", knots=pts, tail_lam=Fraction(tail_lam))

    @property
    def decay_witness(self) -> Fraction:
        return self.lam if self.kind == "power" else self.tail_lam

    def validate_for(self, t: int) -> None:
        w = self.decay_witness
        if w <= t:
            raise PreconditionError(
                f"Psi must be o(x^-{t}) for this curve; "
                f"decay witness {format_fraction(w)} <= {t}")

    def cmp_value(self, x: int, v: Fraction) -> int:
        """Exact sign of Psi(x) - v for a positive integer x and v >= 0."""
        if x < 1:
            raise PreconditionError("Psi is compared at positive integers only")
        if v < 0:
            raise PreconditionError("comparison value must be >= 0")
        if v == 0:
            return 1
        if self.kind == "power":
            n, d = self.lam.numerator, self.lam.denominator
            lhs = v.denominator ** d
            rhs = v.numerator ** d * x ** n
            return (lhs > rhs) - (lhs < rhs)
        last_x, last_v = self.knots[-1]
        if x <= last_x:
            cur = self.knots[0][1]
            for kx, kv in self.knots:
                if kx > x:
                    break
                cur = kv
            return (cur > v) - (cur < v)
        n, d = self.tail_lam.numerator, self.tail_lam.denominator
        # psi_last^d * x_last^n / x^n  against  v^d
        lhs = last_v.numerator ** d * last_x ** n * v.denominator ** d
        rhs = v.numerator ** d * x ** n * last_v.denominator ** d
        return (lhs > rhs) - (lhs < rhs)

    def bits(self, x: int) -> float:
        """-log2 Psi(x), for planning only; comparisons stay exact."""
        if x < 1:
            raise PreconditionError("Psi is compared at positive integers only")
        if self.kind == "power":
            return float(self.lam) * flog2(x)
        last_x, last_v = self.knots[-1]
        if x <= last_x:
            cur = self.knots[0][1]
            for kx, kv in self.knots:
                if kx > x:
                    break
                cur = kv
            return -flog2_fraction(cur)
        return (-flog2_fraction(last_v)
                + float(self.tail_lam) * (flog2(x) - flog2(last_x)))

    def describe(self) -> str:
        if self.kind == "power":
            return f"power:{format_fraction(self.lam)}"
        pts = ",".join(f"{x}:{format_fraction(v)}" for x, v in self.knots)
        return f"scheduled:{pts};tail:{format_fraction(self.tail_lam)}"


@dataclass(frozen=True)
class PsiLevel:
    """One constructed witness with its certified sandwich."""

    q: int
    err_bits: float
    psi_bits: float
    ratio: float
    ratio_bound: Fraction
    upper_certified: bool


@dataclass(frozen=True)
class PsiConstruction:
    real: DyadicSeries
    witnesses: tuple[int, ...]
    levels: tuple[PsiLevel, ...]

    @property
    def c_prime(self) -> Fraction:
        """Certified lower sandwich constant, the min over levels."""
        return min(lv.ratio_bound for lv in self.levels)

    def __iter__(self):
        # supports the two-value unpacking `zeta, witnesses = ...`
        return iter((self.real, self.witnesses))


@dataclass(frozen=True)
class WitnessCheck:
    q: int
    within_psi: Optional[bool]
    above_c: Optional[bool]


@dataclass(frozen=True)
class MembershipReport:
    """Finite-window evidence for degree-Psi but not degree-cPsi approximation.

    witness_checks cover the provided denominators; offenders are window
    members outside the witness list whose certified error is <= c*Psi(q);
    undecided are window members whose enclosure never separated.  The
    vacuous count is the number of window members skipped because
    c*Psi(q) >= 1/2 makes the inequality carry no information.
    """

    c: Fraction
    q_window: int
    witness_checks: tuple[WitnessCheck, ...]
    offenders: tuple[int, ...]
    undecided: tuple[int, ...]
    vacuous_skipped: int
    scanned: int

    @property
    def witnesses_ok(self) -> bool:
        return all(w.within_psi for w in self.witness_checks)

    @property
    def window_clear(self) -> bool:
        return not self.offenders and not self.undecided

    @property
    def ok(self) -> bool:
        return self.witnesses_ok and self.window_clear


def _max_dist(curve: Curve, q: int, z: Fraction) -> Fraction:
    """max_j dist(q * P_j(z), Z) computed exactly."""
    best = Fraction(0)
    for p in curve.polys:
        val = q * p(z)
        fl = val.numerator // val.denominator
        fr = val - fl
        d = fr if fr <= _HALF else 1 - fr
        if d > best:
            best = d
    return best


def _slope_radius(curve: Curve, radius: Fraction) -> Fraction:
    s = Fraction(0)
    for p in curve.polys:
        if p.degree >= 1:
            s = max(s, p.derivative().abs_coeff_sum_at(radius))
    return s


def make_prescribed_psi(curve: Curve, psi: PsiSpec,
                        depth: int = 3) -> PsiConstruction:
    """Construct a real whose error at q = K*D*x0^{d_k} tracks Psi.

    Level by level, the next dyadic block is chosen greedily with exact
    trial evaluations so the error at the level's witness lands just
    below Psi(q); a mantissa of up to eight extra bits pushes it above
    0.9 * Psi(q) when the geometry allows.  After all blocks are placed
    a final certification pass re-checks every witness against the
    completed series and records the certified ratio bound.
    """
    prof = profile(curve)
    if curve.k > 1 and prof.diameter < 1:
        raise PreconditionError(
            "prescribed construction needs diameter >= 1 (distinct degrees)")
    if curve.d_max < 1:
        raise PreconditionError("curve must have a non-constant coordinate")
    if depth < 1:
        raise PreconditionError("need at least one construction level")
    # the k = 1 case has diameter 0 but behaves like the classical t = 1
    # setting, so the decay gate uses max(t, 1)
    psi.validate_for(max(prof.diameter, 1))
    ic = integerize(curve)
    kd = ic.K * ic.D
    d_top = curve.d_max

    exps = sqrt2_minus1_bit_positions(48)
    zeta = Fraction(sum(1 << (exps[-1] - b) for b in exps), 1 << exps[-1])
    witnesses: list[int] = []
    drafts: list[tuple[int, Fraction]] = []

    for _ in range(depth):
        b = exps[-1]
        x0 = 1 << b
        q = kd * x0 ** d_top
        if psi.cmp_value(q, _HALF) >= 0:
            raise PreconditionError(
                "infeasible level: Psi(q) >= 1/2 at witness "
                f"q = {int_desc(q)}, the upper sandwich bound is vacuous")
        base_ok = all((q * p(zeta)).denominator == 1 for p in curve.polys)
        if not base_ok:
            raise PreconditionError(
                "witness denominator failed to clear the curve coordinates "
                f"at q = {int_desc(q)}")

        # plan the block position from float logs, then settle it exactly
        mf = 0.0
        for p in curve.polys:
            if p.degree >= 1:
                dv = p.derivative()(zeta)
                if dv != 0:
                    mf = max(mf, flog2_fraction(abs(dv)))
        beta = max(int(psi.bits(q) + flog2(q) + mf) - 2, b + _GAP)

        def fits(e: Fraction) -> bool:
            return e > 0 and psi.cmp_value(q, e / _TARGET_HI) >= 0

        steps = 0
        while not fits(_max_dist(curve, q, zeta + Fraction(1, 1 << beta))):
            beta += 1
            steps += 1
            if steps > 4000:
                raise EnclosureError(
                    "block placement did not converge at witness "
                    f"q = {int_desc(q)}")
        while beta > b + _GAP:
            e2 = _max_dist(curve, q, zeta + Fraction(1, 1 << (beta - 1)))
            if not fits(e2):
                break
            beta -= 1
            steps += 1
            if steps > 4000:
                raise EnclosureError(
                    "block placement did not converge at witness "
                    f"q = {int_desc(q)}")
        block = [beta]
        zc = zeta + Fraction(1, 1 << beta)
        e_cur = _max_dist(curve, q, zc)
        if not fits(e_cur):
            # the separation floor b + _GAP already undershoots the window;
            # Psi decays too slowly for the level geometry
            raise PreconditionError(
                "infeasible level: the largest admissible block error is "
                f"below the sandwich target at q = {int_desc(q)}; "
                "Psi decays too slowly relative to its decay witness")
        for off in range(1, 9):
            zt = zc + Fraction(1, 1 << (beta + off))
            e2 = _max_dist(curve, q, zt)
            if e2 > e_cur and fits(e2):
                zc = zt
                e_cur = e2
                block.append(beta + off)
        exps.extend(block)
        zeta = zc
        witnesses.append(q)
        drafts.append((q, e_cur))

    exps.append(exps[-1] + 64)
    real = DyadicSeries(exps)

    # certification pass against the completed series
    trunc = real.truncation(len(exps))
    v = trunc.value
    slop_unit = trunc.hi - v
    lip = _slope_radius(curve, abs(v) + 1)
    levels = []
    for q, _ in drafts:
        e_v = _max_dist(curve, q, v)
        slop = q * lip * slop_unit
        lo = e_v - slop
        if lo < 0:
            lo = Fraction(0)
        hi = e_v + slop
        if psi.cmp_value(q, hi) < 0:
            raise EnclosureError(
                "constructed witness lost its upper certificate at "
                f"q = {int_desc(q)}")
        # certified lower ratio on a 1/256 grid
        lo_m, hi_m = 0, 256
        while hi_m - lo_m > 1:
            mid = (lo_m + hi_m) // 2
            if lo > 0 and psi.cmp_value(q, lo * 256 / mid) <= 0:
                lo_m = mid
            else:
                hi_m = mid
        eb = flog2_fraction(e_v) if e_v > 0 else float("-inf")
        pb = psi.bits(q)
        levels.append(PsiLevel(
            q=q,
            err_bits=-eb,
            psi_bits=pb,
            ratio=2.0 ** (eb + pb),
            ratio_bound=Fraction(lo_m, 256),
            upper_certified=True,
        ))
    return PsiConstruction(real, tuple(witnesses), tuple(levels))


class _ContextLadder:
    """Lazily built, cached evaluation contexts along the depth ladder."""

    def __init__(self, curve: Curve, real: ProgrammaticReal):
        self.curve = curve
        self.real = real
        self.ic = integerize(curve)
        self.prof = profile(curve)
        self.depths = _depth_ladder(real)
        self.cache: list[_EvalContext] = []

    def __iter__(self):
        for i, d in enumerate(self.depths):
            if i == len(self.cache):
                self.cache.append(
                    _EvalContext(self.curve, self.real, d, self.ic, self.prof))
            yield self.cache[i]


def _witness_check(ladder: _ContextLadder, psi: PsiSpec,
                   c: Fraction, q: int) -> WitnessCheck:
    within: Optional[bool] = None
    above: Optional[bool] = None
    for ctx in ladder:
        _, lo, hi = ctx.err_bounds(q)
        if within is None:
            if hi == 0 or psi.cmp_value(q, hi) >= 0:
                within = True
            elif lo > 0 and psi.cmp_value(q, lo) < 0:
                within = False
        if above is None:
            # above means err >= c * Psi(q)
            if c == 0:
                above = True
            elif hi == 0:
                above = False
            elif lo > 0 and psi.cmp_value(q, lo / c) <= 0:
                above = True
            elif psi.cmp_value(q, hi / c) > 0:
                above = False
        if within is not None and above is not None:
            break
    return WitnessCheck(q, within, above)


def verify_membership(curve: Curve, real: ProgrammaticReal, psi: PsiSpec,
                      c, q_window: int,
                      witnesses: Sequence[int]) -> MembershipReport:
    """Check prescribed approximation over a finite denominator window.

    Part (a): every provided witness q satisfies err(q) <= Psi(q), with
    an extra flag recording whether err(q) >= c * Psi(q) as well.  Part
    (b): no window denominator outside the witness list has certified
    err(q) <= c * Psi(q).  Window members where c * Psi(q) >= 1/2 are
    skipped as vacuous; any distance satisfies such a bound.
    """
    cf = Fraction(c)
    ic = integerize(curve)
    if cf < 0:
        raise PreconditionError("c must be >= 0")
    if cf * ic.K * ic.D >= 1:
        raise PreconditionError(
            f"c must stay below 1/(D*K) = 1/{ic.K * ic.D}, "
            f"got {format_fraction(cf)}")
    if q_window < 1:
        raise PreconditionError("window must contain at least q = 1")
    prof = profile(curve)
    ladder = _ContextLadder(curve, real)
    checks = tuple(_witness_check(ladder, psi, cf, q) for q in witnesses)
    skip = set(witnesses)

    offenders: list[int] = []
    undecided: list[int] = []
    vacuous = 0
    scanned = 0
    if cf == 0:
        # err <= 0 needs err exactly 0, impossible for irrational input
        if real.known_rational:
            ctx = _scan_context(curve, real, q_window, ic, prof, 60)
            if ctx.rho == 0:
                for q in range(1, q_window + 1):
                    if q in skip:
                        continue
                    scanned += 1
                    if ctx.dist_num(q) == 0:
                        offenders.append(q)
        return MembershipReport(cf, q_window, checks, tuple(offenders),
                                tuple(undecided), 0, scanned)

    half_over_c = _HALF / cf
    pending = []
    ctx = _scan_context(curve, real, q_window, ic, prof, 60)
    su = ctx.rho * ctx.B
    slack = su.numerator // su.denominator + 1
    log_c = flog2_fraction(cf)
    log_b = flog2(ctx.B)
    for q in range(1, q_window + 1):
        if q in skip:
            continue
        if psi.cmp_value(q, half_over_c) >= 0:
            vacuous += 1
            continue
        scanned += 1
        m = ctx.dist_num(q)
        m_lo = m - q * slack
        if m_lo > 0 and flog2(m_lo) - log_b > log_c - psi.bits(q) + 1.0:
            continue
        pending.append(q)
    for q in pending:
        dctx = ctx
        verdict = None
        while True:
            _, lo, hi = dctx.err_bounds(q)
            if hi == 0 or (hi > 0 and psi.cmp_value(q, hi / cf) >= 0):
                verdict = "offender"
                break
            if lo > 0 and psi.cmp_value(q, lo / cf) < 0:
                verdict = "clear"
                break
            nxt = dctx.deeper()
            if nxt is None:
                break
            dctx = nxt
        if verdict == "offender":
            offenders.append(q)
        elif verdict is None:
            undecided.append(q)
    return MembershipReport(cf, q_window, checks, tuple(offenders),
                            tuple(undecided), vacuous, scanned)
