"""Certified approximation measurements along polynomial curves.

The operations here answer questions of the form "how close is q * P_j(z)
to an integer, simultaneously over all coordinates" for a programmatic
real z, without ever trusting floating point.  A truncation of z with a
rigorous tail enclosure is evaluated over a common denominator grid; the
grid value is exact for the truncated point, and the tail contributes an
explicit error radius.  Every reported comparison (record versus
non-record in a scan, above versus below a certificate threshold) is
decided only when the enclosures separate; otherwise the input is
deepened along a fixed ladder and, failing that, the operation raises
EnclosureError rather than guessing.

Scans are chunked and merged in a fixed order, so reports are
byte-identical regardless of the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .contfrac import (Decomposition, certified_digits, cf_expand,
                       convergents, decompose, lambda1_estimate)
from .errors import EnclosureError, PreconditionError
from .numutil import (flog2, flog2_fraction, int_desc, pow_check_le,
                      pow_check_lt)
from .polycurve import (Curve, IntegerizedCurve, CurveProfile, canonical_sort,
                        integerize, profile, project, r_index, sigma_bound)
from .reals import TRUNC_COST_CAP, ProgrammaticReal

CERT_PASS = "pass"
CERT_VIOLATION = "VIOLATION"
CERT_NOT_APPLICABLE = "not-applicable"

_CHUNK = 4096
# scan enclosures are deepened until 2 * q_max * rho <= 2**-bits
_TARGET_BITS = (60, 120, 240)
_HALF = Fraction(1, 2)


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


class _EvalContext:
    """Exact evaluation of a curve at one truncation of a real.

    All coordinate values q * P_j(value) live on the grid (1/B) Z with
    B = lcm_j(K_j) * qhat**d_max, qhat the truncation denominator.  The
    per-coordinate residues A_j let distances be stepped with integer
    adds only.  The cleared residues carry the extra denominator-clearing
    factors K_j, matching the integerized coordinates K_j * P_j.

    rho bounds |q * P_j(z) - q * P_j(value)| / q over the tail enclosure
    via a derivative coefficient bound on the hull, so the true distance
    for denominator q lies within q * rho of the grid distance.
    """

    __slots__ = ("curve", "real", "ic", "prof", "depth", "trunc",
                 "B", "A", "A_cert", "rho", "rho_cert", "c0")

    def __init__(self, curve: Curve, real: ProgrammaticReal, depth: int,
                 ic: IntegerizedCurve, prof: CurveProfile):
        self.curve = curve
        self.real = real
        self.ic = ic
        self.prof = prof
        self.depth = depth
        t = real.truncation(depth)
        self.trunc = t
        v = t.value
        num, qhat = v.numerator, v.denominator
        d_top = max(curve.d_max, 0)
        lam = math.lcm(*ic.ks) if ic.ks else 1
        B = lam * qhat ** d_top
        self.B = B
        a_plain = []
        a_cert = []
        lip = Fraction(0)
        lip_cert = Fraction(0)
        radius = max(abs(t.lo), abs(t.hi), abs(v))
        for p, kj in zip(curve.polys, ic.ks):
            if p.is_zero:
                a_plain.append(0)
                a_cert.append(0)
                continue
            acc, den = p.eval_cleared(num, qhat)
            # den = K_j * qhat**deg divides B by construction
            a = acc * (B // den) % B
            a_plain.append(a)
            a_cert.append(kj * a % B)
            slope = p.derivative().abs_coeff_sum_at(radius)
            lip = max(lip, slope)
            lip_cert = max(lip_cert, kj * slope)
        self.A = tuple(a_plain)
        self.A_cert = tuple(a_cert)
        w = t.tail_radius
        self.rho = lip * w
        self.rho_cert = lip_cert * w
        # threshold constant at the enclosure hull; the hull contains the
        # true point, so this is at most the constant taken there
        sig = sigma_bound(ic.as_curve, radius)
        self.c0 = _HALF / (ic.D * sig)

    @classmethod
    def build(cls, curve: Curve, real: ProgrammaticReal, depth: int,
              ic: Optional[IntegerizedCurve] = None,
              prof: Optional[CurveProfile] = None) -> "_EvalContext":
        if ic is None:
            ic = integerize(curve)
        if prof is None:
            prof = profile(curve)
        return cls(curve, real, depth, ic, prof)

    def dist_num(self, q: int, cert: bool = False) -> int:
        """Grid numerator of max_j dist(q * P_j(value), Z); exact."""
        res = self.A_cert if cert else self.A
        b = self.B
        m = 0
        for a in res:
            s = a * q % b
            d = b - s if s + s > b else s
            if d > m:
                m = d
        return m

    def err_bounds(self, q: int, cert: bool = False) -> tuple[Fraction, Fraction, Fraction]:
        """(grid error, certified lower, certified upper) for denominator q."""
        m = self.dist_num(q, cert)
        e = Fraction(m, self.B)
        qr = q * (self.rho_cert if cert else self.rho)
        lo = e - qr
        if lo < 0:
            lo = Fraction(0)
        hi = e + qr
        if hi > _HALF:
            hi = _HALF
        return e, lo, hi

    def deeper(self) -> Optional["_EvalContext"]:
        lv = self.real.levels()
        if self.real.extendable:
            nd = self.depth * 2 if self.depth >= 1 else 2
        else:
            if self.depth >= lv:
                return None
            nd = min(lv, self.depth * 2)
        # back off to the deepest affordable depth; None once refinement
        # cannot proceed without blowing the truncation budget
        while nd > self.depth and self.real.trunc_cost(nd) > TRUNC_COST_CAP:
            nd -= 1
        if nd <= self.depth:
            return None
        return _EvalContext(self.curve, self.real, nd, self.ic, self.prof)


def _depth_ladder(real: ProgrammaticReal, extra: int = 512) -> list[int]:
    """Doubling schedule of truncation depths within the cost budget.

    Capped at the level count for finite inputs; depths whose truncation
    denominator would blow the budget are dropped for any input, which
    keeps doubling-exponent schedules from requesting denominators that
    are doubly exponential in the depth.
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


def _scan_context(curve: Curve, real: ProgrammaticReal, q_max: int,
                  ic: IntegerizedCurve, prof: CurveProfile,
                  tgt_bits: int) -> _EvalContext:
    """First ladder context whose tail error is negligible for the scan.

    Negligible means 2 * q_max * rho_cert <= 2**-tgt_bits; if no ladder
    depth achieves it the deepest available context is returned and the
    caller's certified comparisons decide whether that is good enough.
    """
    bound = Fraction(1, 1 << tgt_bits)
    ladder = _depth_ladder(real)
    if not ladder:
        raise EnclosureError(
            "no truncation of this input fits the working budget")
    ctx = None
    for d in ladder:
        ctx = _EvalContext(curve, real, d, ic, prof)
        if ctx.rho_cert == 0 or 2 * q_max * ctx.rho_cert <= bound:
            return ctx
    return ctx


@dataclass(frozen=True)
class EvalResult:
    """Exact grid error with certified bounds for the true value.

    err is the distance for the truncated point and is exact; the true
    distance lies in [lo, hi].  The cleared variants measure the
    denominator-cleared coordinates K_j * P_j instead.
    """

    err: Fraction
    lo: Fraction
    hi: Fraction
    err_cleared: Fraction
    lo_cleared: Fraction
    hi_cleared: Fraction
    depth: int


@dataclass(frozen=True)
class ApproxRecord:
    """One record denominator from a scan.

    err is the grid error at the scan truncation.  exponent is the
    empirical approximation exponent -log err / log q rounded to 1e-6,
    absent for q < 2 or a zero grid error.  decomp carries the reduced
    fraction and cofactor of the nearest-integer decomposition of q * z
    when it was certifiable, x1 the part of x0 coprime to the leading
    coefficient product.  cert reports the divisibility certificate at
    this q: pass, VIOLATION, or not-applicable.
    """

    q: int
    err: Fraction
    exponent: Optional[Fraction]
    decomp: Optional[Decomposition]
    x1: Optional[int]
    cert: str

    @property
    def x0(self) -> Optional[int]:
        return None if self.decomp is None else self.decomp.x0

    @property
    def m0(self) -> Optional[int]:
        return None if self.decomp is None else self.decomp.m0


@dataclass(frozen=True)
class SearchReport:
    """Outcome of a record scan.

    records hold every q whose error was certified strictly below the
    error of all smaller scanned q.  method is "exhaustive" or
    "structural"; depth is the truncation depth of the working context
    (the deepest one, for per-candidate contexts).  candidates lists the
    examined denominators for structural scans, None for exhaustive.
    theta_estimate is the largest record exponent, if any record has one.
    """

    method: str
    q_max: Optional[int]
    depth: int
    candidates: Optional[tuple[int, ...]]
    records: tuple[ApproxRecord, ...]

    @property
    def theta_estimate(self) -> Optional[Fraction]:
        expos = [r.exponent for r in self.records
                 if r.q >= 2 and r.exponent is not None]
        return max(expos) if expos else None


@dataclass(frozen=True)
class CertRecord:
    """One below-threshold denominator from a certificate sweep.

    xprime_below records whether x1**d itself sits below the threshold
    again: guaranteed for monic integral curves, observational
    otherwise.  None when not evaluated.
    """

    q: int
    x0: int
    x1: int
    status: str
    xprime_below: Optional[bool] = None


@dataclass(frozen=True)
class CertifySummary:
    """Certificate sweep over all denominators up to q_max.

    checked lists every q whose error was certified below the threshold,
    with the divisibility verdict; not_applicable counts the rest.
    """

    q_max: int
    depth: int
    checked: tuple[CertRecord, ...]
    not_applicable: int

    @property
    def passes(self) -> tuple[int, ...]:
        return tuple(r.q for r in self.checked if r.status == CERT_PASS)

    @property
    def violations(self) -> tuple[int, ...]:
        return tuple(r.q for r in self.checked if r.status == CERT_VIOLATION)


@dataclass(frozen=True)
class NkoroResult:
    """Certified check of the three structural inequalities at one q.

    route records how the smallness hypothesis was established:
    "threshold" compares against the certificate constant when the decay
    target equals the curve diameter, "decay" checks err <= q**-target
    directly.  hypothesis is "holds", "fails", or "undecided" (the
    enclosure could not separate an exact boundary at available depth).
    advisory is set when the hypothesis does not certifiably hold, or on
    the decay route before the warm-up floor.
    """

    q: int
    target: Fraction
    route: str
    hypothesis: str
    advisory: bool
    decomp: Decomposition
    holds_support: bool
    holds_weight: bool
    holds_gap: bool

    @property
    def hypothesis_certified(self) -> bool:
        return self.hypothesis == "holds"

    @property
    def all_hold(self) -> bool:
        return self.holds_support and self.holds_weight and self.holds_gap


@dataclass(frozen=True)
class ThetaEstimate:
    """Best observed approximation exponent with its witness records."""

    value: Optional[Fraction]
    records: tuple[ApproxRecord, ...]
    exhaustive: SearchReport
    structural: SearchReport


@dataclass(frozen=True)
class JoxReport:
    """Comparison of a measured exponent against the predicted identity.

    For an input whose growth exponent is length, the predicted best
    exponent on a curve of top degree d is (length - d + 1) / d provided
    that exceeds the curve diameter; measured is the scan estimate.
    """

    length: Fraction
    degree: int
    diameter: int
    predicted: Fraction
    measured: Optional[Fraction]
    deviation: Optional[float]
    lambda1_measured: Optional[Fraction]
    theta: ThetaEstimate
    witnesses: tuple[ApproxRecord, ...]


def eval_error(curve: Curve, real: ProgrammaticReal, q: int) -> EvalResult:
    """max_j dist(q * P_j(z), Z) at the real's own truncation depth.

    The grid value is exact for the truncated point; the interval
    accounts for the tail.  Deepen the real (materialize) for tighter
    bounds; scans do that automatically, this entry point does not.
    """
    if q < 1:
        raise PreconditionError("q must be positive")
    ctx = _EvalContext.build(curve, real, max(1, real.levels()))
    e, lo, hi = ctx.err_bounds(q)
    ec, loc, hic = ctx.err_bounds(q, cert=True)
    return EvalResult(e, lo, hi, ec, loc, hic, ctx.depth)


def local_slope_bound(curve: Curve, zeta: Fraction) -> Fraction:
    """max_j |Q_j'(zeta)| over the denominator-cleared coordinates.

    The pointwise companion of the interval coefficient bound: on a
    neighbourhood of a known rational point the certificate threshold
    may use this smaller slope (plus a margin) instead of the
    coefficient-sum bound, giving a larger usable constant.
    """
    ic = integerize(curve)
    best = Fraction(0)
    for p in ic.qs:
        if p.is_zero:
            continue
        best = max(best, abs(p.derivative()(zeta)))
    return best


def c0_local_constant(curve: Curve, zeta: Fraction) -> Fraction:
    """Certificate constant using the local slope at a rational point."""
    ic = integerize(curve)
    return _HALF / (ic.D * max(Fraction(1), local_slope_bound(curve, zeta)))


def _run_chunks(worker, tasks, threads: int):
    if threads <= 1:
        return [worker(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(worker, tasks))


def _merge_records(cands: Sequence[tuple[int, int]],
                   ctx: _EvalContext) -> tuple[Optional[list[tuple[int, int]]],
                                               Optional[int]]:
    """Certified record selection over an ascending candidate stream.

    Returns (records, None) on success or (None, q) when the comparison
    at q could not be separated from the current best at this depth.
    """
    recs: list[tuple[int, int]] = []
    best_lo = best_hi = None
    rho = ctx.rho
    b = ctx.B
    for q, m in cands:
        e = Fraction(m, b)
        qr = q * rho
        lo, hi = e - qr, e + qr
        if best_hi is None or hi < best_lo:
            recs.append((q, m))
            best_lo, best_hi = lo, hi
        elif lo >= best_hi:
            continue
        else:
            return None, q
    return recs, None


def _threshold_position(real: ProgrammaticReal, q: int,
                        ctx: _EvalContext) -> tuple[str, _EvalContext]:
    """Certified side of the cleared error against c0 * q**-t.

    Returns ("below", ctx) or ("above", ctx) with the context that
    decided it, deepening as needed.
    """
    cur = ctx
    for _ in range(10):
        thr = cur.c0 * Fraction(1, q ** cur.prof.diameter)
        _, lo, hi = cur.err_bounds(q, cert=True)
        if lo >= thr:
            return "above", cur
        if hi < thr:
            return "below", cur
        nxt = cur.deeper()
        if nxt is None:
            break
        cur = nxt
    raise EnclosureError(
        f"threshold comparison at q={int_desc(q)} did not separate "
        "at any available depth")


def _certificate_detail(real: ProgrammaticReal, q: int, ctx: _EvalContext):
    """(status, x0, x1, deciding context) of the certificate at q."""
    if ctx.prof.diameter < 1:
        return CERT_NOT_APPLICABLE, None, None, ctx
    pos, cur = _threshold_position(real, q, ctx)
    if pos == "above":
        return CERT_NOT_APPLICABLE, None, None, cur
    dec = decompose(real, q)
    x1 = dec.x0 // math.gcd(dec.x0, cur.ic.delta)
    ok = q % (x1 ** cur.curve.d_max) == 0
    return (CERT_PASS if ok else CERT_VIOLATION), dec.x0, x1, cur


def _make_record(real: ProgrammaticReal, ctx: _EvalContext,
                 q: int, m: int) -> ApproxRecord:
    err = Fraction(m, ctx.B)
    expo = None
    if q >= 2 and m > 0:
        ratio = -flog2_fraction(err) / flog2(q)
        expo = Fraction(round(ratio * 10 ** 6), 10 ** 6)
    dec = None
    x1 = None
    try:
        dec = decompose(real, q)
        x1 = dec.x0 // math.gcd(dec.x0, ctx.ic.delta)
    except (PreconditionError, EnclosureError):
        dec = None
    cert = _certificate_detail(real, q, ctx)[0]
    return ApproxRecord(q=q, err=err, exponent=expo, decomp=dec, x1=x1, cert=cert)


def exhaustive_search(curve: Curve, real: ProgrammaticReal, q_max: int,
                      threads: int = 1) -> SearchReport:
    """Certified record scan over every denominator q = 1 .. q_max.

    A record is a q whose error is certified strictly below the error of
    every smaller q; ties are certified non-records.  The scan chunks
    the range, retains near-minimal candidates per chunk with a slack
    covering all tail error, and merges in fixed order, so the result
    does not depend on the worker count.
    """
    curve.require_graph()
    if q_max < 1:
        raise PreconditionError("q_max must be positive")
    ic = integerize(curve)
    prof = profile(curve)
    straddle_q = None
    for tgt in _TARGET_BITS:
        ctx = _scan_context(curve, real, q_max, ic, prof, tgt)
        if ctx.rho == 0:
            slack = 0
        else:
            slack = 2 * q_max * _ceil_frac(ctx.rho * ctx.B)
        tasks = []
        start = 1
        while start <= q_max:
            end = min(start + _CHUNK, q_max + 1)
            tasks.append((ctx.A, ctx.B, start, end, slack))
            start = end
        parts = _run_chunks(_scan_block, tasks, threads)
        cands = [c for part in parts for c in part]
        merged, straddle_q = _merge_records(cands, ctx)
        if merged is not None:
            records = tuple(_make_record(real, ctx, q, m) for q, m in merged)
            return SearchReport(method="exhaustive", q_max=q_max,
                                depth=ctx.depth, candidates=None,
                                records=records)
    raise EnclosureError(
        f"record comparison at q={int_desc(straddle_q)} stayed ambiguous "
        "after deepening")


def _scan_block(args):
    """Distances over one q block with near-minimum retention.

    steps holds the per-coordinate residues A_j; the block walks q by
    repeated addition mod B.  Survivors are every (q, m) with m within
    slack of the running block minimum, ties included, which is a
    superset of the true records however the range is partitioned.
    """
    steps, B, q_start, q_end, slack = args
    kk = len(steps)
    res = [a * q_start % B for a in steps]
    out = []
    run_min = None
    for q in range(q_start, q_end):
        m = 0
        for i in range(kk):
            s = res[i]
            d = B - s if s + s > B else s
            if d > m:
                m = d
        if run_min is None or m <= run_min + slack:
            out.append((q, m))
            if run_min is None or m < run_min:
                run_min = m
        for i in range(kk):
            s = res[i] + steps[i]
            if s >= B:
                s -= B
            res[i] = s
    return out


def _candidate_context(curve: Curve, real: ProgrammaticReal, level: int,
                       q: int, ic: IntegerizedCurve, prof: CurveProfile,
                       tgt_bits: int) -> _EvalContext:
    """Context for one structural candidate, starting just past its level."""
    bound = Fraction(1, 1 << tgt_bits)
    lv = real.levels()
    cap = lv + 512 if real.extendable else lv
    depths = []
    d = min(level + 1, cap)
    while d <= cap:
        depths.append(d)
        d = d * 2 if d > level + 2 else d + 1
    depths = [d for d in depths if real.trunc_cost(d) <= TRUNC_COST_CAP]
    if not depths:
        raise EnclosureError(
            f"candidate at level {level} needs a truncation beyond the "
            "working budget")
    ctx = None
    for d in depths:
        ctx = _EvalContext(curve, real, d, ic, prof)
        if ctx.rho_cert == 0 or 2 * q * ctx.rho_cert <= bound:
            return ctx
    return ctx


def _structural_candidates(curve: Curve, real: ProgrammaticReal,
                           depth: int, ic: IntegerizedCurve) -> list[tuple[int, int]]:
    """(q, level) candidates from the first depth convergent denominators.

    Dyadic inputs contribute x0 = 2**b_n; continued fractions contribute
    the convergent denominators themselves.  Each base yields
    q = x0**d_max, plus the K*D multiple when the curve needs clearing.
    """
    d_top = curve.d_max
    bases: list[tuple[int, int]] = []
    if real.kind == "dyadic":
        cap = depth if real.extendable else min(depth, real.levels() - 1)
        if cap < 1:
            raise PreconditionError(
                "series too short: no level has a certified continuation")
        have = real.materialize(cap)
        for n in range(1, cap + 1):
            if have.exponents[n - 1] > TRUNC_COST_CAP:
                break  # the base itself would outgrow the budget
            bases.append((n, 1 << have.exponents[n - 1]))
        if not bases:
            raise EnclosureError(
                "no structural candidate fits the working budget")
    elif real.kind == "cf":
        digits = cf_expand(real, depth + 2)
        seen = set()
        for c in convergents(digits):
            if c.q in seen:
                continue
            seen.add(c.q)
            bases.append((c.n + 1, c.q))
            if len(bases) >= depth:
                break
    else:
        raise PreconditionError(
            f"no structural candidates for {real.kind!r} inputs")
    kd = ic.K * ic.D
    out: dict[int, int] = {}
    for level, x0 in bases:
        for q in ([x0 ** d_top, kd * x0 ** d_top] if kd > 1 else [x0 ** d_top]):
            if q not in out or level < out[q]:
                out[q] = level
    return sorted(out.items())


def structural_search(curve: Curve, real: ProgrammaticReal,
                      depth: int) -> SearchReport:
    """Record scan over denominators built from the real's own structure.

    Candidates are q = x0**d_max (and the cleared multiple K*D*x0**d_max
    when that differs) for the first depth convergent denominators x0 of
    the input.  Records are certified against the other candidates only.
    """
    curve.require_graph()
    if depth < 1:
        raise PreconditionError("depth must be positive")
    if real.known_rational:
        raise PreconditionError("structural search needs an irrational input")
    ic = integerize(curve)
    prof = profile(curve)
    cand = _structural_candidates(curve, real, depth, ic)
    for tgt in _TARGET_BITS:
        entries = []
        for q, level in cand:
            ctx = _candidate_context(curve, real, level, q, ic, prof, tgt)
            m = ctx.dist_num(q)
            entries.append((q, m, ctx))
        merged = _merge_entries(entries)
        if merged is not None:
            records = tuple(_make_record(real, ctx, q, m)
                            for q, m, ctx in merged)
            top = max(e[2].depth for e in entries)
            return SearchReport(method="structural", q_max=None, depth=top,
                                candidates=tuple(q for q, _ in cand),
                                records=records)
    raise EnclosureError("structural record comparison stayed ambiguous")


def _merge_entries(entries):
    """Record selection when each candidate has its own context."""
    recs = []
    best_lo = best_hi = None
    for q, m, ctx in entries:
        e = Fraction(m, ctx.B)
        qr = q * ctx.rho
        lo, hi = e - qr, e + qr
        if best_hi is None or hi < best_lo:
            recs.append((q, m, ctx))
            best_lo, best_hi = lo, hi
        elif lo >= best_hi:
            continue
        else:
            return None
    return recs


def certify_divisibility(curve: Curve, real: ProgrammaticReal, q: int) -> str:
    """Divisibility certificate at one denominator.

    When the cleared error at q is certified below c0 * q**-t (t the
    degree-gap diameter), the reduced denominator x0 of q * z determines
    x1 = x0 / gcd(x0, delta), and x1**d_max must divide q: returns
    "pass" or "VIOLATION" accordingly.  Certified above the threshold
    returns "not-applicable".
    """
    curve.require_graph()
    if q < 1:
        raise PreconditionError("q must be positive")
    prof = profile(curve)
    if prof.diameter < 1:
        raise PreconditionError(
            "divisibility certificate needs a curve of diameter at least 1")
    ic = integerize(curve)
    ctx = _scan_context(curve, real, q, ic, prof, _TARGET_BITS[0])
    return _certificate_detail(real, q, ctx)[0]


def certify_divisibility_tau(curve: Curve, real: ProgrammaticReal, q: int,
                             tau: Fraction) -> str:
    """Divisibility certificate at decay rate tau via the gap index.

    The gap index r for tau keeps the coordinates whose consecutive
    degree gaps stay within tau; certified decay below c0 * q**-tau on
    that projection forces x1**d_r | q with x1 built from the projected
    leading coefficients.
    """
    curve.require_graph()
    tau = Fraction(tau)
    if q < 1:
        raise PreconditionError("q must be positive")
    prof = profile(curve)
    if tau * prof.k < 1:
        raise PreconditionError("tau must be at least 1/k")
    r, d_r = r_index(prof, tau)
    sorted_curve, _ = canonical_sort(curve)
    proj = project(sorted_curve, r)
    ic_full = integerize(curve)
    ic_proj = integerize(proj)
    prof_proj = profile(proj)
    ctx = _scan_context(proj, real, q, ic_proj, prof_proj, _TARGET_BITS[0])
    # threshold constant of the full curve: smaller than the projected
    # one, so a certified pass of the stronger inequality stays valid
    cur = ctx
    for _ in range(10):
        radius = max(abs(cur.trunc.lo), abs(cur.trunc.hi), abs(cur.trunc.value))
        c0_full = _HALF / (ic_full.D * sigma_bound(ic_full.as_curve, radius))
        _, lo, hi = cur.err_bounds(q, cert=True)
        below = hi == 0 or pow_check_lt(hi / c0_full, -tau.numerator,
                                        tau.denominator, Fraction(q))
        above = lo > 0 and not pow_check_lt(lo / c0_full, -tau.numerator,
                                            tau.denominator, Fraction(q))
        if below:
            dec = decompose(real, q)
            x1 = dec.x0 // math.gcd(dec.x0, ic_proj.delta)
            return CERT_PASS if q % (x1 ** d_r) == 0 else CERT_VIOLATION
        if above:
            return CERT_NOT_APPLICABLE
        nxt = cur.deeper()
        if nxt is None:
            raise EnclosureError(
                f"tau threshold comparison at q={int_desc(q)} did not separate")
        cur = nxt
    raise EnclosureError(
        f"tau threshold comparison at q={int_desc(q)} did not separate")


def _cert_block(args):
    """Certificate sweep over one q block: split trivially-above from suspicious.

    cut is an integer certified-above test: m >= ceil(c0 * B / q**t)
    plus q times a tail bound already clears the threshold.  Everything
    under it is re-examined exactly by the caller.
    """
    steps, B, q_start, q_end, t_diam, c0b_num, c0b_den, tail_unit = args
    kk = len(steps)
    res = [a * q_start % B for a in steps]
    sus = []
    na = 0
    for q in range(q_start, q_end):
        m = 0
        for i in range(kk):
            s = res[i]
            d = B - s if s + s > B else s
            if d > m:
                m = d
        den = c0b_den * q ** t_diam
        cut = -((-c0b_num) // den) + q * tail_unit
        if m >= cut:
            na += 1
        else:
            sus.append(q)
        for i in range(kk):
            s = res[i] + steps[i]
            if s >= B:
                s -= B
            res[i] = s
    return sus, na


def certify_scan(curve: Curve, real: ProgrammaticReal, q_max: int,
                 tau: Optional[Fraction] = None,
                 threads: int = 1) -> CertifySummary:
    """Divisibility certificate for every q = 1 .. q_max.

    Most q sit far above the threshold and are dismissed with one
    integer comparison; the few candidates below it get the full
    certified treatment.  Chunked and merged in fixed order.

    With tau set, the sweep runs the gap-index variant instead: the
    threshold becomes c0 * q**-tau on the projection to the first r
    coordinates, and passing forces x1**d_r | q.  tau must be >= 1 here
    so the coarse integer prefilter (which uses floor(tau)) stays sound.
    """
    curve.require_graph()
    if q_max < 1:
        raise PreconditionError("q_max must be positive")
    prof = profile(curve)
    ic = integerize(curve)
    if tau is None:
        if prof.diameter < 1:
            raise PreconditionError(
                "divisibility certificate needs a curve of diameter at least 1")
        scan_curve, scan_ic, scan_prof = curve, ic, profile(curve)
        expo_floor = prof.diameter
    else:
        tau = Fraction(tau)
        if tau < 1:
            raise PreconditionError("tau sweeps need tau >= 1")
        r, _ = r_index(prof, tau)
        sorted_curve, _ = canonical_sort(curve)
        scan_curve = project(sorted_curve, r)
        scan_ic = integerize(scan_curve)
        scan_prof = profile(scan_curve)
        expo_floor = tau.numerator // tau.denominator
    ctx = _scan_context(scan_curve, real, q_max, scan_ic, scan_prof,
                        _TARGET_BITS[0])
    if tau is None:
        c0b = ctx.c0 * ctx.B
    else:
        # full-curve constant: smaller than the projection's own, so a
        # certified pass of this stronger inequality remains valid
        radius = max(abs(ctx.trunc.lo), abs(ctx.trunc.hi), abs(ctx.trunc.value))
        c0b = _HALF / (ic.D * sigma_bound(ic.as_curve, radius)) * ctx.B
    tail_unit = 0 if ctx.rho_cert == 0 else _ceil_frac(ctx.rho_cert * ctx.B)
    tasks = []
    start = 1
    while start <= q_max:
        end = min(start + _CHUNK, q_max + 1)
        tasks.append((ctx.A_cert, ctx.B, start, end, expo_floor,
                      c0b.numerator, c0b.denominator, tail_unit))
        start = end
    parts = _run_chunks(_cert_block, tasks, threads)
    rows = []
    na = 0
    for sus, block_na in parts:
        na += block_na
        for q in sus:
            if tau is None:
                status, x0, x1, cur = _certificate_detail(real, q, ctx)
                xp = None
                if status != CERT_NOT_APPLICABLE:
                    pos, _ = _threshold_position(real, x1 ** curve.d_max, cur)
                    xp = pos == "below"
            else:
                status = certify_divisibility_tau(curve, real, q, tau)
                x0 = x1 = xp = None
                if status != CERT_NOT_APPLICABLE:
                    dec = decompose(real, q)
                    x0 = dec.x0
                    x1 = x0 // math.gcd(x0, scan_ic.delta)
            if status == CERT_NOT_APPLICABLE:
                na += 1
            else:
                rows.append(CertRecord(q=q, x0=x0, x1=x1, status=status,
                                       xprime_below=xp))
    return CertifySummary(q_max=q_max, depth=ctx.depth,
                          checked=tuple(rows), not_applicable=na)


def convergent_image_check(curve: Curve, real: ProgrammaticReal,
                           x0: int, y0: int) -> bool:
    """Is P_j(y0/x0) a convergent of P_j(z) for every coordinate?

    For a certified decomposition of a good denominator the image of the
    approximating fraction must appear in the convergent list of the
    image point, coordinate by coordinate.  Decided through certified
    digits of an enclosure of P_j(z); deepens until the certified
    convergent denominators pass the target's, so both membership and
    non-membership are certified.
    """
    curve.require_graph()
    if x0 < 1:
        raise PreconditionError("x0 must be positive")
    point = Fraction(y0, x0)
    for p in curve.polys:
        if p.is_zero:
            continue
        target = p(point)
        if not _image_is_convergent(real, p, target):
            return False
    return True


def _image_is_convergent(real: ProgrammaticReal, p, target: Fraction) -> bool:
    depth = max(1, real.levels())
    for _ in range(10):
        t = real.truncation(depth)
        radius = max(abs(t.lo), abs(t.hi), abs(t.value))
        w = t.tail_radius
        v = p(t.value)
        slope = p.derivative().abs_coeff_sum_at(radius)
        lo, hi = v - slope * w, v + slope * w
        digits = certified_digits(lo, hi, 400)
        if digits:
            convs = convergents(tuple(digits))
            for c in convs:
                if c.p == target.numerator and c.q == target.denominator:
                    return True
            if convs[-1].q > target.denominator and len(convs) >= 2:
                # denominators grow from here on: absence is final
                return False
        if not real.extendable and depth >= real.levels():
            raise EnclosureError(
                "cannot certify convergent membership at available depth")
        depth *= 2
    raise EnclosureError("convergent membership did not stabilise")


def check_nkoro(curve: Curve, real: ProgrammaticReal, q: int,
                target: Fraction,
                warmup_floor: Optional[int] = None) -> NkoroResult:
    """Certified structural inequalities for one approximation denominator.

    Under the smallness hypothesis err(q) <= q**-target, the reduced
    decomposition q * z ~ M0 * y0 / x0 must satisfy

        q * D  >= x0**d_max
        M0 * D >= x0**(d_max - 1)
        |z * x0 - y0| <= x0**-(d_max * (target + 1) - 1)

    with D the leading-coefficient power of the cleared curve.  All
    three are checked exactly.  target equal to the curve diameter is
    established through the certificate threshold; larger targets check
    the decay directly and stay advisory below the warm-up floor.
    """
    curve.require_graph()
    if q < 1:
        raise PreconditionError("q must be positive")
    target = Fraction(target)
    prof = profile(curve)
    t_diam = prof.diameter
    if target < t_diam:
        raise PreconditionError(
            f"target decay {target} is below the curve diameter {t_diam}")
    ic = integerize(curve)
    ctx = _scan_context(curve, real, q, ic, prof, _TARGET_BITS[0])
    if target == t_diam:
        route = "threshold"
        try:
            pos, ctx = _threshold_position(real, q, ctx)
            hyp = "holds" if pos == "below" else "fails"
        except EnclosureError:
            hyp = "undecided"
    else:
        route = "decay"
        hyp = _decay_position(real, q, target, ctx)
    advisory = (hyp != "holds") or (route == "decay"
                                    and (warmup_floor is None
                                         or q < warmup_floor))
    dec = decompose(real, q)
    d_top = curve.d_max
    holds_support = q * ic.D >= dec.x0 ** d_top
    holds_weight = dec.m0 * ic.D >= dec.x0 ** (d_top - 1)
    expo = d_top * (target + 1) - 1
    holds_gap = _gap_certified(real, dec, expo)
    return NkoroResult(q=q, target=target, route=route, hypothesis=hyp,
                       advisory=advisory, decomp=dec,
                       holds_support=holds_support,
                       holds_weight=holds_weight, holds_gap=holds_gap)


def _decay_position(real: ProgrammaticReal, q: int, target: Fraction,
                    ctx: _EvalContext) -> str:
    """Certified side of err_cleared(q) <= q**-target, or "undecided".

    An exact boundary hit (the error equal to the bound up to the tail
    enclosure) cannot separate at any depth; that is reported as
    undecided rather than an error, since the caller only downgrades
    the result to advisory.
    """
    cur = ctx
    for _ in range(10):
        _, lo, hi = cur.err_bounds(q, cert=True)
        if hi == 0 or pow_check_le(hi, -target.numerator, target.denominator,
                                   Fraction(q)):
            return "holds"
        if lo > 0 and not pow_check_le(lo, -target.numerator,
                                       target.denominator, Fraction(q)):
            return "fails"
        nxt = cur.deeper()
        if nxt is None:
            return "undecided"
        cur = nxt
    return "undecided"


def _gap_certified(real: ProgrammaticReal, dec: Decomposition,
                   expo: Fraction) -> bool:
    """Certified truth of |z * x0 - y0| <= x0**-expo."""
    x0, y0 = dec.x0, dec.y0
    bound_base = Fraction(x0)
    depth = max(1, real.levels())
    for _ in range(10):
        t = real.truncation(depth)
        lo_i = x0 * t.lo - y0
        hi_i = x0 * t.hi - y0
        if lo_i <= 0 <= hi_i:
            lo_abs = Fraction(0)
        else:
            lo_abs = min(abs(lo_i), abs(hi_i))
        hi_abs = max(abs(lo_i), abs(hi_i))
        if hi_abs == 0 or pow_check_le(hi_abs, -expo.numerator,
                                       expo.denominator, bound_base):
            return True
        if lo_abs > 0 and not pow_check_le(lo_abs, -expo.numerator,
                                           expo.denominator, bound_base):
            return False
        if not real.extendable and depth >= real.levels():
            raise EnclosureError(
                "gap inequality undecidable at available depth")
        depth *= 2
    raise EnclosureError("gap inequality did not separate")


def check_multiplicativity(curve: Curve, real: ProgrammaticReal,
                           x0: int, N: int) -> bool:
    """Exact scaling of the error along multiples of x0**d_max.

    With x = x0**d_max, requires the pair (N * x, c0) to sit below the
    certificate threshold, then checks err(M * x) == M * err(x) exactly
    on the working grid for every M = 1 .. N.  That equality pins the
    minimum over the first N multiples at M = 1.
    """
    curve.require_graph()
    if x0 < 1 or N < 1:
        raise PreconditionError("x0 and N must be positive")
    prof = profile(curve)
    ic = integerize(curve)
    x_t = x0 ** curve.d_max
    ctx = _scan_context(curve, real, N * x_t, ic, prof, _TARGET_BITS[0])
    pos, ctx = _threshold_position(real, N * x_t, ctx)
    if pos != "below":
        raise PreconditionError(
            f"pair (N*x0**d, c0) misses the smallness threshold at {int_desc(N * x_t)}")
    m1 = ctx.dist_num(x_t, cert=True)
    return all(ctx.dist_num(M * x_t, cert=True) == M * m1
               for M in range(1, N + 1))


def theta_estimate(curve: Curve, real: ProgrammaticReal, depth: int,
                   q_max: int, threads: int = 1) -> ThetaEstimate:
    """Best observed exponent from structural plus exhaustive records.

    Runs both scans and merges the record lists (exhaustive wins on a
    shared q).  The estimate is the largest exponent over merged records
    with q >= max(2, isqrt(q_max)): the exponent is an asymptotic
    quantity, and records from the lower half of the log range reflect
    start-up noise rather than approximation quality, so they stay in
    the trace but not in the estimate.
    """
    if real.known_rational:
        raise PreconditionError("exponent estimation needs an irrational input")
    ex = exhaustive_search(curve, real, q_max, threads)
    st = structural_search(curve, real, depth)
    by_q = {}
    for rec in st.records:
        by_q[rec.q] = rec
    for rec in ex.records:
        by_q[rec.q] = rec
    records = tuple(by_q[q] for q in sorted(by_q))
    q_floor = max(2, math.isqrt(q_max))
    expos = [r.exponent for r in records
             if r.q >= q_floor and r.exponent is not None]
    value = max(expos) if expos else None
    return ThetaEstimate(value=value, records=records,
                         exhaustive=ex, structural=st)


def verify_theorem_jox(curve: Curve, length: Fraction, depth: int) -> JoxReport:
    """Measure the predicted exponent identity on a constructed input.

    Builds a series whose denominator growth exponent is length, scans
    the curve, and compares the best observed exponent against
    (length - d + 1) / d for top degree d.  The identity only applies
    when that prediction exceeds the curve diameter; otherwise the
    hypothesis fails and no measurement is attempted.
    """
    curve.require_graph()
    length = Fraction(length)
    prof = profile(curve)
    d_top = prof.d_max
    predicted = (length - d_top + 1) / d_top
    if predicted <= prof.diameter:
        raise PreconditionError(
            f"predicted exponent {predicted} does not exceed the curve "
            f"diameter {prof.diameter}; the identity gives no information")
    from .factory import make_lambda1
    real = make_lambda1(length, b1=2, depth=depth + 2)
    theta = theta_estimate(curve, real, depth, 1000)
    lam = lambda1_estimate(real, depth + 1)
    measured = theta.value
    deviation = None if measured is None else float(measured - predicted)
    lam_est = lam.estimate
    if lam_est is not None and not isinstance(lam_est, Fraction):
        lam_est = Fraction(lam_est).limit_denominator(10 ** 9)
    return JoxReport(length=length, degree=d_top, diameter=prof.diameter,
                     predicted=predicted, measured=measured,
                     deviation=deviation, lambda1_measured=lam_est,
                     theta=theta, witnesses=theta.structural.records)
