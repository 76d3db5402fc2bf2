"""Batch front end: run analyses from the shell and emit report files.

Exit codes are a contract: 0 success, 1 parse or usage error, 2 a
hypothesis or precondition rejection, 3 a numeric certification
failure (an enclosure that would not separate, or a certificate
VIOLATION).  Report files embed a manifest of the inputs that produced
them; rerunning the same command on the same inputs writes identical
bytes whatever the thread count.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional

from . import __version__, reports
from .contfrac import lambda1_estimate
from .engine import CertifySummary, certify_scan, theta_estimate, verify_theorem_jox
from .errors import (CurveFormatError, EnclosureError, InsufficientDepthError,
                     PreconditionError, RealFormatError)
from .factory import PsiSpec, make_prescribed_psi, verify_membership
from .numutil import format_fraction, int_desc, parse_fraction
from .polycurve import (dimension_bounds, format_poly, integerize, normalize,
                        parse_curve, profile)
from .reals import parse_real

USAGE_EXIT = 1
REJECT_EXIT = 2
NUMERIC_EXIT = 3


class _Cli(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the contract reserves 2
    # for hypothesis rejections, so remap to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(USAGE_EXIT)


def _rat(tok: str) -> Fraction:
    try:
        return parse_fraction(tok)
    except CurveFormatError:
        pass
    try:
        return Fraction(tok.strip())
    except (ValueError, ZeroDivisionError):
        raise CurveFormatError(f"bad rational value {tok!r}")


def _lambda_range(tok: str) -> list[Fraction]:
    """Single value 'Q' or inclusive range 'N..M[..STEP]'."""
    if ".." not in tok:
        return [_rat(tok)]
    parts = tok.split("..")
    if len(parts) not in (2, 3):
        raise CurveFormatError(f"bad range {tok!r}; use N..M or N..M..STEP")
    lo = _rat(parts[0])
    hi = _rat(parts[1])
    step = _rat(parts[2]) if len(parts) == 3 else Fraction(1)
    if step <= 0:
        raise CurveFormatError("range step must be positive")
    if hi < lo:
        raise CurveFormatError("range end must not precede its start")
    out = []
    v = lo
    while v <= hi:
        out.append(v)
        v += step
    return out


def _read_curve(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CurveFormatError(f"cannot read curve file {path}: {exc}")
    return parse_curve(text), text


def _manifest(args, command: str, parameters: dict,
              curve_text: str, real_spec: str = "") -> reports.ExperimentManifest:
    outputs = [p for p in (getattr(args, "json", None),
                           getattr(args, "csv", None)) if p]
    inputs = [curve_text, real_spec]
    inputs.extend(f"{k}={v}" for k, v in sorted(parameters.items()))
    return reports.make_manifest(command, args.curve, real_spec,
                                 parameters, outputs, inputs)


def _emit(args, payload: dict, manifest: reports.ExperimentManifest,
          csv_header=None, csv_rows=None) -> None:
    if getattr(args, "json", None):
        payload = dict(payload)
        payload["manifest"] = reports.manifest_obj(manifest)
        reports.write_json(args.json, payload)
        print(f"wrote {args.json}")
    if getattr(args, "csv", None) and csv_header is not None:
        reports.write_csv(args.csv, csv_header, csv_rows or [])
        print(f"wrote {args.csv}")


def _print_matrix(matrix) -> None:
    for row in matrix:
        print("  [" + "  ".join(format_fraction(v) for v in row) + "]")


def cmd_analyze(args) -> int:
    curve, text = _read_curve(args.curve)
    prof = profile(curve)
    ic = integerize(curve)
    norm = normalize(curve)
    print(f"k: {prof.k}")
    print(f"type: ({', '.join(str(d) for d in prof.type_vec)})")
    print(f"diameter: {prof.diameter}")
    print(f"d_max: {prof.d_max}")
    print(f"delta: {ic.delta}")
    print(f"D: {int_desc(ic.D)}")
    print(f"K: {ic.K}")
    print(f"degenerate: {'yes' if prof.degenerate else 'no'}")
    print(f"normalized type: ({', '.join(str(d) for d in prof.norm_type_vec)})")
    print(f"normalized diameter: {prof.norm_diameter}")
    print("normalized curve:")
    for p in norm.curve.polys:
        print(f"  {format_poly(p)}")
    print("transform:")
    _print_matrix(norm.matrix)
    man = _manifest(args, "analyze", {}, text)
    _emit(args, reports.analyze_obj(curve, prof, ic, norm), man)
    return 0


def cmd_normalize(args) -> int:
    curve, text = _read_curve(args.curve)
    norm = normalize(curve)
    prof = profile(curve)
    print(f"degenerate: {'yes' if prof.degenerate else 'no'}")
    print(f"normalized type: ({', '.join(str(d) for d in prof.norm_type_vec)})")
    print("normalized curve:")
    for p in norm.curve.polys:
        print(f"  {format_poly(p)}")
    print("transform:")
    _print_matrix(norm.matrix)
    man = _manifest(args, "normalize", {}, text)
    _emit(args, reports.analyze_obj(curve, prof, integerize(curve), norm), man)
    return 0


_PREDICT_COLUMNS = ("lambda", "lower", "upper", "exact", "provenance")
_CERTIFY_COLUMNS = ("q", "x0", "x1", "status", "xprime_below")


def _certify_rows(summary):
    return [(str(r.q), str(r.x0), str(r.x1), r.status,
             "" if r.xprime_below is None else str(r.xprime_below).lower())
            for r in summary.checked]


def cmd_predict(args) -> int:
    curve, text = _read_curve(args.curve)
    prof = profile(curve)
    lams = _lambda_range(args.lam)
    for lam in lams:
        if lam <= 0:
            raise PreconditionError("lambda must be positive")
    rows = [(lam, dimension_bounds(prof, lam)) for lam in lams]
    for lam, res in rows:
        tag = "exact" if res.exact else "bounds"
        span = (format_fraction(res.lower) if res.exact
                else f"[{format_fraction(res.lower)}, {format_fraction(res.upper)}]")
        note = f"  ({res.note})" if res.note else ""
        print(f"lambda={format_fraction(lam)}: {span} {tag} "
              f"({res.provenance}){note}")
    man = _manifest(args, "predict", {"lambda": args.lam}, text)
    csv_rows = [(format_fraction(lam), format_fraction(res.lower),
                 format_fraction(res.upper), str(res.exact).lower(),
                 res.provenance)
                for lam, res in rows]
    _emit(args, reports.bounds_table_obj(rows), man,
          _PREDICT_COLUMNS, csv_rows)
    return 0


def cmd_exponent(args) -> int:
    curve, text = _read_curve(args.curve)
    real = parse_real(args.real)
    if real.known_rational:
        print("λ₁ infinite: rational input", file=sys.stderr)
        return REJECT_EXIT
    lam = lambda1_estimate(real, args.depth)
    th = theta_estimate(curve, real, args.depth, args.qmax, threads=args.threads)
    if lam.estimate is None:
        print("lambda1: none")
    elif isinstance(lam.estimate, Fraction):
        print(f"lambda1: {format_fraction(lam.estimate)}")
    else:
        print(f"lambda1: {lam.estimate:.6f}")
    theta_txt = "none" if th.value is None else reports.fixed6(th.value)
    print(f"theta: {theta_txt}")
    print(f"records: {len(th.exhaustive.records)} exhaustive, "
          f"{len(th.structural.records)} structural")
    params = {"depth": args.depth, "q_max": args.qmax}
    man = _manifest(args, "exponent", params, text, args.real)
    payload = reports.theta_obj(th)
    payload["kind"] = "exponent"
    if lam.estimate is None:
        payload["lambda1"] = None
    elif isinstance(lam.estimate, Fraction):
        payload["lambda1"] = reports.frac_obj(lam.estimate)
    else:
        payload["lambda1"] = f"{lam.estimate:.6f}"
    merged = reports.SearchReport(method="merged", q_max=args.qmax,
                                  depth=max(th.exhaustive.depth,
                                            th.structural.depth),
                                  candidates=None, records=th.records)
    _emit(args, payload, man, reports.SEARCH_COLUMNS,
          reports.search_rows(merged))
    return 0


def cmd_certify(args) -> int:
    curve, text = _read_curve(args.curve)
    real = parse_real(args.real)
    if args.qmax == 0:
        summary = CertifySummary(q_max=0, depth=0, checked=(),
                                 not_applicable=0)
    else:
        summary = certify_scan(curve, real, args.qmax, threads=args.threads)
    print(f"pass: {len(summary.passes)}")
    print(f"VIOLATION: {len(summary.violations)}")
    print(f"not-applicable: {summary.not_applicable}")
    for q in summary.violations:
        print(f"violation at q={q}")
    params = {"q_max": args.qmax}
    man = _manifest(args, "certify", params, text, args.real)
    _emit(args, reports.certify_obj(summary), man,
          _CERTIFY_COLUMNS, _certify_rows(summary))
    return NUMERIC_EXIT if summary.violations else 0


def cmd_verify(args) -> int:
    curve, text = _read_curve(args.curve)
    length = _rat(args.lam)
    rep = verify_theorem_jox(curve, length, args.depth)
    print(f"predicted: {format_fraction(rep.predicted)}")
    measured = "none" if rep.measured is None else reports.fixed6(rep.measured)
    print(f"measured: {measured}")
    if rep.deviation is not None:
        print(f"deviation: {rep.deviation:+.6f}")
    if rep.lambda1_measured is not None:
        print(f"lambda1 measured: {format_fraction(rep.lambda1_measured)}")
    params = {"L": args.lam, "depth": args.depth}
    man = _manifest(args, "verify", params, text)
    _emit(args, reports.jox_obj(rep), man,
          reports.SEARCH_COLUMNS, reports.search_rows(rep.theta.structural))
    return 0


def cmd_construct(args) -> int:
    curve, text = _read_curve(args.curve)
    lam = _rat(args.lam)
    c = _rat(args.c)
    psi = PsiSpec.power(lam)
    cons = make_prescribed_psi(curve, psi, depth=args.depth)
    spec = cons.real.describe()
    if len(spec) > 200:
        # full spec goes in the JSON report; keep the terminal line short
        spec = f"dyadic series, {spec.count(',') + 1} terms"
    print(f"real: {spec}")
    print(f"witnesses: {', '.join(int_desc(q) for q in cons.witnesses)}")
    print(f"c_prime: {format_fraction(cons.c_prime)}")
    mem = verify_membership(curve, cons.real, psi, c, args.qmax,
                            cons.witnesses)
    print(f"membership: {'pass' if mem.ok else 'FAIL'} "
          f"(window {mem.q_window}, vacuous {mem.vacuous_skipped})")
    for q in mem.offenders:
        print(f"offender at q={q}")
    params = {"lambda": args.lam, "c": args.c, "depth": args.depth,
              "q_max": args.qmax}
    man = _manifest(args, "construct", params, text)
    payload = reports.construction_obj(cons, psi)
    payload["membership"] = reports.membership_obj(mem)
    wrows = [(str(w.q), str(w.within_psi).lower(), str(w.above_c).lower())
             for w in mem.witness_checks]
    _emit(args, payload, man, ("q", "within_psi", "above_c"), wrows)
    return 0 if mem.ok else NUMERIC_EXIT


def cmd_explore(args) -> int:
    """Exploratory sweep in the slow-decay regime; reports, never asserts."""
    curve, text = _read_curve(args.curve)
    prof = profile(curve)
    tau = _rat(args.lam)
    if tau < 1:
        raise PreconditionError("explore needs tau >= 1")
    bounds = dimension_bounds(prof, tau)
    span = (format_fraction(bounds.lower) if bounds.exact
            else f"[{format_fraction(bounds.lower)}, "
                 f"{format_fraction(bounds.upper)}]")
    print(f"bounds at tau={format_fraction(tau)}: {span} ({bounds.provenance})")
    payload = {
        "schema": reports.SCHEMA,
        "kind": "explore",
        "tau": reports.frac_obj(tau),
        "bounds": reports.bound_obj(tau, bounds),
        "tau_scan": None,
    }
    real_spec = args.real or ""
    csv_rows = []
    if args.real:
        real = parse_real(args.real)
        summary = certify_scan(curve, real, args.qmax, tau=tau,
                               threads=args.threads)
        print(f"tau scan: pass {len(summary.passes)}, "
              f"VIOLATION {len(summary.violations)}, "
              f"not-applicable {summary.not_applicable}")
        payload["tau_scan"] = reports.certify_obj(summary)
        csv_rows = _certify_rows(summary)
    params = {"tau": args.lam, "q_max": args.qmax}
    man = _manifest(args, "explore", params, text, real_spec)
    _emit(args, payload, man, _CERTIFY_COLUMNS, csv_rows)
    return 0


def build_parser() -> _Cli:
    top = _Cli(prog="diocurve",
               description="exact Diophantine approximation on polynomial curves")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, func, helptext, *, real=False, lam=None, c=False,
            depth=None, qmax=None, threads=False):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--curve", required=True, metavar="FILE",
                       help="curve file, one polynomial per line")
        if real is not False:
            p.add_argument("--real", required=(real == "required"),
                           metavar="SPEC", help="real spec (rat:/dyadic:/cf:)")
        if lam is not None:
            required, helplam = lam
            p.add_argument("--lambda", dest="lam", required=required,
                           metavar="Q", help=helplam)
        if c:
            p.add_argument("--c", required=True, metavar="Q",
                           help="comparison constant")
        if depth is not None:
            p.add_argument("--depth", type=int, default=depth, metavar="N")
        if qmax is not None:
            p.add_argument("--qmax", type=int, default=qmax, metavar="N")
        if threads:
            p.add_argument("--threads", type=int, default=1, metavar="N")
        p.add_argument("--json", metavar="PATH", help="write a JSON report")
        p.add_argument("--csv", metavar="PATH", help="write a CSV report")
        p.set_defaults(func=func)
        return p

    add("analyze", cmd_analyze, "curve invariants and normalization")
    add("normalize", cmd_normalize, "normalized form and transform only")
    add("predict", cmd_predict, "dimension bound table",
        lam=(True, "lambda value Q or range N..M[..STEP]"))
    add("exponent", cmd_exponent, "approximation exponent estimates",
        real="required", depth=8, qmax=1000, threads=True)
    add("certify", cmd_certify, "divisibility certificate sweep",
        real="required", qmax=1000, threads=True)
    add("verify", cmd_verify, "exponent identity check for a growth length",
        lam=(True, "growth length L"), depth=4)
    add("construct", cmd_construct, "real with a prescribed decay threshold",
        lam=(True, "power-law exponent: threshold x^-lambda"), c=True,
        depth=3, qmax=1000)
    add("explore", cmd_explore, "slow-decay regime data collection",
        real=True, lam=(True, "tau in the exploratory band"), qmax=1000,
        threads=True)
    return top


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CurveFormatError, RealFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except PreconditionError as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return REJECT_EXIT
    except (EnclosureError, InsufficientDepthError) as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return NUMERIC_EXIT


if __name__ == "__main__":
    sys.exit(main())
