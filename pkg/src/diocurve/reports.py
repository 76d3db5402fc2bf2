"""Byte-reproducible serialization of analysis results.

Every writer here is deterministic: JSON is emitted with sorted keys and
fixed two-space indentation, CSV with a pinned header and bare newline
line endings, and integers are rendered as full decimal strings however
large they are.  Floats never reach a file as repr output; fractional
quantities travel as num/den string pairs and rounded exponents in fixed
six-digit notation.  Running the same experiment twice, with any thread
count, must produce identical bytes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .contfrac import Decomposition
from .engine import (ApproxRecord, CertifySummary, JoxReport, NkoroResult,
                     SearchReport, ThetaEstimate)
from .factory import MembershipReport, PsiConstruction, PsiSpec
from .polycurve import (BoundResult, Curve, CurveProfile, IntegerizedCurve,
                        Normalization)
from .poly import format_poly

SCHEMA = "diocurve-report/1"

SEARCH_COLUMNS = ("q", "err_num", "err_den", "exponent", "x0", "M0", "x1",
                  "cert")


def decimal_str(n: int) -> str:
    """Full decimal rendering of an integer of any size.

    The interpreter caps int-to-str conversion by default; the cap is
    lifted around the conversion and restored afterwards.
    """
    limit = sys.get_int_max_str_digits()
    sys.set_int_max_str_digits(0)
    try:
        return str(n)
    finally:
        sys.set_int_max_str_digits(limit)


def frac_obj(x: Optional[Fraction]) -> Optional[dict]:
    if x is None:
        return None
    return {"num": decimal_str(x.numerator), "den": decimal_str(x.denominator)}


def fixed6(x: Optional[Fraction]) -> str:
    """Exact fixed-point rendering with six decimals, empty for None."""
    if x is None:
        return ""
    scaled = round(x * 10**6)
    sign = "-" if scaled < 0 else ""
    whole, part = divmod(abs(scaled), 10**6)
    return f"{sign}{whole}.{part:06d}"


def _float6(x: Optional[float]) -> Optional[str]:
    return None if x is None else f"{x:.6f}"


def _opt_int(n: Optional[int]) -> Optional[str]:
    return None if n is None else decimal_str(n)


def json_bytes(payload: dict) -> bytes:
    text = json.dumps(payload, sort_keys=True, indent=2)
    return (text + "\n").encode("utf-8")


def write_json(path: str, payload: dict) -> None:
    with open(path, "wb") as fh:
        fh.write(json_bytes(payload))


def csv_bytes(header: Sequence[str], rows: Sequence[Sequence[str]]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue().encode("utf-8")


def write_csv(path: str, header: Sequence[str],
              rows: Sequence[Sequence[str]]) -> None:
    with open(path, "wb") as fh:
        fh.write(csv_bytes(header, rows))


def _decomp_obj(d: Optional[Decomposition]) -> Optional[dict]:
    if d is None:
        return None
    return {"x0": decimal_str(d.x0), "y0": decimal_str(d.y0),
            "m0": decimal_str(d.m0)}


def record_obj(rec: ApproxRecord) -> dict:
    return {
        "q": decimal_str(rec.q),
        "err": frac_obj(rec.err),
        "exponent": None if rec.exponent is None else fixed6(rec.exponent),
        "decomp": _decomp_obj(rec.decomp),
        "x1": _opt_int(rec.x1),
        "cert": rec.cert,
    }


def search_rows(report: SearchReport) -> list[tuple[str, ...]]:
    """CSV rows for a scan, one per record, in the pinned column order."""
    rows = []
    for r in report.records:
        rows.append((decimal_str(r.q),
                     decimal_str(r.err.numerator),
                     decimal_str(r.err.denominator),
                     fixed6(r.exponent),
                     "" if r.x0 is None else decimal_str(r.x0),
                     "" if r.m0 is None else decimal_str(r.m0),
                     "" if r.x1 is None else decimal_str(r.x1),
                     r.cert))
    return rows


def search_obj(report: SearchReport) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "search",
        "method": report.method,
        "q_max": _opt_int(report.q_max),
        "depth": report.depth,
        "candidates": (None if report.candidates is None
                       else [decimal_str(c) for c in report.candidates]),
        "records": [record_obj(r) for r in report.records],
        "theta_estimate": (None if report.theta_estimate is None
                           else fixed6(report.theta_estimate)),
    }


def certify_obj(summary: CertifySummary) -> dict:
    checked = [{"q": decimal_str(r.q),
                "x0": decimal_str(r.x0),
                "x1": decimal_str(r.x1),
                "status": r.status,
                "xprime_below": r.xprime_below}
               for r in summary.checked]
    return {
        "schema": SCHEMA,
        "kind": "certify",
        "q_max": summary.q_max,
        "depth": summary.depth,
        "checked": checked,
        "counts": {
            "pass": len(summary.passes),
            "violation": len(summary.violations),
            "not_applicable": summary.not_applicable,
        },
    }


def nkoro_obj(result: NkoroResult) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "structural-inequalities",
        "q": decimal_str(result.q),
        "target": frac_obj(result.target),
        "route": result.route,
        "hypothesis": result.hypothesis,
        "advisory": result.advisory,
        "decomp": _decomp_obj(result.decomp),
        "holds_support": result.holds_support,
        "holds_weight": result.holds_weight,
        "holds_gap": result.holds_gap,
    }


def theta_obj(est: ThetaEstimate) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "theta",
        "value": None if est.value is None else fixed6(est.value),
        "records": [record_obj(r) for r in est.records],
        "exhaustive": search_obj(est.exhaustive),
        "structural": search_obj(est.structural),
    }


def jox_obj(report: JoxReport) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "exponent-identity",
        "length": frac_obj(report.length),
        "degree": report.degree,
        "diameter": report.diameter,
        "predicted": frac_obj(report.predicted),
        "measured": (None if report.measured is None
                     else fixed6(report.measured)),
        "deviation": _float6(report.deviation),
        "lambda1_measured": frac_obj(report.lambda1_measured),
        "theta": theta_obj(report.theta),
        "witnesses": [record_obj(r) for r in report.witnesses],
    }


def membership_obj(report: MembershipReport) -> dict:
    checks = [{"q": decimal_str(w.q),
               "within_psi": w.within_psi,
               "above_c": w.above_c}
              for w in report.witness_checks]
    return {
        "schema": SCHEMA,
        "kind": "membership",
        "c": frac_obj(report.c),
        "q_window": report.q_window,
        "witness_checks": checks,
        "offenders": [decimal_str(q) for q in report.offenders],
        "undecided": [decimal_str(q) for q in report.undecided],
        "vacuous_skipped": report.vacuous_skipped,
        "scanned": report.scanned,
        "ok": report.ok,
    }


def construction_obj(cons: PsiConstruction, psi: PsiSpec) -> dict:
    """Transcript of a prescribed-rate construction.

    The real itself travels as its round-trippable spec string; each
    level carries the witness, the measured and target bit sizes, and
    the certified sandwich constant for that level.
    """
    levels = [{"q": decimal_str(lv.q),
               "err_bits": _float6(lv.err_bits),
               "psi_bits": _float6(lv.psi_bits),
               "ratio": _float6(lv.ratio),
               "ratio_bound": frac_obj(lv.ratio_bound),
               "upper_certified": lv.upper_certified}
              for lv in cons.levels]
    return {
        "schema": SCHEMA,
        "kind": "construction",
        "psi": psi.describe(),
        "real": cons.real.describe(),
        "witnesses": [decimal_str(q) for q in cons.witnesses],
        "levels": levels,
        "c_prime": frac_obj(cons.c_prime),
    }


def bound_obj(lam: Fraction, result: BoundResult) -> dict:
    return {
        "lambda": frac_obj(lam),
        "lower": frac_obj(result.lower),
        "upper": frac_obj(result.upper),
        "exact": result.exact,
        "provenance": result.provenance,
        "note": result.note,
    }


def bounds_table_obj(rows: Sequence[tuple[Fraction, BoundResult]]) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "dimension-bounds",
        "rows": [bound_obj(lam, res) for lam, res in rows],
    }


def _matrix_obj(matrix) -> list:
    return [[frac_obj(entry) for entry in row] for row in matrix]


def analyze_obj(curve: Curve, prof: CurveProfile, ic: IntegerizedCurve,
                norm: Normalization) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "analyze",
        "curve": [format_poly(p) for p in curve.polys],
        "k": prof.k,
        "type": list(prof.type_vec),
        "diameter": prof.diameter,
        "d_max": prof.d_max,
        "m": prof.m,
        "degenerate": prof.degenerate,
        "normalized_type": list(prof.norm_type_vec),
        "normalized_diameter": prof.norm_diameter,
        "K": decimal_str(ic.K),
        "Ks": [decimal_str(k) for k in ic.ks],
        "delta": decimal_str(ic.delta),
        "D": decimal_str(ic.D),
        "normalized_curve": [format_poly(p) for p in norm.curve.polys],
        "transform": _matrix_obj(norm.matrix),
        "constants": [frac_obj(c) for c in norm.constants],
    }


@dataclass(frozen=True)
class ExperimentManifest:
    """Record of what produced a set of output files.

    parameters is a sorted tuple of (name, value) string pairs; digest
    is a SHA-256 over the raw input texts, so rerunning the same command
    on the same inputs yields an identical manifest.  Nothing here
    depends on wall time or thread count.
    """

    command: str
    curve_source: str
    real_spec: str
    parameters: tuple[tuple[str, str], ...]
    outputs: tuple[str, ...]
    version: str
    digest: str


def make_manifest(command: str, curve_source: str, real_spec: str,
                  parameters: dict, outputs: Sequence[str],
                  inputs: Sequence[str]) -> ExperimentManifest:
    """Build a manifest; inputs are the raw texts the digest covers."""
    params = tuple(sorted((str(k), str(v)) for k, v in parameters.items()))
    h = hashlib.sha256()
    for part in inputs:
        h.update(part.encode("utf-8"))
        h.update(b"\x00")
    return ExperimentManifest(command=command, curve_source=curve_source,
                              real_spec=real_spec, parameters=params,
                              outputs=tuple(outputs), version=__version__,
                              digest=h.hexdigest())


def manifest_obj(m: ExperimentManifest) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "manifest",
        "command": m.command,
        "curve_source": m.curve_source,
        "real_spec": m.real_spec,
        "parameters": {k: v for k, v in m.parameters},
        "outputs": list(m.outputs),
        "version": m.version,
        "digest": m.digest,
    }
