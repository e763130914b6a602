"""Command-line front end.

    momenta analyze "pencil b0=1 broots=1,4 a0=1 aroots=2,3"
    momenta measure "bilinear a=1 b=1 c=1 d=1" --verify --out m.json
    momenta shift "bilinear a=1 b=1 c=2 d=3"
    momenta pfrac "ratio n0=1 nroots=1,4 d0=1 droots=2,3"
    momenta bessel --nu 0 0 1 2 3
    momenta verify "bilinear a=2 b=1 c=1 d=0"

Exit codes: 0 definitive pass, 1 definitive fail, 2 inconclusive,
64 usage or parse error, 74 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
import time
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import __version__
from .errors import (CoincidentRootError, DegreeError, DomainError,
                     HypothesisError, MomentaError, NearCoincidentPoleError,
                     OrderExhaustedError, ParseError, PreconditionError,
                     QuadratureError, TruncationError)
from .measures import Measure2D, measure_bilinear, measure_pencil, verify_moments
from .monotonicity import (Decision, MixedVerdict, bilinear_criterion,
                           bidegree21_sufficient, criteria_report, is_jcm_net)
from .operators import (cauchy_dual, dual_subnormality_decision,
                        isometry_report, shift_from_poly)
from .poly_core import (BilinearPoly, FactoredPoly, PencilPoly,
                        net_from_pencil, partial_fractions)
from .serialize import dumps
from .special import bessel_I, bessel_J

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE, EXIT_IO = 0, 1, 2, 64, 74
DEFAULT_ORDER = 8
DEFAULT_NET = 24
MEASURE_TOL = 1e-6

REPORT_SCHEMA = {
    "type": "object",
    "required": ["command", "input", "verdict", "justification", "exit_code", "details", "config"],
    "properties": {
        "command": {"enum": ["analyze", "measure", "shift", "pfrac", "bessel", "verify"]},
        "input": {"type": ["object", "null"]},
        "verdict": {"type": "string"},
        "justification": {"type": "string"},
        "exit_code": {"enum": [0, 1, 2]},
        "details": {"type": "object"},
        "config": {"type": "object"},
        "timing": {"type": "object"},
    },
    "additionalProperties": False,
}


# ------------------------------------------------------------------ spec grammar

GRAMMAR = {
    "bilinear": {"a": "num", "b": "num", "c": "num", "d": "num"},
    "pencil": {"b0": "num", "broots": "list", "a0": "num", "aroots": "list"},
    "ratio": {"n0": "num", "nroots": "list", "d0": "num", "droots": "list"},
}
_NUM = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
_RAT = re.compile(r"[+-]?\d+/\d+$")


@dataclass(frozen=True)
class PolySpec:
    kind: str
    values: dict
    text: str

    def build(self):
        v = self.values
        if self.kind == "bilinear":
            return BilinearPoly(v["a"], v["b"], v["c"], v["d"])
        if self.kind == "pencil":
            return PencilPoly(b=FactoredPoly(v["b0"], tuple(v["broots"])),
                              a=FactoredPoly(v["a0"], tuple(v["aroots"])))
        return (FactoredPoly(v["n0"], tuple(v["nroots"])), FactoredPoly(v["d0"], tuple(v["droots"])))

    def to_dict(self):
        return {"kind": self.kind, "text": self.text, **self.values}


def _position(text: str, offset: int):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _number(tok: str, text: str, offset: int) -> float:
    if _RAT.match(tok):
        p, q = tok.split("/")
        if int(q) == 0:
            raise ParseError("zero denominator", *_position(text, offset))
        return float(Fraction(int(p), int(q)))
    if _NUM.match(tok):
        return float(tok)
    raise ParseError(f"expected a number or p/q, got {tok!r}", *_position(text, offset))


def _json_number(v, text):
    if isinstance(v, bool):
        raise ParseError("expected a number, got a boolean", 1, 1)
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, str):
        return _number(v.strip(), text, 0)
    raise ParseError(f"expected a number, got {type(v).__name__}", 1, 1)


def _parse_json(text: str) -> PolySpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    if not isinstance(obj, dict) or obj.get("kind") not in GRAMMAR:
        raise ParseError(f"JSON spec needs \"kind\" in {sorted(GRAMMAR)}", 1, 1)
    kind = obj["kind"]
    fields = GRAMMAR[kind]
    extra = set(obj) - set(fields) - {"kind"}
    if extra:
        raise ParseError(f"unknown key {sorted(extra)[0]!r} for {kind}", 1, 1)
    values = {}
    for key, typ in fields.items():
        if key not in obj:
            raise ParseError(f"missing key {key!r} for {kind}", 1, 1)
        if typ == "num":
            values[key] = _json_number(obj[key], text)
        else:
            if not isinstance(obj[key], list):
                raise ParseError(f"{key} must be a list", 1, 1)
            values[key] = [_json_number(x, text) for x in obj[key]]
    return PolySpec(kind, values, text)


def parse_spec(text: str) -> PolySpec:
    """Parse a polynomial spec; errors carry the 1-based line and column."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_json(text)
    tokens = [(m.group(0), m.start()) for m in re.finditer(r"\S+", text)]
    if not tokens:
        raise ParseError("empty spec", 1, 1)
    kind, off = tokens[0]
    if kind not in GRAMMAR:
        raise ParseError(f"expected one of {sorted(GRAMMAR)}, got {kind!r}", *_position(text, off))
    fields = GRAMMAR[kind]
    values: dict = {}
    for tok, off in tokens[1:]:
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}", *_position(text, off))
        key, raw = tok.split("=", 1)
        if key not in fields:
            raise ParseError(f"unknown key {key!r} for {kind}", *_position(text, off))
        if key in values:
            raise ParseError(f"duplicate key {key!r}", *_position(text, off))
        voff = off + len(key) + 1
        if fields[key] == "num":
            if not raw:
                raise ParseError(f"missing value for {key}", *_position(text, voff))
            values[key] = _number(raw, text, voff)
        else:
            items, pos = [], voff
            if raw:
                for item in raw.split(","):
                    if not item:
                        raise ParseError("empty list entry", *_position(text, pos))
                    items.append(_number(item, text, pos))
                    pos += len(item) + 1
            values[key] = items
    for key in fields:
        if key not in values:
            raise ParseError(f"missing key {key!r} for {kind}", *_position(text, len(text)))
    return PolySpec(kind, values, text)


# ------------------------------------------------------------------ helpers


class CliError(Exception):
    def __init__(self, msg, code):
        super().__init__(msg)
        self.code = code


def _max_order(args) -> int:
    cap = os.environ.get("MOMENTA_MAX_ORDER")
    if cap is not None:
        try:
            cap = int(cap)
        except ValueError:
            raise CliError(f"MOMENTA_MAX_ORDER must be an integer, got {cap!r}", EXIT_USAGE) from None
        if args.order > cap:
            raise CliError(f"order {args.order} exceeds the cap MOMENTA_MAX_ORDER={cap}", EXIT_USAGE)
    return args.order


def _spec_of(args, kinds):
    spec = parse_spec(" ".join(args.spec))
    if spec.kind not in kinds:
        raise CliError(f"{args.command} expects a {' or '.join(kinds)} spec, got {spec.kind}", EXIT_USAGE)
    return spec, spec.build()


def _as_bilinear(p: PencilPoly) -> Optional[BilinearPoly]:
    """A pencil of bidegree at most (1, 1) written as a + b x + c y + d x y."""
    if p.b.degree > 1 or p.a.degree > 1:
        return None
    bc = p.b.coeffs()
    ac = p.a.coeffs()
    return BilinearPoly(bc[0], bc[1] if bc.size > 1 else 0.0, ac[0], ac[1] if ac.size > 1 else 0.0)


def _config(args, **extra):
    cfg = {"tol": args.tol, "order": args.order, "net_size": args.net_size}
    cfg.update(extra)
    return cfg


def _report(command, spec, verdict, justification, code, details, config):
    return {"command": command, "input": spec.to_dict() if spec is not None else None,
            "verdict": verdict, "justification": justification, "exit_code": code,
            "details": details, "config": config}


# ------------------------------------------------------------------ analyze


def cmd_analyze(args):
    spec, p = _spec_of(args, ("bilinear", "pencil"))
    K = _max_order(args)
    N = args.net_size
    if K > N:
        raise CliError(f"order {K} needs --net-size >= {K}", EXIT_USAGE)
    verdict = is_jcm_net(net_from_pencil(p, 1, N), K, args.tol)
    details = {"jcm_scan": verdict.to_dict()}
    bil = p if isinstance(p, BilinearPoly) else _as_bilinear(p)
    if bil is not None:
        M, ok = bilinear_criterion(bil)
        details["bilinear"] = {"a": bil.a, "b": bil.b, "c": bil.c, "d": bil.d, "M": M}
        if bil.b == bil.c == bil.d == 0:
            details["measure"] = "point mass at (1, 1)"
        if not ok:
            return _report("analyze", spec, "NotJCM",
                           f"bilinear criterion: M = bc - ad = {M:g} < 0", EXIT_FAIL, details, _config(args))
        return _report("analyze", spec, "JCM",
                       f"bilinear criterion: M = bc - ad = {M:g} >= 0", EXIT_PASS, details, _config(args))
    crit = criteria_report(p)
    details["criteria"] = crit.to_dict()
    if verdict.decision is Decision.FAIL:
        return _report("analyze", spec, "NotJCM", "difference witness: alternating difference "
                       f"at beta={verdict.witness[0]}, alpha={verdict.witness[1]} is negative",
                       EXIT_FAIL, details, _config(args))
    failed = [name for name in ("harmonic_N", "geometric_N", "arithmetic_N", "derivative_necessary")
              if getattr(crit, name) is False]
    if crit.detail.get("mixed") == MixedVerdict.NECESSARY_FAIL.value:
        failed.append("degree (1,2) necessary condition")
    if failed:
        return _report("analyze", spec, "NotJCM", "necessary condition fails: " + ", ".join(failed),
                       EXIT_FAIL, details, _config(args))
    minimal = all(r > 0 for r in p.a.roots)
    label = "JCM-minimal" if minimal else "JCM"
    if crit.interlacing_S:
        return _report("analyze", spec, label, "roots interlace: b1 <= a1 <= ... <= bk <= ak",
                       EXIT_PASS, details, _config(args))
    if crit.detail.get("bidegree2_sufficient"):
        return _report("analyze", spec, label, "degree-2 root condition: an a-root lies in [b1, b2] "
                       "and b1 + b2 <= a1 + a2", EXIT_PASS, details, _config(args))
    if crit.detail.get("mixed") == MixedVerdict.SUFFICIENT.value:
        return _report("analyze", spec, label, "degree (1,2) condition: b1 <= a1 <= b2",
                       EXIT_PASS, details, _config(args))
    return _report("analyze", spec, "Inconclusive",
                   f"no criterion applies and the difference scan found no violation up to order {K}",
                   EXIT_INCONCLUSIVE, details, _config(args))


# ------------------------------------------------------------------ measure / verify


def _build_measure(args, spec, p):
    """(measure, target polynomial, refusal reason or None)."""
    if isinstance(p, PencilPoly):
        bil = _as_bilinear(p)
        if bil is not None:
            p = bil
    if isinstance(p, BilinearPoly):
        M, ok = bilinear_criterion(p)
        if not ok and not args.allow_signed:
            raise PreconditionError(f"bilinear criterion fails (M = bc - ad = {M:g} < 0); "
                                    "pass --allow-signed for the signed density")
        return measure_bilinear(p, args.l, allow_signed=args.allow_signed), p
    if args.l != 1:
        raise DomainError("slice families are built for l = 1 only")
    crit = criteria_report(p)
    sufficient = crit.interlacing_S or crit.detail.get("bidegree2_sufficient")
    if not sufficient and not args.allow_signed:
        raise PreconditionError("no sufficient criterion holds (interlacing fails"
                                + (", degree-2 root condition fails" if p.a.degree == p.b.degree == 2 else "")
                                + "); pass --allow-signed to build the signed slice family")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        m = measure_pencil(p, t_grid=args.t_nodes)
    return m, p


def _grid_csv(m: Measure2D) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["s", "t", "value"])
    if m.grid is not None:
        for i, s in enumerate(m.grid["s_nodes"]):
            for j, t in enumerate(m.grid["t_nodes"]):
                w.writerow([repr(float(s)), repr(float(t)), repr(float(m.grid["values"][i][j]))])
    elif m.line is not None:
        e = m.line["exponent"]
        for x, v in zip(m.line["s_nodes"], m.line["values"]):
            s, t = (x, x ** e) if m.line["parameter"] == "s" else (1.0, x)
            w.writerow([repr(float(s)), repr(float(t)), repr(float(v))])
    for s, t, mass in m.atoms:
        w.writerow([repr(float(s)), repr(float(t)), repr(float(mass))])
    return buf.getvalue()


def _write(path, text):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as e:
        raise CliError(f"cannot write {path}: {e}", EXIT_IO) from None


def _measure_summary(m: Measure2D):
    out = {"kind": m.kind, "signed": m.signed, "notes": list(m.notes), "atoms": len(m.atoms)}
    if m.grid is not None:
        vals = np.asarray(m.grid["values"], dtype=float)
        out["grid_min"] = float(np.min(vals))
        out["grid_max"] = float(np.max(vals))
    if m.slices is not None:
        out["slices"] = len(m.slices.slices)
        out["min_slice_density"] = m.min_slice_density()
    return out


def cmd_measure(args):
    spec, p = _spec_of(args, ("bilinear", "pencil"))
    m, target = _build_measure(args, spec, p)
    details = {"measure": _measure_summary(m)}
    if args.out:
        _write(args.out, dumps(m) + "\n")
        details["out"] = args.out
    if args.emit_grid:
        _write(args.emit_grid, _grid_csv(m))
        details["grid_csv"] = args.emit_grid
    code, verdict, why = EXIT_PASS, "Built", f"{m.kind} measure constructed"
    if m.signed:
        why += " (signed)"
    if args.verify:
        err = verify_moments(m, target, args.l, args.M, args.N)
        details["max_rel_error"] = err
        ok = err <= MEASURE_TOL
        code = EXIT_PASS if ok else EXIT_FAIL
        verdict = "Verified" if ok else "VerifyFailed"
        why += f"; moments reproduce 1/p^l to {err:.3g} (threshold {MEASURE_TOL:g})"
    return _report("measure", spec, verdict, why, code, details,
                   _config(args, l=args.l, M=args.M, N=args.N, t_nodes=args.t_nodes))


def cmd_verify(args):
    spec, p = _spec_of(args, ("bilinear", "pencil"))
    if args.measure:
        try:
            with open(args.measure, encoding="utf-8") as fh:
                m = Measure2D.from_dict(json.load(fh))
        except OSError as e:
            raise CliError(f"cannot read {args.measure}: {e}", EXIT_IO) from None
        except (json.JSONDecodeError, KeyError) as e:
            raise CliError(f"invalid measure file {args.measure}: {e}", EXIT_USAGE) from None
        target = p
        if isinstance(p, PencilPoly) and m.kind != "SliceFamily":
            target = _as_bilinear(p) or p
    else:
        m, target = _build_measure(args, spec, p)
    err = verify_moments(m, target, args.l, args.M, args.N)
    ok = err <= MEASURE_TOL
    return _report("verify", spec, "Verified" if ok else "VerifyFailed",
                   f"max relative moment error {err:.3g} (threshold {MEASURE_TOL:g})",
                   EXIT_PASS if ok else EXIT_FAIL, {"max_rel_error": err, "kind": m.kind},
                   _config(args, l=args.l, M=args.M, N=args.N))


# ------------------------------------------------------------------ shift / pfrac / bessel


def cmd_shift(args):
    spec, p = _spec_of(args, ("bilinear",))
    if p.a != 1:
        p = BilinearPoly(1.0, p.b / p.a, p.c / p.a, p.d / p.a)
    N = args.net_size
    sh = shift_from_poly(p, N)
    rep = isometry_report(sh, (1, 2, 3), args.tol)
    details = {"isometry": rep.to_dict(), "shift_order": N}
    dual = cauchy_dual(sh)
    details["dual_weights_max"] = float(max(dual.w1.max(), dual.w2.max()))
    try:
        dec = dual_subnormality_decision(sh, min(args.cross_order, N), args.tol)
    except HypothesisError as e:
        details["error"] = str(e)
        return _report("shift", spec, "Inconclusive", "shift is outside the toral 3-isometric, "
                       "separate 2-isometric class", EXIT_INCONCLUSIVE, details,
                       _config(args, cross_order=args.cross_order))
    details["dual"] = dec.to_dict()
    kind = "isometry" if rep.is_toral_m[1] else "toral 2-isometry" if rep.is_toral_m[2] else "toral 3-isometry"
    details["class"] = kind
    if not dec.method_agreement:
        return _report("shift", spec, "Inconclusive", "decision methods disagree", EXIT_INCONCLUSIVE,
                       details, _config(args, cross_order=args.cross_order))
    b, c, d = rep.bcd
    if dec.decision:
        why = "d = 0" if dec.details["d"] == 0 or rep.is_toral_m[2] else f"w2(e1) <= w2(0), i.e. d = {d:g} <= bc = {b * c:g}"
        return _report("shift", spec, "DualSubnormal", why, EXIT_PASS, details,
                       _config(args, cross_order=args.cross_order))
    return _report("shift", spec, "DualNotSubnormal", f"w2(e1) > w2(0), i.e. d = {d:g} > bc = {b * c:g}",
                   EXIT_FAIL, details, _config(args, cross_order=args.cross_order))


def cmd_pfrac(args):
    spec, obj = _spec_of(args, ("ratio", "pencil"))
    num, den = (obj.b, obj.a) if isinstance(obj, PencilPoly) else obj
    pf = partial_fractions(num, den)
    res = pf.residual(num, den)
    details = {**pf.to_dict(), "residual": res}
    if len(pf.quotient) == 1:
        details["c0"] = pf.c0
    return _report("pfrac", spec, "Decomposed", f"reconstruction residual {res:.3g}", EXIT_PASS,
                   details, _config(args))


def cmd_bessel(args):
    rows = []
    for z in args.z:
        I, J = bessel_I(args.nu, z), bessel_J(args.nu, z)
        rows.append({"nu": args.nu, "z": z, "I": I.value, "J": J.value,
                     "terms_used": max(I.terms_used, J.terms_used)})
    return rows


# ------------------------------------------------------------------ driver


def _text(report) -> str:
    lines = [f"{report['command']}: {report['verdict']}", f"  {report['justification']}"]
    d = report["details"]
    for key in ("max_rel_error", "residual", "class", "out", "grid_csv"):
        if key in d:
            lines.append(f"  {key}: {d[key]}")
    if "terms" in d:
        lines.append(f"  quotient: {d['quotient']}")
        for t in d["terms"]:
            lines.append(f"  {t['coeff']:.17g} / (x + {t['pole']:g})^{t['order']}")
    if "isometry" in d:
        iso = d["isometry"]
        lines.append(f"  toral m-isometry: {iso['is_toral_m']}; separate 2-isometry: {iso['is_separate_2']}")
        lines.append("  (b, c, d) = ({:.17g}, {:.17g}, {:.17g})".format(*iso["bcd"]))
    return "\n".join(lines)


def _parent() -> argparse.ArgumentParser:
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--tol", type=float, default=1e-9, help="relative tolerance (default 1e-9)")
    g.add_argument("--json", action="store_true", help="print the report as JSON")
    g.add_argument("--emit-grid", metavar="CSV", help="write the density grid as s,t,value rows")
    g.add_argument("--order", type=int, default=DEFAULT_ORDER, help="difference order (default 8)")
    g.add_argument("--net-size", type=int, default=DEFAULT_NET,
                   help="net size / shift order N (default 24)")
    g.add_argument("--t-nodes", type=int, default=None,
                   help="number of t-slices (default: automatic geometric panels)")
    g.add_argument("--allow-signed", action="store_true", help="build signed measures")
    g.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
    return g


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parent = _parent()
    ap = _Parser(prog="momenta", description="Joint complete monotonicity of 1/p(m, n), "
                 "representing measures and weighted 2-shifts.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, helptext, spec=True):
        sp = sub.add_parser(name, parents=[parent], help=helptext)
        if spec:
            sp.add_argument("spec", nargs="+", help="polynomial spec (key=value tokens or JSON)")
        return sp

    add("analyze", "run every applicable criterion and the difference scan")
    for name, helptext in (("measure", "construct the representing measure"),
                           ("verify", "check moments of a (constructed or saved) measure")):
        sp = add(name, helptext)
        sp.add_argument("-l", type=int, default=1, help="power l in 1/p^l")
        sp.add_argument("-M", type=int, default=8)
        sp.add_argument("-N", type=int, default=8)
        if name == "measure":
            sp.add_argument("--out", help="write the measure JSON here")
            sp.add_argument("--verify", action="store_true", help="check moments after construction")
        else:
            sp.add_argument("--measure", help="measure JSON written by 'measure --out'")
    sp = add("shift", "weighted 2-shift checks and the dual subnormality decision")
    sp.add_argument("--cross-order", type=int, default=6, help="order of the JCM cross-check")
    add("pfrac", "partial fractions of num/den ('ratio' spec) or b/a ('pencil' spec)")
    sp = add("bessel", "tabulate I_nu and J_nu as CSV", spec=False)
    sp.add_argument("--nu", type=float, default=0.0)
    sp.add_argument("z", type=float, nargs="+")
    return ap


COMMANDS = {"analyze": cmd_analyze, "measure": cmd_measure, "verify": cmd_verify,
            "shift": cmd_shift, "pfrac": cmd_pfrac}

_INPUT_ERRORS = (ParseError, DomainError, DegreeError, NearCoincidentPoleError,
                 CoincidentRootError, OrderExhaustedError)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        if args.command == "bessel":
            rows = cmd_bessel(args)
            if args.json:
                print(dumps(rows))
            else:
                w = csv.writer(sys.stdout, lineterminator="\n")
                w.writerow(["nu", "z", "I", "J", "terms_used"])
                for r in rows:
                    w.writerow([repr(r["nu"]), repr(r["z"]), repr(r["I"]), repr(r["J"]), r["terms_used"]])
            return EXIT_PASS
        report = COMMANDS[args.command](args)
    except CliError as e:
        print(f"momenta: error: {e}", file=sys.stderr)
        return e.code
    except _INPUT_ERRORS as e:
        print(f"momenta: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionError, HypothesisError) as e:
        print(f"momenta: refused: {e}", file=sys.stderr)
        return EXIT_FAIL
    except (QuadratureError, TruncationError) as e:
        print(f"momenta: numerical failure: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except OSError as e:
        print(f"momenta: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except MomentaError as e:
        print(f"momenta: error: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    if args.timing:
        report["timing"] = {"seconds": time.perf_counter() - t0}
    print(dumps(report) if args.json else _text(report))
    return report["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
