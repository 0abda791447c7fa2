"""Command-line front end: ``zhukit present|verify|identities|reduce``.

Exit codes: 0 when every case passes, 1 when some case fails, 2 on usage,
configuration or parse errors.  Reports follow the ``report/1`` schema and
contain exact strings only.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from fractions import Fraction
from typing import List, Optional, Sequence

from . import __version__
from .enveloping import (DegreeError, ModeAlgebra, find_relations, ideal_membership,
                         quotient_dim_sequence, zp_basis, zp_reduce)
from .grading import DEFAULT_LEVELS, grading_cases
from .identities import IDENTITY_IDS, DomainError, default_grid, run_cases
from .lca import PRESETS, LcaError, LcaSpec, load_lca, preset
from .modules import ModuleError, ZhuModuleInput, default_module_input, run_module_suite
from .parse import ParseError, parse_element
from .report import ZhuReport, validate_report
from .suites import SUITES, SuiteContext, verify_suite
from .vertex import TruncationPolicy, VertexAlgebra

LEMMAS = {"A2": "binomial_split", "sequals": "sequals", "shortlem": "shortlem", "geom-q": "geom_q",
          "star-delta": "star_delta", "baexp": "baexp_coeff"}
VERIFY_SUITES = SUITES + ("modules",)


class ConfigError(ValueError):
    pass


# -- argument helpers ------------------------------------------------------------

def int_list(text: str) -> List[int]:
    """``0,1,2`` or ``0..2`` (inclusive) or a mix: ``0..2,5``."""
    out: List[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            elif part:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers like 0,1,2 or 0..4, got {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def rational_list(text: str) -> List[Fraction]:
    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected rationals like 0,1/2,1, got {text!r}") from None


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return v


def _default_jobs() -> int:
    raw = os.environ.get("ZHUKIT_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def load_algebra(source: str) -> LcaSpec:
    if source in PRESETS:
        return preset(source)
    if os.path.exists(source):
        return load_lca(source)
    raise ConfigError(f"unknown algebra {source!r}: not a preset ({', '.join(sorted(PRESETS))}) nor a file")


# -- present ---------------------------------------------------------------------

def _is_concatenation(w) -> bool:
    s = 0
    for m, _ in w[:-1]:
        s += m
        if s == 0:
            return True
    return False


def default_generators(alg: ModeAlgebra, p: int) -> List[tuple]:
    """Degree-0 basis words of length <= 2 that do not split into shorter degree-0 words."""
    out = []
    letters = iter("ABCDEFGHIJKMNOPQRSTUVWXYZ")
    taken = set(alg.names)
    for e in zp_basis(alg, p, 2):
        (w,) = e.terms
        if not w or _is_concatenation(w):
            continue
        if len(w) == 1 and w[0][0] == 0:
            name = alg.names[w[0][1]]
        else:
            name = next(x for x in letters if x not in taken)
            taken.add(name)
        out.append((name, e))
    return out


def cmd_present(args, report: ZhuReport) -> None:
    alg = ModeAlgebra(load_algebra(args.algebra))
    if args.generators:
        gens = []
        for item in args.generators:
            if "=" not in item:
                raise ConfigError(f"--generators expects NAME=expression, got {item!r}")
            name, expr = item.split("=", 1)
            gens.append((name.strip(), parse_element(alg, expr)))
    else:
        gens = default_generators(alg, args.p)
    rels = find_relations(alg, gens, args.p, args.cutoff)
    names = [n for n, _ in gens]
    report.result["generators"] = {n: e.render() for n, e in gens}
    report.result["relations"] = [r.render() for r in rels]
    if rels:
        text = f"C<{', '.join(names)}> / ({', '.join(r.render() for r in rels)})"
    elif len(names) == 1:
        text = f"C[{names[0]}]: free on {names[0]}, no relations"
    else:
        text = f"free on {', '.join(names)}, no relations"
    report.result["presentation"] = text
    for r in rels:
        report.cases.append({"suite": "present", "check": "relation", "inputs": {"relation": r.render()},
                             "status": "pass", "defect": None})
    if args.ideal:
        ideal = [parse_element(alg, x) for x in args.ideal]
        dims = quotient_dim_sequence(alg, ideal, args.max_filtration)
        report.result["ideal"] = [e.render() for e in ideal]
        report.result["dimension_sequence"] = dims
        stable = len(dims) >= 2 and dims[-1] == dims[-2]
        report.result["stabilized"] = stable
        report.cases.append({"suite": "present", "check": "quotient-dimension",
                             "inputs": {"ideal": ", ".join(args.ideal), "max_filtration": str(args.max_filtration)},
                             "status": "pass", "defect": None,
                             "note": f"dimensions {dims}" + ("" if stable else ", not yet stable")})


# -- verify ----------------------------------------------------------------------

def _hbar_values(text: str) -> Optional[List[Fraction]]:
    if text == "sym":
        return None
    vals = rational_list(text)
    if any(v == 0 for v in vals):
        raise ConfigError("hbar values must be non-zero")
    return vals


def _suite_unit(spec_json: dict, suite: str, p_list, weight_cutoff, series_order, hbars, j_cutoff):
    va = VertexAlgebra(LcaSpec.from_json(spec_json))
    policy = TruncationPolicy(weight_cutoff, series_order)
    ctx = SuiteContext(va, policy, tuple(hbars), j_cutoff)
    return [r.to_json() for r in verify_suite(suite, va, p_list, policy, hbars, ctx)]


def cmd_verify(args, report: ZhuReport) -> None:
    spec = load_algebra(args.algebra)
    va = VertexAlgebra(spec)
    hb = _hbar_values(args.hbar) or [Fraction(1), Fraction(2)]
    report.config["hbar_modj"] = [str(h) for h in hb]
    suites = list(SUITES) + ["modules"] if args.suite == "all" else [args.suite]
    vertex_suites = [s for s in suites if s != "modules"]
    policy = TruncationPolicy(args.weight_cutoff, args.series_order)
    if vertex_suites:
        if args.jobs > 1 and len(vertex_suites) > 1:
            from concurrent.futures import ProcessPoolExecutor

            sj = spec.to_json()
            with ProcessPoolExecutor(max_workers=args.jobs) as ex:
                futs = [ex.submit(_suite_unit, sj, s, args.p, args.weight_cutoff, args.series_order, hb,
                                  args.j_cutoff) for s in vertex_suites]
                for f in futs:
                    report.cases.extend(f.result())
        else:
            ctx = SuiteContext(va, policy, tuple(hb), args.j_cutoff)
            for s in vertex_suites:
                report.cases.extend(r.to_json() for r in verify_suite(s, va, args.p, policy, hb, ctx))
    if "modules" in suites:
        if args.module:
            try:
                with open(args.module, encoding="utf-8") as fh:
                    data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{args.module}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
            N = ZhuModuleInput.from_json(va.alg, data)
            if N.p != 0:
                report.cases.append({"suite": "modules", "check": "zhumod-validation", "inputs": {"p": str(N.p)},
                                     "status": "pass", "defect": None})
                report.cases.append({"suite": "modules", "check": "induction", "inputs": {"p": str(N.p)},
                                     "status": "skipped", "defect": None,
                                     "note": "induction is implemented from level-0 data only"})
                return
        else:
            N = default_module_input(va)
        kw = {}
        if args.module_depth is not None:
            kw["depth"] = args.module_depth
        report.cases.extend(r.to_json() for r in run_module_suite(va, args.p, N=N, **kw))


# -- identities --------------------------------------------------------------------

def _group_denominator(text: str) -> int:
    try:
        g = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"--gamma-group expects 1/d, got {text!r}") from None
    if g <= 0 or g.numerator != 1:
        raise ConfigError(f"--gamma-group expects 1/d for a positive integer d, got {text!r}")
    return g.denominator


def cmd_identities(args, report: ZhuReport) -> None:
    if args.suite == "appendix-b":
        dens = [_group_denominator(g) for g in (args.gamma_group or ["1/2", "1/3", "1/4"])]
        levels = args.P or list(DEFAULT_LEVELS)
        if any(P < 0 for P in levels):
            raise ConfigError("levels P must be non-negative")
        for d in dens:
            report.cases.extend(c.to_json() for c in grading_cases(d, levels))
        return
    ids = list(IDENTITY_IDS) if args.lemma == "all" else [LEMMAS[args.lemma]]
    gammas: list = ["sym"] if args.gamma == "sym" else rational_list(args.gamma)
    ranges = {"X": args.X, "Y": args.Y, "n": args.n, "p": args.p, "alpha": args.alpha, "j": args.j}
    cases = []
    for ident in ids:
        for g in gammas:
            cases.extend(default_grid(ident, g, **ranges))
    for c in run_cases(cases, args.jobs):
        rec = c.to_json()
        report.cases.append({"suite": "identities", "check": rec["identity"], "inputs": rec["parameters"],
                             "status": rec["status"], "lhs": rec["lhs"], "rhs": rec["rhs"], "note": rec["note"]})


# -- reduce ------------------------------------------------------------------------

def cmd_reduce(args, report: ZhuReport) -> None:
    alg = ModeAlgebra(load_algebra(args.algebra))
    x = parse_element(alg, args.expression)
    nf = zp_reduce(x, args.p)
    report.result["input"] = args.expression
    report.result["normal_form"] = nf.render()
    if args.membership:
        verdict = ideal_membership(x, args.p, args.cutoff)
        report.result["membership"] = verdict if isinstance(verdict, str) else bool(verdict)
        report.result["membership_consistent"] = verdict == "undecided" or bool(verdict) == (not nf.terms)


# -- driver ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the report to this file instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--timing", action="store_true", help="record wall-clock time in the report")
    common.add_argument("--seed", type=int, default=0, help="recorded in the report for reproducibility")
    common.add_argument("--jobs", type=positive_int, default=_default_jobs(),
                        help="worker processes (default: $ZHUKIT_JOBS or 1)")

    ap = argparse.ArgumentParser(prog="zhukit", description="Exact level-p Zhu algebra computations.")
    ap.add_argument("--version", action="version", version=f"zhukit {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("present", parents=[common], help="presentation of the level-p Zhu algebra")
    pr.add_argument("--algebra", default="vir")
    pr.add_argument("--p", type=nonneg_int, default=0)
    pr.add_argument("--cutoff", type=positive_int, default=4, help="longest word in the generators")
    pr.add_argument("--generators", nargs="+", metavar="NAME=EXPR")
    pr.add_argument("--ideal", action="append", help="ideal generator in U(g_0), repeatable")
    pr.add_argument("--max-filtration", type=nonneg_int, default=6)

    ve = sub.add_parser("verify", parents=[common], help="run identity suites")
    ve.add_argument("--suite", default="all", choices=("all",) + VERIFY_SUITES)
    ve.add_argument("--algebra", default="vir")
    ve.add_argument("--p", type=int_list, default=[0, 1])
    ve.add_argument("--weight-cutoff", type=positive_int, default=6)
    ve.add_argument("--series-order", type=positive_int, default=8)
    ve.add_argument("--hbar", default="sym", help="'sym' or a list of non-zero rationals for the mod-J suites")
    ve.add_argument("--j-cutoff", type=positive_int, default=None)
    ve.add_argument("--module", help="zhumod/1 file for the modules suite")
    ve.add_argument("--module-depth", type=nonneg_int, default=None)

    idn = sub.add_parser("identities", parents=[common], help="combinatorial identity sweeps")
    idn.add_argument("--lemma", choices=("all",) + tuple(LEMMAS), default="all")
    idn.add_argument("--suite", choices=("appendix-b",))
    idn.add_argument("--gamma", default="sym", help="'sym' or a list of rationals")
    idn.add_argument("--gamma-group", action="append", help="1/d; repeatable")
    idn.add_argument("--P", type=rational_list)
    for name in ("X", "Y", "n", "p", "alpha", "j"):
        idn.add_argument(f"--{name}", type=int_list)

    re_ = sub.add_parser("reduce", parents=[common], help="normal form in the level-p Zhu algebra")
    re_.add_argument("expression")
    re_.add_argument("--algebra", default="vir")
    re_.add_argument("--p", type=nonneg_int, default=0)
    re_.add_argument("--membership", action="store_true", help="also run the linear-algebra oracle")
    re_.add_argument("--cutoff", type=positive_int, default=4, help="oracle filtration cutoff")
    return ap


COMMANDS = {"present": cmd_present, "verify": cmd_verify, "identities": cmd_identities, "reduce": cmd_reduce}


def _config_echo(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in ("output", "format", "timing"):
            continue
        if isinstance(v, (list, tuple)):
            out[k] = [str(x) for x in v]
        elif v is None or isinstance(v, (bool, str)):
            out[k] = v
        else:
            out[k] = str(v)
    return out


def render_text(report: ZhuReport) -> str:
    lines = [f"zhukit {report.command}"]
    for k, v in report.result.items():
        if isinstance(v, list):
            lines.append(f"{k}:")
            lines.extend(f"  {x}" for x in v)
        elif isinstance(v, dict):
            lines.append(f"{k}:")
            lines.extend(f"  {a} = {b}" for a, b in v.items())
        else:
            lines.append(f"{k}: {v}")
    for c in report.cases:
        if c["status"] == "fail":
            ins = ", ".join(f"{a}={b}" for a, b in c["inputs"].items())
            lines.append(f"FAIL {c['suite']}/{c.get('check', c['suite'])} [{ins}]: {c.get('defect') or ''}")
    s = report.summary()
    lines.append(" ".join(f"{k}={s[k]}" for k in ("total", "pass", "fail", "truncated", "skipped")))
    return "\n".join(lines) + "\n"


def _join_negative_values(argv: Sequence[str]) -> List[str]:
    """Turn ``--n -4..8`` into ``--n=-4..8`` so ranges may start with a minus sign."""
    out: List[str] = []
    it = iter(argv)
    for tok in it:
        out.append(tok)
        if tok.startswith("--") and "=" not in tok:
            nxt = next(it, None)
            if nxt is None:
                break
            if re.match(r"-\d", nxt):
                out[-1] = f"{tok}={nxt}"
            else:
                out.append(nxt)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    argv = _join_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    report = ZhuReport(args.command, _config_echo(args))
    t0 = time.perf_counter()
    try:
        COMMANDS[args.command](args, report)
    except ParseError as exc:
        print(f"zhukit: parse error: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, LcaError, ModuleError, DegreeError, DomainError, ValueError, OSError) as exc:
        print(f"zhukit: {exc}", file=sys.stderr)
        return 2
    if args.timing:
        report.timing = {"seconds": f"{time.perf_counter() - t0:.3f}"}
    validate_report(report.to_json())
    text = report.dumps() if args.format == "json" else render_text(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if report.failures else 0


if __name__ == "__main__":
    sys.exit(main())
