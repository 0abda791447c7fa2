"""Acceptance run: one test and one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
Criterion 1 is split: 1a (level 0) and 1b (level 1, compared against the
expected relation set verbatim).
"""
from __future__ import annotations

import sys
import time
from collections import Counter

import pytest

from zhukit.cli import default_generators
from zhukit.enveloping import ModeAlgebra, find_relations, oracle_sweep, quotient_dim_sequence, zp_reduce
from zhukit.grading import grading_cases
from zhukit.identities import IDENTITY_IDS, default_grid, run_cases
from zhukit.lca import current_sl2, virasoro
from zhukit.modules import run_module_suite
from zhukit.parse import parse_element
from zhukit.suites import SUITES, SuiteContext, verify_suite
from zhukit.vertex import TruncationPolicy, VertexAlgebra

EXPECTED_LEVEL_ONE = {"A L - L A", "A^2 - 2 L A - 2 A"}


def _emit(line: str, capsys=None) -> None:
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)


def _judge(label: str, ok: bool, detail: str, elapsed: float, limit: float, capsys=None) -> None:
    within = elapsed < limit
    verdict = "PASS" if ok and within else "FAIL"
    _emit(f"[criterion {label}] {verdict}: {detail} ({elapsed:.1f}s, limit {limit:.0f}s)", capsys)
    assert ok, detail
    assert within, f"runtime {elapsed:.1f}s exceeds {limit:.0f}s"


# -- criteria ---------------------------------------------------------------------------

def criterion_1a():
    alg = ModeAlgebra(virasoro())
    gens = default_generators(alg, 0)
    rels = find_relations(alg, gens, 0, 6)
    names = [n for n, _ in gens]
    ok = names == ["L"] and gens[0][1].render() == "L[0]" and rels == []
    return ok, f"level 0 generated by {names} with relations {[r.render() for r in rels]}: C[x]"


def criterion_1b():
    alg = ModeAlgebra(virasoro())
    gens = default_generators(alg, 1)
    rels = {r.render() for r in find_relations(alg, gens, 1, 4)}
    ok = rels == EXPECTED_LEVEL_ONE
    return ok, f"level 1 relations {sorted(rels)}; expected {sorted(EXPECTED_LEVEL_ONE)}"


def criterion_2():
    alg = ModeAlgebra(current_sl2())
    gens = [(g, parse_element(alg, f"{g}[0]")) for g in "ehf"]
    rels = sorted(r.render() for r in find_relations(alg, gens, 0, 3))
    commutators = sorted(["f e - e f + h", "h e - e h - 2 e", "f h - h f - 2 f"])
    red = zp_reduce(parse_element(alg, "e[-1] f[1]"), 0)
    ok = rels == commutators and red.is_zero()
    return ok, f"relations {rels}; e[-1] f[1] -> {red.render()}"


def criterion_3():
    alg = ModeAlgebra(current_sl2())
    dims = quotient_dim_sequence(alg, [parse_element(alg, "e[0]^2")], 6)
    ok = dims[-1] == 5 and dims[-2] == 5
    return ok, f"dimensions {dims}"


def criterion_4():
    va = VertexAlgebra(virasoro())
    policy = TruncationPolicy(6, 8)
    ctx = SuiteContext(va, policy)
    counts: Counter = Counter()
    for s in SUITES:
        for r in verify_suite(s, va, [0, 1, 2], policy, ctx=ctx):
            counts[r.status] += 1
    ok = counts["fail"] == 0 and counts["pass"] > 0
    return ok, f"{len(SUITES)} suites: {dict(sorted(counts.items()))}"


def criterion_5():
    counts: Counter = Counter()
    for ident in IDENTITY_IDS:
        for c in run_cases(default_grid(ident, "sym")):
            counts[c.status] += 1
    ok = counts["fail"] == 0 and counts["pass"] > 0
    return ok, f"identity grids: {dict(sorted(counts.items()))}"


def criterion_6():
    counts: Counter = Counter()
    worked = []
    for d in (2, 3, 4):
        for c in grading_cases(d):
            counts[c.status] += 1
            if c.check == "worked-values":
                worked.append(c.status)
    ok = counts["fail"] == 0 and worked.count("pass") == 4
    return ok, f"grading grids 1/2, 1/3, 1/4: {dict(sorted(counts.items()))}; worked values {worked}"


def criterion_7():
    va = VertexAlgebra(virasoro())
    recs = run_module_suite(va, [0, 1, 2], depth=4)
    counts = Counter((r.name, r.status) for r in recs)
    ok = all(r.status == "pass" for r in recs) and {r.name for r in recs} >= {
        "borcherds", "zhu-action", "akbk", "THann", "J-annihilation", "L0-eigenvalue"}
    return ok, "Verma depth 4: " + ", ".join(f"{k[0]} {k[1]} {v}" for k, v in sorted(counts.items()))


def criterion_8():
    parts, ok = [], True
    vir = ModeAlgebra(virasoro())
    for p in (0, 1, 2):
        n, bad = oracle_sweep(vir, p, max_length=4, mode_range=3, all_orders=True)
        ok &= not bad
        parts.append(f"vir p={p}: {n} words, {len(bad)} disagreements")
    sl2 = ModeAlgebra(current_sl2())
    for p in (0, 1, 2):
        n, bad = oracle_sweep(sl2, p, max_length=4, mode_range=3, all_orders=False, mode_bound=4)
        ok &= not bad
        parts.append(f"sl2 p={p}: {n} sorted words, {len(bad)} disagreements")
    return ok, "; ".join(parts)


CRITERIA = [
    ("1a", criterion_1a, 10),
    ("1b", criterion_1b, 10),
    ("2", criterion_2, 30),
    ("3", criterion_3, 60),
    ("4", criterion_4, 300),
    ("5", criterion_5, 30),
    ("6", criterion_6, 5),
    ("7", criterion_7, 120),
    ("8", criterion_8, 120),
]


@pytest.mark.parametrize("label,fn,limit", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(label, fn, limit, capsys):
    t0 = time.perf_counter()
    ok, detail = fn()
    _judge(label, ok, detail, time.perf_counter() - t0, limit, capsys)


if __name__ == "__main__":
    failed = 0
    for label, fn, limit in CRITERIA:
        t0 = time.perf_counter()
        ok, detail = fn()
        try:
            _judge(label, ok, detail, time.perf_counter() - t0, limit)
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
