"""Identity suites for the level-p Zhu theory, run over basis states of V(R).

Explicit identities (unit, tind, modn, expbor, brakderiv) keep hbar
symbolic and compare exactly.  Identities that hold modulo J (skew, assoc,
leftideal, phi and the mod-J half of unit) specialize hbar to a non-zero
rational and test membership in a :class:`JSpan`.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .enveloping import Vec, Word
from .scalars import HBAR, ONE, PolyScalar, binom
from .vertex import (JSpan, TruncationPolicy, VAC, VertexAlgebra, vscale, vsum)

SUITES = ("unit", "tind", "modn", "expbor", "skew", "brakderiv", "assoc", "leftideal", "phi")
EXPLICIT = ("tind", "modn", "expbor", "brakderiv")


@dataclass
class CaseRecord:
    suite: str
    inputs: Dict[str, str]
    status: str  # pass | fail | truncated | skipped
    defect: Optional[str] = None

    def to_json(self) -> dict:
        return {"suite": self.suite, "inputs": dict(self.inputs), "status": self.status, "defect": self.defect}


@dataclass
class SuiteContext:
    va: VertexAlgebra
    policy: TruncationPolicy
    hbars: Tuple[Fraction, ...] = (Fraction(1), Fraction(2))
    j_cutoff: Optional[Fraction] = None
    j_slack: int = 2
    _spans: Dict[tuple, JSpan] = field(default_factory=dict)

    def __post_init__(self):
        if self.j_cutoff is None:
            self.j_cutoff = self.policy.weight_cutoff + 4
        self.j_cutoff = Fraction(self.j_cutoff)

    def span(self, p: int, hbar) -> JSpan:
        key = (p, Fraction(hbar))
        hit = self._spans.get(key)
        if hit is None:
            hit = JSpan(self.va, p, self.j_cutoff, hbar, self.j_slack)
            self._spans[key] = hit
        return hit

    def states(self, max_weight=None) -> List[Word]:
        W = self.policy.weight_cutoff if max_weight is None else max_weight
        return sorted(self.va.basis_upto(W), key=lambda w: (self.va.weight(w), w))


def _diff(a: Vec, b: Vec) -> Vec:
    return vsum(a, vscale(b, -1))


def _explicit(suite: str, inputs: dict, lhs: Vec, rhs: Vec, va: VertexAlgebra) -> CaseRecord:
    d = _diff(lhs, rhs)
    if not d:
        return CaseRecord(suite, inputs, "pass")
    return CaseRecord(suite, inputs, "fail", va.render(d))


def _modj(suite: str, inputs: dict, vec: Vec, span: JSpan) -> CaseRecord:
    verdict = span.contains(vec)
    if verdict == "undecided":
        return CaseRecord(suite, inputs, "truncated",
                          f"weight {span.va.max_weight(vec)} exceeds J cutoff {span.cutoff}")
    if verdict:
        return CaseRecord(suite, inputs, "pass")
    return CaseRecord(suite, inputs, "fail", span.va.render(vec))


def _w(va, w: Word) -> str:
    return va.render({w: ONE})


# -- individual suites ---------------------------------------------------------

def suite_unit(ctx: SuiteContext, p: int) -> Iterator[CaseRecord]:
    va = ctx.va
    for a in ctx.states():
        A = {a: ONE}
        inp = {"a": _w(va, a), "p": str(p), "hbar": "sym", "side": "left"}
        yield _explicit("unit", inp, va.star(VAC, A, p), A, va)
        for hb in ctx.hbars:
            inp = {"a": _w(va, a), "p": str(p), "hbar": str(hb), "side": "right"}
            vec = _diff(va.star(A, VAC, p, hb), A)
            yield _modj("unit", inp, vec, ctx.span(p, hb))


def suite_tind(ctx: SuiteContext, p: int, ns=range(-5, 4)) -> Iterator[CaseRecord]:
    """(Ta)_[n] b + hbar (gamma_a + p + n + 1) a_[n] b = -n a_[n-1] b."""
    va = ctx.va
    W = ctx.policy.weight_cutoff
    states = ctx.states()
    for a in states:
        if not a:
            continue
        A = {a: ONE}
        TA = va.translate(A)
        ga = va.weight(a)
        for b in states:
            if va.weight(a) + va.weight(b) > W:
                continue
            B = {b: ONE}
            for n in ns:
                lhs = vsum(va.zhu_mode(TA, B, n, p), vscale(va.zhu_mode(A, B, n, p), HBAR * (ga + p + n + 1)))
                rhs = vscale(va.zhu_mode(A, B, n - 1, p), -n)
                inp = {"a": _w(va, a), "b": _w(va, b), "n": str(n), "p": str(p), "hbar": "sym"}
                yield _explicit("tind", inp, lhs, rhs, va)


def _zm(va, a, b, n, p):
    return va.zhu_mode(a, b, n, p)


def _maxw(va, x: Vec):
    m = va.max_weight(x)
    return -1 if m is None else m


def modn_sides(va: VertexAlgebra, A: Vec, B: Vec, Cc: Vec, n: int, k: int, p: int) -> Tuple[Vec, Vec]:
    """Coefficient of w^(-k-1) applied to c on both sides of the normal-ordered product identity."""
    chi = 0
    ab = va.zhu_mode(A, B, n, p)
    lhs: Vec = {}
    top_ab = _maxw(va, ab)
    dc = _maxw(va, Cc)
    i = 0
    while k + i <= top_ab + dc - 1:
        cf = binom(n + p + 1 - chi, i)
        if cf and ab:
            r = va.zhu_mode(ab, Cc, k + i, p)
            if r:
                lhs = vsum(lhs, vscale(r, cf * HBAR ** i))
        i += 1
    rhs: Vec = {}
    da, db = _maxw(va, A), _maxw(va, B)
    # first part: sum_j (-1)^j binom(n, j) a_[n-j] b_[k+j] c ; b_[k+j] c = 0 once k+j > db+dc-1
    j = 0
    while k + j <= db + dc - 1:
        cf = binom(n, j)
        if cf:
            inner = va.zhu_mode(B, Cc, k + j, p)
            if inner:
                r = va.zhu_mode(A, inner, n - j, p)
                rhs = vsum(rhs, vscale(r, cf if j % 2 == 0 else -cf))
        j += 1
        if n >= 0 and j > n:
            break
    # second part: - sum_j binom(n, j) (-1)^(n-j) b_[k+n-j] a_[j] c
    for j in range(0, math.floor(da + dc - 1) + 1):
        if n >= 0 and j > n:
            break
        cf = binom(n, j)
        if not cf:
            continue
        inner = va.zhu_mode(A, Cc, j, p)
        if inner:
            r = va.zhu_mode(B, inner, k + n - j, p)
            s = -1 if (n - j) % 2 == 0 else 1
            rhs = vsum(rhs, vscale(r, cf * s))
    return lhs, rhs


def _triples(ctx: SuiteContext, W_pair, W_c):
    va = ctx.va
    states = ctx.states()
    for a in states:
        for b in states:
            if va.weight(a) + va.weight(b) > W_pair:
                continue
            for c in states:
                if va.weight(c) > W_c:
                    continue
                yield a, b, c


def suite_modn(ctx: SuiteContext, p: int, ns=range(-3, 3)) -> Iterator[CaseRecord]:
    va = ctx.va
    W = ctx.policy.weight_cutoff
    K = ctx.policy.series_order
    for a, b, c in _triples(ctx, W // 2 + 1, W // 2):
        if not a or not b:
            continue
        A, B, Cc = {a: ONE}, {b: ONE}, {c: ONE}
        for n in ns:
            # k runs over series_order + 1 consecutive coefficients, starting where they can be non-zero
            kmax = va.weight(a) + va.weight(b) + va.weight(c) + 2 * p + 2
            for k in range(kmax - K, kmax + 1):
                lhs, rhs = modn_sides(va, A, B, Cc, n, k, p)
                inp = {"a": _w(va, a), "b": _w(va, b), "c": _w(va, c), "n": str(n), "k": str(k),
                       "p": str(p), "hbar": "sym"}
                yield _explicit("modn", inp, lhs, rhs, va)


def expbor_sides(va: VertexAlgebra, A: Vec, B: Vec, Cc: Vec, n: int, k: int, p: int) -> Tuple[Vec, Vec]:
    """(a_[n] b)_[k] c against its expansion in a_[.] and b_[.] modes."""
    lhs = va.zhu_mode(va.zhu_mode(A, B, n, p), Cc, k, p)
    da, db, dc = _maxw(va, A), _maxw(va, B), _maxw(va, Cc)
    rhs: Vec = {}
    sgn_n = -1 if n % 2 else 1
    # a_[n-j] (b_[i+j+k] c): nonzero only for i + j + k <= db + dc - 1
    lim1 = math.floor(db + dc - 1 - k)
    for j in range(0, lim1 + 1):
        if n >= 0 and j > n:
            break
        bj = binom(n, j)
        if not bj:
            continue
        for i in range(0, lim1 - j + 1):
            bi = binom(-n - p - 1, i)
            if not bi:
                continue
            inner = va.zhu_mode(B, Cc, i + j + k, p)
            if inner:
                cf = bj * bi * HBAR ** i * (-1 if j % 2 else 1)
                rhs = vsum(rhs, vscale(va.zhu_mode(A, inner, n - j, p), cf))
    # - (-1)^n b_[i-j+n+k] (a_[j] c)
    for j in range(0, math.floor(da + dc - 1) + 1):
        if n >= 0 and j > n:
            break
        bj = binom(n, j)
        if not bj:
            continue
        inner = va.zhu_mode(A, Cc, j, p)
        if not inner:
            continue
        di = _maxw(va, inner)
        for i in range(0, math.floor(db + di - 1 - (n + k - j)) + 1):
            bi = binom(-n - p - 1, i)
            if not bi:
                continue
            r = va.zhu_mode(B, inner, i - j + n + k, p)
            if r:
                cf = bj * bi * HBAR ** i * (-1 if j % 2 else 1) * (-sgn_n)
                rhs = vsum(rhs, vscale(r, cf))
    return lhs, rhs


def suite_expbor(ctx: SuiteContext, p: int, ns=range(-3, 3), ks=range(-3, 3)) -> Iterator[CaseRecord]:
    va = ctx.va
    W = ctx.policy.weight_cutoff
    for a, b, c in _triples(ctx, W // 2 + 1, W // 2):
        if not a or not b:
            continue
        A, B, Cc = {a: ONE}, {b: ONE}, {c: ONE}
        for n in ns:
            for k in ks:
                lhs, rhs = expbor_sides(va, A, B, Cc, n, k, p)
                inp = {"a": _w(va, a), "b": _w(va, b), "c": _w(va, c), "n": str(n), "k": str(k),
                       "p": str(p), "hbar": "sym"}
                yield _explicit("expbor", inp, lhs, rhs, va)


def suite_brakderiv(ctx: SuiteContext, p: int, ns=range(-3, 3)) -> Iterator[CaseRecord]:
    """[a, b_[n] c]_hbar = ([a, b]_hbar)_[n] c + b_[n] ([a, c]_hbar)."""
    va = ctx.va
    W = ctx.policy.weight_cutoff
    for a, b, c in _triples(ctx, W // 2 + 1, W // 2):
        A, B, Cc = {a: ONE}, {b: ONE}, {c: ONE}
        for n in ns:
            lhs = va.hbar_bracket(A, va.zhu_mode(B, Cc, n, p), p)
            rhs = vsum(va.zhu_mode(va.hbar_bracket(A, B, p), Cc, n, p),
                       va.zhu_mode(B, va.hbar_bracket(A, Cc, p), n, p))
            inp = {"a": _w(va, a), "b": _w(va, b), "c": _w(va, c), "n": str(n), "p": str(p), "hbar": "sym"}
            yield _explicit("brakderiv", inp, lhs, rhs, va)


def suite_skew(ctx: SuiteContext, p: int) -> Iterator[CaseRecord]:
    """a *_p b - b *_p a - hbar [a, b]_hbar lies in J (even states)."""
    va = ctx.va
    W = ctx.policy.weight_cutoff
    states = ctx.states()
    for hb in ctx.hbars:
        span = ctx.span(p, hb)
        for a in states:
            for b in states:
                if va.weight(a) + va.weight(b) > W:
                    continue
                A, B = {a: ONE}, {b: ONE}
                sgn = -1 if va.parity(a) and va.parity(b) else 1
                vec = vsum(va.star(A, B, p, hb), vscale(va.star(B, A, p, hb), -sgn))
                vec = vsum(vec, vscale(va.hbar_bracket(A, B, p, hb), -hb))
                inp = {"a": _w(va, a), "b": _w(va, b), "p": str(p), "hbar": str(hb)}
                yield _modj("skew", inp, vec, span)


def suite_assoc(ctx: SuiteContext, p: int) -> Iterator[CaseRecord]:
    va = ctx.va
    W = ctx.policy.weight_cutoff
    states = ctx.states()
    for hb in ctx.hbars:
        span = ctx.span(p, hb)
        for a, b, c in itertools.product(states, repeat=3):
            if va.weight(a) + va.weight(b) + va.weight(c) > W:
                continue
            A, B, Cc = {a: ONE}, {b: ONE}, {c: ONE}
            left = va.star(va.star(A, B, p, hb), Cc, p, hb)
            right = va.star(A, va.star(B, Cc, p, hb), p, hb)
            inp = {"a": _w(va, a), "b": _w(va, b), "c": _w(va, c), "p": str(p), "hbar": str(hb)}
            yield _modj("assoc", inp, _diff(left, right), span)


def j_generators(va: VertexAlgebra, p: int, hbar, max_weight) -> List[Tuple[str, Vec]]:
    """Generators (T + hbar H) b and b_[-2p-2] c with top weight <= max_weight."""
    out = []
    states = va.basis_upto(max_weight)
    for b in states:
        if b and va.weight(b) + 1 <= max_weight:
            out.append((f"(T+hH)({_w(va, b)})", va.t_plus_hbar_h({b: ONE}, hbar)))
    for b in states:
        for c in states:
            if b and va.weight(b) + va.weight(c) + 2 * p + 1 <= max_weight:
                out.append((f"{_w(va, b)} [{-2 * p - 2}] {_w(va, c)}",
                            va.zhu_mode({b: ONE}, {c: ONE}, -2 * p - 2, p, hbar)))
    return out


def suite_leftideal(ctx: SuiteContext, p: int) -> Iterator[CaseRecord]:
    """a *_p j and j *_p a lie in J for generators j of J."""
    va = ctx.va
    W = ctx.policy.weight_cutoff
    for hb in ctx.hbars:
        span = ctx.span(p, hb)
        gens = j_generators(va, p, hb, W)
        for a in ctx.states():
            A = {a: ONE}
            for label, jv in gens:
                if va.weight(a) + _maxw(va, jv) > W:
                    continue
                for side, vec in (("left", va.star(A, jv, p, hb)), ("right", va.star(jv, A, p, hb))):
                    inp = {"a": _w(va, a), "j": label, "side": side, "p": str(p), "hbar": str(hb)}
                    yield _modj("leftideal", inp, vec, span)


def suite_phi(ctx: SuiteContext, p: int) -> Iterator[CaseRecord]:
    """a *_p b = a *_{p-1} b mod J_{p-1}, and J_p is contained in J_{p-1}."""
    if p == 0:
        return
    va = ctx.va
    W = ctx.policy.weight_cutoff
    states = ctx.states()
    for hb in ctx.hbars:
        lower = ctx.span(p - 1, hb)
        for a in states:
            for b in states:
                if va.weight(a) + va.weight(b) > W:
                    continue
                A, B = {a: ONE}, {b: ONE}
                vec = _diff(va.star(A, B, p, hb), va.star(A, B, p - 1, hb))
                inp = {"a": _w(va, a), "b": _w(va, b), "p": str(p), "hbar": str(hb), "check": "product"}
                yield _modj("phi", inp, vec, lower)
        for label, jv in j_generators(va, p, hb, lower.cutoff):
            inp = {"j": label, "p": str(p), "hbar": str(hb), "check": "containment"}
            yield _modj("phi", inp, jv, lower)


_RUNNERS: Dict[str, Callable[[SuiteContext, int], Iterable[CaseRecord]]] = {
    "unit": suite_unit,
    "tind": suite_tind,
    "modn": suite_modn,
    "expbor": suite_expbor,
    "skew": suite_skew,
    "brakderiv": suite_brakderiv,
    "assoc": suite_assoc,
    "leftideal": suite_leftideal,
    "phi": suite_phi,
}


def verify_suite(suite_id: str, va: VertexAlgebra, p_list: Sequence[int], policy: TruncationPolicy,
                 hbars: Sequence = (1, 2), ctx: Optional[SuiteContext] = None) -> List[CaseRecord]:
    """Run one suite over every p in p_list; returns case records in a stable order."""
    if suite_id not in _RUNNERS:
        raise ValueError(f"unknown suite {suite_id!r}; choose from {SUITES}")
    hb = tuple(Fraction(h) for h in hbars)
    if any(h == 0 for h in hb):
        raise ValueError("hbar must be non-zero")
    if ctx is None:
        ctx = SuiteContext(va, policy, hb)
    out: List[CaseRecord] = []
    for p in p_list:
        out.extend(_RUNNERS[suite_id](ctx, p))
    return out
