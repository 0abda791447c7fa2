"""Positive-energy modules induced from the zero-mode algebra, and module-side checks.

An induced module is U(g_{<0}) (x) N where N is a module over the span of
the generator zero modes and every positive mode kills N.  Its degree-j
piece is spanned by sorted words of negative modes of total mode -j
applied to a basis vector of N.  Every restricted Lie(R)-module is a
V(R)-module, so modes of composite states act through the normal-ordered
product formula, evaluated here directly on the module.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .enveloping import (ModeAlgebra, Normalizer, UEElement, Vec, Word, find_relations, vadd,
                         vaxpy)
from .linalg import RowSpace
from .parse import parse_element
from .scalars import LAM, ONE, ZERO, PolyScalar, binom, parse_scalar
from .vertex import VAC, VertexAlgebra, vscale, vsum

ZHUMOD_FORMAT = "zhumod/1"
MVec = Dict[Tuple[Word, int], PolyScalar]
Matrix = List[List[PolyScalar]]


class ModuleError(ValueError):
    pass


class CutoffError(ArithmeticError):
    """A module computation reached degrees beyond the module's hard limit."""


def _madd(target: MVec, key, v: PolyScalar) -> None:
    cur = target.get(key)
    new = v if cur is None else cur + v
    if new:
        target[key] = new
    else:
        target.pop(key, None)


def _maxpy(target: MVec, c: PolyScalar, src: MVec) -> None:
    for k, v in src.items():
        _madd(target, k, v * c if c != 1 else v)


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n, m, r = len(A), len(B), len(B[0]) if B else 0
    return [[sum((A[i][t] * B[t][j] for t in range(m)), ZERO) for j in range(r)] for i in range(n)]


def mat_add(A: Matrix, B: Matrix, s=1) -> Matrix:
    return [[A[i][j] + B[i][j] * s for j in range(len(A[0]))] for i in range(len(A))]


def mat_identity(d: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(d)] for i in range(d)]


# ---------------------------------------------------------------------------
# Zhu-module input


@dataclass
class ZhuModuleInput:
    """A finite-dimensional module N over Z_p given by matrices of named degree-0 words.

    ``words`` maps a label to a degree-0 element of U(Lie R); ``action``
    maps the same label to a dim x dim matrix (column convention: the image
    of basis vector j is column j).
    """

    alg: ModeAlgebra
    p: int
    dimension: int
    words: Dict[str, UEElement]
    action: Dict[str, Matrix]
    labels: List[str] = field(default_factory=list)

    def validate(self, relation_cutoff: int = 2) -> None:
        """Check matrix shapes and that the matrices satisfy every relation of Z_p up to the cutoff."""
        for name, M in self.action.items():
            if len(M) != self.dimension or any(len(r) != self.dimension for r in M):
                raise ModuleError(f"matrix for {name!r} is not {self.dimension}x{self.dimension}")
        missing = set(self.words) - set(self.action)
        if missing:
            raise ModuleError(f"no action given for word {sorted(missing)[0]!r}")
        names = sorted(self.words)
        rels = find_relations(self.alg, [(n, self.words[n]) for n in names], self.p, relation_cutoff)
        for rel in rels:
            total = [[ZERO] * self.dimension for _ in range(self.dimension)]
            for w, coeff in rel.coeffs.items():
                M = mat_identity(self.dimension)
                for i in w:
                    M = mat_mul(M, self.action[names[i]])
                total = mat_add(total, M, PolyScalar.coerce(coeff))
            if any(x for row in total for x in row):
                raise ModuleError(f"action violates the relation {rel.render()} of the level-{self.p} Zhu algebra")

    @classmethod
    def from_json(cls, alg: ModeAlgebra, data: dict, validate: bool = True) -> "ZhuModuleInput":
        import jsonschema
        from importlib import resources

        schema = json.loads(resources.files("zhukit").joinpath("schemas", "zhumod1.schema.json").read_text())
        try:
            jsonschema.validate(data, schema)
        except jsonschema.ValidationError as exc:
            path = "/".join(str(x) for x in exc.absolute_path) or "<root>"
            raise ModuleError(f"zhumod/1 schema error at {path}: {exc.message}") from None
        words = {k: parse_element(alg, v) for k, v in data["words"].items()}
        action = {k: [[parse_scalar(x) for x in row] for row in M] for k, M in data["action"].items()}
        N = cls(alg, int(data["p"]), int(data["dimension"]), words, action, list(data.get("labels", [])))
        if validate:
            N.validate(int(data.get("relation_cutoff", 2)))
        return N


def verma_input(alg: ModeAlgebra, weight=LAM) -> ZhuModuleInput:
    """One-dimensional N on which L_0 acts by ``weight`` (Virasoro-type algebras)."""
    if len(alg.names) != 1:
        raise ModuleError("verma_input expects a single-generator algebra")
    g = alg.names[0]
    return ZhuModuleInput(alg, 0, 1, {g: UEElement(alg, {((0, 0),): ONE})},
                          {g: [[PolyScalar.coerce(weight)]]}, ["x"])


def trivial_input(alg: ModeAlgebra) -> ZhuModuleInput:
    words = {g: UEElement(alg, {((0, i),): ONE}) for i, g in enumerate(alg.names)}
    return ZhuModuleInput(alg, 0, 1, words, {g: [[ZERO]] for g in alg.names}, ["x"])


# ---------------------------------------------------------------------------
# induced modules


def _module_dead(w: Word) -> bool:
    return bool(w) and w[-1][0] > 0


class InducedModule:
    """U(g_{<0}) (x) N with positive modes killing N; degree j = depth below N."""

    def __init__(self, va: VertexAlgebra, N: ZhuModuleInput, p: int, depth_cutoff: int, max_degree: Optional[int] = None):
        self.va = va
        self.alg = va.alg
        self.N = N
        self.p = p
        self.depth_cutoff = depth_cutoff
        self.max_degree = depth_cutoff + 8 if max_degree is None else max_degree
        self.dim_n = N.dimension
        self.nz = Normalizer(self.alg, sort_key=None, dead=_module_dead)
        self.zero_action: Dict[int, Matrix] = {}
        for gi, g in enumerate(self.alg.names):
            hit = None
            for label, elem in N.words.items():
                if elem.terms == {((0, gi),): ONE}:
                    hit = N.action[label]
            if hit is None:
                raise ModuleError(f"module data has no action for the word {g}[0]")
            self.zero_action[gi] = hit
        self._act_cache: Dict[Tuple, MVec] = {}
        self._state_cache: Dict[Tuple, MVec] = {}

    # -- basis -------------------------------------------------------------
    @staticmethod
    def degree(key: Tuple[Word, int]) -> int:
        return -sum((m for m, _ in key[0]), 0)

    def basis(self, degree: int) -> List[Tuple[Word, int]]:
        letters = [(m, gi) for gi in range(len(self.alg.names)) for m in range(-degree, 0)]
        letters.sort()
        words: List[Word] = []

        def rec(start, remaining, acc):
            if remaining == 0:
                words.append(tuple(acc))
                return
            for i in range(start, len(letters)):
                m, g = letters[i]
                if -m <= remaining:
                    acc.append(letters[i])
                    rec(i, remaining + m, acc)
                    acc.pop()

        rec(0, degree, [])
        words.sort()
        return [(w, i) for w in words for i in range(self.dim_n)]

    def dims(self, upto: Optional[int] = None) -> List[int]:
        upto = self.depth_cutoff if upto is None else upto
        return [len(self.basis(j)) for j in range(upto + 1)]

    def vector(self, word=(), index: int = 0) -> MVec:
        return {(tuple(word), index): ONE}

    # -- action ----------------------------------------------------------------
    def act_letter(self, x: Tuple, vec: MVec) -> MVec:
        out: MVec = {}
        for key, c in vec.items():
            r = self._act_basis(x, key)
            if r:
                _maxpy(out, c, r)
        return out

    def _act_basis(self, x, key) -> MVec:
        hit = self._act_cache.get((x, key))
        if hit is not None:
            return hit
        w, i = key
        if self.degree(key) - x[0] > self.max_degree:
            raise CutoffError(f"degree {self.degree(key) - x[0]} exceeds the module limit {self.max_degree}")
        out: MVec = {}
        if self.degree(key) - x[0] >= 0:
            for u, cu in self.nz.left_mult(x, w).items():
                split = len(u)
                while split and u[split - 1][0] == 0:
                    split -= 1
                neg, zeros = u[:split], u[split:]
                col = [ONE if t == i else ZERO for t in range(self.dim_n)]
                for (_, gi) in reversed(zeros):
                    M = self.zero_action[gi]
                    col = [sum((M[r][t] * col[t] for t in range(self.dim_n)), ZERO) for r in range(self.dim_n)]
                for r, v in enumerate(col):
                    if v:
                        _madd(out, (neg, r), cu * v)
        self._act_cache[(x, key)] = out
        return out

    def act(self, gen: str, n, vec: MVec) -> MVec:
        """a_n on a module vector (a a generator, weight-indexed mode)."""
        return self.act_letter((n, self.alg.index[gen]), vec)

    def act_word(self, letters: Sequence[Tuple], vec: MVec) -> MVec:
        for x in reversed(list(letters)):
            vec = self.act_letter(x, vec)
        return vec

    def act_element(self, elem: UEElement, vec: MVec) -> MVec:
        out: MVec = {}
        for w, c in elem.terms.items():
            _maxpy(out, c, self.act_word(w, vec))
        return out

    # -- modes of states ----------------------------------------------------------
    def state_mode(self, a: Vec, n, vec: MVec) -> MVec:
        """a_n v for a state a (weight-indexed per homogeneous component)."""
        out: MVec = {}
        for wa, ca in a.items():
            M = n + self.va.weight(wa) - 1
            for key, cv in vec.items():
                r = self._state_nmode(wa, M, key)
                if r:
                    _maxpy(out, ca * cv, r)
        return out

    def state_nmode(self, a: Vec, M: int, vec: MVec) -> MVec:
        """a_(M) v in (n)-indexing."""
        out: MVec = {}
        for wa, ca in a.items():
            for key, cv in vec.items():
                r = self._state_nmode(wa, M, key)
                if r:
                    _maxpy(out, ca * cv, r)
        return out

    def _state_nmode(self, wa: Word, M: int, key) -> MVec:
        ck = (wa, M, key)
        hit = self._state_cache.get(ck)
        if hit is not None:
            return hit
        va = self.va
        d = self.degree(key)
        da = va.weight(wa)
        out: MVec = {}
        if d - (M - da + 1) < 0:
            pass
        elif d - (M - da + 1) > self.max_degree:
            raise CutoffError(f"degree {d - (M - da + 1)} exceeds the module limit {self.max_degree}")
        elif not wa:
            if M == -1:
                out = {key: ONE}
        else:
            (m, gi), rest = wa[0], wa[1:]
            du = self.alg.delta[gi]
            N = int(m + du - 1)
            dr = da - du - (-m - du)  # weight of rest
            dr = da + m
            x = {key: ONE}
            # (u_(N) a')_(M) x = sum_j (-1)^j binom(N, j) [u_(N-j) a'_(M+j) x - p (-1)^N a'_(M+N-j) u_(j) x]
            for j in range(0, int(math.floor(d + dr - 1 - M)) + 1):
                cf = binom(N, j)
                if not cf:
                    continue
                inner = self.state_nmode({rest: ONE}, M + j, x)
                if inner:
                    if j % 2:
                        cf = -cf
                    letter = (int(N - j - du + 1), gi)
                    _maxpy(out, cf, self.act_letter(letter, inner))
            sgn = -1 if (self.alg.parity[gi] and va.parity(rest)) else 1
            if N % 2:
                sgn = -sgn
            for j in range(0, int(math.floor(d + du - 1)) + 1):
                cf = binom(N, j)
                if not cf:
                    continue
                inner = self.act_letter((int(j - du + 1), gi), x)
                if not inner:
                    continue
                inner2 = self.state_nmode({rest: ONE}, M + N - j, inner)
                if inner2:
                    s = -sgn if j % 2 == 0 else sgn
                    _maxpy(out, cf * s, inner2)
        self._state_cache[ck] = out
        return out

    def render(self, vec: MVec) -> str:
        if not vec:
            return "0"
        parts = []
        for (w, i), c in sorted(vec.items(), key=lambda kv: (-len(kv[0][0]), kv[0])):
            body = (self.alg.render_word(w) + " " if w else "") + (self.N.labels[i] if i < len(self.N.labels) else f"x{i}")
            parts.append(f"({c.render()}) {body}")
        return " + ".join(parts)


def induce(va: VertexAlgebra, N: ZhuModuleInput, p: int, depth_cutoff: int) -> InducedModule:
    """Induce from N placed at the bottom degree; positive modes act by zero on N."""
    if N.p != 0:
        raise ModuleError("induction is implemented for zero-mode data (level 0); "
                          f"got level-{N.p} data")
    return InducedModule(va, N, p, depth_cutoff)


def verma(va: VertexAlgebra, depth_cutoff: int = 4, weight=LAM, p: int = 0) -> InducedModule:
    return InducedModule(va, verma_input(va.alg, weight), p, depth_cutoff)


# ---------------------------------------------------------------------------
# checks


def _is_zero(v: MVec) -> bool:
    return not v


def borcherds_defect(M: InducedModule, a: Vec, b: Vec, m: int, k: int, n: int, x: MVec) -> MVec:
    """BI(a, b; m, k; n) applied to x (weight-indexed modes m, k)."""
    va = M.va
    out: MVec = {}
    da = va.max_weight(a)
    db = va.max_weight(b)
    if da is None or db is None:
        return out
    dx = max((M.degree(key) for key in x), default=0)
    # sum_j binom(m + Delta_a - 1, j) (a_(n+j) b)_{m+k} x, per component of a
    for wa_, comp in va.components(a).items():
        for j in range(0, int(math.floor(wa_ + db - 1 - n)) + 1):
            cf = binom(m + wa_ - 1, j)
            if not cf:
                continue
            prod = va.nth(comp, b, n + j)
            if prod:
                _maxpy(out, cf, M.state_mode(prod, m + k, x))
    # - sum_j (-1)^j binom(n, j) [a_{m+n-j} b_{k+j-n} x - (-1)^n b_{k-j} a_{m+j} x]
    sn = -1 if n % 2 else 1
    j = 0
    while True:
        # b_{k+j-n} x vanishes once k + j - n > dx
        if k + j - n > dx and (m + j) > dx:
            break
        if n >= 0 and j > n:
            break
        cf = binom(n, j)
        if cf:
            s = cf if j % 2 == 0 else -cf
            if k + j - n <= dx:
                t1 = M.state_mode(a, m + n - j, M.state_mode(b, k + j - n, x))
                _maxpy(out, -s, t1)
            if m + j <= dx:
                t2 = M.state_mode(b, k - j, M.state_mode(a, m + j, x))
                _maxpy(out, s * sn, t2)
        j += 1
    return out


@dataclass
class CheckResult:
    name: str
    inputs: Dict[str, str]
    status: str
    defect: Optional[str] = None

    def to_json(self) -> dict:
        return {"suite": "modules", "check": self.name, "inputs": dict(self.inputs),
                "status": self.status, "defect": self.defect}


def _result(name, inputs, M: InducedModule, vec: MVec) -> CheckResult:
    if not vec:
        return CheckResult(name, inputs, "pass")
    return CheckResult(name, inputs, "fail", M.render(vec))


def _diff(a: MVec, b: MVec) -> MVec:
    out = dict(a)
    for k, v in b.items():
        _madd(out, k, -v)
    return out


def check_zhu_action(M: InducedModule, a: Vec, b: Vec, p: int, x: MVec) -> MVec:
    """(a *_p b)_0 x - a_0 b_0 x at hbar = 1; zero on the degree-p piece."""
    va = M.va
    lhs = M.state_mode(va.star(a, b, p, 1), 0, x)
    rhs = M.state_mode(a, 0, M.state_mode(b, 0, x))
    return _diff(lhs, rhs)


def check_akbk(M: InducedModule, a: Vec, b: Vec, k: int, p: int, x: MVec) -> MVec:
    """a_{-k} b_k x - sum_{m=0}^{p-k} binom(-p-1-k, m) (a_[-p-1-k-m] b)_0 x at hbar = 1."""
    if not 0 <= k <= p:
        raise ValueError("need 0 <= k <= p")
    va = M.va
    lhs = M.state_mode(a, -k, M.state_mode(b, k, x))
    rhs: MVec = {}
    for m in range(p - k + 1):
        st = va.zhu_mode(a, b, -p - 1 - k - m, p, 1)
        _maxpy(rhs, binom(-p - 1 - k, m), M.state_mode(st, 0, x))
    return _diff(lhs, rhs)


def check_THann(M: InducedModule, a: Vec, x: MVec) -> MVec:
    """((T + Delta_a) a)_0 x, which must vanish."""
    va = M.va
    out: MVec = {}
    for d, comp in va.components(a).items():
        st = vsum(va.translate(comp), vscale(comp, d))
        _maxpy(out, ONE, M.state_mode(st, 0, x))
    return out


def compose_modes(M: InducedModule, a: Vec, b: Vec, m: int, k: int) -> Vec:
    """A state c with c_{m+k} = a_m b_k on every vector of degree <= depth_cutoff.

    Descending induction on k starting from mbar = kbar = depth_cutoff + 1:
    c(m, k) = sum_j binom(mbar + Delta_a - 1, j) a_(m - mbar + j) b
              - sum_{j=1}^{kbar-k-1} (-1)^j binom(m - mbar, j) c(m - j, k + j).
    """
    va = M.va
    D = M.depth_cutoff
    mbar = kbar = D + 1
    cache: Dict[Tuple[int, int], Vec] = {}

    def c(mm: int, kk: int) -> Vec:
        if kk >= kbar:
            return {}
        hit = cache.get((mm, kk))
        if hit is not None:
            return hit
        out: Vec = {}
        n = mm - mbar
        db = va.max_weight(b) or 0
        for da, comp in va.components(a).items():
            for j in range(0, int(math.floor(da + db - 1 - n)) + 1):
                cf = binom(mbar + da - 1, j)
                if cf:
                    vaxpy(out, cf, va.nth(comp, b, n + j))
        for j in range(1, kbar - kk):
            cf = binom(n, j)
            if cf:
                vaxpy(out, cf if j % 2 else -cf, c(mm - j, kk + j))
        cache[(mm, kk)] = out
        return out

    return c(m, k)


def j_annihilation(M: InducedModule, span_gens: Sequence[Tuple[str, Vec]], x: MVec) -> List[Tuple[str, MVec]]:
    """Zero modes of J generators applied to x; all must vanish on M_q, q <= p."""
    return [(label, M.state_mode(v, 0, x)) for label, v in span_gens]


# ---------------------------------------------------------------------------
# the module suite


def _w(va: VertexAlgebra, w: Word) -> str:
    return va.render({w: ONE})


def default_module_input(va: VertexAlgebra) -> ZhuModuleInput:
    """Verma data for one-generator algebras, the two-dimensional representation otherwise."""
    alg = va.alg
    if len(alg.names) == 1:
        return verma_input(alg)
    if set(alg.names) == {"e", "h", "f"}:
        z, o, m = ZERO, ONE, -ONE
        mats = {"e": [[z, o], [z, z]], "h": [[o, z], [z, m]], "f": [[z, z], [o, z]]}
        words = {g: UEElement(alg, {((0, alg.index[g]),): ONE}) for g in "ehf"}
        return ZhuModuleInput(alg, 0, 2, words, mats, ["v+", "v-"])
    return trivial_input(alg)


def run_module_suite(va: VertexAlgebra, p_list: Sequence[int], depth: int = 4, N: Optional[ZhuModuleInput] = None,
                     state_weight: int = 4, borcherds_modes: int = 3, borcherds_ns=range(-3, 3),
                     j_weight: int = 6) -> List[CheckResult]:
    """Module-side checks on the module induced from N (default: a Verma module)."""
    from .suites import j_generators

    N = N or default_module_input(va)
    M = induce(va, N, 0, depth)
    out: List[CheckResult] = []
    states = sorted(va.basis_upto(state_weight), key=lambda w: (va.weight(w), w))
    by_depth = {d: M.basis(d) for d in range(depth + 1)}
    everything = [k for d in range(depth + 1) for k in by_depth[d]]

    def label(key):
        return M.render({key: ONE})

    # graded action and, for Virasoro-type algebras, L_0 = lambda + j on depth j
    for d in range(depth + 1):
        for key in by_depth[d]:
            for gi, g in enumerate(va.alg.names):
                for n in (-1, 0, 1):
                    if d - n < 0 or d - n > M.max_degree:
                        continue
                    img = M.act(g, n, {key: ONE})
                    bad = {k: v for k, v in img.items() if M.degree(k) != d - n}
                    out.append(_result("grading", {"x": label(key), "mode": f"{g}[{n}]"}, M, bad))
            if "L" in va.alg.index and N.dimension == 1 and va.alg.delta[va.alg.index["L"]] == 2:
                img = M.act("L", 0, {key: ONE})
                lam = N.action["L"][0][0]
                out.append(_result("L0-eigenvalue", {"x": label(key), "depth": str(d)}, M,
                                   _diff(img, {key: lam + d})))
    # Borcherds identity on the induced module
    R = borcherds_modes
    for a in states:
        for b in states:
            for m in range(-R, R + 1):
                for k in range(-R, R + 1):
                    for n in borcherds_ns:
                        for key in everything:
                            inputs = {"a": _w(va, a), "b": _w(va, b), "m": str(m), "k": str(k), "n": str(n),
                                      "x": label(key)}
                            try:
                                d = borcherds_defect(M, {a: ONE}, {b: ONE}, m, k, n, {key: ONE})
                            except CutoffError as exc:
                                out.append(CheckResult("borcherds", inputs, "truncated", str(exc)))
                                continue
                            out.append(_result("borcherds", inputs, M, d))
    for a in states:
        for key in everything:
            out.append(_result("THann", {"a": _w(va, a), "x": label(key)}, M, check_THann(M, {a: ONE}, {key: ONE})))
    for p in p_list:
        if p > depth:
            out.append(CheckResult("zhu-action", {"p": str(p)}, "truncated", f"p exceeds module depth {depth}"))
            continue
        for a in states:
            for b in states:
                for key in by_depth[p]:
                    inputs = {"a": _w(va, a), "b": _w(va, b), "p": str(p), "x": label(key)}
                    out.append(_result("zhu-action", inputs, M, check_zhu_action(M, {a: ONE}, {b: ONE}, p, {key: ONE})))
                    for k in range(p + 1):
                        inputs = {"a": _w(va, a), "b": _w(va, b), "k": str(k), "p": str(p), "x": label(key)}
                        out.append(_result("akbk", inputs, M, check_akbk(M, {a: ONE}, {b: ONE}, k, p, {key: ONE})))
        gens = j_generators(va, p, 1, j_weight)
        for q in range(p + 1):
            for key in by_depth[q]:
                for glabel, v in j_annihilation(M, gens, {key: ONE}):
                    out.append(_result("J-annihilation", {"j": glabel, "p": str(p), "q": str(q), "x": label(key)}, M, v))
    # composing modes, for the first two generators' states
    gen_states = [va.gen(g) for g in va.alg.names][:2]
    for a in gen_states:
        for b in gen_states:
            for (m, k) in ((1, -1), (2, -2), (0, -1)):
                c = compose_modes(M, a, b, m, k)
                inputs = {"a": va.render(a), "b": va.render(b), "m": str(m), "k": str(k)}
                defect: MVec = {}
                for key in everything:
                    x = {key: ONE}
                    try:
                        lhs = M.state_mode(a, m, M.state_mode(b, k, x))
                    except CutoffError:
                        continue
                    dd = _diff(M.state_mode(c, m + k, x), lhs)
                    for kk, vv in dd.items():
                        _madd(defect, kk, vv)
                out.append(_result("compose", inputs, M, defect))
    return out
