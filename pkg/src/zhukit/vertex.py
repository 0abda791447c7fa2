"""The universal enveloping vertex algebra V(R) as a weight-graded state space.

States are linear combinations of sorted creation words applied to the
vacuum.  Internally a creation letter is a weight-indexed mode ``(m, g)``
with m <= -Delta_g (so the (n)-index m + Delta_g - 1 is <= -1).  All
products are exact; coefficients live in Q[c, k][h, 1/h], h standing for
hbar.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .enveloping import ModeAlgebra, SPECIALIZATIONS, Vec, Word, vadd, vaxpy
from .grading import TwistData, chi as chi_of
from .lca import LcaSpec
from .linalg import RowSpace
from .scalars import HBAR, ONE, ZERO, PolyScalar, binom

VAC: Vec = {(): ONE}


class TruncationError(ArithmeticError):
    """A computation would need states beyond the configured weight cutoff."""


@dataclass(frozen=True)
class TruncationPolicy:
    """weight_cutoff bounds the weights of states fed to identity checks and the
    span of J; series_order bounds the number of series coefficients compared."""

    weight_cutoff: Fraction = Fraction(6)
    series_order: int = 8

    def __post_init__(self):
        object.__setattr__(self, "weight_cutoff", Fraction(self.weight_cutoff))
        if self.weight_cutoff < 0 or self.series_order < 0:
            raise ValueError("cutoffs must be non-negative")


def _scal(x) -> PolyScalar:
    return PolyScalar.coerce(x)


class VState:
    """Immutable wrapper around a state vector for the public API."""

    __slots__ = ("va", "terms")

    def __init__(self, va: "VertexAlgebra", terms: Vec):
        self.va = va
        self.terms = {w: v for w, v in terms.items() if v}

    def __add__(self, other: "VState") -> "VState":
        return VState(self.va, vsum(self.terms, other.terms))

    def __sub__(self, other: "VState") -> "VState":
        return VState(self.va, vsum(self.terms, vscale(other.terms, -1)))

    def __neg__(self) -> "VState":
        return VState(self.va, vscale(self.terms, -1))

    def scale(self, s) -> "VState":
        return VState(self.va, vscale(self.terms, s))

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        if isinstance(other, VState):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def weights(self) -> set:
        return {self.va.weight(w) for w in self.terms}

    def render(self) -> str:
        return self.va.render(self.terms)

    __str__ = render

    def __repr__(self) -> str:
        return f"VState({self.render()!r})"


def vsum(a: Vec, b: Vec) -> Vec:
    out = dict(a)
    for w, v in b.items():
        vadd(out, w, v)
    return out


def vscale(a: Vec, s) -> Vec:
    s = _scal(s)
    if not s:
        return {}
    return {w: v * s for w, v in a.items()}


def veval(a: Vec, values) -> Vec:
    out = {}
    for w, v in a.items():
        t = v.eval_at(values)
        if t:
            out[w] = t
    return out


class VertexAlgebra:
    """V(R) for a Lie conformal algebra R (untwisted instantiation)."""

    def __init__(self, spec: LcaSpec | ModeAlgebra):
        self.alg = spec if isinstance(spec, ModeAlgebra) else ModeAlgebra(spec)
        self.spec = self.alg.spec
        self.delta = self.alg.delta
        self.nz = self.alg.normalizer("vacuum")
        self._nth: Dict[Tuple[Word, Word, int], Vec] = {}
        self._basis: Dict[Fraction, List[Word]] = {}
        for g in self.spec.generators:
            if not g.degree_coset.contains(g.weight):
                raise NotImplementedError("twisted generators are not supported by the state-space engine")

    # -- bookkeeping -------------------------------------------------------
    @staticmethod
    def weight(w: Word) -> Fraction:
        return -sum((m for m, _ in w), 0)

    def parity(self, w: Word) -> int:
        return sum(self.alg.parity[g] for _, g in w) % 2

    def max_weight(self, a: Vec):
        return max((self.weight(w) for w in a), default=None)

    def components(self, a: Vec) -> Dict[Fraction, Vec]:
        out: Dict[Fraction, Vec] = {}
        for w, v in a.items():
            out.setdefault(self.weight(w), {})[w] = v
        return out

    def basis(self, weight) -> List[Word]:
        """Sorted creation words of the given weight."""
        weight = Fraction(weight)
        hit = self._basis.get(weight)
        if hit is not None:
            return hit
        letters = []
        for gi, d in enumerate(self.delta):
            m = -d
            while -m <= weight:
                letters.append((m if isinstance(m, int) else _intify(m), gi))
                m -= 1
        letters.sort()
        out: List[Word] = []

        def rec(start: int, remaining: Fraction, acc: list):
            if remaining == 0:
                out.append(tuple(acc))
                return
            for i in range(start, len(letters)):
                m, g = letters[i]
                if -m <= remaining:
                    acc.append(letters[i])
                    rec(i, remaining + m, acc)
                    acc.pop()

        rec(0, weight, [])
        out.sort()
        self._basis[weight] = out
        return out

    def basis_upto(self, cutoff) -> List[Word]:
        out = []
        w = Fraction(0)
        weights = sorted({Fraction(0)} | {Fraction(d) for d in self.delta})
        step = Fraction(1)
        # all weights are in Z for the untwisted engine
        while w <= cutoff:
            out.extend(self.basis(w))
            w += step
        return out

    def gen(self, name: str) -> Vec:
        gi = self.alg.index[name]
        return {((_intify(-self.delta[gi]), gi),): ONE}

    def state(self, terms: Vec) -> VState:
        return VState(self, terms)

    def render(self, a: Vec) -> str:
        from .enveloping import render_vec

        def word(w: Word) -> str:
            if not w:
                return "vac"
            return " ".join(f"{self.alg.names[g]}_({_intify(m + self.delta[g] - 1)})" for m, g in w) + " vac"

        return render_vec(self.alg, a, word_render=word)

    # -- modes of generators on states ------------------------------------------
    def apply_mode(self, gi: int, N, a: Vec) -> Vec:
        """u_(N) a for the generator with index gi."""
        letter = (_intify(N - self.delta[gi] + 1), gi)
        out: Vec = {}
        for w, v in a.items():
            vaxpy(out, v, self.nz.left_mult(letter, w))
        return out

    def apply_word(self, letters: Sequence[Tuple[int, int]], a: Vec) -> Vec:
        """Apply weight-indexed letters, rightmost first."""
        return self.nz.mult_word(list(letters), a)

    # -- n-th products ---------------------------------------------------------
    def nth(self, a: Vec, b: Vec, n: int) -> Vec:
        out: Vec = {}
        for wa, ca in a.items():
            for wb, cb in b.items():
                r = self._nth_basis(wa, wb, n)
                if r:
                    vaxpy(out, ca * cb, r)
        return out

    def _nth_basis(self, wa: Word, wb: Word, n: int) -> Vec:
        key = (wa, wb, n)
        hit = self._nth.get(key)
        if hit is not None:
            return hit
        da, db = self.weight(wa), self.weight(wb)
        if da + db - n - 1 < 0:
            out: Vec = {}
        elif not wa:
            out = {wb: ONE} if n == -1 else {}
        else:
            (m, gi), rest = wa[0], wa[1:]
            du = self.delta[gi]
            N = _intify(m + du - 1)
            dr = da - du + m + du  # weight of rest = da - (-m)
            dr = da + m
            out = {}
            b_vec = {wb: ONE}
            # (u_(N) a')_(n) c = sum_j (-1)^j binom(N, j) [u_(N-j) a'_(n+j) c
            #                        - p(u, a') (-1)^N a'_(n+N-j) u_(j) c]
            jmax = math.floor(dr + db - 1 - n)
            for j in range(0, jmax + 1):
                cf = binom(N, j)
                if not cf:
                    continue
                inner = self.nth({rest: ONE}, b_vec, n + j)
                if inner:
                    if j % 2:
                        cf = -cf
                    vaxpy(out, cf, self.apply_mode(gi, N - j, inner))
            sgn = -1 if (self.alg.parity[gi] and self.parity(rest)) else 1
            if N % 2:
                sgn = -sgn
            for j in range(0, math.floor(du + db - 1) + 1):
                cf = binom(N, j)
                if not cf:
                    continue
                inner = self.apply_mode(gi, j, b_vec)
                if not inner:
                    continue
                inner2 = self.nth({rest: ONE}, inner, n + N - j)
                if inner2:
                    s = -sgn if j % 2 == 0 else sgn
                    vaxpy(out, cf * s, inner2)
        self._nth[key] = out
        return out

    # -- T and H ----------------------------------------------------------------
    def translate(self, a: Vec) -> Vec:
        """T as a derivation: [T, u_(N)] = -N u_(N-1), T vac = 0."""
        out: Vec = {}
        for w, v in a.items():
            for i, (m, gi) in enumerate(w):
                N = m + self.delta[gi] - 1
                letters = list(w[:i]) + [(_intify(m - 1), gi)] + list(w[i + 1:])
                vaxpy(out, v * (-N), self.apply_word(letters, VAC))
        return out

    def energy(self, a: Vec) -> Vec:
        out: Vec = {}
        for w, v in a.items():
            wt = self.weight(w)
            if wt:
                out[w] = v * wt
        return out

    # -- the Zhu modes ------------------------------------------------------------
    def zhu_mode(self, a: Vec, b: Vec, n: int, p: int, hbar=HBAR) -> Vec:
        """a_[n, hbar] b = sum_j binom(gamma_a + p, j) hbar^j a_(n+j) b, per weight component of a."""
        hb = _scal(hbar)
        out: Vec = {}
        db = self.max_weight(b)
        if db is None:
            return out
        for da, comp in self.components(a).items():
            gamma = da  # untwisted: gamma_a = Delta_a
            jmax = math.floor(da + db - 1 - n)
            hp = ONE
            for j in range(0, jmax + 1):
                cf = binom(gamma + p, j)
                if cf:
                    r = self.nth(comp, b, n + j)
                    if r:
                        vaxpy(out, cf * hp, r)
                hp = hp * hb
        return out

    def star(self, a: Vec, b: Vec, p: int, hbar=HBAR) -> Vec:
        """a *_{p, hbar} b = sum_{m=0}^p binom(-p-1, m) hbar^(-p-m) a_[-p-1-m] b."""
        hb = _scal(hbar)
        out: Vec = {}
        for m in range(p + 1):
            cf = binom(-p - 1, m) * hb ** (-p - m)
            vaxpy(out, cf, self.zhu_mode(a, b, -p - 1 - m, p, hb))
        return out

    def hbar_bracket(self, a: Vec, b: Vec, p: int, hbar=HBAR) -> Vec:
        """[a, b]_hbar = sum_j binom(-p-1, j) hbar^j a_[j] b."""
        hb = _scal(hbar)
        out: Vec = {}
        db = self.max_weight(b)
        da = self.max_weight(a)
        if db is None or da is None:
            return out
        hp = ONE
        for j in range(0, math.floor(da + db - 1) + 1):
            r = self.zhu_mode(a, b, j, p, hb)
            if r:
                vaxpy(out, binom(-p - 1, j) * hp, r)
            hp = hp * hb
        return out

    def hbar_bracket_direct(self, a: Vec, b: Vec, hbar=HBAR) -> Vec:
        """Second form: sum_j binom(gamma_a - 1, j) hbar^j a_(j) b."""
        hb = _scal(hbar)
        out: Vec = {}
        db = self.max_weight(b)
        if db is None:
            return out
        for da, comp in self.components(a).items():
            hp = ONE
            for j in range(0, math.floor(da + db - 1) + 1):
                r = self.nth(comp, b, j)
                if r:
                    vaxpy(out, binom(da - 1, j) * hp, r)
                hp = hp * hb
        return out

    def t_plus_hbar_h(self, a: Vec, hbar=HBAR) -> Vec:
        return vsum(self.translate(a), vscale(self.energy(a), hbar))


def _intify(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


# ---------------------------------------------------------------------------
# functional API on VState


def nth_product(a: VState, b: VState, n: int) -> VState:
    return VState(a.va, a.va.nth(a.terms, b.terms, n))


def translate(a: VState) -> VState:
    return VState(a.va, a.va.translate(a.terms))


def energy(a: VState) -> VState:
    return VState(a.va, a.va.energy(a.terms))


def zhu_mode(a: VState, b: VState, n: int, p: int, hbar=HBAR) -> VState:
    return VState(a.va, a.va.zhu_mode(a.terms, b.terms, n, p, hbar))


def star_p(a: VState, b: VState, p: int, hbar=HBAR) -> VState:
    return VState(a.va, a.va.star(a.terms, b.terms, p, hbar))


def hbar_bracket(a: VState, b: VState, p: int, hbar=HBAR) -> VState:
    return VState(a.va, a.va.hbar_bracket(a.terms, b.terms, p, hbar))


# ---------------------------------------------------------------------------
# the subspace J_p


def _rational_vec(a: Vec, values) -> Dict[Word, Fraction]:
    out = {}
    for w, v in a.items():
        t = v.eval_at(values)
        if not t.is_constant():
            raise ValueError(f"coefficient {t} is not a number after specialization")
        x = t.constant_value()
        if x:
            out[w] = x
    return out


class JSpan:
    """Row-reduced span of the generators of J_p at a fixed hbar, filtered by weight.

    Generators up to top weight ``weight_cutoff + slack`` are reduced with the
    highest-weight columns as pivots, so the rows with pivot weight <= the
    cutoff span the part of that generated space lying in V_{<= cutoff}.
    """

    def __init__(self, va: VertexAlgebra, p: int, weight_cutoff, hbar=1, slack: int = 2, values=None):
        hbar = Fraction(hbar)
        if hbar == 0:
            raise ValueError("hbar must be non-zero")
        self.va, self.p, self.hbar = va, p, hbar
        self.cutoff = Fraction(weight_cutoff)
        self.slack = slack
        self.values = dict(values or SPECIALIZATIONS[0])
        self.values["h"] = hbar
        self.space = RowSpace(key=lambda w: (va.weight(w), w))
        self.generator_count = 0
        top = self.cutoff + slack
        words = va.basis_upto(top)
        # untwisted: chi = 0 throughout, eps_a = 0 for every state
        chi = chi_of(TwistData.untwisted(0), TwistData.untwisted(0))
        self.n_gen = -2 * p - 2 + chi
        for w in words:
            if va.weight(w) + 1 <= top:
                self._add(va.t_plus_hbar_h({w: ONE}, hbar))
        for wa in words:
            for wb in words:
                if not wa:
                    continue  # vac_[n] b = binom(p, -n-1) hbar^(-n-1) b vanishes here
                if va.weight(wa) + va.weight(wb) - self.n_gen - 1 <= top:
                    self._add(va.zhu_mode({wa: ONE}, {wb: ONE}, self.n_gen, p, hbar))

    def _add(self, vec: Vec) -> None:
        self.generator_count += 1
        self.space.add(_rational_vec(vec, self.values))

    def contains(self, x: Vec):
        """True / False, or "undecided" when x has components above the cutoff."""
        if any(self.va.weight(w) > self.cutoff for w in x):
            return "undecided"
        return self.space.contains(_rational_vec(x, self.values))

    def rows_within_cutoff(self) -> List[Dict[Word, Fraction]]:
        return [r for r in self.space.rows() if max(self.va.weight(w) for w in r) <= self.cutoff]


_JCACHE: Dict[tuple, JSpan] = {}


def j_span(va: VertexAlgebra, p: int, policy: TruncationPolicy, hbar_value=1, slack: int = 2) -> JSpan:
    key = (id(va), p, policy.weight_cutoff, Fraction(hbar_value), slack)
    hit = _JCACHE.get(key)
    if hit is None or hit.va is not va:
        hit = JSpan(va, p, policy.weight_cutoff, hbar_value, slack)
        _JCACHE[key] = hit
    return hit


def in_j(x: VState, span: JSpan):
    return span.contains(x.terms)
