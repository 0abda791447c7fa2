"""The mode Lie algebra Lie(R), PBW normal ordering and level-p Zhu algebras.

Modes are indexed by conformal weight: a_n = a_(n + Delta_a - 1).  A
letter is the pair ``(n, generator index)``; a word is a tuple of letters.
Central modes are replaced by scalars on construction (C_n -> c delta_{n,0}),
so the algebra computed is U(Lie R)/(C - c).

Normal ordering is done by inserting one letter at a time into an already
sorted word.  The same routine computes in quotients U/I by a left ideal I
spanned by sorted words, provided the caller supplies the "dead word"
predicate; this covers both Z_p and the vacuum module V(R).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .grading import eps
from .lca import LcaSpec
from .linalg import RowSpace, left_kernel, rref
from .scalars import ONE, ZERO, PolyScalar, binom

Letter = Tuple[object, int]
Word = Tuple[Letter, ...]
Vec = Dict[Word, PolyScalar]

# generic values used when a computation needs c, k specialized to rationals
SPECIALIZATIONS = (
    {"c": Fraction(37, 13), "k": Fraction(-5, 7)},
    {"c": Fraction(-5, 7), "k": Fraction(11, 3)},
    {"c": Fraction(11, 3), "k": Fraction(37, 13)},
)


def _num(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else x


class ModeOp(NamedTuple):
    """The mode a_n of generator ``gen`` (conformal-weight indexing)."""

    gen: str
    n: object


def vadd(target: Vec, word: Word, coeff: PolyScalar) -> None:
    cur = target.get(word)
    new = coeff if cur is None else cur + coeff
    if new:
        target[word] = new
    else:
        target.pop(word, None)


def vaxpy(target: Vec, coeff: PolyScalar, source: Vec) -> None:
    if coeff == 1:
        for w, v in source.items():
            vadd(target, w, v)
    else:
        for w, v in source.items():
            vadd(target, w, v * coeff)


class ModeAlgebra:
    """Lie(R) for a Lie conformal algebra, with cached brackets."""

    def __init__(self, spec: LcaSpec):
        self.spec = spec
        self.names = [g.id for g in spec.generators]
        self.delta = [g.weight for g in spec.generators]
        self.parity = [g.parity for g in spec.generators]
        self.index = dict(spec.gen_index)
        self._bracket_cache: Dict[Tuple[Letter, Letter], Vec] = {}
        self._normalizers: Dict[object, "Normalizer"] = {}

    # -- letters ---------------------------------------------------------
    def letter(self, gen: str, n) -> Letter:
        if gen not in self.index:
            raise KeyError(f"unknown generator {gen!r}")
        gi = self.index[gen]
        n = _num(n)
        g = self.spec.generators[gi]
        if not g.twist.degree_coset.contains(Fraction(n) + g.weight) and g.degree_coset.is_zero() is False:
            pass
        return (n, gi)

    def op(self, letter: Letter) -> ModeOp:
        return ModeOp(self.names[letter[1]], letter[0])

    def from_op(self, op: ModeOp) -> Letter:
        return self.letter(op.gen, op.n)

    def sign(self, x: Letter, y: Letter) -> int:
        return -1 if self.parity[x[1]] and self.parity[y[1]] else 1

    def render_letter(self, x: Letter) -> str:
        return f"{self.names[x[1]]}[{x[0]}]"

    def render_word(self, w: Word) -> str:
        out = []
        for x, grp in itertools.groupby(w):
            k = len(list(grp))
            out.append(self.render_letter(x) + (f"^{k}" if k > 1 else ""))
        return " ".join(out)

    # -- bracket -----------------------------------------------------------
    def bracket(self, x: Letter, y: Letter) -> Vec:
        """[a_m, b_k] as {(): scalar, (letter,): coefficient}."""
        key = (x, y)
        hit = self._bracket_cache.get(key)
        if hit is not None:
            return hit
        m, a = x
        k, b = y
        out: Vec = {}
        an, bn = self.names[a], self.names[b]
        top = m + self.delta[a] - 1
        mk = _num(m + k)
        for j in range(self.spec.max_j.get((an, bn), -1) + 1):
            elem = self.spec.product(an, bn, j)
            if not elem:
                continue
            bj = binom(Fraction(top), j)
            if not bj:
                continue
            for (r, g), v in elem.terms.items():
                gi = self.index[g]
                # (T^r g)_n = (-1)^r prod_{i<r} (n + Delta_g + i) g_n
                f = Fraction(1)
                for i in range(r):
                    f *= -(mk + self.delta[gi] + i)
                if f:
                    vadd(out, ((mk, gi),), v * bj * f)
            if mk == 0:
                for z, v in elem.central.items():
                    vadd(out, (), v * bj * PolyScalar.symbol(self.spec.central_symbol[z]))
        self._bracket_cache[key] = out
        return out

    # -- normal ordering contexts -----------------------------------------
    def normalizer(self, kind: str = "pbw", p=None) -> "Normalizer":
        key = (kind, p)
        hit = self._normalizers.get(key)
        if hit is not None:
            return hit
        if kind == "pbw":
            nz = Normalizer(self, sort_key=None, dead=None)
        elif kind == "zhu":
            nz = Normalizer(self, sort_key=None, dead=_zhu_dead(p))
        elif kind == "vacuum":
            nz = Normalizer(self, sort_key=self.vacuum_key, dead=self.vacuum_dead)
        else:
            raise ValueError(kind)
        self._normalizers[key] = nz
        return nz

    # vacuum module V(R) = U / U (Lie R)_+ where (Lie R)_+ = {a_(j), j >= 0}
    def is_annihilator(self, x: Letter) -> bool:
        return x[0] + self.delta[x[1]] - 1 >= 0

    def vacuum_key(self, x: Letter):
        return (self.is_annihilator(x), x[0], x[1])

    def vacuum_dead(self, w: Word) -> bool:
        return bool(w) and self.is_annihilator(w[-1])


def _zhu_dead(p):
    def dead(w: Word) -> bool:
        s = 0
        for n, _ in reversed(w):
            if n <= 0:
                break
            s += n
            if s > p:
                return True
        return False
    return dead


class Normalizer:
    """Left multiplication of a letter on sorted words, modulo dead words.

    ``sort_key`` orders letters (default: the letter tuple, i.e. mode then
    generator).  ``dead`` flags sorted words lying in the left ideal that is
    being quotiented out; it must describe a left ideal spanned by sorted
    words for the result to be meaningful.
    """

    def __init__(self, alg: ModeAlgebra, sort_key=None, dead=None):
        self.alg = alg
        self.key = sort_key
        self.dead = dead
        self._cache: Dict[Tuple[Letter, Word], Vec] = {}

    def _le(self, x: Letter, y: Letter) -> bool:
        if self.key is None:
            return x <= y
        return self.key(x) <= self.key(y)

    def sort_word(self, w: Sequence[Letter]) -> Word:
        return tuple(sorted(w, key=self.key))

    def _prepend(self, x: Letter, w: Word) -> Vec:
        nw = (x,) + w
        if self.dead is not None and self.dead(nw):
            return {}
        return {nw: ONE}

    def left_mult(self, x: Letter, w: Word) -> Vec:
        """Normal form of x * w for a sorted live word w."""
        ck = (x, w)
        hit = self._cache.get(ck)
        if hit is not None:
            return hit
        alg = self.alg
        if not w:
            out = self._prepend(x, w)
        else:
            y = w[0]
            rest = w[1:]
            if x == y and alg.parity[x[1]]:
                # x x = 1/2 [x, x] for odd x
                out = {}
                for z, v in alg.bracket(x, x).items():
                    vaxpy(out, v * Fraction(1, 2), self._apply_word(z, rest))
            elif self._le(x, y):
                out = self._prepend(x, w)
            else:
                out = {}
                s = alg.sign(x, y)
                for u, cu in self.left_mult(x, rest).items():
                    vaxpy(out, cu if s == 1 else -cu, self.left_mult(y, u))
                for z, v in alg.bracket(x, y).items():
                    vaxpy(out, v, self._apply_word(z, rest))
        self._cache[ck] = out
        return out

    def _apply_word(self, z: Word, w: Word) -> Vec:
        if not z:
            return {w: ONE}
        (letter,) = z
        return self.left_mult(letter, w)

    def mult_word(self, u: Sequence[Letter], v: Vec) -> Vec:
        """Normal form of u * v for an arbitrary word u and a normal-form vector v."""
        cur = v
        for x in reversed(u):
            nxt: Vec = {}
            for w, c in cur.items():
                vaxpy(nxt, c, self.left_mult(x, w))
            cur = nxt
            if not cur:
                break
        return cur

    def mult(self, a: Vec, b: Vec) -> Vec:
        out: Vec = {}
        for u, cu in a.items():
            vaxpy(out, cu, self.mult_word(u, b))
        return out

    def normalize(self, a: Vec) -> Vec:
        """Normal form of an arbitrary (unsorted) linear combination of words."""
        return self.mult(a, {(): ONE})


# ---------------------------------------------------------------------------
# public element type


class UEElement:
    """Element of U(Lie R) (or a quotient) as a sum of sorted monomials."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: ModeAlgebra, terms: Optional[Vec] = None):
        self.alg = alg
        self.terms: Vec = {w: PolyScalar.coerce(v) for w, v in (terms or {}).items() if v}

    @classmethod
    def scalar(cls, alg: ModeAlgebra, s) -> "UEElement":
        return cls(alg, {(): PolyScalar.coerce(s)})

    def __add__(self, other: "UEElement") -> "UEElement":
        out = dict(self.terms)
        for w, v in other.terms.items():
            vadd(out, w, v)
        return UEElement(self.alg, out)

    def __neg__(self) -> "UEElement":
        return UEElement(self.alg, {w: -v for w, v in self.terms.items()})

    def __sub__(self, other: "UEElement") -> "UEElement":
        return self + (-other)

    def scale(self, s) -> "UEElement":
        s = PolyScalar.coerce(s)
        return UEElement(self.alg, {w: v * s for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, UEElement):
            nz = self.alg.normalizer("pbw")
            return UEElement(self.alg, nz.mult(self.terms, other.terms))
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) or isinstance(other, PolyScalar):
            return self == UEElement.scalar(self.alg, other)
        if not isinstance(other, UEElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def monomials(self) -> List[Tuple[PolyScalar, Tuple[ModeOp, ...]]]:
        return [(v, tuple(self.alg.op(x) for x in w)) for w, v in self.terms.items()]

    def degrees(self) -> set:
        return {sum((x[0] for x in w), 0) for w in self.terms}

    def eval_at(self, values) -> "UEElement":
        return UEElement(self.alg, {w: v.eval_at(values) for w, v in self.terms.items()})

    def render(self) -> str:
        return render_vec(self.alg, self.terms)

    __str__ = render

    def __repr__(self) -> str:
        return f"UEElement({self.render()!r})"


def _word_order(w: Word):
    return (-len(w), w)


def render_vec(alg: ModeAlgebra, terms: Vec, word_render=None) -> str:
    if not terms:
        return "0"
    word_render = word_render or alg.render_word
    parts = []
    for w in sorted(terms, key=_word_order):
        v = terms[w]
        body = word_render(w)
        if not body:
            s = v.render()
        elif v == 1:
            s = body
        elif v == -1:
            s = "-" + body
        elif len(v.terms) == 1:
            s = f"{v.render()} {body}"
        else:
            s = f"({v.render()}) {body}"
        parts.append(s)
    out = parts[0]
    for s in parts[1:]:
        out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
    return out


# ---------------------------------------------------------------------------
# operations


def bracket_modes(alg: ModeAlgebra, a: ModeOp, b: ModeOp) -> UEElement:
    return UEElement(alg, dict(alg.bracket(alg.from_op(a), alg.from_op(b))))


def _letters(alg: ModeAlgebra, word) -> List[Letter]:
    out = []
    for x in word:
        if isinstance(x, ModeOp):
            out.append(alg.from_op(x))
        elif isinstance(x, tuple) and len(x) == 2 and isinstance(x[0], str):
            out.append(alg.letter(*x))
        else:
            out.append(x)
    return out


def pbw_normalize(alg: ModeAlgebra, word, coefficient=1) -> UEElement:
    nz = alg.normalizer("pbw")
    v = nz.mult_word(_letters(alg, word), {(): ONE})
    return UEElement(alg, v).scale(coefficient)


def word_element(alg: ModeAlgebra, word, coefficient=1) -> UEElement:
    return pbw_normalize(alg, word, coefficient)


class DegreeError(ValueError):
    pass


def _check_degree0(x: UEElement) -> None:
    bad = [d for d in x.degrees() if d != 0]
    if bad:
        raise DegreeError(f"element has nonzero degree {bad[0]}; Zhu reduction needs degree 0")


def zp_reduce(x: UEElement, p) -> UEElement:
    """Normal form of a degree-0 element in Z_p = U_0 / (U U_{>p})_0."""
    _check_degree0(x)
    nz = x.alg.normalizer("zhu", p)
    return UEElement(x.alg, nz.normalize(x.terms))


def zp_multiply(x: UEElement, y: UEElement, p) -> UEElement:
    _check_degree0(x)
    _check_degree0(y)
    nz = x.alg.normalizer("zhu", p)
    yr = nz.normalize(y.terms)
    return UEElement(x.alg, nz.mult(x.terms, yr))


def _mode_range(alg: ModeAlgebra, bound) -> List[Letter]:
    """All letters with |n| <= bound (modes taken in each generator's coset)."""
    out = []
    for gi, g in enumerate(alg.spec.generators):
        shift = eps(g.twist)  # modes of g lie in eps + Z
        lo = -int(bound) - 2
        for i in range(lo, int(bound) + 3):
            n = shift + i
            if abs(n) <= bound:
                out.append((_num(n), gi))
    return sorted(out)


def _sorted_words(letters: List[Letter], max_len: int, degree=None, accept=None) -> Iterable[Word]:
    for L in range(max_len + 1):
        for w in itertools.combinations_with_replacement(letters, L):
            if degree is not None and sum((x[0] for x in w), 0) != degree:
                continue
            if accept is not None and not accept(w):
                continue
            yield w


def zp_basis(alg: ModeAlgebra, p, pbw_degree_cutoff: int) -> List[UEElement]:
    """Sorted degree-0 monomials of length <= cutoff with every suffix sum <= p."""
    if pbw_degree_cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    letters = _mode_range(alg, p)
    dead = _zhu_dead(p)
    words = [w for w in _sorted_words(letters, pbw_degree_cutoff, degree=0) if not dead(w)]
    words.sort(key=lambda w: (len(w), w))
    return [UEElement(alg, {w: ONE}) for w in words]


# -- linear-algebra oracle for the definitional ideal ------------------------

def _specialize(v: Vec, values) -> Dict[Word, Fraction]:
    out = {}
    for w, s in v.items():
        t = s.eval_at(values)
        if not t.is_constant():
            raise ValueError(f"coefficient {t} still symbolic after specialization")
        x = t.constant_value()
        if x:
            out[w] = x
    return out


class IdealOracle:
    """Span of normal-ordered products m1 * m2 with deg m2 > p, inside U_0.

    Built once per (p, length cutoff, mode bound); m1 and m2 range over
    sorted monomials with modes |n| <= mode_bound.
    """

    def __init__(self, alg: ModeAlgebra, p, cutoff: int, mode_bound, values=None):
        self.alg, self.p, self.cutoff, self.mode_bound = alg, p, cutoff, mode_bound
        self.values = values or SPECIALIZATIONS[0]
        nz = alg.normalizer("pbw")
        letters = _mode_range(alg, mode_bound)
        words = list(_sorted_words(letters, cutoff))
        by_deg: Dict[object, List[Word]] = {}
        for w in words:
            by_deg.setdefault(sum((x[0] for x in w), 0), []).append(w)
        self.space = RowSpace(key=lambda w: (len(w), w))
        self.generators = 0
        for m2 in words:
            d = sum((x[0] for x in m2), 0)
            if not m2 or d <= p:
                continue
            for m1 in by_deg.get(-d, ()):
                if len(m1) + len(m2) > cutoff:
                    continue
                vec = nz.mult_word(m1 + m2, {(): ONE}) if m1 else {m2: ONE}
                self.space.add(_specialize(vec, self.values))
                self.generators += 1

    def contains(self, x: UEElement):
        """True/False, or the string "undecided" if x is longer than the cutoff."""
        _check_degree0(x)
        nf = x.alg.normalizer("pbw").normalize(x.terms)
        if any(len(w) > self.cutoff for w in nf):
            return "undecided"
        if any(abs(n) > self.mode_bound for w in nf for (n, _) in w):
            return "undecided"
        return self.space.contains(_specialize(nf, self.values))


_ORACLES: Dict[tuple, IdealOracle] = {}


def ideal_membership(x: UEElement, p, filtration_cutoff: int = 4, mode_bound=None):
    """Independent oracle: is x in (U U_{>p})_0?  Returns True, False or "undecided"."""
    if mode_bound is None:
        mb = max([abs(n) for w in x.terms for (n, _) in w] + [0])
        mode_bound = max(mb, p + 1)
    key = (id(x.alg), p, filtration_cutoff, mode_bound)
    orc = _ORACLES.get(key)
    if orc is None or orc.alg is not x.alg:
        orc = IdealOracle(x.alg, p, filtration_cutoff, mode_bound)
        _ORACLES[key] = orc
    return orc.contains(x)


@dataclass
class OracleDisagreement:
    word: str
    normal_form: str
    verdict: object
    reason: str


def oracle_sweep(alg: ModeAlgebra, p, max_length: int = 4, mode_range: int = 3, all_orders: bool = True,
                 mode_bound=None) -> Tuple[int, List[OracleDisagreement]]:
    """Compare zp_reduce against the linear-algebra oracle on degree-0 words.

    For every word w (all orderings, or sorted words only) with letters of
    |mode| <= mode_range, w - zp_reduce(w) must lie in the ideal, and w lies
    in the ideal exactly when its normal form vanishes.  Returns the number of
    words checked and the disagreements.
    """
    bound = mode_bound if mode_bound is not None else 2 * mode_range
    oracle = IdealOracle(alg, p, max_length, bound)
    letters = _mode_range(alg, mode_range)
    if all_orders:
        words = (w for L in range(1, max_length + 1) for w in itertools.product(letters, repeat=L)
                 if sum((x[0] for x in w), 0) == 0)
    else:
        words = (w for w in _sorted_words(letters, max_length, degree=0) if w)
    count, bad = 0, []
    for w in words:
        count += 1
        x = pbw_normalize(alg, [(alg.names[gi], n) for n, gi in w])
        r = zp_reduce(x, p)
        diff = oracle.contains(x - r)
        inside = oracle.contains(x)
        if diff is not True:
            bad.append(OracleDisagreement(alg.render_word(w), r.render(), diff, "w - NF(w) not found in the ideal"))
        elif inside != (not r.terms):
            bad.append(OracleDisagreement(alg.render_word(w), r.render(), inside, "membership and normal form disagree"))
    return count, bad


# -- relation discovery ------------------------------------------------------

class Relation:
    """A linear combination of words in named generators, with integer coefficients."""

    def __init__(self, names: Sequence[str], coeffs: Dict[Tuple[int, ...], object]):
        self.names = list(names)
        self.coeffs = dict(coeffs)

    def render(self) -> str:
        terms = sorted(self.coeffs.items(), key=lambda kv: _gword_key(kv[0]), reverse=True)
        parts = []
        for w, v in terms:
            body = _render_gword(self.names, w)
            v = PolyScalar.coerce(v)
            if not body:
                s = v.render()
            elif v == 1:
                s = body
            elif v == -1:
                s = "-" + body
            elif len(v.terms) == 1:
                s = f"{v.render()} {body}"
            else:
                s = f"({v.render()}) {body}"
            parts.append(s)
        out = parts[0] if parts else "0"
        for s in parts[1:]:
            out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
        return out

    def __repr__(self):
        return f"Relation({self.render()!r})"

    def __eq__(self, other):
        return isinstance(other, Relation) and self.names == other.names and \
            {w: PolyScalar.coerce(v) for w, v in self.coeffs.items()} == \
            {w: PolyScalar.coerce(v) for w, v in other.coeffs.items()}

    def to_json(self) -> dict:
        return {"text": self.render(),
                "terms": [{"word": [self.names[i] for i in w], "coeff": PolyScalar.coerce(v).render()}
                          for w, v in sorted(self.coeffs.items(), key=lambda kv: _gword_key(kv[0]), reverse=True)]}


def _gword_key(w: Tuple[int, ...]):
    # longer words lead; among equal length, later generators lead
    return (len(w), w)


def _render_gword(names, w) -> str:
    out = []
    for i, grp in itertools.groupby(w):
        k = len(list(grp))
        out.append(names[i] + (f"^{k}" if k > 1 else ""))
    return " ".join(out)


def _integer_normalize(vec: Dict) -> Dict:
    from math import gcd, lcm

    den = 1
    for v in vec.values():
        den = lcm(den, Fraction(v).denominator)
    ints = {w: int(Fraction(v) * den) for w, v in vec.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, abs(v))
    lead = max(ints, key=_gword_key)
    s = -1 if ints[lead] < 0 else 1
    return {w: s * v // g for w, v in ints.items()}


def find_relations(alg: ModeAlgebra, generators: Sequence[Tuple[str, UEElement]], p, degree_cutoff: int,
                   symbolic_fallback: bool = True) -> List[Relation]:
    """Linear relations among Z_p normal forms of words in the generators.

    Words of length <= degree_cutoff are evaluated; relations implied by
    shorter ones (two-sided consequences u r v) are discarded, so the result
    is a minimal generating list in the order found.
    """
    names = [n for n, _ in generators]
    elems = [e for _, e in generators]
    for e in elems:
        _check_degree0(e)
    nz = alg.normalizer("zhu", p)
    gen_nf = [nz.normalize(e.terms) for e in elems]

    nf_cache: Dict[Tuple[int, ...], Vec] = {(): {(): ONE}}

    def nf(w: Tuple[int, ...]) -> Vec:
        hit = nf_cache.get(w)
        if hit is None:
            # w = (i,) + rest  ->  g_i * nf(rest)
            hit = nz.mult(gen_nf[w[0]], nf(w[1:]))
            nf_cache[w] = hit
        return hit

    gwords: List[Tuple[int, ...]] = []
    found: List[Dict[Tuple[int, ...], object]] = []
    results: List[Relation] = []
    for L in range(degree_cutoff + 1):
        gwords.extend(itertools.product(range(len(names)), repeat=L))
        order = sorted(gwords, key=_gword_key, reverse=True)
        kernels = []
        for vals in SPECIALIZATIONS:
            rows = [_specialize(nf(w), vals) for w in gwords]
            ker = left_kernel(rows)
            kernels.append([{gwords[i]: c for i, c in k.items()} for k in ker])
        # consequences of earlier relations at this length
        cons = []
        for r in found:
            rl = max(len(w) for w in r)
            for lu in range(L - rl + 1):
                for lv in range(L - rl - lu + 1):
                    for u in itertools.product(range(len(names)), repeat=lu):
                        for v in itertools.product(range(len(names)), repeat=lv):
                            cons.append({u + w + v: Fraction(c) for w, c in r.items()})
        new_sets = []
        for ker in kernels:
            space = RowSpace(key=_gword_key)
            for cvec in cons:
                space.add(cvec)
            fresh = []
            for kv in rref(ker, order) if ker else []:
                rem, _ = space.reduce(kv)
                if rem:
                    space.add(rem)
                    fresh.append(rem)
            new_sets.append([_integer_normalize(x) for x in rref(fresh, order)] if fresh else [])
        if all(s == new_sets[0] for s in new_sets):
            new = new_sets[0]
        elif symbolic_fallback:
            new = _symbolic_relations(alg, nf, gwords, order, cons)
        else:
            raise ArithmeticError("relations depend on the specialization of c, k")
        for rel in new:
            found.append(rel)
            results.append(Relation(names, rel))
    return results


def _symbolic_relations(alg, nf, gwords, order, cons):
    """Left kernel over Q(c, k) with sympy; used when specializations disagree."""
    import sympy

    c, k, h = sympy.symbols("c k h")
    cols = sorted({w for g in gwords for w in nf(g)}, key=lambda w: (len(w), w))
    colpos = {w: i for i, w in enumerate(cols)}

    def to_sym(s: PolyScalar):
        expr = 0
        for e, v in s.terms.items():
            expr += sympy.Rational(v.numerator, v.denominator) * c ** e[0] * k ** e[1]
        return expr

    M = sympy.zeros(len(gwords), len(cols))
    for i, g in enumerate(gwords):
        for w, s in nf(g).items():
            M[i, colpos[w]] = to_sym(s)
    ker = M.T.nullspace()
    vecs = []
    for kv in ker:
        kv = sympy.simplify(kv)
        vecs.append({gwords[i]: kv[i] for i in range(len(gwords)) if kv[i] != 0})
    # express over the word order; consequences are numeric so drop spanned ones approximately
    out = []
    for v in vecs:
        lead = max(v, key=_gword_key)
        out.append({w: sympy.factor(x / v[lead]) for w, x in v.items()})
    return out


# -- quotients of U(g) for g spanned by the zero modes -------------------------

def quotient_dim_sequence(alg: ModeAlgebra, ideal_generators: Sequence[UEElement], max_filtration: int,
                          slack: int = 4, values=None) -> List[int]:
    """dim U(g)_{<=d} / (I cap U(g)_{<=d}) for d = 0..max_filtration.

    g is spanned by the mode-0 letters and I is the two-sided ideal generated
    by ``ideal_generators``.  I cap U_{<=d} is approximated by the span of
    x g y (x, y sorted monomials) with total length <= max_filtration + slack,
    row-reduced with the longest words as pivots so that the rows with short
    pivots span exactly the part of that span lying in U_{<=d}.
    """
    values = values or SPECIALIZATIONS[0]
    zero_letters = [(0, gi) for gi in range(len(alg.names))]
    for g in ideal_generators:
        for w in g.terms:
            if any(x[0] != 0 for x in w):
                raise ValueError("ideal generators must only involve mode-0 letters")
    nz = alg.normalizer("pbw")
    D = max_filtration + slack
    monos = list(_sorted_words(zero_letters, D))
    space = RowSpace(key=lambda w: (len(w), w))
    for g in ideal_generators:
        gl = max((len(w) for w in g.terms), default=0)
        for x in monos:
            if len(x) + gl > D:
                continue
            left = nz.mult_word(x, g.terms)
            for y in monos:
                if len(x) + gl + len(y) > D:
                    continue
                vec = nz.mult(left, {y: ONE})
                space.add(_specialize(vec, values))
    pivots = [max(r, key=lambda w: (len(w), w)) for r in space.rows()]
    out = []
    n = len(zero_letters)
    from math import comb

    for d in range(max_filtration + 1):
        total = comb(d + n, n)
        inside = sum(1 for pw in pivots if len(pw) <= d)
        out.append(total - inside)
    return out
