"""Exact scalar ring: polynomials over Q in c, k, gamma, lam with Laurent variable h.

Every coefficient that appears anywhere in zhukit is a :class:`PolyScalar`.
Values are immutable and all operations are pure.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Tuple, Union

SYMBOLS: Tuple[str, ...] = ("c", "k", "gamma", "lam", "h")
_INDEX = {name: i for i, name in enumerate(SYMBOLS)}
_HBAR = _INDEX["h"]
_ZERO_EXP = (0, 0, 0, 0, 0)

Exponent = Tuple[int, int, int, int, int]
Number = Union[int, Fraction]


class PoleError(ArithmeticError):
    """Raised when h = 0 is substituted into a negative power of h."""


class SeriesTruncationError(ValueError):
    """Raised when a coefficient beyond a series' truncation order is requested."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class PolyScalar:
    """Element of Q[c, k, gamma, lam][h, h^-1].

    Terms are stored as ``{exponent vector: Fraction}`` with no zero
    coefficients.  The exponent vector follows :data:`SYMBOLS`; only the
    last entry (h) may be negative.
    """

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping[Exponent, Number] | Number | None = None):
        if terms is None:
            self._t: Dict[Exponent, Fraction] = {}
        elif isinstance(terms, (int, Fraction)):
            self._t = {_ZERO_EXP: Fraction(terms)} if terms else {}
        else:
            t = {}
            for e, v in terms.items():
                if len(e) != 5:
                    raise ValueError(f"exponent vector must have 5 entries, got {e!r}")
                if any(x < 0 for x in e[:4]):
                    raise ValueError(f"negative exponent on a non-Laurent symbol: {e!r}")
                v = _as_fraction(v)
                if v:
                    t[tuple(e)] = v
            self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Exponent, Fraction]) -> "PolyScalar":
        obj = cls.__new__(cls)
        obj._t = terms
        obj._hash = None
        return obj

    @classmethod
    def symbol(cls, name: str, power: int = 1) -> "PolyScalar":
        if name not in _INDEX:
            raise ValueError(f"unknown symbol {name!r}; allowed: {', '.join(SYMBOLS)}")
        e = [0] * 5
        e[_INDEX[name]] = power
        if power < 0 and name != "h":
            raise ValueError("only h may carry negative powers")
        return cls._raw({tuple(e): Fraction(1)})

    @classmethod
    def coerce(cls, x) -> "PolyScalar":
        if isinstance(x, PolyScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return cls._raw({_ZERO_EXP: Fraction(x)} if x else {})
        if isinstance(x, str):
            return parse_scalar(x)
        raise TypeError(f"cannot coerce {x!r} to PolyScalar")

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and _ZERO_EXP in self._t)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self._t.get(_ZERO_EXP, Fraction(0))

    def symbols(self) -> set:
        used = set()
        for e in self._t:
            for i, x in enumerate(e):
                if x:
                    used.add(SYMBOLS[i])
        return used

    def degree(self, name: str | None = None) -> int:
        """Total degree (h excluded) or the degree in one symbol."""
        if not self._t:
            return -1
        if name is None:
            return max(sum(e[:4]) for e in self._t)
        i = _INDEX[name]
        return max(e[i] for e in self._t)

    # -- arithmetic -------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self._t)

    def __neg__(self) -> "PolyScalar":
        return PolyScalar._raw({e: -v for e, v in self._t.items()})

    def __add__(self, other) -> "PolyScalar":
        if not isinstance(other, PolyScalar):
            try:
                other = PolyScalar.coerce(other)
            except TypeError:
                return NotImplemented
        if not other._t:
            return self
        if not self._t:
            return other
        t = dict(self._t)
        for e, v in other._t.items():
            w = t.get(e)
            if w is None:
                t[e] = v
            else:
                w += v
                if w:
                    t[e] = w
                else:
                    del t[e]
        return PolyScalar._raw(t)

    __radd__ = __add__

    def __sub__(self, other) -> "PolyScalar":
        if not isinstance(other, PolyScalar):
            try:
                other = PolyScalar.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "PolyScalar":
        return PolyScalar.coerce(other) - self

    def __mul__(self, other) -> "PolyScalar":
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return PolyScalar._raw({e: v * other for e, v in self._t.items()})
        if not isinstance(other, PolyScalar):
            try:
                other = PolyScalar.coerce(other)
            except TypeError:
                return NotImplemented
        a, b = self._t, other._t
        if not a or not b:
            return ZERO
        if len(b) == 1 and _ZERO_EXP in b:
            return self * b[_ZERO_EXP]
        if len(a) == 1 and _ZERO_EXP in a:
            return other * a[_ZERO_EXP]
        t: Dict[Exponent, Fraction] = {}
        for e1, v1 in a.items():
            for e2, v2 in b.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3], e1[4] + e2[4])
                w = t.get(e)
                t[e] = v1 * v2 if w is None else w + v1 * v2
        return PolyScalar._raw({e: v for e, v in t.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PolyScalar":
        """Division by a nonzero rational or by a monomial in h."""
        if isinstance(other, PolyScalar):
            if other.is_constant():
                other = other.constant_value()
            elif len(other._t) == 1:
                (e, v), = other._t.items()
                if e[:4] != (0, 0, 0, 0):
                    raise ZeroDivisionError("division is only defined by rationals and powers of h")
                return self * PolyScalar._raw({(0, 0, 0, 0, -e[4]): 1 / v})
            else:
                raise ZeroDivisionError("division is only defined by rationals and powers of h")
        other = _as_fraction(other)
        if not other:
            raise ZeroDivisionError("division by zero")
        return self * (1 / other)

    def __pow__(self, n: int) -> "PolyScalar":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if len(self._t) == 1:
                (e, v), = self._t.items()
                if e[:4] == (0, 0, 0, 0):
                    return PolyScalar._raw({(0, 0, 0, 0, e[4] * n): v ** n})
            raise ValueError("negative powers only for monomials in h")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, PolyScalar):
            return self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self._t == ({_ZERO_EXP: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # -- evaluation -------------------------------------------------------
    def eval_at(self, values: Mapping[str, Number]) -> "PolyScalar":
        """Substitute rationals for some symbols; the rest stay symbolic."""
        subs = {}
        for name, v in values.items():
            if name not in _INDEX:
                raise ValueError(f"unknown symbol {name!r}")
            subs[_INDEX[name]] = _as_fraction(v)
        t: Dict[Exponent, Fraction] = {}
        for e, v in self._t.items():
            e2 = list(e)
            coef = v
            for i, val in subs.items():
                if e[i]:
                    if val == 0 and e[i] < 0:
                        raise PoleError("pole at h=0")
                    coef *= val ** e[i]
                    e2[i] = 0
            if coef:
                key = tuple(e2)
                t[key] = t.get(key, 0) + coef
        return PolyScalar({e: v for e, v in t.items() if v})

    # -- rendering --------------------------------------------------------
    def _sorted_terms(self):
        return sorted(self._t.items(), key=lambda ev: (-sum(ev[0]), tuple(-x for x in ev[0])))

    def render(self) -> str:
        if not self._t:
            return "0"
        pieces = []
        for i, (e, v) in enumerate(self._sorted_terms()):
            sign = "-" if v < 0 else "+"
            mag = -v if v < 0 else v
            factors = []
            for name, x in zip(SYMBOLS, e):
                if x == 1:
                    factors.append(name)
                elif x:
                    factors.append(f"{name}^{x}")
            if mag != 1 or not factors:
                factors.insert(0, str(mag))
            body = "*".join(factors)
            if i == 0:
                pieces.append(("-" if sign == "-" else "") + body)
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"PolyScalar({self.render()!r})"


ZERO = PolyScalar._raw({})
ONE = PolyScalar._raw({_ZERO_EXP: Fraction(1)})
C = PolyScalar.symbol("c")
K = PolyScalar.symbol("k")
GAMMA = PolyScalar.symbol("gamma")
LAM = PolyScalar.symbol("lam")
HBAR = PolyScalar.symbol("h")


def const(x: Number) -> PolyScalar:
    return PolyScalar.coerce(x)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<sym>[A-Za-z_]\w*)|(?P<op>[-+*^()]))")


def parse_scalar(text: str) -> PolyScalar:
    """Parse the canonical rendering (and a little more) back into a PolyScalar.

    Grammar: sums of products of rationals, symbols, ``sym^int`` and
    parenthesised sub-expressions.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse scalar {text!r} at position {pos}")
        tokens.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def expr():
        sign = 1
        if peek()[1] in "+-" and peek()[0] == "op":
            sign = -1 if take()[1] == "-" else 1
        total = term() * sign
        while peek()[0] == "op" and peek()[1] in "+-":
            s = take()[1]
            t = term()
            total = total + t if s == "+" else total - t
        return total

    def term():
        value = factor()
        while True:
            tok = peek()
            if tok[0] == "op" and tok[1] == "*":
                take()
                value = value * factor()
            elif tok[0] in ("num", "sym") or (tok[0] == "op" and tok[1] == "("):
                value = value * factor()
            else:
                return value

    def factor():
        kind, val, where = take()
        if kind == "num":
            base = PolyScalar.coerce(Fraction(val))
        elif kind == "sym":
            base = PolyScalar.symbol(val)
        elif kind == "op" and val == "(":
            base = expr()
            if take()[1] != ")":
                raise ValueError(f"unbalanced parenthesis in {text!r}")
        else:
            raise ValueError(f"unexpected {val!r} at position {where} in {text!r}")
        if peek()[0] == "op" and peek()[1] == "^":
            take()
            neg = False
            if peek()[1] == "-":
                take()
                neg = True
            kind, val, where = take()
            if kind != "num" or "/" in val:
                raise ValueError(f"exponent must be an integer at position {where} in {text!r}")
            base = base ** (-int(val) if neg else int(val))
        return base

    result = expr()
    if peek()[0] != "end":
        raise ValueError(f"trailing input at position {peek()[2]} in {text!r}")
    return result


# ---------------------------------------------------------------------------
# binomials


@lru_cache(maxsize=65536)
def binom_q(alpha: Fraction, j: int) -> Fraction:
    """Generalized binomial with rational top; zero for negative ``j``."""
    if j < 0:
        return Fraction(0)
    alpha = Fraction(alpha)
    result = Fraction(1)
    for i in range(j):
        result = result * (alpha - i) / (i + 1)
    return result


def binom(alpha, j: int) -> PolyScalar:
    """alpha(alpha-1)...(alpha-j+1)/j! for any PolyScalar or rational top."""
    if j < 0:
        return ZERO
    if isinstance(alpha, (int, Fraction)):
        return PolyScalar.coerce(binom_q(Fraction(alpha), j))
    alpha = PolyScalar.coerce(alpha)
    if alpha.is_constant():
        return PolyScalar.coerce(binom_q(alpha.constant_value(), j))
    result = ONE
    fact = 1
    for i in range(j):
        result = result * (alpha - i)
        fact *= i + 1
    return result * Fraction(1, fact)


# ---------------------------------------------------------------------------
# truncated power series in an auxiliary variable


class TruncatedSeries:
    """Power series sum_{n=0}^{order} a_n xi^n with PolyScalar coefficients.

    Coefficients past ``order`` are unknown; asking for them raises
    :class:`SeriesTruncationError` instead of silently returning zero.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable, order: int):
        cs = [PolyScalar.coerce(x) for x in coeffs]
        if order < 0:
            raise ValueError("order must be non-negative")
        cs = cs[: order + 1] + [ZERO] * (order + 1 - len(cs))
        self.coeffs = tuple(cs)
        self.order = order

    @classmethod
    def binomial(cls, alpha, order: int) -> "TruncatedSeries":
        """(1 + xi)^alpha."""
        return cls([binom(alpha, n) for n in range(order + 1)], order)

    def coeff(self, n: int) -> PolyScalar:
        if n > self.order:
            raise SeriesTruncationError(
                f"coefficient of xi^{n} requested from a series truncated at order {self.order}")
        if n < 0:
            return ZERO
        return self.coeffs[n]

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        order = min(self.order, other.order)
        return TruncatedSeries([self.coeffs[i] + other.coeffs[i] for i in range(order + 1)], order)

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            s = PolyScalar.coerce(other)
            return TruncatedSeries([x * s for x in self.coeffs], self.order)
        order = min(self.order, other.order)
        out = []
        for n in range(order + 1):
            acc = ZERO
            for i in range(n + 1):
                acc = acc + self.coeffs[i] * other.coeffs[n - i]
            out.append(acc)
        return TruncatedSeries(out, order)

    __rmul__ = __mul__


def coeff_extract(series: TruncatedSeries, n: int) -> PolyScalar:
    """The xi^n coefficient of a truncated series."""
    return series.coeff(n)
