"""Twisted-grading bookkeeping: cosets mod Z and the level-P index functions.

All values are exact rationals.  Only rational cosets are supported.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rat = Union[int, Fraction]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class CosetZ:
    """The coset ``representative + Z`` with representative in [0, 1)."""

    representative: Fraction

    def __post_init__(self):
        r = _frac(self.representative)
        object.__setattr__(self, "representative", r - math.floor(r))

    @classmethod
    def of(cls, x: Rat) -> "CosetZ":
        return cls(_frac(x))

    def __add__(self, other: "CosetZ") -> "CosetZ":
        return CosetZ(self.representative + other.representative)

    def __neg__(self) -> "CosetZ":
        return CosetZ(-self.representative)

    def __sub__(self, other: "CosetZ") -> "CosetZ":
        return self + (-other)

    def contains(self, x: Rat) -> bool:
        return CosetZ(_frac(x)) == self

    def is_zero(self) -> bool:
        return self.representative == 0

    def __str__(self) -> str:
        return f"[{self.representative}]"


@dataclass(frozen=True)
class TwistData:
    """Degree coset [gamma_a] and conformal weight Delta_a of a homogeneous element."""

    degree_coset: CosetZ
    weight: Fraction

    def __post_init__(self):
        if not isinstance(self.degree_coset, CosetZ):
            object.__setattr__(self, "degree_coset", CosetZ.of(self.degree_coset))
        object.__setattr__(self, "weight", _frac(self.weight))

    @classmethod
    def untwisted(cls, weight: Rat) -> "TwistData":
        """Grading where the degree coset equals the weight coset (so eps = 0)."""
        return cls(CosetZ.of(weight), weight)


def eps(a: TwistData) -> Fraction:
    """The largest non-positive element of [gamma_a] - [Delta_a]; lies in (-1, 0]."""
    r = (a.degree_coset - CosetZ.of(a.weight)).representative
    return r - 1 if r else Fraction(0)


def gamma(a: TwistData) -> Fraction:
    """gamma_a = Delta_a + eps_a, the largest element of [gamma_a] not exceeding Delta_a."""
    return a.weight + eps(a)


def chi(a: TwistData, b: TwistData) -> int:
    return 1 if eps(a) + eps(b) <= -1 else 0


def product_grading(a: TwistData, b: TwistData, n: int) -> TwistData:
    """Grading data of a_(n) b."""
    return TwistData(a.degree_coset + b.degree_coset, a.weight + b.weight - n - 1)


@dataclass(frozen=True)
class LevelQuantities:
    P_a: Fraction
    N_a: int
    R_a: int
    xi_a: Fraction


def level_quantities(a: TwistData, P: Rat) -> LevelQuantities:
    """P_a, N_a, R_a and xi_a of ``a`` at level ``P``.

    P_a is the smallest element of [eps_a] strictly above P, N_a the
    largest integer strictly below -P - P_a, R_a = P_a - eps_a and
    xi_a = P_a + Delta_a - 1.
    """
    P = _frac(P)
    if P < 0:
        raise ValueError(f"level P must be non-negative, got {P}")
    e = eps(a)
    P_a = e + math.floor(P - e) + 1
    N_a = -math.floor(P + P_a) - 1
    R_a = P_a - e
    xi_a = P_a + a.weight - 1
    assert R_a.denominator == 1
    return LevelQuantities(P_a=P_a, N_a=N_a, R_a=int(R_a), xi_a=xi_a)


def xi(a: TwistData, P: Rat) -> Fraction:
    """Largest element of [gamma_a] not exceeding P + Delta_a."""
    return level_quantities(a, P).xi_a


def sigma(a: TwistData, b: TwistData, P: Rat) -> Fraction:
    """xi of a_(-1)b, plus floor(P), minus xi_a and xi_b."""
    P = _frac(P)
    ab = product_grading(a, b, -1)
    return xi(ab, P) + math.floor(P) - xi(a, P) - xi(b, P)


# -- the index grid -----------------------------------------------------------

DEFAULT_LEVELS = (Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2))
WORKED_VALUES = (  # (eps_a, P) -> (P_a, N_a)
    (Fraction(-1, 2), Fraction(0), Fraction(1, 2), -1),
    (Fraction(-1, 2), Fraction(1, 2), Fraction(3, 2), -3),
)


@dataclass(frozen=True)
class GradingCase:
    check: str
    inputs: tuple  # sorted (name, text) pairs
    status: str
    defect: str = ""

    def to_json(self) -> dict:
        return {"suite": "appendix-b", "check": self.check, "inputs": dict(self.inputs),
                "status": self.status, "defect": self.defect or None}


def grid_elements(denominator: int, max_weight: Rat = 1) -> list:
    """Every TwistData with degree coset in (1/d)Z/Z and weight in (1/d)Z cap [0, max_weight]."""
    d = denominator
    top = int(_frac(max_weight) * d)
    return [TwistData(CosetZ(Fraction(k, d)), Fraction(w, d)) for k in range(d) for w in range(top + 1)]


def _case(check: str, inputs: dict, lhs, rhs) -> GradingCase:
    ok = lhs == rhs
    return GradingCase(check, tuple(sorted((k, str(v)) for k, v in inputs.items())),
                       "pass" if ok else "fail", "" if ok else f"{lhs} != {rhs}")


def _label(a: TwistData) -> str:
    return f"{a.degree_coset}/{a.weight}"


def grading_cases(denominator: int, levels=DEFAULT_LEVELS, max_weight: Rat = 1, ns=range(-4, 5)) -> list:
    """Index-level checks over a grid of gradings: sigma vanishing, the N_a/sigma relation,
    periodicity in P, eps additivity and the two worked values at eps = -1/2."""
    out = []
    elems = grid_elements(denominator, max_weight)
    if denominator % 2 == 0:
        for e, P, Pa, Na in WORKED_VALUES:
            a = TwistData(CosetZ(e), Fraction(0))
            q = level_quantities(a, P)
            out.append(_case("worked-values", {"eps": e, "P": P}, (q.P_a, q.N_a), (Pa, Na)))
    for P in levels:
        P = _frac(P)
        for a in elems:
            qa = level_quantities(a, P)
            q1 = level_quantities(a, P + 1)
            out.append(_case("periodicity", {"a": _label(a), "P": P}, (q1.P_a, q1.N_a), (qa.P_a + 1, qa.N_a - 2)))
            for b in elems:
                inputs = {"a": _label(a), "b": _label(b), "P": P}
                if eps(a) == 0:
                    out.append(_case("sigma-vanishing", inputs, sigma(a, b, P), 0))
                if (CosetZ(eps(a)) + CosetZ(eps(b))).is_zero():
                    out.append(_case("N-sigma", inputs, qa.N_a, -2 * math.floor(P) - 2 + sigma(a, b, P)))
    for a in elems:
        for b in elems:
            for n in ns:
                out.append(_case("eps-additivity", {"a": _label(a), "b": _label(b), "n": n},
                                 eps(product_grading(a, b, n)), eps(a) + eps(b) + chi(a, b)))
    return out
