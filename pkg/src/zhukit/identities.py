"""Exact checks of the binomial-sum identities behind the level-p theory.

Every identity is evaluated on both sides as a :class:`PolyScalar`, so a
symbolic ``gamma`` yields a genuine polynomial identity.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional

from .scalars import GAMMA, ONE, ZERO, PolyScalar, binom

IDENTITY_IDS = ("binomial_split", "sequals", "shortlem", "geom_q", "star_delta", "baexp_coeff")
RATIONAL_GAMMAS = (Fraction(0), Fraction(1, 2), Fraction(-3, 2), Fraction(7))


class DomainError(ValueError):
    """Parameters outside the domain where an identity is asserted."""


def _gamma_value(g) -> PolyScalar:
    if g is None or g == "sym":
        return GAMMA
    return PolyScalar.coerce(g)


def h_sum(gamma, n: int, X: int, Y: int) -> PolyScalar:
    """sum_{k=0}^{Y-1} binom(-X, k) binom(gamma+X, n+X+k)."""
    _require(X >= 0, "X >= 0")
    _require(Y >= 1, "Y >= 1")
    g = _gamma_value(gamma)
    acc = ZERO
    for k in range(Y):
        acc = acc + binom(-X, k) * binom(g + X, n + X + k)
    return acc


def d_sum(gamma, n: int, X: int, Y: int) -> PolyScalar:
    """sum_{k=0}^{X-1} (-1)^(Y+k) binom(-Y, k) binom(gamma+k, n+Y+k)."""
    _require(X >= 0, "X >= 0")
    _require(Y >= 1, "Y >= 1")
    g = _gamma_value(gamma)
    acc = ZERO
    for k in range(X):
        sign = -1 if (Y + k) % 2 else 1
        acc = acc + binom(-Y, k) * binom(g + k, n + Y + k) * sign
    return acc


def _require(cond: bool, what: str) -> None:
    if not cond:
        raise DomainError(f"precondition violated: {what}")


@dataclass
class IdentityCase:
    identity_id: str
    parameters: Dict[str, object]
    status: Optional[str] = None  # "pass" | "fail" | "skipped"
    lhs: Optional[PolyScalar] = None
    rhs: Optional[PolyScalar] = None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "identity": self.identity_id,
            "parameters": {k: str(v) for k, v in self.parameters.items()},
            "status": self.status,
            "lhs": None if self.lhs is None else self.lhs.render(),
            "rhs": None if self.rhs is None else self.rhs.render(),
            "note": self.note,
        }


# -- individual identities ------------------------------------------------

def _binomial_split(P) -> tuple:
    g = _gamma_value(P.get("gamma"))
    n, X, Y = P["n"], P["X"], P["Y"]
    _require(X >= 0, "X >= 0")
    _require(Y >= 1, "Y >= 1")
    return h_sum(g, n, X, Y) + d_sum(g, n, X, Y), binom(g, n)


def _sequals(P) -> tuple:
    g = _gamma_value(P.get("gamma"))
    p, j, chi = P["p"], P["j"], P["chi"]
    _require(p >= 0, "p >= 0")
    _require(chi in (0, 1), "chi in {0, 1}")
    lhs = ZERO
    for k in range(p - chi + 1):
        t1 = binom(-p, k) * binom(g + p, p + j + k + 1)
        sign = -1 if (p + k) % 2 else 1
        t2 = binom(-p - 1 + chi, k - 1 + chi) * binom(g + k - 1 + chi, p + 1 + j + k) * sign
        lhs = lhs + t1 + t2
    # the same sum is h_sum + d_sum at (gamma, j+1, p, p+1-chi)
    via = h_sum(g, j + 1, p, p + 1 - chi) + d_sum(g, j + 1, p, p + 1 - chi)
    if via != lhs:
        raise AssertionError(f"sequals substitution mismatch at {P}: {lhs} vs {via}")
    return lhs, binom(g, j + 1)


def _shortlem(P) -> tuple:
    g = _gamma_value(P.get("gamma"))
    p, j = P["p"], P["j"]
    _require(p >= 0, "p >= 0")
    lhs = ZERO
    for k in range(1, p + 1):
        lhs = lhs + binom(g + k - 1, j)
    return lhs, binom(g + p, j + 1) - binom(g, j + 1)


def _geom_q(P) -> tuple:
    p, a = P["p"], P["alpha"]
    _require(p >= 0, "p >= 0")
    _require(a >= 0, "alpha >= 0")
    lhs = ZERO
    for k in range(a + 1):
        lhs = lhs + binom(-p - 1 - k, a - k)
    return lhs, binom(-p, a)


def _star_delta(P) -> tuple:
    p, a = P["p"], P["alpha"]
    _require(p >= 0, "p >= 0")
    _require(a >= 0, "alpha >= 0")
    lhs = ZERO
    for j in range(a + 1):
        sign = -1 if j % 2 else 1
        lhs = lhs + binom(-p - 1, a - j) * binom(-p - 1 - a + j, j) * sign
    return lhs, ONE if a == 0 else ZERO


def _baexp(P) -> tuple:
    p, a = P["p"], P["alpha"]
    _require(p >= 0, "p >= 0")
    _require(0 <= a <= p, "0 <= alpha <= p")
    lhs = ZERO
    for j in range(p - a + 1):
        lhs = lhs + binom(-p - 1, a + j) * binom(p - a, j)
    return lhs, binom(-a - 1, p)


_EVAL = {
    "binomial_split": _binomial_split,
    "sequals": _sequals,
    "shortlem": _shortlem,
    "geom_q": _geom_q,
    "star_delta": _star_delta,
    "baexp_coeff": _baexp,
}


def check_identity(case: IdentityCase) -> IdentityCase:
    """Evaluate both sides of ``case`` and return a copy with the outcome filled in."""
    if case.identity_id not in _EVAL:
        raise ValueError(f"unknown identity {case.identity_id!r}; expected one of {IDENTITY_IDS}")
    P = case.parameters
    if case.identity_id == "sequals" and P.get("p") == 0 and P.get("chi") == 1:
        return replace(case, status="skipped",
                       note="p = 0 with chi = 1 is excluded from this identity")
    lhs, rhs = _EVAL[case.identity_id](P)
    return replace(case, lhs=lhs, rhs=rhs, status="pass" if lhs == rhs else "fail")


# -- grids ------------------------------------------------------------------

GRID_DEFAULTS = {
    "binomial_split": {"n": range(-4, 9), "X": range(0, 7), "Y": range(1, 7)},
    "sequals": {"p": range(5), "j": range(7), "chi": (0, 1)},
    "shortlem": {"p": range(7), "j": range(7)},
    "geom_q": {"p": range(7), "alpha": range(7)},
    "star_delta": {"p": range(5), "alpha": range(7)},
    "baexp_coeff": {"p": range(7), "alpha": None},  # alpha defaults to 0..p
}
_SYMBOLIC = ("binomial_split", "sequals", "shortlem")


def default_grid(identity_id: str, gamma="sym", **ranges) -> Iterator[IdentityCase]:
    """The parameter sweep for one identity; keyword ranges override the defaults."""
    if identity_id not in GRID_DEFAULTS:
        raise ValueError(f"unknown identity {identity_id!r}")
    axes = dict(GRID_DEFAULTS[identity_id])
    for k, v in ranges.items():
        if v is not None and k in axes:
            axes[k] = v
    names = list(axes)
    base = {"gamma": gamma} if identity_id in _SYMBOLIC else {}

    def rec(i, acc):
        if i == len(names):
            yield IdentityCase(identity_id, {**base, **acc})
            return
        name = names[i]
        values = axes[name]
        if values is None:
            values = range(acc["p"] + 1)
        for v in values:
            acc[name] = v
            yield from rec(i + 1, acc)
        del acc[name]

    yield from rec(0, {})


def grid_binomial_split(ns: Iterable[int], Xs: Iterable[int], Ys: Iterable[int], gamma="sym"):
    Xs, Ys = list(Xs), list(Ys)
    for n in ns:
        for X in Xs:
            for Y in Ys:
                yield IdentityCase("binomial_split", {"gamma": gamma, "n": n, "X": X, "Y": Y})


def grid_star_delta(ps: Iterable[int], alphas: Iterable[int]):
    alphas = list(alphas)
    for p in ps:
        for a in alphas:
            yield IdentityCase("star_delta", {"p": p, "alpha": a})


def run_cases(cases: Iterable[IdentityCase], jobs: int = 1) -> List[IdentityCase]:
    """Check every case, preserving input order."""
    cases = list(cases)
    if jobs <= 1 or len(cases) < 2:
        return [check_identity(c) for c in cases]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(check_identity, cases, chunksize=16))
