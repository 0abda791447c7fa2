"""Lie conformal algebras given by generators and a finite lambda-bracket table."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from math import factorial
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .grading import CosetZ, TwistData
from .scalars import ONE, ZERO, PolyScalar, binom, parse_scalar

LCA_FORMAT = "lca/1"


class LcaError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    id: str
    weight: Fraction
    parity: int = 0  # 0 even, 1 odd
    degree_coset: CosetZ = CosetZ(Fraction(0))

    @property
    def twist(self) -> TwistData:
        return TwistData(self.degree_coset, self.weight)


@dataclass(frozen=True)
class Central:
    id: str
    symbol: str  # scalar symbol the central element is specialized to


class LcaElement:
    """Finite sum of T^r g (g a generator) plus central terms.

    ``terms`` maps (r, generator id) to a coefficient and ``central`` maps a
    central id to a coefficient.  Central elements are T-constants.
    """

    __slots__ = ("terms", "central")

    def __init__(self, terms: Optional[Mapping] = None, central: Optional[Mapping] = None):
        self.terms: Dict[Tuple[int, str], PolyScalar] = {}
        self.central: Dict[str, PolyScalar] = {}
        for key, v in (terms or {}).items():
            v = PolyScalar.coerce(v)
            if v:
                r, g = key
                if r < 0:
                    raise LcaError("negative T-power")
                self.terms[(int(r), g)] = v
        for key, v in (central or {}).items():
            v = PolyScalar.coerce(v)
            if v:
                self.central[key] = v

    @classmethod
    def gen(cls, g: str, coeff=1, tpow: int = 0) -> "LcaElement":
        return cls({(tpow, g): coeff})

    @classmethod
    def cent(cls, z: str, coeff=1) -> "LcaElement":
        return cls(central={z: coeff})

    def is_zero(self) -> bool:
        return not self.terms and not self.central

    __bool__ = lambda self: not self.is_zero()

    def __add__(self, other: "LcaElement") -> "LcaElement":
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, ZERO) + v
        c = dict(self.central)
        for k, v in other.central.items():
            c[k] = c.get(k, ZERO) + v
        return LcaElement(t, c)

    def __neg__(self) -> "LcaElement":
        return self.scale(-1)

    def __sub__(self, other: "LcaElement") -> "LcaElement":
        return self + (-other)

    def scale(self, s) -> "LcaElement":
        s = PolyScalar.coerce(s)
        return LcaElement({k: v * s for k, v in self.terms.items()},
                          {k: v * s for k, v in self.central.items()})

    def T(self, times: int = 1) -> "LcaElement":
        if times == 0:
            return self
        return LcaElement({(r + times, g): v for (r, g), v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, LcaElement):
            return NotImplemented
        return self.terms == other.terms and self.central == other.central

    def __hash__(self):
        return hash((frozenset(self.terms.items()), frozenset(self.central.items())))

    def render(self) -> str:
        parts = []
        for (r, g), v in sorted(self.terms.items(), key=lambda kv: (-kv[0][0], kv[0][1])):
            base = g if r == 0 else (f"T {g}" if r == 1 else f"T^{r} {g}")
            parts.append((v, base))
        for z, v in sorted(self.central.items()):
            parts.append((v, z))
        if not parts:
            return "0"
        return _render_sum(parts)

    def __repr__(self) -> str:
        return f"LcaElement({self.render()!r})"


def _render_sum(parts) -> str:
    out = []
    for i, (v, base) in enumerate(parts):
        if v == 1:
            s = base
        elif v == -1:
            s = "-" + base
        elif v.is_constant():
            s = f"{v.render()} {base}"
        else:
            s = f"({v.render()}) {base}"
        if i and s.startswith("-"):
            out.append(" - " + s[1:])
        elif i:
            out.append(" + " + s)
        else:
            out.append(s)
    return "".join(out)


# Polynomials in one or two formal variables with LcaElement coefficients.
LamPoly = Dict[int, LcaElement]
LamMuPoly = Dict[Tuple[int, int], LcaElement]


def _padd(target: dict, key, elem: LcaElement) -> None:
    cur = target.get(key)
    new = elem if cur is None else cur + elem
    if new.is_zero():
        target.pop(key, None)
    else:
        target[key] = new


def render_lambda_poly(poly: LamPoly, var: str = "lam") -> str:
    if not poly:
        return "0"
    pieces = []
    for j in sorted(poly, reverse=True):
        e = poly[j].render()
        if j == 0:
            pieces.append(f"({e})")
        else:
            pieces.append(f"{var}^{j} ({e})" if j > 1 else f"{var} ({e})")
    return " + ".join(pieces)


class LcaSpec:
    """Generators, centrals and the table a_(j)b for generator pairs."""

    def __init__(self, name: str, generators: Iterable[Generator], centrals: Iterable[Central],
                 table: Mapping[Tuple[str, str, int], LcaElement]):
        self.name = name
        self.generators: List[Generator] = list(generators)
        self.centrals: List[Central] = list(centrals)
        self.gen_index = {g.id: i for i, g in enumerate(self.generators)}
        self.gen = {g.id: g for g in self.generators}
        self.central_symbol = {z.id: z.symbol for z in self.centrals}
        if len(self.gen_index) != len(self.generators):
            raise LcaError("duplicate generator id")
        self.table: Dict[Tuple[str, str, int], LcaElement] = {}
        for (a, b, j), v in table.items():
            if a not in self.gen or b not in self.gen:
                raise LcaError(f"bracket table refers to unknown generator in ({a}, {b}, {j})")
            if j < 0:
                raise LcaError(f"negative product index in ({a}, {b}, {j})")
            if not v.is_zero():
                self._check_element(v)
                self.table[(a, b, j)] = v
        self.max_j: Dict[Tuple[str, str], int] = {}
        for (a, b, j) in self.table:
            self.max_j[(a, b)] = max(self.max_j.get((a, b), -1), j)
        self.check_weights()

    def _check_element(self, v: LcaElement) -> None:
        for (_, g) in v.terms:
            if g not in self.gen:
                raise LcaError(f"unknown generator {g!r} in bracket table")
        for z in v.central:
            if z not in self.central_symbol:
                raise LcaError(f"unknown central {z!r} in bracket table")

    def parity(self, g: str) -> int:
        return self.gen[g].parity

    def sign(self, a: str, b: str) -> int:
        """p(a, b) = (-1)^(p(a) p(b))."""
        return -1 if self.parity(a) and self.parity(b) else 1

    def weight_of_term(self, tpow: int, g: str) -> Fraction:
        return self.gen[g].weight + tpow

    def check_weights(self) -> None:
        """Every a_(j)b entry is homogeneous of weight Delta_a + Delta_b - j - 1."""
        for (a, b, j), v in self.table.items():
            w = self.gen[a].weight + self.gen[b].weight - j - 1
            for (r, g) in v.terms:
                if self.weight_of_term(r, g) != w:
                    raise LcaError(f"weight mismatch in {a}_({j}){b}: term T^{r}{g} has weight "
                                   f"{self.weight_of_term(r, g)}, expected {w}")
            if v.central and w != 0:
                raise LcaError(f"weight mismatch in {a}_({j}){b}: central term in weight {w}")
            if self.parity(a) ^ self.parity(b):
                for (_, g) in v.terms:
                    if not self.parity(g):
                        raise LcaError(f"parity mismatch in {a}_({j}){b}")

    def product(self, a: str, b: str, j: int) -> LcaElement:
        return self.table.get((a, b, j), LcaElement())

    def replace_entry(self, a: str, b: str, j: int, value: LcaElement) -> "LcaSpec":
        table = dict(self.table)
        table[(a, b, j)] = value
        return LcaSpec(self.name, self.generators, self.centrals, table)

    # -- JSON ------------------------------------------------------------
    def to_json(self) -> dict:
        brackets: Dict[str, Dict[str, Dict[str, dict]]] = {}
        for (a, b, j), v in sorted(self.table.items(),
                                   key=lambda kv: (self.gen_index[kv[0][0]], self.gen_index[kv[0][1]], kv[0][2])):
            entry = {}
            if v.terms:
                entry["terms"] = [{"T": r, "gen": g, "coeff": c.render()}
                                  for (r, g), c in sorted(v.terms.items(), key=lambda kv: (kv[0][0], self.gen_index[kv[0][1]]))]
            if v.central:
                entry["central"] = {z: c.render() for z, c in sorted(v.central.items())}
            brackets.setdefault(a, {}).setdefault(b, {})[str(j)] = entry
        return {
            "format": LCA_FORMAT,
            "name": self.name,
            "generators": [{"id": g.id, "weight": str(g.weight),
                            "parity": "odd" if g.parity else "even",
                            "degree_coset": str(g.degree_coset.representative)}
                           for g in self.generators],
            "centrals": [{"id": z.id, "symbol": z.symbol} for z in self.centrals],
            "brackets": brackets,
        }

    @classmethod
    def from_json(cls, data: dict) -> "LcaSpec":
        validate_lca_json(data)
        gens = []
        for g in data["generators"]:
            w = Fraction(g["weight"])
            coset = CosetZ.of(Fraction(g["degree_coset"])) if "degree_coset" in g else CosetZ.of(w)
            gens.append(Generator(g["id"], w, 1 if g.get("parity", "even") == "odd" else 0, coset))
        cents = [Central(z["id"], z["symbol"]) for z in data.get("centrals", [])]
        table = {}
        for a, row in data.get("brackets", {}).items():
            for b, entries in row.items():
                for j, entry in entries.items():
                    terms = {}
                    for t in entry.get("terms", []):
                        key = (int(t.get("T", 0)), t["gen"])
                        terms[key] = terms.get(key, ZERO) + _parse_coeff(t["coeff"], f"brackets/{a}/{b}/{j}")
                    cent = {z: _parse_coeff(c, f"brackets/{a}/{b}/{j}/central/{z}")
                            for z, c in entry.get("central", {}).items()}
                    table[(a, b, int(j))] = LcaElement(terms, cent)
        return cls(data.get("name", "custom"), gens, cents, table)


def _parse_coeff(text: str, where: str) -> PolyScalar:
    try:
        return parse_scalar(str(text))
    except ValueError as exc:
        raise LcaError(f"{where}: bad coefficient {text!r}: {exc}") from None


def _schema(name: str) -> dict:
    return json.loads(resources.files("zhukit").joinpath("schemas", name).read_text())


def validate_lca_json(data) -> None:
    import jsonschema

    try:
        jsonschema.validate(data, _schema("lca1.schema.json"))
    except jsonschema.ValidationError as exc:
        path = "/".join(str(x) for x in exc.absolute_path) or "<root>"
        raise LcaError(f"lca/1 schema error at {path}: {exc.message}") from None


def load_lca(path: str) -> LcaSpec:
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LcaError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return LcaSpec.from_json(data)


# -- presets --------------------------------------------------------------

def virasoro() -> LcaSpec:
    table = {
        ("L", "L", 0): LcaElement.gen("L", 1, tpow=1),
        ("L", "L", 1): LcaElement.gen("L", 2),
        ("L", "L", 3): LcaElement.cent("C", Fraction(1, 2)),
    }
    return LcaSpec("virasoro", [Generator("L", Fraction(2))], [Central("C", "c")], table)


SL2_BRACKET = {
    ("e", "f"): {"h": 1},
    ("f", "e"): {"h": -1},
    ("h", "e"): {"e": 2},
    ("e", "h"): {"e": -2},
    ("h", "f"): {"f": -2},
    ("f", "h"): {"f": 2},
}
SL2_FORM = {("e", "f"): 1, ("f", "e"): 1, ("h", "h"): 2}


def current_sl2() -> LcaSpec:
    table = {}
    for (a, b), out in SL2_BRACKET.items():
        table[(a, b, 0)] = LcaElement({(0, g): v for g, v in out.items()})
    for (a, b), v in SL2_FORM.items():
        table[(a, b, 1)] = LcaElement.cent("K", v)
    gens = [Generator(x, Fraction(1)) for x in ("e", "h", "f")]
    return LcaSpec("current_sl2", gens, [Central("K", "k")], table)


PRESETS = {"virasoro": virasoro, "vir": virasoro, "current_sl2": current_sl2, "sl2": current_sl2}


def preset(name: str) -> LcaSpec:
    try:
        return PRESETS[name]()
    except KeyError:
        raise LcaError(f"unknown preset {name!r}; choose from {sorted(set(PRESETS))}") from None


# -- lambda brackets ---------------------------------------------------------

def _gen_bracket(spec: LcaSpec, a: str, b: str) -> LamPoly:
    """[a_lam b] = sum_j lam^j / j! a_(j)b for generators."""
    out: LamPoly = {}
    for j in range(spec.max_j.get((a, b), -1) + 1):
        v = spec.product(a, b, j)
        if v:
            _padd(out, j, v.scale(Fraction(1, factorial(j))))
    return out


def _apply_T_plus_lam(poly: LamPoly, s: int) -> LamPoly:
    """(T + lam)^s applied to a lam-polynomial."""
    out: LamPoly = {}
    for j, v in poly.items():
        for i in range(s + 1):
            _padd(out, j + s - i, v.T(i).scale(binom(s, i)))
    return out


def _term_bracket(spec: LcaSpec, r: int, a: str, s: int, b: str) -> LamPoly:
    """[(T^r a)_lam (T^s b)] = (-lam)^r (T + lam)^s [a_lam b]."""
    base = _apply_T_plus_lam(_gen_bracket(spec, a, b), s)
    sign = -1 if r % 2 else 1
    return {j + r: v.scale(sign) for j, v in base.items()}


def lambda_bracket(spec: LcaSpec, x: LcaElement, y: LcaElement) -> LamPoly:
    """[x_lam y] extended from the table by sesquilinearity; centrals bracket to zero."""
    out: LamPoly = {}
    for (r, a), u in x.terms.items():
        for (s, b), v in y.terms.items():
            coeff = u * v
            for j, e in _term_bracket(spec, r, a, s, b).items():
                _padd(out, j, e.scale(coeff))
    return out


def _shift_poly(poly: LamPoly) -> LamMuPoly:
    """Re-express p(lam + mu) as a polynomial in (lam, mu)."""
    out: LamMuPoly = {}
    for n, v in poly.items():
        for i in range(n + 1):
            _padd(out, (i, n - i), v.scale(binom(n, i)))
    return out


def _element_parity(spec: LcaSpec, x: LcaElement) -> int:
    ps = {spec.parity(g) for (_, g) in x.terms}
    if len(ps) > 1:
        raise LcaError("inhomogeneous parity")
    return ps.pop() if ps else 0


@dataclass
class AxiomFailure:
    axiom: str
    generators: Tuple[str, ...]
    defect: str

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "generators": list(self.generators), "defect": self.defect}


@dataclass
class AxiomReport:
    checked: Dict[str, int] = field(default_factory=dict)
    failures: List[AxiomFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"checked": dict(self.checked), "ok": self.ok,
                "failures": [f.to_json() for f in self.failures]}


def skew_rhs(spec: LcaSpec, a: str, b: str) -> LamPoly:
    """-p(a,b) [a_{-lam-T} b], as a lam-polynomial."""
    out: LamPoly = {}
    for j in range(spec.max_j.get((a, b), -1) + 1):
        v = spec.product(a, b, j)
        if not v:
            continue
        v = v.scale(Fraction(1, factorial(j)))
        # (-lam - T)^j = sum_i binom(j,i) (-lam)^(j-i) (-T)^i
        for i in range(j + 1):
            sign = -1 if j % 2 else 1
            _padd(out, j - i, v.T(i).scale(binom(j, i) * sign))
    s = -spec.sign(a, b)
    return {k: v.scale(s) for k, v in out.items()}


def _jacobi_defect(spec: LcaSpec, a: str, b: str, c: str) -> LamMuPoly:
    """[a_lam [b_mu c]] - [[a_lam b]_{lam+mu} c] - p(a,b) [b_mu [a_lam c]]."""
    A, B, Cg = LcaElement.gen(a), LcaElement.gen(b), LcaElement.gen(c)
    out: LamMuPoly = {}
    for mj, x in lambda_bracket(spec, B, Cg).items():
        for li, y in lambda_bracket(spec, A, x).items():
            _padd(out, (li, mj), y)
    for li, x in lambda_bracket(spec, A, B).items():
        for (lp, mp), y in _shift_poly(lambda_bracket(spec, x, Cg)).items():
            _padd(out, (li + lp, mp), -y)
    sgn = spec.sign(a, b)
    for li, x in lambda_bracket(spec, A, Cg).items():
        for mj, y in lambda_bracket(spec, B, x).items():
            _padd(out, (li, mj), y.scale(-sgn))
    return out


def _render_lm(poly: LamMuPoly) -> str:
    return " + ".join(f"lam^{i} mu^{j} ({v.render()})" for (i, j), v in sorted(poly.items()))


def check_axioms(spec: LcaSpec) -> AxiomReport:
    """Sesquilinearity consistency, skew-commutativity and Jacobi on generators."""
    rep = AxiomReport(checked={"sesquilinearity": 0, "skew": 0, "jacobi": 0})
    ids = [g.id for g in spec.generators]
    for a in ids:
        for b in ids:
            # the sesquilinear extension must reproduce the defining rules on T-shifts
            A, B = LcaElement.gen(a), LcaElement.gen(b)
            base = lambda_bracket(spec, A, B)
            lhs1 = lambda_bracket(spec, A.T(), B)
            rhs1 = {j + 1: v.scale(-1) for j, v in base.items()}
            lhs2 = lambda_bracket(spec, A, B.T())
            rhs2 = _apply_T_plus_lam(base, 1)
            rep.checked["sesquilinearity"] += 1
            if lhs1 != rhs1 or lhs2 != rhs2:
                rep.failures.append(AxiomFailure("sesquilinearity", (a, b), "T-extension mismatch"))
            rep.checked["skew"] += 1
            d: LamPoly = dict(lambda_bracket(spec, B, A))
            for j, v in skew_rhs(spec, a, b).items():
                _padd(d, j, -v)
            if d:
                rep.failures.append(AxiomFailure("skew", (b, a), render_lambda_poly(d)))
    for a in ids:
        for b in ids:
            for c in ids:
                rep.checked["jacobi"] += 1
                d2 = _jacobi_defect(spec, a, b, c)
                if d2:
                    rep.failures.append(AxiomFailure("jacobi", (a, b, c), _render_lm(d2)))
    return rep
