from __future__ import annotations

import pytest

from zhukit.lca import current_sl2, virasoro
from zhukit.scalars import HBAR, ZERO
from zhukit.suites import SUITES, SuiteContext, j_generators, verify_suite
from zhukit.vertex import TruncationPolicy, VertexAlgebra

POLICY = TruncationPolicy(6, 6)


@pytest.fixture(scope="module")
def vir_ctx():
    va = VertexAlgebra(virasoro())
    return SuiteContext(va, POLICY, j_cutoff=8)


@pytest.mark.parametrize("suite", SUITES)
def test_virasoro_suites_pass(vir_ctx, suite):
    recs = verify_suite(suite, vir_ctx.va, [0, 1], POLICY, ctx=vir_ctx)
    assert recs
    assert not [r for r in recs if r.status == "fail"]
    assert sum(r.status == "pass" for r in recs) > 0


@pytest.mark.parametrize("suite", ["unit", "tind", "skew", "leftideal"])
def test_affine_suites_pass(suite):
    va = VertexAlgebra(current_sl2())
    pol = TruncationPolicy(2, 4)
    ctx = SuiteContext(va, pol, hbars=(1,), j_cutoff=4)
    recs = verify_suite(suite, va, [0], pol, hbars=(1,), ctx=ctx)
    assert recs and not [r for r in recs if r.status == "fail"]


def test_records_are_exact_and_ordered(vir_ctx):
    a = [r.to_json() for r in verify_suite("tind", vir_ctx.va, [0], POLICY, ctx=vir_ctx)]
    b = [r.to_json() for r in verify_suite("tind", vir_ctx.va, [0], POLICY, ctx=vir_ctx)]
    assert a == b
    assert all(isinstance(v, str) for r in a for v in r["inputs"].values())


def test_unknown_suite_and_zero_hbar(vir_ctx):
    with pytest.raises(ValueError):
        verify_suite("nope", vir_ctx.va, [0], POLICY)
    with pytest.raises(ValueError):
        verify_suite("skew", vir_ctx.va, [0], POLICY, hbars=(0,))


def test_j_generators_have_expected_labels(vir_ctx):
    labels = [lab for lab, _ in j_generators(vir_ctx.va, 1, 1, 6)]
    assert labels and all(isinstance(x, str) for x in labels)


# -- mutation controls: a wrong coefficient in the Zhu modes must be caught ----------

class DroppedTerm(VertexAlgebra):
    """Zhu modes missing their j = 1 term."""

    def zhu_mode(self, a, b, n, p, hbar=HBAR):
        out = dict(super().zhu_mode(a, b, n, p, hbar))
        for da, comp in self.components(a).items():
            for w, v in self.nth(comp, b, n + 1).items():
                out[w] = out.get(w, ZERO) - v * (da + p) * hbar
        return {w: v for w, v in out.items() if v}


class SkewedStar(VertexAlgebra):
    """a * b with its top term doubled."""

    def star(self, a, b, p, hbar=HBAR):
        out = dict(super().star(a, b, p, hbar))
        for w, v in self.nth(a, b, -1).items():
            out[w] = out.get(w, ZERO) + v
        return {w: v for w, v in out.items() if v}


class DoubledBracket(VertexAlgebra):
    def hbar_bracket(self, a, b, p, hbar=HBAR):
        return {w: v * 2 for w, v in super().hbar_bracket(a, b, p, hbar).items()}


@pytest.mark.parametrize("cls,suite", [(DroppedTerm, "tind"), (DroppedTerm, "modn"), (DroppedTerm, "expbor"),
                                       (SkewedStar, "unit"), (SkewedStar, "assoc")])
def test_mutations_are_detected(cls, suite):
    va = cls(virasoro())
    pol = TruncationPolicy(6, 4)
    recs = verify_suite(suite, va, [1], pol, ctx=SuiteContext(va, pol, j_cutoff=8))
    assert any(r.status == "fail" for r in recs)


def test_bracket_mutation_detected_on_noncommutative_quotient():
    # the Virasoro quotients are commutative at low level, so use the affine algebra
    va = DoubledBracket(current_sl2())
    pol = TruncationPolicy(2, 4)
    recs = verify_suite("skew", va, [0], pol, hbars=(1,), ctx=SuiteContext(va, pol, hbars=(1,), j_cutoff=4))
    assert any(r.status == "fail" for r in recs)
