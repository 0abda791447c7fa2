from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from zhukit.scalars import C, HBAR, K, ONE, ZERO, PolyScalar
from zhukit.vertex import VAC, JSpan, TruncationPolicy, VertexAlgebra, in_j, j_span, nth_product, star_p, vsum, vscale


def L(va, *modes):
    """L_(m1) ... L_(mk) vac in weight-index modes."""
    return va.apply_word([(m, 0) for m in modes], VAC)


def test_bracket_products(vir_va):
    omega = vir_va.gen("L")
    assert vir_va.nth(omega, omega, 0) == vir_va.translate(omega)
    assert vir_va.nth(omega, omega, 1) == vscale(omega, 2)
    assert vir_va.nth(omega, omega, 2) == {}
    assert vir_va.nth(omega, omega, 3) == {(): C * Fraction(1, 2)}
    assert vir_va.nth(omega, omega, 4) == {}


def test_nested_product(vir_va):
    omega = vir_va.gen("L")
    w2 = vir_va.nth(omega, omega, -1)
    got = vir_va.nth(w2, omega, 1)
    want = vsum(vscale(w2, 4), vscale(L(vir_va, -4), C + 2))
    assert got == want


def test_vacuum_is_unit(vir_va, sl2_va):
    for va in (vir_va, sl2_va):
        for w in va.basis_upto(3):
            a = {w: ONE}
            assert va.nth(a, VAC, -1) == a
            assert va.nth(VAC, a, -1) == a
            assert va.nth(a, VAC, 0) == {}


def test_affine_products(sl2_va):
    e, f = sl2_va.gen("e"), sl2_va.gen("f")
    assert sl2_va.nth(e, f, 0) == sl2_va.gen("h")
    assert sl2_va.nth(e, f, 1) == {(): K}


def test_basis_dimensions(vir_va, sl2_va):
    assert [len(vir_va.basis(w)) for w in range(7)] == [1, 0, 1, 1, 2, 2, 4]
    assert [len(sl2_va.basis(w)) for w in range(4)] == [1, 3, 9, 22]


def test_translation_is_derivation(vir_va):
    states = vir_va.basis_upto(4)
    for a in states:
        for b in states:
            A, B = {a: ONE}, {b: ONE}
            for n in range(-2, 3):
                lhs = vir_va.translate(vir_va.nth(A, B, n))
                rhs = vsum(vir_va.nth(vir_va.translate(A), B, n), vir_va.nth(A, vir_va.translate(B), n))
                assert lhs == rhs


def test_translation_covariance(vir_va):
    # (Ta)_(n) b = -n a_(n-1) b
    states = vir_va.basis_upto(4)
    for a in states:
        for b in states:
            A, B = {a: ONE}, {b: ONE}
            for n in range(-2, 4):
                assert vir_va.nth(vir_va.translate(A), B, n) == vscale(vir_va.nth(A, B, n - 1), -n)


def test_skew_symmetry(vir_va):
    # b_(n) a = sum_j (-1)^(n+j+1) T^(j)/j! (a_(n+j) b)
    from math import factorial

    states = vir_va.basis_upto(4)
    for a in states:
        for b in states:
            A, B = {a: ONE}, {b: ONE}
            for n in range(0, 4):
                rhs: dict = {}
                j = 0
                while True:
                    t = vir_va.nth(A, B, n + j)
                    if not t and n + j > 12:
                        break
                    for _ in range(j):
                        t = vir_va.translate(t)
                    sign = -1 if (n + j + 1) % 2 else 1
                    rhs = vsum(rhs, vscale(t, Fraction(sign, factorial(j))))
                    j += 1
                assert vir_va.nth(B, A, n) == rhs


def test_energy_grading(vir_va):
    for w in vir_va.basis_upto(5):
        wt = vir_va.weight(w)
        assert vir_va.energy({w: ONE}) == ({w: PolyScalar.coerce(wt)} if wt else {})


def test_star_has_vacuum_unit(vir_va):
    for w in vir_va.basis_upto(4):
        for p in range(3):
            assert vir_va.star(VAC, {w: ONE}, p) == {w: ONE}


def test_bracket_forms_agree(vir_va, sl2_va):
    for va, W in ((vir_va, 4), (sl2_va, 2)):
        for a in va.basis_upto(W):
            for b in va.basis_upto(W):
                A, B = {a: ONE}, {b: ONE}
                for p in range(3):
                    assert va.hbar_bracket(A, B, p) == va.hbar_bracket_direct(A, B)


def test_functional_api(vir_va):
    omega = vir_va.state(vir_va.gen("L"))
    assert nth_product(omega, omega, 1).terms == vscale(omega.terms, 2)
    assert star_p(vir_va.state(VAC), omega, 1).terms == omega.terms


def test_render(vir_va):
    assert vir_va.render(vir_va.nth(vir_va.gen("L"), vir_va.gen("L"), -1)) == "L_(-1) L_(-1) vac"


class TestJ:
    def test_generators_lie_in_J(self, vir_va):
        span = JSpan(vir_va, 1, 8, 1)
        omega = vir_va.gen("L")
        assert span.contains(vir_va.t_plus_hbar_h(omega, 1)) is True
        assert span.contains(vir_va.zhu_mode(omega, omega, -4, 1, 1)) is True
        assert span.contains(vir_va.zhu_mode(omega, omega, -3, 1, 1)) is False

    def test_vacuum_not_in_J(self, vir_va):
        span = JSpan(vir_va, 0, 6, 1)
        assert span.contains(VAC) is False
        assert span.contains(vir_va.gen("L")) is False

    def test_quotient_dimensions(self, vir_va):
        # V_{<=W}/J grows like the level-p Zhu algebra
        for p, expected in ((0, 6), (1, 9), (2, 12)):
            span = JSpan(vir_va, p, 10, 1)
            total = len(vir_va.basis_upto(10))
            assert total - len(span.rows_within_cutoff()) == expected

    def test_undecided_above_cutoff(self, vir_va):
        span = j_span(vir_va, 0, TruncationPolicy(4, 8))
        big = L(vir_va, -9)
        assert in_j(vir_va.state(big), span) == "undecided"

    def test_stable_under_slack(self, vir_va):
        a = JSpan(vir_va, 1, 8, 1, slack=2)
        b = JSpan(vir_va, 1, 8, 1, slack=4)
        assert len(a.rows_within_cutoff()) == len(b.rows_within_cutoff())


def test_twisted_generators_rejected():
    from zhukit.lca import Generator, LcaSpec

    from zhukit.grading import CosetZ

    spec = LcaSpec("tw", [Generator("G", Fraction(3, 2), 1, CosetZ(Fraction(0)))], [], {})
    with pytest.raises(NotImplementedError):
        VertexAlgebra(spec)
