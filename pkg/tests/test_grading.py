from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from zhukit.grading import (CosetZ, TwistData, grading_cases, chi, eps, gamma, level_quantities,
                            product_grading, sigma)

F = Fraction
rats = st.fractions(min_value=-6, max_value=6, max_denominator=6)
levels = st.fractions(min_value=0, max_value=5, max_denominator=6)
elems = st.builds(TwistData, rats.map(CosetZ), st.fractions(min_value=0, max_value=4, max_denominator=6))


def test_coset_arithmetic():
    assert CosetZ(F(7, 3)) == CosetZ(F(1, 3))
    assert (CosetZ(F(2, 3)) + CosetZ(F(1, 3))).is_zero()
    assert CosetZ(F(1, 4)).contains(F(-11, 4))
    assert -CosetZ(F(1, 4)) == CosetZ(F(3, 4))


def test_worked_values_at_eps_minus_half():
    a = TwistData(CosetZ(F(1, 2)), F(0))
    assert eps(a) == F(-1, 2)
    q0 = level_quantities(a, 0)
    assert (q0.P_a, q0.N_a) == (F(1, 2), -1)
    q1 = level_quantities(a, F(1, 2))
    assert (q1.P_a, q1.N_a) == (F(3, 2), -3)
    # the half-integer level gives a strictly smaller index set
    assert q1.N_a < q0.N_a


def test_untwisted_values():
    a = TwistData.untwisted(2)
    assert eps(a) == 0 and gamma(a) == 2
    q = level_quantities(a, 1)
    assert (q.P_a, q.N_a, q.R_a, q.xi_a) == (2, -4, 2, 3)


@given(elems)
def test_eps_range_and_gamma(a):
    e = eps(a)
    assert -1 < e <= 0
    assert a.degree_coset.contains(gamma(a))


@given(elems, levels)
def test_level_quantities_definition(a, P):
    q = level_quantities(a, P)
    e = eps(a)
    assert q.P_a > P and q.P_a - 1 <= P
    assert CosetZ(q.P_a) == CosetZ(e)
    assert q.N_a < -P - q.P_a <= q.N_a + 1
    assert q.R_a == q.P_a - e


@given(elems, levels)
def test_periodicity(a, P):
    q, q1 = level_quantities(a, P), level_quantities(a, P + 1)
    assert q1.P_a == q.P_a + 1 and q1.N_a == q.N_a - 2


@given(elems, elems, levels)
def test_sigma_vanishes_when_eps_zero(a, b, P):
    a0 = TwistData.untwisted(a.weight)
    assert sigma(a0, b, P) == 0


@given(elems, elems, levels)
def test_N_sigma_relation(a, b, P):
    if (CosetZ(eps(a)) + CosetZ(eps(b))).is_zero():
        assert level_quantities(a, P).N_a == -2 * (P.numerator // P.denominator) - 2 + sigma(a, b, P)


@given(elems, elems, st.integers(-4, 4))
def test_eps_additivity(a, b, n):
    assert eps(product_grading(a, b, n)) == eps(a) + eps(b) + chi(a, b)


def test_negative_level_rejected():
    with pytest.raises(ValueError):
        level_quantities(TwistData.untwisted(1), -1)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_grading_grid(d):
    cases = grading_cases(d)
    assert cases and all(c.status == "pass" for c in cases)
    checks = {c.check for c in cases}
    assert {"sigma-vanishing", "N-sigma", "periodicity", "eps-additivity"} <= checks
