from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from zhukit import identities as I
from zhukit.identities import (IDENTITY_IDS, RATIONAL_GAMMAS, DomainError, IdentityCase, check_identity,
                               d_sum, default_grid, h_sum, run_cases)
from zhukit.scalars import GAMMA, binom


@pytest.mark.parametrize("identity", IDENTITY_IDS)
@pytest.mark.parametrize("gamma", ["sym", *RATIONAL_GAMMAS])
def test_default_grids_pass(identity, gamma):
    cases = run_cases(default_grid(identity, gamma))
    assert cases
    assert all(c.status in ("pass", "skipped") for c in cases), [c for c in cases if c.status == "fail"][:3]


def test_binomial_split_grid_size():
    assert len(list(default_grid("binomial_split"))) == 13 * 7 * 6


def test_sequals_excluded_corner_is_skipped():
    c = check_identity(IdentityCase("sequals", {"gamma": "sym", "p": 0, "j": 2, "chi": 1}))
    assert c.status == "skipped" and c.note


def test_range_overrides():
    cases = list(default_grid("star_delta", p=[3], alpha=range(3)))
    assert [c.parameters for c in cases] == [{"p": 3, "alpha": a} for a in range(3)]


@given(st.integers(-4, 8), st.integers(0, 6), st.integers(1, 6),
       st.fractions(min_value=-5, max_value=5, max_denominator=4))
def test_binomial_split_at_random_gamma(n, X, Y, g):
    assert h_sum(g, n, X, Y) + d_sum(g, n, X, Y) == binom(g, n)


def test_mutated_identity_fails(monkeypatch):
    # an off-by-one in the upper summation limit must be caught
    def bad(P):
        g, n, X, Y = GAMMA, P["n"], P["X"], P["Y"]
        return h_sum(g, n, X, Y + 1) + d_sum(g, n, X, Y), binom(g, n)

    monkeypatch.setitem(I._EVAL, "binomial_split", bad)
    cases = run_cases(default_grid("binomial_split"))
    assert any(c.status == "fail" for c in cases)


@pytest.mark.parametrize("params", [{"gamma": "sym", "n": 0, "X": -1, "Y": 1},
                                    {"gamma": "sym", "n": 0, "X": 0, "Y": 0}])
def test_domain_errors(params):
    with pytest.raises(DomainError):
        check_identity(IdentityCase("binomial_split", params))


def test_unknown_identity():
    with pytest.raises(ValueError):
        list(default_grid("nope"))


def test_case_json_is_exact():
    c = check_identity(IdentityCase("geom_q", {"p": 2, "alpha": 3}))
    d = c.to_json()
    assert d["status"] == "pass" and isinstance(d["lhs"], str) and d["parameters"] == {"p": "2", "alpha": "3"}


def test_parallel_matches_serial():
    cases = list(default_grid("shortlem"))
    assert [c.status for c in run_cases(cases, 2)] == [c.status for c in run_cases(cases, 1)]
