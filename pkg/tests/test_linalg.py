from __future__ import annotations

from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from zhukit.linalg import RowSpace, left_kernel, rank, rref

entries = st.integers(-3, 3).map(Fraction)
matrices = st.lists(st.lists(entries, min_size=4, max_size=4), min_size=1, max_size=6)


def sparse(row):
    return {i: x for i, x in enumerate(row) if x}


@given(matrices)
def test_rank_matches_sympy(rows):
    assert rank([sparse(r) for r in rows]) == sympy.Matrix(rows).rank()


@given(matrices, st.lists(entries, min_size=6, max_size=6))
def test_combinations_are_members(rows, coeffs):
    space = RowSpace()
    for r in rows:
        space.add(sparse(r))
    combo = {}
    for c, r in zip(coeffs, rows):
        for i, x in enumerate(r):
            combo[i] = combo.get(i, 0) + c * x
    assert space.contains({i: x for i, x in combo.items() if x})


@given(matrices)
def test_left_kernel_annihilates(rows):
    vecs = [sparse(r) for r in rows]
    for k in left_kernel(vecs):
        total = {}
        for i, c in k.items():
            for j, x in vecs[i].items():
                total[j] = total.get(j, 0) + c * x
        assert not any(total.values())
    assert len(left_kernel(vecs)) == len(rows) - rank(vecs)


def test_rref_is_reduced():
    out = rref([{0: Fraction(2), 1: Fraction(4)}, {0: Fraction(1), 1: Fraction(3)}], [0, 1])
    assert out == [{0: 1}, {1: 1}]


def test_tracking_recovers_combination():
    space = RowSpace(track=True)
    space.add({0: Fraction(1)}, {"a": Fraction(1)})
    space.add({1: Fraction(1)}, {"b": Fraction(1)})
    rem, tag = space.reduce({0: Fraction(2), 1: Fraction(-1)}, {})
    assert not rem
    assert tag == {"a": Fraction(-2), "b": Fraction(1)}
