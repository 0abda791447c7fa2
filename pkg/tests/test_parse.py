from __future__ import annotations

from fractions import Fraction

import pytest

from zhukit.enveloping import pbw_normalize
from zhukit.parse import ParseError, parse_element
from zhukit.scalars import C, PolyScalar


def test_monomial_with_power(vir_alg):
    x = parse_element(vir_alg, "L[-1] L[0]^2 L[1]")
    assert x == pbw_normalize(vir_alg, [("L", -1), ("L", 0), ("L", 0), ("L", 1)])


def test_coefficients_and_symbols(vir_alg):
    x = parse_element(vir_alg, "2 L[0] - 1/2 c L[0] + 3")
    assert x.terms[((0, 0),)] == PolyScalar.coerce(2) - C * Fraction(1, 2)
    assert x.terms[()] == PolyScalar.coerce(3)


def test_product_is_normal_ordered(sl2_alg):
    assert parse_element(sl2_alg, "f[1] e[-1]").render() == "e[-1] f[1] - h[0] + k"


@pytest.mark.parametrize("text,col", [("L[0] +", 6), ("L[0] $", 5), ("X[0]", 0), ("L[0]^x", 5), ("L", 0)])
def test_errors_point_at_column(vir_alg, text, col):
    with pytest.raises(ParseError) as info:
        parse_element(vir_alg, text)
    assert info.value.pos == col
    assert "^" in str(info.value)
