"""Parser for mode expressions such as ``L[-1] L[0]^2 L[1]`` or ``2 e[-1] f[1] - k``.

Grammar (whitespace separates factors)::

    expr   := ['-'] term (('+' | '-') term)*
    term   := [number ['*']] factor*
    factor := mode | scalar
    mode   := NAME '[' ['-'] INT ['/' INT] ']' ['^' INT]
    scalar := one of c, k, h, lam, gamma, optionally '^' INT

The product of factors is taken in the written order and normal ordered.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Tuple

from .enveloping import ModeAlgebra, UEElement, pbw_normalize
from .scalars import SYMBOLS, ONE, PolyScalar


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.message, self.text, self.pos = message, text, pos
        super().__init__(f"{message} at column {pos + 1}\n  {text}\n  {' ' * pos}^")


_TOKEN = re.compile(
    r"\s*(?:(?P<mode>(?P<name>[A-Za-z_][A-Za-z0-9_]*)\[\s*(?P<idx>-?\d+(?:/\d+)?)\s*\])"
    r"|(?P<num>\d+(?:/\d+)?)|(?P<word>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^]))")


def _tokens(text: str) -> List[Tuple[str, object, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError("unexpected character", text, start)
        start = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group("mode"):
            out.append(("mode", (m.group("name"), Fraction(m.group("idx"))), start))
        elif m.group("num"):
            out.append(("num", Fraction(m.group("num")), start))
        elif m.group("word"):
            out.append(("word", m.group("word"), start))
        else:
            out.append(("op", m.group("op"), start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


def parse_element(alg: ModeAlgebra, text: str) -> UEElement:
    """Parse and PBW-normalize an expression over the generators of ``alg``."""
    toks = _tokens(text)
    i = 0
    total = UEElement(alg)

    def peek():
        return toks[i]

    def power() -> int:
        nonlocal i
        if peek()[0] == "op" and peek()[1] == "^":
            i += 1
            kind, val, pos = peek()
            if kind != "num" or Fraction(val).denominator != 1:
                raise ParseError("expected an integer exponent", text, pos)
            i += 1
            return int(val)
        return 1

    sign = 1
    if peek()[0] == "op" and peek()[1] in "+-":
        sign = -1 if peek()[1] == "-" else 1
        i += 1
    while True:
        coeff = PolyScalar.coerce(sign)
        letters = []
        kind, val, pos = peek()
        if kind == "num":
            coeff = coeff * val
            i += 1
            if peek()[0] == "op" and peek()[1] == "*":
                i += 1
        nfactors = 0
        while True:
            kind, val, pos = peek()
            if kind == "mode":
                name, n = val
                if name not in alg.index:
                    raise ParseError(f"unknown generator {name!r}", text, pos)
                i += 1
                e = power()
                letters.extend([(name, n)] * e)
                nfactors += 1
            elif kind == "word":
                if val not in SYMBOLS:
                    if val in alg.index:
                        raise ParseError(f"generator {val!r} needs a mode index like {val}[0]", text, pos)
                    raise ParseError(f"unknown symbol {val!r}", text, pos)
                i += 1
                coeff = coeff * PolyScalar.symbol(val, power())
                nfactors += 1
            elif kind == "op" and val == "*":
                i += 1
            else:
                break
        kind, val, pos = peek()
        if nfactors == 0 and not (toks[i - 1][0] == "num" if i else False):
            raise ParseError("expected a term", text, pos)
        total = total + pbw_normalize(alg, letters, coeff)
        if kind == "end":
            return total
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
            continue
        raise ParseError("expected '+', '-' or end of input", text, pos)
