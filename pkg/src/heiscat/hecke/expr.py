"""Parser for the Hecke expression grammar used by the CLI.

Expressions are words over the tokens ``s<i>``, ``x<i>``, integer and
rational literals ``p/q``, with ``*``, ``+``, ``-`` (binary and unary),
and parentheses; whitespace is ignored.  ``*`` binds tighter than the
additive operators and juxtaposition is not allowed.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import ParseError
from .affine import AffineElement

_TOKEN = re.compile(
    r"\s*(?:(?P<gen>[sx]\d+)|(?P<num>\d+(?:/\d+)?)|(?P<op>[*+\-()]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            break
        if m.group("gen"):
            tokens.append(("gen", m.group("gen"), m.start("gen")))
        elif m.group("num"):
            tokens.append(("num", Fraction(m.group("num")), m.start("num")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens, rank: int):
        self.tokens = tokens
        self.rank = rank
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of expression")
        self.pos += 1
        return tok

    def parse_sum(self) -> AffineElement:
        left = self.parse_product()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "+-":
                self.next()
                right = self.parse_product()
                left = left + right if tok[1] == "+" else left - right
            else:
                return left

    def parse_product(self) -> AffineElement:
        left = self.parse_atom()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] == "*":
                self.next()
                left = left * self.parse_atom()
            else:
                return left

    def parse_atom(self) -> AffineElement:
        tok = self.next()
        kind, value, at = tok
        if kind == "num":
            return AffineElement.scalar(self.rank, value)
        if kind == "gen":
            sym, idx = value[0], int(value[1:])
            if sym == "x":
                if not 1 <= idx <= self.rank:
                    raise ParseError(f"x{idx} out of range for rank {self.rank}", at)
                return AffineElement.x(self.rank, idx)
            if not 1 <= idx < self.rank:
                raise ParseError(f"s{idx} out of range for rank {self.rank}", at)
            return AffineElement.s(self.rank, idx)
        if value == "(":
            inner = self.parse_sum()
            closing = self.next()
            if closing[0] != "op" or closing[1] != ")":
                raise ParseError("expected ')'", closing[2])
            return inner
        if value == "-":
            return -self.parse_atom()
        raise ParseError(f"unexpected token {value!r}", at)


def parse_hecke_expr(text: str, rank: int) -> AffineElement:
    """Parse an expression into PBW normal form inside H_rank.

    >>> str(parse_hecke_expr("s1*x1 + 1", 2))
    'x2*s1'
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty expression")
    parser = _Parser(tokens, rank)
    result = parser.parse_sum()
    if parser.peek() is not None:
        raise ParseError("trailing input", parser.peek()[2])
    return result
