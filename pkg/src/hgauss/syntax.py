"""Lexer and expression parser shared by the polynomial reader and the DSL."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .exact import I, ONE, Scalar
from .freestar import NCPoly, TensorPoly


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(sorted(set(expected)))
        text = f"{line}:{col}: {message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(text)


@dataclass(frozen=True)
class Token:
    kind: str  # NUM, IMAG, IDENT, OP, EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<tensor>\(x\))
  | (?P<num>\d+(?:/\d+)?i?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*.^(){}\[\];,=:])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "num":
            toks.append(Token("IMAG" if s.endswith("i") else "NUM", s.rstrip("i"), line, col))
        elif kind == "ident":
            toks.append(Token("IMAG" if s == "i" else "IDENT", "1" if s == "i" else s, line, col))
        elif kind == "tensor":
            toks.append(Token("OP", "(x)", line, col))
        elif kind == "op":
            toks.append(Token("OP", s, line, col))
        pos = m.end()
    toks.append(Token("EOF", "", line, pos - line_start + 1))
    return toks


class TokenStream:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.peek()
        self.i += 1
        return t

    def at(self, *texts: str) -> bool:
        t = self.peek()
        return t.kind == "OP" and t.text in texts

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.kind == "OP" and t.text == text:
            self.i += 1
            return t
        raise self.error(f"unexpected {describe(t)}", (repr(text),))

    def expect_ident(self) -> Token:
        t = self.peek()
        if t.kind == "IDENT":
            self.i += 1
            return t
        raise self.error(f"unexpected {describe(t)}", ("identifier",))

    def expect_int(self) -> int:
        t = self.peek()
        if t.kind == "NUM" and "/" not in t.text:
            self.i += 1
            return int(t.text)
        raise self.error(f"unexpected {describe(t)}", ("integer",))

    def error(self, message: str, expected=()) -> ParseError:
        t = self.peek()
        return ParseError(message, t.line, t.col, tuple(expected))


def describe(t: Token) -> str:
    if t.kind == "EOF":
        return "end of input"
    return f"{t.text!r}" if t.kind != "IMAG" else f"{t.text}i"


_ATOM_START = ("number", "identifier", "'('", "'i'")


class ExprParser:
    """Recursive-descent reader for polynomials and tensor polynomials.

    Grammar::

        expr   := ['+'|'-'] term (('+'|'-') term)*
        term   := prod ('(x)' prod)*
        prod   := factor (('*'|'.') factor)*
        factor := atom ['^' ['-'] INT]
        atom   := NUM | IMAG | IDENT | '(' expr ')'
    """

    def __init__(self, source, inverses: Mapping[str, str] | None = None, generators=None):
        self.ts = source if isinstance(source, TokenStream) else TokenStream(source)
        self.inverses = dict(inverses or {})
        self.generators = None if generators is None else set(generators)

    # entry points -----------------------------------------------------------
    def parse_poly_only(self) -> NCPoly:
        t = self.expr()
        self._end()
        return self._to_poly(t)

    def parse_tensor_only(self) -> TensorPoly:
        t = self.expr()
        self._end()
        return t

    def _end(self):
        if self.ts.peek().kind != "EOF":
            raise self.ts.error(f"unexpected {describe(self.ts.peek())}", ("end of input", "'+'", "'-'", "'*'"))

    def _to_poly(self, t: TensorPoly) -> NCPoly:
        if t.legs != 1:
            raise self.ts.error("expected a polynomial, found a tensor")
        return NCPoly({k[0]: c for k, c in t.terms.items()})

    def poly(self) -> NCPoly:
        tok = self.ts.peek()
        t = self.expr()
        if t.legs != 1:
            raise ParseError("expected a polynomial, found a tensor", tok.line, tok.col)
        return NCPoly({k[0]: c for k, c in t.terms.items()})

    # grammar ----------------------------------------------------------------
    def expr(self) -> TensorPoly:
        sign = ONE
        if self.ts.accept("-"):
            sign = -ONE
        else:
            self.ts.accept("+")
        acc = self.term().scale(sign)
        while self.ts.at("+", "-"):
            op = self.ts.next().text
            tok = self.ts.peek()
            rhs = self.term()
            if rhs.legs != acc.legs:
                raise ParseError("mixing tensors with different numbers of legs", tok.line, tok.col)
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> TensorPoly:
        parts = [self.prod()]
        while self.ts.accept("(x)"):
            parts.append(self.prod())
        if len(parts) == 1:
            return parts[0]
        out = parts[0]
        for p in parts[1:]:
            out = _tensor(out, p)
        return out

    def prod(self) -> TensorPoly:
        acc = self.factor()
        while self.ts.at("*", "."):
            self.ts.next()
            tok = self.ts.peek()
            rhs = self.factor()
            if acc.legs != rhs.legs and 1 not in (_const_legs(acc), _const_legs(rhs)):
                raise ParseError("product of tensors with different numbers of legs", tok.line, tok.col)
            acc = _mul(acc, rhs)
        return acc

    def factor(self) -> TensorPoly:
        tok = self.ts.peek()
        base = self.atom()
        if self.ts.accept("^"):
            neg = self.ts.accept("-")
            k = self.ts.expect_int()
            if neg:
                if base.legs != 1 or len(base.terms) != 1:
                    raise ParseError("negative power of a non-generator", tok.line, tok.col)
                ((w,), c) = next(iter(base.terms.items()))
                if len(w) != 1 or c != 1 or w[0] not in self.inverses:
                    raise ParseError(f"no inverse known for {tok.text!r}", tok.line, tok.col)
                base = TensorPoly.from_poly(NCPoly.gen(self.inverses[w[0]]))
            out = TensorPoly.one(base.legs)
            for _ in range(k):
                out = out * base
            return out
        return base

    def atom(self) -> TensorPoly:
        t = self.ts.peek()
        if t.kind == "NUM":
            self.ts.next()
            return TensorPoly.from_poly(NCPoly.const(_num(t.text)))
        if t.kind == "IMAG":
            self.ts.next()
            return TensorPoly.from_poly(NCPoly.const(I * _num(t.text)))
        if t.kind == "IDENT":
            self.ts.next()
            if self.generators is not None and t.text not in self.generators:
                raise ParseError(f"unknown generator {t.text!r}", t.line, t.col)
            return TensorPoly.from_poly(NCPoly.gen(t.text))
        if self.ts.accept("("):
            inner = self.expr()
            self.ts.expect(")")
            return inner
        raise self.ts.error(f"unexpected {describe(t)}", _ATOM_START)


def _num(text: str) -> Scalar:
    return Scalar(Fraction(text))


def _const_legs(t: TensorPoly) -> int:
    """1 when t is a pure scalar (usable with any leg count), else 0."""
    if t.legs == 1 and all(k == ((),) for k in t.terms):
        return 1
    return 0


def _mul(a: TensorPoly, b: TensorPoly) -> TensorPoly:
    if a.legs == b.legs:
        return a * b
    if _const_legs(a):
        return b.scale(a.terms.get(((),), 0))
    return a.scale(b.terms.get(((),), 0))


def _tensor(a: TensorPoly, b: TensorPoly) -> TensorPoly:
    out: dict = {}
    for k1, c1 in a.terms.items():
        for k2, c2 in b.terms.items():
            out[k1 + k2] = out.get(k1 + k2, 0) + c1 * c2
    return TensorPoly(a.legs + b.legs, out)
