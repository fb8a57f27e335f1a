"""Recursive-descent parser for scalar expressions and form literals.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ['-'] atom ['^' nonneg_int]
    atom   := integer | identifier | '(' expr ')'

``-x^2`` reads as ``-(x^2)``.  Implicit multiplication is rejected.  Form
literals additionally accept the basis atoms ``e^{i,j,...}`` (coframe wedge,
1-based increasing indices) and ``e_{i}`` (frame section).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional

from .errors import DivisionByZero, GlacalcError, ParseError
from .expr import CoordinateSystem, Expr

_SCALAR_TOKENS = r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?P<frac>\.\d*)?)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
"""
_TOKEN = re.compile(_SCALAR_TOKENS, re.VERBOSE)
_FORM_TOKEN = re.compile(
    r"(?P<basis>e(?P<kind>[\^_])\{(?P<idx>[^}]*)\})|" + _SCALAR_TOKENS, re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "ident", "op", "cobasis", "basis", "end"
    text: str
    pos: int
    value: object = None


def tokenize(text: str, allow_basis: bool = False) -> List[Token]:
    pattern = _FORM_TOKEN if allow_basis else _TOKEN
    tokens = []
    pos = 0
    while pos < len(text):
        m = pattern.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        if m.group("ws"):
            pass
        elif allow_basis and m.group("basis"):
            raw = m.group("idx").strip()
            try:
                idx = tuple(int(s) for s in raw.split(",")) if raw else ()
            except ValueError:
                raise ParseError(f"bad basis index list {{{raw}}}", pos, text) from None
            kind = "cobasis" if m.group("kind") == "^" else "basis"
            tokens.append(Token(kind, m.group(0), pos, idx))
        elif m.group("num") is not None:
            if m.group("frac"):
                raise ParseError("non-integer literal (only integers are allowed)", pos, text)
            tokens.append(Token("int", m.group("num"), pos, int(m.group("num"))))
        elif m.group("ident"):
            tokens.append(Token("ident", m.group("ident"), pos))
        else:
            tokens.append(Token("op", m.group("op"), pos))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class Domain:
    """Value domain for the parser; subclass to change atom handling."""

    def __init__(self, coords: CoordinateSystem):
        self.coords = coords

    def integer(self, value: int, tok: Token):
        return self.coords.const(value)

    def identifier(self, tok: Token):
        if tok.text not in self.coords.names:
            raise ParseError(f"unknown identifier {tok.text!r}", tok.pos)
        return self.coords.coordinate(tok.text)

    def basis(self, tok: Token):
        raise ParseError(f"basis atom {tok.text!r} not allowed here", tok.pos)

    def add(self, a, b, tok):
        return a + b

    def sub(self, a, b, tok):
        return a - b

    def mul(self, a, b, tok):
        return a * b

    def div(self, a, b, tok):
        if isinstance(b, Expr) and b.is_zero():
            raise ParseError("division by zero", tok.pos)
        return a / b

    def neg(self, a, tok):
        return -a

    def power(self, a, n: int, tok):
        return a ** n


class Parser:
    def __init__(self, text: str, domain: Domain, allow_basis: bool = False):
        self.text = text
        self.domain = domain
        self.tokens = tokenize(text, allow_basis)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def _advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def _is(self, op: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == op

    def _fail(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        raise ParseError(message, tok.pos, self.text)

    def parse(self):
        if self.tok.kind == "end":
            self._fail("empty expression")
        try:
            value = self.expr()
        except ParseError as exc:
            if not exc.text:
                exc.text = self.text
            raise
        except DivisionByZero as exc:
            raise ParseError(str(exc), self.tok.pos, self.text) from exc
        if self.tok.kind != "end":
            if self.tok.kind in ("int", "ident", "cobasis", "basis") or self._is("("):
                self._fail("implicit multiplication is not supported")
            self._fail(f"unexpected {self.tok.text!r}")
        return value

    def expr(self):
        value = self.term()
        while self._is("+") or self._is("-"):
            op = self._advance()
            rhs = self.term()
            value = (self.domain.add if op.text == "+" else self.domain.sub)(value, rhs, op)
        return value

    def term(self):
        value = self.factor()
        while self._is("*") or self._is("/"):
            op = self._advance()
            rhs = self.factor()
            value = (self.domain.mul if op.text == "*" else self.domain.div)(value, rhs, op)
        return value

    def factor(self):
        minus = None
        if self._is("-"):
            minus = self._advance()
        value = self.atom()
        if self._is("^"):
            op = self._advance()
            negative = False
            if self._is("-"):
                negative = True
                self._advance()
            tok = self.tok
            if tok.kind != "int":
                self._fail("exponent must be a nonnegative integer")
            if negative:
                self._fail("negative exponent", tok)
            self._advance()
            value = self.domain.power(value, tok.value, op)
        if minus is not None:
            value = self.domain.neg(value, minus)
        return value

    def atom(self):
        tok = self.tok
        if tok.kind == "int":
            self._advance()
            return self.domain.integer(tok.value, tok)
        if tok.kind == "ident":
            self._advance()
            return self.domain.identifier(tok)
        if tok.kind in ("cobasis", "basis"):
            self._advance()
            return self.domain.basis(tok)
        if self._is("("):
            self._advance()
            value = self.expr()
            if not self._is(")"):
                self._fail("expected ')'")
            self._advance()
            return value
        if tok.kind == "end":
            self._fail("unexpected end of input")
        self._fail(f"unexpected {tok.text!r}")


def parse_expr(text: str, coords: CoordinateSystem) -> Expr:
    """Parse ``text`` into a canonical :class:`Expr` over ``coords``."""
    return Parser(text, Domain(coords)).parse()


def parse_with(text: str, domain: Domain) -> object:
    """Parse with a custom domain; basis atoms enabled."""
    try:
        return Parser(text, domain, allow_basis=True).parse()
    except ParseError:
        raise
    except GlacalcError as exc:
        raise ParseError(str(exc), -1, text) from exc
