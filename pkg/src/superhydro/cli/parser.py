"""Recursive-descent parser for the expression text format.

Grammar (informal)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('+' | '-') unary | power
    power   := primary ('^' unary)?
    primary := INT | '(' expr ')' | '!' name [call] | name [jet | primes | call]

Names ``theta`` and ``phi`` are odd coordinates, ``x``, ``t``, ``xi`` even
coordinates, ``eps``, ``mu``, ``nu`` sign symbols.  ``!name`` is a fermionic
constant (or an odd function when called).  Field jets are written ``U_xt``.
``Dx( )``, ``Dt( )``, ``Qx( )``, ``Qt( )`` apply the superspace operators.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..grassmann import (
    EVEN,
    FIELD_PARITY,
    ODD,
    Expr,
    GrassmannError,
    Symbol,
    exp,
    fconst,
    field,
    func,
    integral,
    symbol,
)

GREEK = {
    "θ": "theta", "φ": "phi", "ξ": "xi", "ε": "eps", "μ": "mu", "ν": "nu",
    "η": "eta", "ψ": "psi", "π": "pi", "ω": "omega",
}

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)"
    r"|(?P<int>\d+)"
    r"|(?P<name>[A-Za-z][A-Za-z0-9]*(?:_[A-Za-z]+)?)"
    r"|(?P<op>[-+*/^(),!\[\]'=])"
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(src: str) -> list:
    for g, name in GREEK.items():
        src = src.replace(g, name)
    out = []
    pos, line, col0 = 0, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", line, pos - col0 + 1)
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            out.append(Token(kind, text, line, pos - col0 + 1))
        else:
            for i, ch in enumerate(text):
                if ch == "\n":
                    line += 1
                    col0 = pos + i + 1
        pos = m.end()
    out.append(Token("end", "", line, pos - col0 + 1))
    return out


_OPERATORS = ("Dx", "Dt", "Qx", "Qt")


class Parser:
    def __init__(self, src: str):
        self.tokens = tokenize(src)
        self.i = 0

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.column)

    def accept(self, text):
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {found!r}")

    # -- grammar
    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok
            self.i += 1
            rhs = self.unary()
            if op.text == "*":
                e = e * rhs
            else:
                try:
                    e = e / rhs
                except (GrassmannError, ZeroDivisionError) as exc:
                    self.error(str(exc), op)
        return e

    def unary(self) -> Expr:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        start = self.tok
        base = self.primary()
        if self.tok.kind == "op" and self.tok.text == "^":
            caret = self.tok
            self.i += 1
            e = self.unary()
            if e.has_odd():
                self.error("exponent must be even", caret)
            k = e.as_fraction()
            if base.has_odd():
                if k is not None and k < 0:
                    self.error("negative exponent on an odd factor", caret)
                if k is None or k.denominator != 1:
                    self.error("odd factors take only nonnegative integer exponents", caret)
                out = Expr.one()
                for _ in range(int(k)):
                    out = out * base
                return out
            try:
                return base ** (k if k is not None else e)
            except (GrassmannError, ZeroDivisionError) as exc:
                self.error(str(exc), start)
        return base

    def args(self) -> list:
        self.expect("(")
        out = [self.expr()]
        while self.accept(","):
            out.append(self.expr())
        self.expect(")")
        return out

    def primary(self) -> Expr:
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            return Expr.const(int(tok.text))
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if self.accept("!"):
            name_tok = self.tok
            if name_tok.kind != "name":
                self.error("expected a name after '!'")
            self.i += 1
            if self.tok.text in ("'", "(", "["):
                return self.call(name_tok, ODD)
            if name_tok.text in FIELD_PARITY or name_tok.text in ("theta", "phi", "x", "t", "xi"):
                self.error(f"{name_tok.text} is reserved", name_tok)
            return fconst(name_tok.text)
        if tok.kind == "name":
            self.i += 1
            return self.name(tok)
        self.error(f"unexpected {tok.text!r}" if tok.text else "unexpected end of input")

    def name(self, tok) -> Expr:
        text = tok.text
        nxt = self.tok
        if "_" in text:
            base, suffix = text.split("_", 1)
            if base not in FIELD_PARITY or set(suffix) - {"x", "t"}:
                self.error(f"unknown jet {text!r}", tok)
            return field(base, suffix.count("x"), suffix.count("t"))
        if text in _OPERATORS and nxt.text == "(":
            from ..superspace import apply_operator

            self.expect("(")
            inner = self.expr()
            self.expect(")")
            return apply_operator(text, inner)
        if text == "exp" and nxt.text == "(":
            (a,) = self._n_args(1, tok)
            try:
                return exp(a)
            except GrassmannError as exc:
                self.error(str(exc), tok)
        if text == "Int" and nxt.text == "(":
            integrand, var, arg = self._n_args(3, tok)
            try:
                return integral(integrand, _symbol_of(var), arg)
            except GrassmannError as exc:
                self.error(str(exc), tok)
        if nxt.kind == "op" and nxt.text in ("'", "(", "["):
            return self.call(tok, FIELD_PARITY.get(text, EVEN))
        if text in FIELD_PARITY:
            return field(text)
        return symbol(text)

    def _n_args(self, n, tok):
        args = self.args()
        if len(args) != n:
            self.error(f"{tok.text} takes {n} arguments", tok)
        return args

    def call(self, name_tok, parity) -> Expr:
        primes = 0
        while self.accept("'"):
            primes += 1
        derivs = None
        if self.accept("["):
            derivs = [self._int()]
            while self.accept(","):
                derivs.append(self._int())
            self.expect("]")
        args = self.args()
        if primes:
            if len(args) != 1 or derivs is not None:
                self.error("primes apply to one-argument functions", name_tok)
            derivs = [primes]
        if derivs is not None and len(derivs) != len(args):
            self.error("derivative counts do not match arguments", name_tok)
        try:
            return func(name_tok.text, *args, derivs=derivs, parity=parity)
        except GrassmannError as exc:
            self.error(str(exc), name_tok)

    def _int(self) -> int:
        if self.tok.kind != "int":
            self.error("expected an integer")
        v = int(self.tok.text)
        self.i += 1
        return v


def _symbol_of(e: Expr) -> Symbol:
    atoms = e.atoms()
    if len(e.terms) == 1 and len(atoms) == 1:
        a = atoms.pop()
        if type(a) is Symbol and e.terms[0][1] == 1:
            return a
    raise GrassmannError("integration variable must be a symbol")


def parse(src: str) -> Expr:
    """Parse the text form of an expression."""
    return Parser(src).parse()


def parse_equation(src: str):
    """Parse ``lhs = rhs``; returns the pair of expressions."""
    depth = 0
    for i, ch in enumerate(src):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "=" and depth == 0:
            return parse(src[:i]), parse(src[i + 1:])
    raise ParseError("expected '='", 1, len(src) + 1)


def parse_number(src: str) -> Fraction:
    v = parse(src).as_fraction()
    if v is None:
        raise ParseError(f"{src!r} is not a rational number", 1, 1)
    return v
