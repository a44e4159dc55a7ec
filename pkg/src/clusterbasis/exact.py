"""Exact rational arithmetic helpers, p-adic valuations and p-expressions.

Rationals are carried as plain ``int`` when integral and as
:class:`fractions.Fraction` otherwise; both are :class:`numbers.Rational`
and mix freely.  Nothing in this package touches floating point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Union

from sympy import isprime

from .errors import InputError

Q = Union[int, Fraction]


class _Infinity:
    """Valuation of zero.  Compares above every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    __str__ = __repr__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("clusterbasis.INFINITY")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__


INFINITY = _Infinity()


def norm(q) -> Q:
    """Return ``q`` as an int when integral, otherwise as a reduced Fraction."""
    if isinstance(q, int):
        return q
    if isinstance(q, Fraction):
        return q.numerator if q.denominator == 1 else q
    if isinstance(q, Rational):
        return norm(Fraction(q.numerator, q.denominator))
    if isinstance(q, str):
        return parse_rational(q)
    raise TypeError(f"not an exact rational: {q!r}")


_RATIONAL_RE = re.compile(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*\Z")


def parse_rational(text: str) -> Q:
    """Parse ``"a"`` or ``"a/b"`` (b > 0) into an exact rational."""
    m = _RATIONAL_RE.match(text)
    if not m:
        raise InputError(f"not a rational number: {text!r}")
    num = int(m.group(1))
    if not m.group(2):
        return num
    den = int(m.group(2))
    if den == 0:
        raise InputError(f"zero denominator in {text!r}")
    return norm(Fraction(num, den))


def half(q) -> Q:
    if isinstance(q, int) and not q & 1:
        return q >> 1
    return norm(Fraction(q) / 2)


def is_integral(q) -> bool:
    return isinstance(q, int) or q.denominator == 1


def fmt(q) -> str:
    """Exact decimal string: ``"a"`` or ``"a/b"``."""
    q = norm(q)
    return str(q)


@lru_cache(maxsize=256)
def check_prime(p) -> int:
    """Return ``p`` as an int if it is an odd prime, else raise InputError."""
    if isinstance(p, bool) or not isinstance(p, int):
        raise InputError(f"prime must be an integer, got {p!r}")
    if p == 2:
        raise InputError("p = 2 is not supported (residue characteristic must be odd)")
    if p < 3 or not isprime(p):
        raise InputError(f"{p} is not an odd prime")
    return p


def _int_val(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def val_p(q, p: int):
    """Normalised p-adic valuation of an exact rational; ``INFINITY`` for 0."""
    check_prime(p)
    q = Fraction(norm(q))
    if q == 0:
        return INFINITY
    return _int_val(q.numerator, p) - _int_val(q.denominator, p)


# --- p-expressions -----------------------------------------------------------
#
# expr   := term (('+'|'-') term)*
# term   := factor (('*'|'/') factor)*
# factor := base ('^' uint)?
# base   := int | 'p' | '(' expr ')' | '-' base


@dataclass(frozen=True)
class PExpr:
    """Parsed expression tree; ``op`` is 'int', 'p', 'neg' or a binary operator."""

    op: str
    args: tuple = ()
    value: int = 0

    def eval(self, p: int) -> Q:
        return eval_p_expr(self, p)


class _PExprParser:
    _TOKEN = re.compile(r"\s*(?:(\d+)|(.))")

    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        while True:
            m = self._TOKEN.match(text, pos)
            if not m or m.end() == pos:
                break
            start = m.start(1) if m.group(1) else m.start(2)
            if m.group(1):
                self.tokens.append(("int", int(m.group(1)), start))
            else:
                ch = m.group(2)
                if ch not in "+-*/^()p":
                    raise InputError(f"unexpected character {ch!r} at position {start} in {text!r}")
                self.tokens.append((ch, None, start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, what):
        pos = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        raise InputError(f"{what} at position {pos} in {self.text!r}")

    def parse(self) -> PExpr:
        if not self.tokens:
            self.fail("empty expression")
        e = self.expr()
        if self.i != len(self.tokens):
            self.fail("unexpected token")
        return e

    def expr(self):
        e = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            e = PExpr(op, (e, self.term()))
        return e

    def term(self):
        e = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()[0]
            e = PExpr(op, (e, self.factor()))
        return e

    def factor(self):
        b = self.base()
        if self.peek() == "^":
            self.take()
            if self.peek() != "int":
                self.fail("expected non-negative integer exponent")
            b = PExpr("^", (b,), self.take()[1])
        return b

    def base(self):
        kind = self.peek()
        if kind == "int":
            return PExpr("int", value=self.take()[1])
        if kind == "p":
            self.take()
            return PExpr("p")
        if kind == "-":
            self.take()
            return PExpr("neg", (self.base(),))
        if kind == "(":
            self.take()
            e = self.expr()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.take()
            return e
        self.fail("expected a number, 'p' or '('")


def parse_p_expr(text: str) -> PExpr:
    return _PExprParser(text).parse()


def eval_p_expr(e, p: int) -> Q:
    """Evaluate a p-expression (text or parsed) exactly at the prime ``p``."""
    check_prime(p)
    if isinstance(e, str):
        e = parse_p_expr(e)
    return norm(_eval(e, p))


def _eval(e: PExpr, p: int):
    op = e.op
    if op == "int":
        return e.value
    if op == "p":
        return p
    if op == "neg":
        return -_eval(e.args[0], p)
    if op == "^":
        return _eval(e.args[0], p) ** e.value
    a, b = (_eval(x, p) for x in e.args)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if b == 0:
        raise InputError("division by zero in p-expression")
    return Fraction(a) / b
