"""Recursive-descent parser for digit-growth expressions in the variable ``n``.

Grammar (``^`` is right associative and binds tighter than ``*`` and ``/``)::

    expr   := term (('+' | '-') term)*
    term   := power (('*' | '/') power)*
    power  := atom ('^' power)?
    atom   := NUMBER | 'n' | FUNC '(' expr ')' | '(' expr ')'
    FUNC   := log | exp | sqrt | floor

``**`` is accepted for ``^``, and the unicode ``×`` / ``÷`` for ``*`` / ``/``.
Literals must be positive; there is no unary minus.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Union

from mpmath import mp, mpf

from ..errors import PsiDomainError, PsiParseError

FUNCTIONS = ("log", "exp", "sqrt", "floor")


@dataclass(frozen=True)
class Num:
    value: Decimal


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, BinOp, Call]

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*/^()×÷])
    """,
    re.VERBOSE,
)

_CANON = {"**": "^", "×": "*", "÷": "/"}


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PsiParseError(f"unexpected character {text[pos]!r}", text, pos, "number, n, function or operator")
        kind = m.lastgroup
        if kind != "ws":
            val = m.group()
            toks.append(_Tok(kind, _CANON.get(val, val), pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, expected: str, message: str | None = None):
        t = self.tok
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise PsiParseError(message or f"unexpected {found}", self.text, t.pos, expected)

    def accept(self, *ops: str) -> str | None:
        if self.tok.kind == "op" and self.tok.text in ops:
            self.i += 1
            return self.toks[self.i - 1].text
        return None

    def expect(self, op: str):
        if not self.accept(op):
            self.fail(repr(op))

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            self.fail("operator or end of input")
        return node

    def expr(self) -> Node:
        node = self.term()
        while op := self.accept("+", "-"):
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.power()
        while op := self.accept("*", "/"):
            node = BinOp(op, node, self.power())
        return node

    def power(self) -> Node:
        base = self.atom()
        if self.accept("^"):
            return BinOp("^", base, self.power())
        return base

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            try:
                value = Decimal(t.text)
            except InvalidOperation:  # pragma: no cover - regex admits only valid literals
                self.fail("number")
            if value <= 0:
                raise PsiParseError("non-positive literal", self.text, t.pos, "positive number")
            return Num(value)
        if t.kind == "name":
            self.i += 1
            if t.text == "n":
                return Var()
            if t.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            raise PsiParseError(f"unknown identifier {t.text!r}", self.text, t.pos, "n or one of " + ", ".join(FUNCTIONS))
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        if t.kind == "op" and t.text == "-" and self.toks[self.i + 1].kind == "num":
            raise PsiParseError("non-positive literal", self.text, t.pos, "positive number")
        self.fail("number, n, function or '('")


def parse_expr(text: str) -> Node:
    if not text.strip():
        raise PsiParseError("empty expression", text, 0, "expression")
    return _Parser(text).parse()


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 3}


def to_text(node: Node) -> str:
    """Render with the fewest parentheses that parse back to the same tree."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Var):
        return "n"
    if isinstance(node, Call):
        return f"{node.func}({to_text(node.arg)})"
    p = _PREC[node.op]
    left, right = to_text(node.left), to_text(node.right)
    lp, rp = _prec_of(node.left), _prec_of(node.right)
    if node.op == "^":
        # right associative: a ^ (b ^ c) needs no parens, (a ^ b) ^ c does
        if lp <= p:
            left = f"({left})"
        if rp < p:
            right = f"({right})"
    else:
        if lp < p:
            left = f"({left})"
        if rp <= p:
            right = f"({right})"
    sep = "^" if node.op == "^" else f" {node.op} "
    return f"{left}{sep}{right}"


def _prec_of(node: Node) -> int:
    return _PREC[node.op] if isinstance(node, BinOp) else 4


def evaluate(node: Node, n: int) -> mpf:
    """Evaluate at integer n with mpmath at the current precision."""
    if isinstance(node, Num):
        return mpf(str(node.value))
    if isinstance(node, Var):
        return mpf(n)
    if isinstance(node, Call):
        x = evaluate(node.arg, n)
        if node.func == "log":
            if x <= 0:
                raise PsiDomainError(f"log of non-positive value {mp.nstr(x, 8)} at n={n}")
            return mp.log(x)
        if node.func == "exp":
            return mp.exp(x)
        if node.func == "sqrt":
            if x < 0:
                raise PsiDomainError(f"sqrt of negative value {mp.nstr(x, 8)} at n={n}")
            return mp.sqrt(x)
        return mp.floor(x)
    a = evaluate(node.left, n)
    b = evaluate(node.right, n)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        if b == 0:
            raise PsiDomainError(f"division by zero at n={n}")
        return a / b
    if a < 0 and not _is_integer(b):
        raise PsiDomainError(f"non-integer power of negative value at n={n}")
    if a == 0 and b <= 0:
        raise PsiDomainError(f"zero to a non-positive power at n={n}")
    return mp.power(a, b)


def _is_integer(x: mpf) -> bool:
    return x == mp.floor(x)
