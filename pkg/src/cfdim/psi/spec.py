"""Digit-growth functions psi: N -> R+ and their shorthand syntax.

Shorthand accepted by :func:`parse_psi`::

    alog:<a>     psi(n) = a * log n
    pow:<b>      psi(n) = n ** b
    exp:<b>      psi(n) = b ** n
    table:<csv>  psi(n) read from "n,value" rows, n = 1, 2, ... consecutive
    expr:<e>     an expression in n (see :mod:`cfdim.psi.expr`)

Anything without a recognised prefix is parsed as an expression.

The builtin families override ``log_rate`` / ``log_ratio`` with closed forms so
that the growth proxies are exact for them (``exp:3`` gives log psi(n)/n = log 3
with no rounding).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from mpmath import mp, mpf

from .._num import highprec, to_fraction, to_mpf
from ..errors import PsiDomainError, PsiParseError
from . import expr as _expr


class PsiSpec:
    """Base class. Subclasses implement :meth:`_value`."""

    #: known to be non-decreasing on all of N
    monotone: bool = False

    def _value(self, n: int) -> mpf:
        raise NotImplementedError

    def domain_limit(self) -> int | None:
        """Largest n at which psi is defined, or None if unbounded."""
        return None

    def value(self, n: int) -> mpf:
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise PsiDomainError(f"psi is defined for integers n >= 1, got {n!r}")
        limit = self.domain_limit()
        if limit is not None and n > limit:
            raise PsiDomainError(f"n={n} is past the end of the table (length {limit})")
        v = self._value(n)
        if not mp.isfinite(v):
            raise PsiDomainError(f"psi({n}) is not finite")
        if v < 0:
            raise PsiDomainError(f"psi({n}) = {mp.nstr(v, 8)} is negative")
        return v

    def __call__(self, n: int) -> mpf:
        return self.value(n)

    def log_value(self, n: int) -> mpf:
        v = self.value(n)
        if v == 0:
            raise PsiDomainError(f"log psi({n}) with psi({n}) = 0")
        return mp.log(v)

    def log_rate(self, n: int) -> mpf:
        """log psi(n) / n."""
        return self.log_value(n) / n

    def log_ratio(self, n: int) -> mpf:
        """psi(n) / log n (n >= 2)."""
        return self.value(n) / mp.log(n)

    def shorthand(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.shorthand()


@dataclass(frozen=True, eq=True)
class AlphaLog(PsiSpec):
    """psi(n) = alpha log n. Note psi(1) = 0."""

    alpha: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", to_fraction(self.alpha))
        if self.alpha <= 0:
            raise ValueError("alog needs alpha > 0")

    monotone = True

    def _value(self, n):
        return to_mpf(self.alpha) * mp.log(n)

    def log_ratio(self, n):
        return to_mpf(self.alpha)

    def shorthand(self):
        return f"alog:{_num_text(self.alpha)}"


@dataclass(frozen=True, eq=True)
class Power(PsiSpec):
    """psi(n) = n ** beta."""

    beta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "beta", to_fraction(self.beta))
        if self.beta <= 0:
            raise ValueError("pow needs beta > 0")

    monotone = True

    def _value(self, n):
        if self.beta.denominator == 1:
            return mpf(n) ** self.beta.numerator
        return mp.power(n, to_mpf(self.beta))

    def log_value(self, n):
        return to_mpf(self.beta) * mp.log(n)

    def shorthand(self):
        return f"pow:{_num_text(self.beta)}"


@dataclass(frozen=True, eq=True)
class Expo(PsiSpec):
    """psi(n) = base ** n."""

    base: Fraction

    def __post_init__(self):
        object.__setattr__(self, "base", to_fraction(self.base))
        if self.base <= 1:
            raise ValueError("exp needs base > 1")

    monotone = True

    def _value(self, n):
        if self.base.denominator == 1:
            return mpf(self.base.numerator) ** n
        return mp.power(to_mpf(self.base), n)

    def log_value(self, n):
        return n * mp.log(to_mpf(self.base))

    def log_rate(self, n):
        return mp.log(to_mpf(self.base))

    def shorthand(self):
        return f"exp:{_num_text(self.base)}"


@dataclass(frozen=True, eq=True)
class Table(PsiSpec):
    """psi(1..N) given explicitly; values are kept as exact rationals."""

    values: tuple[Fraction, ...]
    source: str | None = field(default=None, compare=False)

    def __post_init__(self):
        vals = tuple(to_fraction(v) for v in self.values)
        if not vals:
            raise ValueError("table must have at least one value")
        for i, v in enumerate(vals, 1):
            if v <= 0:
                raise ValueError(f"table values must be positive; psi({i}) = {v}")
        object.__setattr__(self, "values", vals)

    @property
    def monotone(self):
        return all(a <= b for a, b in zip(self.values, self.values[1:]))

    def domain_limit(self):
        return len(self.values)

    def exact(self, n: int) -> Fraction:
        self.value(n)
        return self.values[n - 1]

    def _value(self, n):
        return to_mpf(self.values[n - 1])

    def shorthand(self):
        return f"table:{self.source}" if self.source else f"table:<{len(self.values)} values>"


@dataclass(frozen=True, eq=True)
class Expr(PsiSpec):
    """psi given by an expression tree in n."""

    ast: _expr.Node
    text: str = field(default="", compare=False)

    def _value(self, n):
        return _expr.evaluate(self.ast, n)

    def shorthand(self):
        return "expr:" + _expr.to_text(self.ast)


def _num_text(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    f = float(x)
    if Fraction(repr(f)) == x:
        return repr(f)
    return f"{x.numerator}/{x.denominator}"


def load_table(path: str | Path) -> Table:
    """Read "n,value" rows (an optional header row is skipped)."""
    path = Path(path)
    rows = []
    with path.open(newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if len(row) < 2:
                raise PsiParseError(f"{path}:{lineno}: expected 'n,value'")
            try:
                n = int(row[0])
                v = Fraction(Decimal(row[1].strip()))
            except (ValueError, ArithmeticError):
                if not rows and lineno == 1:
                    continue  # header
                raise PsiParseError(f"{path}:{lineno}: cannot read {row!r}") from None
            if n != len(rows) + 1:
                raise PsiParseError(f"{path}:{lineno}: expected n={len(rows) + 1}, got {n}")
            rows.append(v)
    if not rows:
        raise PsiParseError(f"{path}: no rows")
    try:
        return Table(tuple(rows), source=str(path))
    except ValueError as exc:
        raise PsiParseError(f"{path}: {exc}") from None


def _number(text: str, what: str) -> Fraction:
    try:
        x = Fraction(Decimal(text.strip()))
    except (ValueError, ArithmeticError):
        raise PsiParseError(f"bad number {text!r} for {what}", text, 0, "decimal number") from None
    if x <= 0:
        raise PsiParseError(f"non-positive literal for {what}", text, 0, "positive number")
    return x


def parse_psi(text: str) -> PsiSpec:
    """Parse the shorthand grammar described in the module docstring."""
    s = text.strip()
    prefix, sep, body = s.partition(":")
    if sep:
        prefix = prefix.strip().lower()
        if prefix == "alog":
            return AlphaLog(_number(body, "alog"))
        if prefix == "pow":
            return Power(_number(body, "pow"))
        if prefix == "exp":
            base = _number(body, "exp")
            if base <= 1:
                raise PsiParseError("exp: base must exceed 1", body, 0, "number > 1")
            return Expo(base)
        if prefix == "table":
            return load_table(body.strip())
        if prefix == "expr":
            return Expr(_expr.parse_expr(body), text=body)
        raise PsiParseError(f"unknown psi family {prefix!r}", s, 0, "alog, pow, exp, table or expr")
    return Expr(_expr.parse_expr(s), text=s)


@highprec
def eval_psi(spec: PsiSpec, n: int) -> mpf:
    return spec.value(n)


def psi_values(spec: PsiSpec, upto: int) -> list[mpf]:
    """[psi(1), ..., psi(upto)] at the current precision."""
    return [spec.value(n) for n in range(1, upto + 1)]


def table(values: Sequence) -> Table:
    return Table(tuple(values))
