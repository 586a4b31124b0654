"""Numeric helpers: working precision, exact integer roots, log-sum-exp."""

from __future__ import annotations

import functools
import math
from decimal import Decimal
from fractions import Fraction
from typing import Iterable

from mpmath import mp, mpf

DEFAULT_PRECISION = 128
MIN_PRECISION = 64

_precision = DEFAULT_PRECISION


def get_precision() -> int:
    return _precision


def set_precision(bits: int) -> None:
    global _precision
    if bits < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} bits, got {bits}")
    _precision = int(bits)


def highprec(func):
    """Run ``func`` with mpmath at the package working precision (or higher)."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        with mp.workprec(max(_precision, mp.prec)):
            return func(*args, **kwargs)

    return wrapper


def to_fraction(x) -> Fraction:
    """Exact rational from int, Fraction, Decimal, decimal string or float.

    Floats go through their shortest repr, so ``0.1`` becomes ``1/10``.
    """
    if isinstance(x, bool):
        raise TypeError("bool is not a number here")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Decimal)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, mpf):
        man, exp = x.man_exp
        return Fraction(man) * Fraction(2) ** exp
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for integers n >= 0, k >= 1."""
    if n < 0 or k < 1:
        raise ValueError("iroot needs n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _split(base: int, exponent) -> tuple[int, int]:
    e = to_fraction(exponent)
    if base < 1 or e < 0:
        raise ValueError("need base >= 1 and exponent >= 0")
    return e.numerator, e.denominator


def floor_pow(base: int, exponent) -> int:
    """floor(base ** exponent), exact for rational exponent."""
    p, q = _split(base, exponent)
    return iroot(base**p, q)


def ceil_pow(base: int, exponent) -> int:
    """ceil(base ** exponent), exact for rational exponent."""
    p, q = _split(base, exponent)
    target = base**p
    r = iroot(target, q)
    return r if r**q == target else r + 1


def log_sum_exp(values: Iterable[float]) -> float:
    """log(sum(exp(v))) with an exactly rounded inner sum."""
    vals = list(values)
    if not vals:
        return -math.inf
    m = max(vals)
    if m == -math.inf:
        return m
    return m + math.log(math.fsum(math.exp(v - m) for v in vals))


def to_mpf(x) -> mpf:
    """mpf at the current precision; Fractions are divided, not rounded twice."""
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    if isinstance(x, Decimal):
        return mpf(str(x))
    return mpf(x)


def _round_real(make_y, guard: int, direction: int) -> int:
    with mp.workprec(64):
        y0 = mpf(make_y())
    bits = max(0, int(mp.mag(y0))) if y0 != 0 else 0
    prec = bits + guard + 16
    for _ in range(3):
        with mp.workprec(prec):
            y = mpf(make_y())
            m = mp.nint(y)
            if abs(y - m) > mpf(2) ** (-guard):
                return int(mp.floor(y) if direction < 0 else mp.ceil(y))
        prec *= 2
        guard *= 2
    # within 2**-guard of the same integer at every precision tried: it is that integer
    return int(m)


def floor_real(make_y, guard: int = 64) -> int:
    """floor(y) where ``make_y()`` evaluates y at the current mpmath precision.

    The value is recomputed at increasing precision until the integer part is
    unambiguous. A value that stays within 2**-guard of an integer across three
    precision doublings is taken to be that integer (e.g. exp(2 log 5) = 25).
    """
    return _round_real(make_y, guard, -1)


def ceil_real(make_y, guard: int = 64) -> int:
    """ceil(y); same precision policy as :func:`floor_real`."""
    return _round_real(make_y, guard, 1)


def mp_str(x, digits: int = 20) -> str:
    """Decimal string for an mpf/float/int, stable across runs."""
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    if not isinstance(x, mpf):
        x = mpf(x)
    if mp.isinf(x):
        return "inf" if x > 0 else "-inf"
    return mp.nstr(x, digits, min_fixed=-6, max_fixed=21)
