"""Exact continued-fraction arithmetic on finite words of partial quotients.

A word ``(a_1, ..., a_n)`` indexes the cylinder ``I_n(a_1, ..., a_n)`` of all
x in (0, 1) whose expansion starts with those digits. Everything here is exact:
convergents are Python integers, points and interval endpoints are Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Sequence

Word = tuple[int, ...]


def as_word(digits: Iterable[int], allow_empty: bool = False) -> Word:
    """Validate digits and return them as a tuple of positive ints."""
    w = tuple(digits)
    for d in w:
        if isinstance(d, bool) or not isinstance(d, int):
            raise TypeError(f"partial quotients must be ints, got {d!r}")
        if d < 1:
            raise ValueError(f"partial quotients must be >= 1, got {d}")
    if not w and not allow_empty:
        raise ValueError("word must be non-empty")
    return w


def is_nondecreasing(w: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(w, w[1:]))


class Convergent(NamedTuple):
    p: int
    q: int

    def as_fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not (0 <= self.lo < self.hi <= 1):
            raise ValueError(f"bad interval [{self.lo}, {self.hi}]")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


def _recursion(w: Word) -> list[tuple[int, int]]:
    # (p_{-1}, q_{-1}) = (1, 0), (p_0, q_0) = (0, 1)
    out = [(1, 0), (0, 1)]
    for a in w:
        (p2, q2), (p1, q1) = out[-2], out[-1]
        out.append((a * p1 + p2, a * q1 + q2))
    return out


def convergents(w: Iterable[int]) -> list[Convergent]:
    """(p_k, q_k) for k = 1..n from the two-term recursion."""
    w = as_word(w)
    return [Convergent(p, q) for p, q in _recursion(w)[2:]]


def last_two(w: Iterable[int]) -> tuple[Convergent, Convergent]:
    """(p_{n-1}, q_{n-1}) and (p_n, q_n), using the index-0 conventions for n = 1."""
    w = as_word(w)
    rec = _recursion(w)
    return Convergent(*rec[-2]), Convergent(*rec[-1])


def evaluate(w: Iterable[int]) -> Fraction:
    """The finite continued fraction [a_1, ..., a_n] = p_n / q_n."""
    _, last = last_two(w)
    return Fraction(last.p, last.q)


def expand(x, max_n: int | None = None) -> Word:
    """Canonical expansion of a rational in (0, 1) via the exact Gauss map.

    Runs Euclid on (numerator, denominator), which is the Gauss map
    a_k = floor(1/x_k), x_{k+1} = 1/x_k - a_k without building Fractions.
    Since every x_k < 1 the final quotient is >= 2 (and 1/k expands to [k]).
    """
    x = Fraction(x) if not isinstance(x, str) else Fraction(x.strip())
    if not (0 < x < 1):
        raise ValueError(f"expand needs 0 < x < 1, got {x}")
    if max_n is not None and max_n < 1:
        raise ValueError("max_n must be >= 1")
    p, q = x.numerator, x.denominator
    digits = []
    while p and (max_n is None or len(digits) < max_n):
        a, r = divmod(q, p)
        digits.append(a)
        p, q = r, p
    return tuple(digits)


def cylinder(w: Iterable[int]) -> Interval:
    """Endpoints p_n/q_n and (p_n + p_{n-1})/(q_n + q_{n-1}), ordered."""
    prev, last = last_two(w)
    a = Fraction(last.p, last.q)
    b = Fraction(last.p + prev.p, last.q + prev.q)
    return Interval(min(a, b), max(a, b))


def cylinder_denominator(w: Iterable[int]) -> int:
    """q_n (q_n + q_{n-1}), i.e. 1 / |I_n(w)|."""
    prev, last = last_two(w)
    return last.q * (last.q + prev.q)


def determinant(w: Iterable[int]) -> int:
    """q_n p_{n-1} - p_n q_{n-1}; equals (-1)**n."""
    prev, last = last_two(w)
    return last.q * prev.p - last.p * prev.q


def fibonacci_pair(n: int) -> tuple[int, int]:
    """(F_n, F_{n+1}) by fast doubling; F_0 = 0, F_1 = 1."""
    if n == 0:
        return 0, 1
    a, b = fibonacci_pair(n >> 1)
    c = a * (2 * b - a)
    d = a * a + b * b
    return (d, c + d) if n & 1 else (c, d)


def fibonacci(n: int) -> int:
    return fibonacci_pair(n)[0]


def lucas(n: int) -> int:
    f, f1 = fibonacci_pair(n)
    return 2 * f1 - f


@dataclass(frozen=True)
class BoundsReport:
    n: int
    q_at_least_fibonacci: bool  # q_n >= F_n
    q_golden_lower: bool  # q_n >= phi**n / (2 sqrt 5)
    length_le_inverse_q_squared: bool  # |I_n| <= 1/q_n**2
    inverse_q_squared_le_golden: bool  # 1/q_n**2 <= 20 phi**(-2n)
    length_product_lower: bool  # (2**n prod a_k)**-2 <= |I_n|
    length_product_upper: bool  # |I_n| <= (prod a_k)**-2

    @property
    def ok(self) -> bool:
        return all(
            (
                self.q_at_least_fibonacci,
                self.q_golden_lower,
                self.length_le_inverse_q_squared,
                self.inverse_q_squared_le_golden,
                self.length_product_lower,
                self.length_product_upper,
            )
        )

    def as_dict(self) -> dict[str, bool]:
        return {
            "q_at_least_fibonacci": self.q_at_least_fibonacci,
            "q_golden_lower": self.q_golden_lower,
            "length_le_inverse_q_squared": self.length_le_inverse_q_squared,
            "inverse_q_squared_le_golden": self.inverse_q_squared_le_golden,
            "length_product_lower": self.length_product_lower,
            "length_product_upper": self.length_product_upper,
        }


def verify_bounds(w: Iterable[int]) -> BoundsReport:
    """Check the growth and length inequalities for one word, exactly.

    phi**(2n) = L_{2n} - phi**(-2n) lies strictly between the integers
    L_{2n} - 1 and L_{2n}, so for an integer m the comparison m >= phi**(2n)
    is equivalent to m >= L_{2n}. That turns q_n >= phi**n / (2 sqrt 5), i.e.
    20 q_n**2 >= phi**(2n), into pure integer arithmetic.
    """
    w = as_word(w)
    n = len(w)
    prev, last = last_two(w)
    q, q1 = last.q, prev.q
    denom = q * (q + q1)  # |I_n| = 1/denom
    golden = 20 * q * q >= lucas(2 * n)
    prod = 1
    for a in w:
        prod *= a
    return BoundsReport(
        n=n,
        q_at_least_fibonacci=q >= fibonacci(n),
        q_golden_lower=golden,
        length_le_inverse_q_squared=denom >= q * q,
        inverse_q_squared_le_golden=golden,
        length_product_lower=denom <= (2**n * prod) ** 2,
        length_product_upper=denom >= prod * prod,
    )


def coprime(c: Convergent) -> bool:
    return gcd(c.p, c.q) == 1
