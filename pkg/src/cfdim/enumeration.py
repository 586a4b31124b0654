"""Counting and streaming the word families used in the covering arguments.

Families (all words have length ``k``; for ``D`` the length is called ``n``):

* ``D(l, n)``: non-decreasing words with digits in 1..l.
* ``A_k(alpha1, alpha2, eps)``: non-decreasing words with
  ``a_k <= floor(k**(alpha2+eps))`` and ``a_j >= j**(alpha1-eps)`` for all j.
* ``C_k(alpha, eps)``: non-decreasing words with ``a_k <= floor(k**(alpha+eps))``.
* ``bounded(D)``: every word over the finite digit set D (no ordering constraint).

Powers with rational exponents are floored/ceiled exactly with integer roots,
so ``4**1.5`` is 8, never 7.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterator, Sequence

from mpmath import mp, mpf

from ._num import ceil_pow, floor_pow, highprec, to_fraction, to_mpf
from .cfcore import Word, is_nondecreasing
from .errors import BudgetExceeded

KINDS = ("D", "A", "C", "bounded")


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    k: int | None = None
    ell: int | None = None
    alpha1: Fraction | None = None
    alpha2: Fraction | None = None
    alpha: Fraction | None = None
    eps: Fraction | None = None
    digits: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        for name in ("alpha1", "alpha2", "alpha", "eps"):
            val = getattr(self, name)
            if val is not None and not isinstance(val, Fraction):
                object.__setattr__(self, name, to_fraction(val))
        if self.k is not None and self.k < 1:
            raise ValueError("word length must be >= 1")
        if self.kind == "D":
            if self.ell is None or self.ell < 1:
                raise ValueError("D family needs l >= 1")
        elif self.kind == "A":
            if None in (self.alpha1, self.alpha2, self.eps):
                raise ValueError("A family needs alpha1, alpha2, eps")
            if self.alpha1 <= 0 or self.eps < 0 or self.alpha2 < self.alpha1:
                raise ValueError("A family needs alpha2 >= alpha1 > 0 and eps >= 0")
            if self.eps >= self.alpha1:
                raise ValueError("A family needs eps < alpha1")
        elif self.kind == "C":
            if None in (self.alpha, self.eps):
                raise ValueError("C family needs alpha, eps")
            if self.alpha < 0 or self.eps < 0:
                raise ValueError("C family needs alpha >= 0 and eps >= 0")
        else:
            if not self.digits or any(d < 1 for d in self.digits):
                raise ValueError("bounded family needs a non-empty set of positive digits")
            if len(set(self.digits)) != len(self.digits) or list(self.digits) != sorted(self.digits):
                object.__setattr__(self, "digits", tuple(sorted(set(self.digits))))

    @classmethod
    def D(cls, ell: int, n: int | None = None) -> "FamilySpec":
        return cls("D", k=n, ell=ell)

    @classmethod
    def A(cls, alpha1, alpha2, eps, k: int | None = None) -> "FamilySpec":
        return cls("A", k=k, alpha1=to_fraction(alpha1), alpha2=to_fraction(alpha2), eps=to_fraction(eps))

    @classmethod
    def C(cls, alpha, eps, k: int | None = None) -> "FamilySpec":
        return cls("C", k=k, alpha=to_fraction(alpha), eps=to_fraction(eps))

    @classmethod
    def bounded(cls, digits: Sequence[int], k: int | None = None) -> "FamilySpec":
        return cls("bounded", k=k, digits=tuple(sorted(set(int(d) for d in digits))))

    @classmethod
    def parse(cls, text: str) -> "FamilySpec":
        """Parse ``"D:l=5,n=5"``, ``"A:k=6,alpha1=2,alpha2=2,eps=0.05"``,
        ``"C:k=4,alpha=1,eps=0.2"`` or ``"bounded:digits=1,2,k=12"``.

        Bare comma-separated values continue the previous key, which is how a
        digit list is written. ``n`` and ``k`` are interchangeable.
        """
        kind, sep, rest = text.strip().partition(":")
        kind = kind.strip()
        if kind not in KINDS:
            raise ValueError(f"unknown family kind {kind!r} in {text!r}")
        params: dict[str, list[str]] = {}
        key = None
        for tok in filter(None, (t.strip() for t in rest.split(","))):
            if "=" in tok:
                key, _, val = tok.partition("=")
                key = key.strip().lower()
                params.setdefault(key, []).append(val.strip())
            elif key is None:
                raise ValueError(f"value {tok!r} without a key in {text!r}")
            else:
                params[key].append(tok)

        def one(name, conv=to_fraction, default=None):
            vals = params.pop(name, None)
            if vals is None:
                return default
            if len(vals) != 1:
                raise ValueError(f"{name} takes one value in {text!r}")
            return conv(vals[0])

        length = one("k", int)
        n = one("n", int)
        if length is not None and n is not None and length != n:
            raise ValueError(f"conflicting k and n in {text!r}")
        length = length if length is not None else n
        if kind == "D":
            spec = cls("D", k=length, ell=one("l", int, None) or one("ell", int))
        elif kind == "A":
            spec = cls("A", k=length, alpha1=one("alpha1"), alpha2=one("alpha2"), eps=one("eps"))
        elif kind == "C":
            spec = cls("C", k=length, alpha=one("alpha"), eps=one("eps"))
        else:
            vals = params.pop("digits", None)
            if not vals:
                raise ValueError(f"bounded family needs digits= in {text!r}")
            spec = cls("bounded", k=length, digits=tuple(sorted({int(v) for v in vals})))
        if params:
            raise ValueError(f"unexpected parameters {sorted(params)} in {text!r}")
        return spec

    def __str__(self) -> str:
        parts = []
        if self.kind == "D":
            parts.append(f"l={self.ell}")
        elif self.kind == "A":
            parts += [f"alpha1={_fmt(self.alpha1)}", f"alpha2={_fmt(self.alpha2)}", f"eps={_fmt(self.eps)}"]
        elif self.kind == "C":
            parts += [f"alpha={_fmt(self.alpha)}", f"eps={_fmt(self.eps)}"]
        else:
            parts.append("digits=" + ",".join(map(str, self.digits)))
        if self.k is not None:
            parts.append(f"{'n' if self.kind == 'D' else 'k'}={self.k}")
        return f"{self.kind}:" + ",".join(parts)

    def at_depth(self, k: int) -> "FamilySpec":
        return replace(self, k=k)

    def _length(self) -> int:
        if self.k is None:
            raise ValueError(f"family {self} has no word length; use at_depth(k)")
        return self.k

    def ceiling(self) -> int:
        """Largest digit any member may use."""
        k = self._length()
        if self.kind == "D":
            return self.ell
        if self.kind == "A":
            return floor_pow(k, self.alpha2 + self.eps)
        if self.kind == "C":
            return floor_pow(k, self.alpha + self.eps)
        return self.digits[-1]

    def lower_bounds(self) -> tuple[int, ...]:
        """Per-position minimum digit (1-based positions)."""
        k = self._length()
        if self.kind == "A":
            e = self.alpha1 - self.eps
            return tuple(max(1, ceil_pow(j, e)) for j in range(1, k + 1))
        if self.kind == "bounded":
            return (self.digits[0],) * k
        return (1,) * k

    @property
    def nondecreasing(self) -> bool:
        return self.kind != "bounded"

    def contains(self, w: Sequence[int]) -> bool:
        k = self._length()
        if len(w) != k or any(a < 1 for a in w):
            return False
        if self.kind == "bounded":
            allowed = set(self.digits)
            return all(a in allowed for a in w)
        hi = self.ceiling()
        return is_nondecreasing(w) and all(lo <= a <= hi for a, lo in zip(w, self.lower_bounds()))

    def minimal_word(self) -> Word:
        """Componentwise smallest member; its cylinder is the longest one."""
        return self.lower_bounds()


def _fmt(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    f = float(x)
    return repr(f) if Fraction(repr(f)) == x else f"{x.numerator}/{x.denominator}"


def count_D(ell: int, n: int) -> int:
    """#D(l, n) = (n + l - 1)! / (n! (l - 1)!)."""
    if ell < 1 or n < 1:
        raise ValueError("count_D needs l >= 1 and n >= 1")
    return math.comb(n + ell - 1, n)


def _count_bounded_nondecreasing(lows: Sequence[int], hi: int) -> int:
    k = len(lows)
    if k == 0:
        return 1
    if max(lows) > hi:
        return 0
    base = lows[0]
    # ways[v - base] = number of valid prefixes ending in digit v
    ways = [1] * (hi - base + 1)
    for lo in lows[1:]:
        acc = 0
        new = [0] * len(ways)
        for i, w in enumerate(ways):
            acc += w
            if base + i >= lo:
                new[i] = acc
        ways = new
    return sum(ways)


def count(family: FamilySpec) -> int:
    """Exact cardinality of a family at its word length."""
    k = family._length()
    if family.kind == "D":
        return count_D(family.ell, k)
    if family.kind == "bounded":
        return len(family.digits) ** k
    hi = family.ceiling()
    if family.kind == "C":
        return math.comb(k + hi - 1, k) if hi >= 1 else 0
    return _count_bounded_nondecreasing(family.lower_bounds(), hi)


def enumerate_family(
    family: FamilySpec, budget: int | None = None, first_digit: int | None = None
) -> Iterator[Word]:
    """Yield every member once, in lexicographic order.

    ``budget`` caps the family size (checked before anything is yielded).
    ``first_digit`` restricts to one slice, so slices can go to separate workers.
    """
    k = family._length()
    if budget is not None:
        size = count(family)
        if size > budget:
            raise BudgetExceeded(f"enumerating {family}", size, budget)
    return _walk(family, k, first_digit)


def _walk(family: FamilySpec, k: int, first_digit: int | None) -> Iterator[Word]:
    if family.kind == "bounded":
        heads = family.digits if first_digit is None else [d for d in family.digits if d == first_digit]
        for head in heads:
            for tail in itertools.product(family.digits, repeat=k - 1):
                yield (head,) + tail
        return
    lows = family.lower_bounds()
    hi = family.ceiling()
    prefix: list[int] = []

    def rec(j: int, floor_: int) -> Iterator[Word]:
        if j == k:
            yield tuple(prefix)
            return
        start = max(floor_, lows[j])
        stop = hi
        if j == 0 and first_digit is not None:
            if first_digit < start or first_digit > hi:
                return
            start = stop = first_digit
        for d in range(start, stop + 1):
            prefix.append(d)
            yield from rec(j + 1, d)
            prefix.pop()

    yield from rec(0, 1)


@highprec
def log_bound_A_k(k: int, alpha2, eps) -> mpf:
    """log of 2**k * exp((alpha2+eps) k) * (k!)**(alpha2+eps-1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    x = to_mpf(to_fraction(alpha2)) + to_mpf(to_fraction(eps))
    return k * mp.ln2 + x * k + (x - 1) * mp.loggamma(k + 1)


@highprec
def bound_A_k(k: int, alpha2, eps) -> mpf:
    """Upper bound on #A_k from the binomial count and Stirling's inequality."""
    return mp.exp(log_bound_A_k(k, alpha2, eps))


@highprec
def log_bound_C_k(k: int, alpha, eps) -> mpf:
    """log of exp(k**(alpha+eps) (log k + 1)), i.e. k**(alpha+eps) (log k + 1)."""
    if k < 2:
        raise ValueError("k must be >= 2")
    x = to_mpf(to_fraction(alpha)) + to_mpf(to_fraction(eps))
    return mp.power(k, x) * (mp.log(k) + 1)


@highprec
def bound_C_k(k: int, alpha, eps) -> mpf:
    return mp.exp(log_bound_C_k(k, alpha, eps))


@highprec
def log_stirling_bounds(k: int) -> tuple[mpf, mpf]:
    if k < 1:
        raise ValueError("k must be >= 1")
    core = (k + mpf(1) / 2) * mp.log(k) - k
    return core + mp.log(2 * mp.pi) / 2, core + 1


@highprec
def stirling_bounds(k: int) -> tuple[mpf, mpf]:
    """(sqrt(2 pi) k**(k+1/2) e**-k, e k**(k+1/2) e**-k), which bracket k!."""
    lo, hi = log_stirling_bounds(k)
    return mp.exp(lo), mp.exp(hi)
