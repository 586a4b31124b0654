"""Covering sums over word families and the exponent where they cross 1.

For a family of depth-k words the covering sum is ``sum |I_k(w)|**s`` over the
cylinders of its members. Three ways to get it:

``exact``
    stream the family and add up the exact cylinder lengths (log domain,
    compensated). At ``s = 1`` the sum is also returned as an exact rational.
``bound``
    a cardinality bound times a bound on the longest cylinder, both closed form:
    for ``A`` families ``2^k e^{(a2+e)k} (k!)^{a2+e-1}`` words each of length at
    most ``(k!)^{-2(a1-e)}``; for ``C`` families ``exp(k^{a+e}(log k + 1))`` words
    each at most ``20 phi^{-2k}``. ``D`` and bounded families use the exact count
    with the ``20 phi^{-2k}`` length bound.
``count-product``
    exact count times the exact length of the longest cylinder (that of the
    componentwise minimal word). Cheap, and tighter than ``bound``.

The covering sum decreases in ``s``, so the crossing is found by bisection.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import mp

from ._num import highprec, log_sum_exp, to_mpf
from .cfcore import cylinder, cylinder_denominator, last_two
from .enumeration import FamilySpec, count, enumerate_family, log_bound_A_k, log_bound_C_k
from .errors import BracketFailure, BudgetExceeded

MODES = ("exact", "bound", "count-product")
DEFAULT_WORD_BUDGET = 2_000_000
LOG_PHI = math.log((1 + math.sqrt(5)) / 2)


@dataclass(frozen=True)
class CoverSumResult:
    family: FamilySpec
    k: int
    s: float
    log_sum: float
    mode: str
    words: int  # members summed over (exact and count-product) or bounded (bound)
    exact_sum: Fraction | None = None  # only in exact mode at s = 1


def _log_length(w) -> float:
    (_, q1), (_, q) = last_two(w)
    return -(math.log(q) + math.log(q + q1))


def _slice_logs(args) -> list[float]:
    family, first = args
    return [_log_length(w) for w in enumerate_family(family, first_digit=first)]


def log_lengths(family: FamilySpec, budget: int | None = DEFAULT_WORD_BUDGET, workers: int = 1) -> np.ndarray:
    """log |I_k(w)| for every member, in enumeration order."""
    size = count(family)
    if budget is not None and size > budget:
        raise BudgetExceeded(f"enumerating {family}", size, budget)
    if workers <= 1:
        return np.fromiter((_log_length(w) for w in enumerate_family(family)), dtype=float, count=size)
    if family.kind == "bounded":
        heads = list(family.digits)
    else:
        heads = list(range(family.lower_bounds()[0], family.ceiling() + 1))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_slice_logs, [(family, h) for h in heads]))
    return np.array([x for part in parts for x in part], dtype=float)


def _sum_logs(logs: np.ndarray, s: float) -> float:
    return log_sum_exp((s * logs).tolist())


@highprec
def _log_count_bound(family: FamilySpec) -> float:
    k = family._length()
    if family.kind == "A":
        return float(log_bound_A_k(k, family.alpha2, family.eps))
    if family.kind == "C":
        if k < 2:
            return math.log(count(family))
        return float(log_bound_C_k(k, family.alpha, family.eps))
    return math.log(count(family))


@highprec
def _log_length_bound(family: FamilySpec) -> float:
    k = family._length()
    if family.kind == "A":
        e = to_mpf(family.alpha1 - family.eps)
        return float(-2 * e * mp.loggamma(k + 1))
    return math.log(20) - 2 * k * LOG_PHI


def _longest_log_length(family: FamilySpec) -> float:
    return -math.log(cylinder_denominator(family.minimal_word()))


def cover_sum(
    family: FamilySpec,
    k: int | None = None,
    s: float = 1.0,
    mode: str = "exact",
    budget: int | None = DEFAULT_WORD_BUDGET,
    workers: int = 1,
) -> CoverSumResult:
    """log of sum |I_k(w)|**s over the members of ``family`` at depth ``k``."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    s = float(s)
    if not 0 < s <= 1:
        raise ValueError("s must lie in (0, 1]")
    fam = family.at_depth(k) if k is not None else family
    k = fam._length()
    if mode == "bound":
        lc = _log_count_bound(fam)
        return CoverSumResult(fam, k, s, lc + s * _log_length_bound(fam), mode, count(fam))
    if mode == "count-product":
        n = count(fam)
        return CoverSumResult(fam, k, s, math.log(n) + s * _longest_log_length(fam), mode, n)
    logs = log_lengths(fam, budget, workers)
    exact = None
    if s == 1.0:
        exact = sum((cylinder(w).length for w in enumerate_family(fam)), Fraction(0))
    return CoverSumResult(fam, k, s, _sum_logs(logs, s), mode, len(logs), exact)


@dataclass(frozen=True)
class CriticalExponent:
    family: FamilySpec
    k: int
    s_star: float
    bracket: tuple[float, float]
    iterations: int
    mode: str


def warm_start(family: FamilySpec) -> float | None:
    """Exponent suggested by the covering argument for this family, if any."""
    if family.kind == "A":
        a1, a2, e = family.alpha1, family.alpha2, family.eps
        return float((a2 + 2 * e - 1) / (2 * (a1 - e)))
    if family.kind == "C":
        return float(family.eps)
    return None


def critical_exponent(
    template: FamilySpec,
    k: int | None = None,
    tol: float = 1e-4,
    mode: str = "exact",
    budget: int | None = DEFAULT_WORD_BUDGET,
    workers: int = 1,
) -> CriticalExponent:
    """Bisect s on [tol, 1] for the crossing of the depth-k covering sum with 1."""
    fam = template.at_depth(k) if k is not None else template
    k = fam._length()
    if mode == "exact":
        logs = log_lengths(fam, budget, workers)

        def f(s: float) -> float:
            return _sum_logs(logs, s)

    else:

        def f(s: float) -> float:
            return cover_sum(fam, s=s, mode=mode).log_sum

    lo, hi = float(tol), 1.0
    f_lo, f_hi = f(lo), f(hi)
    if not (f_lo > 0 > f_hi):
        if f_hi >= 0:
            msg = f"covering sum of {fam} at depth {k} is >= 1 at s = 1"
        else:
            msg = f"covering sum of {fam} at depth {k} is < 1 for every s in [{lo}, 1]"
        raise BracketFailure(msg, f_lo, f_hi)
    iterations = 0
    guess = warm_start(fam)
    if guess is not None and lo < guess < hi:
        iterations += 1
        if f(guess) > 0:
            lo = guess
        else:
            hi = guess
    while hi - lo > tol:
        mid = (lo + hi) / 2
        iterations += 1
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return CriticalExponent(fam, k, (lo + hi) / 2, (lo, hi), iterations, mode)


def critical_series(
    template: FamilySpec, ks, tol: float = 1e-4, mode: str = "exact", budget: int | None = DEFAULT_WORD_BUDGET
) -> list[CriticalExponent]:
    return [critical_exponent(template, k, tol, mode, budget) for k in ks]


def exact_length_sum(family: FamilySpec) -> Fraction:
    """Total length of the member cylinders as an exact rational."""
    return sum((cylinder(w).length for w in enumerate_family(family)), Fraction(0))
