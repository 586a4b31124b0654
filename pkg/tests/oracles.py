"""Independent reference computations used only by the tests.

Nothing here imports the package; every oracle takes a different route to the
same number (nested fractions instead of the two-term recursion, matrix
products instead of Euclid, brute-force grids instead of binomials).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
from mpmath import mp, mpf


def nested_value(word) -> Fraction:
    """[a_1, ..., a_n] evaluated from the inside out."""
    x = Fraction(0)
    for a in reversed(word):
        x = 1 / (a + x)
    return x


def matrix_pq(word) -> tuple[int, int, int, int]:
    """(p_{n-1}, q_{n-1}, p_n, q_n) from the product of [[0, 1], [1, a]] matrices."""
    m = ((1, 0), (0, 1))
    for a in word:
        (x, y), (z, t) = m
        # m @ [[0, 1], [1, a]]
        m = ((y, x + a * y), (t, z + a * t))
    (p1, p), (q1, q) = m
    return p1, q1, p, q


def cylinder_oracle(word) -> tuple[Fraction, Fraction]:
    """Cylinder endpoints without the recursion.

    The cylinder is the closure of {[a_1..a_n + y] : y in [0, 1]}, whose
    endpoints are [a_1..a_n] (y = 0) and [a_1..a_{n-1}, a_n + 1] (y = 1).
    """
    a = nested_value(word)
    b = nested_value(tuple(word[:-1]) + (word[-1] + 1,))
    return min(a, b), max(a, b)


def euclid_oracle(x: Fraction) -> list[int]:
    """Partial quotients by iterating the Gauss map on Fractions."""
    out = []
    while x:
        y = 1 / x
        a = math.floor(y)
        out.append(a)
        x = y - a
    return out


def brute_count_nondecreasing(ell: int, n: int) -> int:
    """#non-decreasing words of length n over 1..ell, checking all ell**n words.

    The grid is an n-dimensional boolean array indexed by the digits; each
    adjacent pair of axes is compared by broadcasting.
    """
    r = np.arange(ell)
    mask = np.ones((ell,) * n, dtype=bool)
    for j in range(n - 1):
        left = [1] * n
        right = [1] * n
        left[j] = ell
        right[j + 1] = ell
        mask &= r.reshape(left) <= r.reshape(right)
    return int(mask.sum())


def brute_family(k: int, lows, hi: int) -> list[tuple[int, ...]]:
    """All non-decreasing words with lows[j] <= a_j <= hi, by filtering the full box."""
    out = []
    for w in itertools.product(range(1, hi + 1), repeat=k):
        if all(a <= b for a, b in zip(w, w[1:])) and all(a >= lo for a, lo in zip(w, lows)):
            out.append(w)
    return out


def all_words_q(digits, k: int) -> np.ndarray:
    """q_k(w) for every word of length k over ``digits`` (vectorised, float64).

    Fine for the small depths used here: q stays below 2**53.
    """
    q_prev = np.zeros(1)
    q = np.ones(1)
    for _ in range(k):
        new_prev, new_q = [], []
        for d in digits:
            new_prev.append(q)
            new_q.append(d * q + q_prev)
        q_prev = np.concatenate(new_prev)
        q = np.concatenate(new_q)
    return q, q_prev


def pressure_root(digits, k: int, tol: float = 1e-12) -> float:
    """Root s of sum_w q_w**(-2s) = 1 over all words of length k."""
    q, _ = all_words_q(digits, k)
    logq = np.log(q)

    def f(s):
        v = -2 * s * logq
        m = v.max()
        return m + math.log(math.fsum(np.exp(v - m)))

    lo, hi = 1e-9, 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def length_sum_root(digits, k: int, tol: float = 1e-12) -> float:
    """Root s of sum_w |I_k(w)|**s = 1 with lengths taken from cylinder_oracle."""
    with mp.workprec(80):
        logs = []
        for w in itertools.product(digits, repeat=k):
            lo, hi = cylinder_oracle(w)
            L = hi - lo
            logs.append(mp.log(L.numerator) - mp.log(L.denominator))

        def f(s):
            s = mpf(s)
            return mp.log(mp.fsum(mp.exp(s * x) for x in logs))

        lo_, hi_ = 1e-9, 1.0
        while hi_ - lo_ > tol:
            mid = (lo_ + hi_) / 2
            if f(mid) > 0:
                lo_ = mid
            else:
                hi_ = mid
    return (lo_ + hi_) / 2


def ratio_pressure_root(digits, k: int, tol: float = 1e-13) -> float:
    """Root s of Z_{k+1}(s) / Z_k(s) = 1 with Z_k(s) = sum q_w**(-2s).

    The ratio converges to exp(P(s)) geometrically fast, so this pins the
    zero of the pressure much more tightly than the raw depth-k sum.
    """
    q1, _ = all_words_q(digits, k + 1)
    q0, _ = all_words_q(digits, k)
    l1, l0 = np.log(q1), np.log(q0)

    def lse(v):
        m = v.max()
        return m + math.log(math.fsum(np.exp(v - m)))

    def f(s):
        return lse(-2 * s * l1) - lse(-2 * s * l0)

    lo, hi = 1e-9, 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def xi_power_oracle(alpha: int, N: int) -> float:
    """max over the tail window [N//2, N] of (2 log (n+1)! + log t_{n+1}) / sum_{k<=n} log t_k
    for t_n = 2 n**(alpha-1), integer alpha, in plain floating point."""
    e = alpha - 1
    logt = [math.log(2) + e * math.log(n) for n in range(1, N + 2)]
    prefix = list(itertools.accumulate(logt))
    best = -math.inf
    for n in range(max(1, N // 2), N + 1):
        val = (2 * math.lgamma(n + 2) + logt[n]) / prefix[n - 1]
        best = max(best, val)
    return best
