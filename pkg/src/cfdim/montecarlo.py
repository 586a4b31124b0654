"""Monte Carlo look at how large partial quotients of a typical number get.

Each sample is an exact dyadic rational U / 2**(4N) with U drawn from PCG64.
Sample ``i`` has its own stream seeded with ``SeedSequence([seed, i])``, so
results do not depend on the number of workers or on the order samples run.
The per-sample statistic is ``max_{N/2 <= n <= N} log a_n / log n``; it tends
to 1 only slowly, so expect medians noticeably away from 1 at desk-scale N.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cfcore import expand

QUANTILES = (0.1, 0.25, 0.5, 0.75, 0.9)


@dataclass(frozen=True)
class GrowthSample:
    statistic: float
    digits: int  # number of partial quotients used
    discarded: int  # draws rejected for having fewer than N partial quotients


@dataclass(frozen=True)
class GrowthLaw:
    samples: int
    N: int
    seed: int | None
    median: float
    quantiles: dict[float, float]
    discarded: int
    statistics: tuple[float, ...]


def tail_statistic(word, N: int | None = None) -> float:
    """max over n in [N//2, N] (n >= 2) of log a_n / log n."""
    L = len(word) if N is None else min(N, len(word))
    lo = max(2, L // 2)
    if L < 2:
        raise ValueError("need at least two partial quotients")
    return max(math.log(word[n - 1]) / math.log(n) for n in range(lo, L + 1))


def _partial_quotients(num: int, den: int, limit: int) -> list[int]:
    out = []
    while num and len(out) < limit:
        a, r = divmod(den, num)
        out.append(a)
        den, num = num, r
    return out


def draw_sample(seed: int, index: int, N: int) -> GrowthSample:
    bits = 4 * N
    words = -(-bits // 64)
    gen = np.random.PCG64(np.random.SeedSequence([seed, index]))
    den = 1 << bits
    discarded = 0
    while True:
        raw = gen.random_raw(words).astype("<u8").tobytes()
        num = int.from_bytes(raw, "little") & (den - 1)
        digits = _partial_quotients(num, den, N)
        if len(digits) == N:
            return GrowthSample(tail_statistic(digits, N), N, discarded)
        discarded += 1


def _draw(args) -> GrowthSample:
    return draw_sample(*args)


def mc_growth_law(
    samples: int,
    N: int,
    seed: int = 0,
    fixed_x: Fraction | str | None = None,
    workers: int = 1,
) -> GrowthLaw:
    """Median and quantiles of the tail statistic over ``samples`` random numbers.

    ``fixed_x`` replaces the random draw by one given rational (for debugging);
    the statistic is then taken over whatever partial quotients it has.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if fixed_x is not None:
        word = expand(fixed_x, max_n=N)
        stats = [tail_statistic(word, N)] * samples
        return _summarise(stats, samples, N, None, 0)
    if N < 100:
        raise ValueError("N must be >= 100")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    jobs = [(seed, i, N) for i in range(samples)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_draw, jobs, chunksize=max(1, samples // (4 * workers))))
    else:
        results = [draw_sample(*job) for job in jobs]
    return _summarise(
        [r.statistic for r in results], samples, N, seed, sum(r.discarded for r in results)
    )


def _summarise(stats: list[float], samples: int, N: int, seed: int | None, discarded: int) -> GrowthLaw:
    arr = np.asarray(stats, dtype=float)
    qs = {q: float(np.quantile(arr, q)) for q in QUANTILES}
    return GrowthLaw(samples, N, seed, float(np.median(arr)), qs, discarded, tuple(stats))
