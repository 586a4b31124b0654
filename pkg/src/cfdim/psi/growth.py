"""Finite-horizon growth constants of psi and the dimension values they imply.

Every asymptotic constant is replaced by a proxy over the tail window
``[N//2, N]``: a liminf becomes the window minimum, a limsup the window maximum.
Each proxy is also computed at the horizons ``N//4`` and ``N//2`` so callers can
see where it is heading (the *trend*).

Trends are classified by their log-log slope between consecutive horizons
(which double each time):

* ``zero``      both slopes < -10 tol  (the quantity decays like a power of n)
* ``infinite``  both slopes > +10 tol
* ``finite``    the last slope is within +-10 tol
* ``uncertain`` anything else
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from mpmath import mp, mpf

from .._num import highprec, to_mpf
from ..errors import PsiDomainError
from .spec import PsiSpec, Table

DEFAULT_TOL = 1e-3

ZERO, FINITE, INFINITE, UNCERTAIN = "zero", "finite", "infinite", "uncertain"


def horizons(N: int) -> tuple[int, int, int]:
    return (N // 4, N // 2, N)


TAILS = ("half", "sqrt")


def window(h: int, start: int = 2, tail: str = "half") -> range:
    """Tail window [h/2, h], or [h - sqrt(h), h] for heavily oscillating psi."""
    if tail == "sqrt":
        return range(max(start, h - math.isqrt(h)), h + 1)
    if tail != "half":
        raise ValueError(f"tail must be one of {TAILS}")
    return range(max(start, h // 2), h + 1)


def classify_trend(values: Sequence, tol: float = DEFAULT_TOL) -> str:
    """Classify a three-point trend taken at doubling horizons."""
    v1, v2, v3 = (mpf(v) for v in values)
    if v1 == v2 == v3 == 0:
        return ZERO
    if min(v1, v2, v3) <= 0:
        return UNCERTAIN
    s1 = mp.log(v2 / v1, 2)
    s2 = mp.log(v3 / v2, 2)
    thr = 10 * tol
    if s1 > thr and s2 > thr:
        return INFINITE
    if s1 < -thr and s2 < -thr:
        return ZERO
    if abs(s2) <= thr:
        return FINITE
    return UNCERTAIN


@dataclass(frozen=True)
class Estimate:
    value: mpf
    trend: tuple[mpf, mpf, mpf]  # at horizons N//4, N//2, N
    first: mpf | None = None  # first / last value inside the tail window at N
    last: mpf | None = None

    def regime(self, tol: float = DEFAULT_TOL) -> str:
        return classify_trend(self.trend, tol)


@dataclass(frozen=True)
class GrowthReport:
    horizon: int
    alpha: Estimate  # psi(n) / log n, window median
    linear: Estimate  # psi(n) / n, window median
    log_A: Estimate  # window min of log psi(n) / n
    log_B: Estimate  # window max of log psi(n) / n
    C: Estimate  # 1 + window max of psi(n+1) / (psi(1) + ... + psi(n))
    log_gamma: Estimate  # same proxy as log_A
    psi_tail_min: tuple[mpf, mpf, mpf]
    diverges: bool  # tail minimum strictly increasing over the horizons
    abc_chain: bool  # A <= B <= C at this horizon (soft check)

    @property
    def A(self) -> mpf:
        return mp.exp(self.log_A.value)

    @property
    def B(self) -> mpf:
        return mp.exp(self.log_B.value)

    @property
    def gamma(self) -> mpf:
        return mp.exp(self.log_gamma.value)


def _neumaier(values):
    """Running prefix sums with compensation."""
    s = mpf(0)
    c = mpf(0)
    out = []
    for v in values:
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        out.append(s + c)
    return out


def _estimate(series: dict[int, mpf], N: int, reduce, tail: str = "half") -> Estimate:
    points = []
    for h in horizons(N):
        vals = [series[n] for n in window(h, tail=tail) if n in series]
        if not vals:
            raise PsiDomainError(f"no data in the window at horizon {h}")
        points.append(reduce(vals))
    last = [series[n] for n in window(N, tail=tail) if n in series]
    return Estimate(points[-1], tuple(points), last[0], last[-1])


@highprec
def growth_constants(spec: PsiSpec, N: int, tail: str = "half") -> GrowthReport:
    """Finite-horizon estimates of alpha, A, B, C and gamma for psi.

    liminf / limsup become min / max over the tail window ``tail`` at N,
    and every estimate also carries its values at N//4 and N//2.
    """
    if N < 16:
        raise ValueError("growth_constants needs N >= 16")
    limit = spec.domain_limit()
    if limit is not None and limit < N:
        raise ValueError(f"psi table has {limit} values, horizon N={N} needs at least N")
    top = N + 1 if limit is None else min(N + 1, limit)
    psi = {n: spec.value(n) for n in range(1, top + 1)}

    lo = min(min(window(horizons(N)[0])), min(window(horizons(N)[0], tail=tail)))
    ratio_log = {n: spec.log_ratio(n) for n in range(lo, N + 1)}
    linear = {n: psi[n] / n for n in range(lo, N + 1)}
    rate = {n: spec.log_rate(n) for n in range(lo, N + 1)}

    # psi(n+1) / (psi(1) + ... + psi(n)); exact for tables
    if isinstance(spec, Table):
        sums, acc = {}, Fraction(0)
        for n in range(1, top + 1):
            acc += spec.values[n - 1]
            sums[n] = acc
        cratio = {n: to_mpf(spec.values[n] / sums[n]) for n in range(lo, top)}
    else:
        prefix = _neumaier([psi[n] for n in range(1, top + 1)])
        cratio = {n: psi[n + 1] / prefix[n - 1] for n in range(lo, top)}

    median = statistics.median_low
    alpha = _estimate(ratio_log, N, median, tail)
    lin = _estimate(linear, N, median, tail)
    log_A = _estimate(rate, N, min, tail)
    log_B = _estimate(rate, N, max, tail)
    c_est = _estimate(cratio, N, max, tail)
    C = Estimate(1 + c_est.value, tuple(1 + v for v in c_est.trend), 1 + c_est.first, 1 + c_est.last)
    tail_min = tuple(min(psi[n] for n in window(h, tail=tail) if n in psi) for h in horizons(N))
    diverges = tail_min[0] < tail_min[1] < tail_min[2]
    chain = log_A.value <= log_B.value and mp.exp(log_B.value) <= C.value
    return GrowthReport(N, alpha, lin, log_A, log_B, C, log_A, tail_min, diverges, chain)


@dataclass(frozen=True)
class XiEstimate:
    value: mpf
    trend: tuple[mpf, mpf, mpf]
    regime: str

    @property
    def dimension(self) -> mpf:
        """1 / (2 + xi) for the set with n t_n <= a_n < (n+1) t_n."""
        if self.regime == INFINITE:
            return mpf(0)
        return 1 / (2 + self.value)


@highprec
def xi(t, N: int, tol: float = DEFAULT_TOL) -> XiEstimate:
    """Window maximum of (2 log (n+1)! + log t_{n+1}) / (log t_1 + ... + log t_n).

    ``t`` is a sequence of ints t_1, t_2, ... (at least N+1 of them) or any
    object with a ``logs`` attribute holding log t_n. Log-factorials are running
    sums of log k.
    """
    if N < 8:
        raise ValueError("xi needs N >= 8")
    logs = getattr(t, "logs", None)
    raw = getattr(t, "values", t)
    if raw is not None and len(raw) < N + 1 and logs is None:
        raise ValueError(f"xi needs t_1..t_{N + 1}, got {len(raw)} values")
    if raw is not None:
        for n, v in enumerate(raw[: N + 1], 1):
            if v < 2:
                raise ValueError(f"xi needs t_n >= 2 for all n, got t_{n} = {v}")
    if logs is None:
        logs = [mp.log(v) for v in raw[: N + 1]]
    elif len(logs) < N + 1:
        raise ValueError(f"xi needs t_1..t_{N + 1}, got {len(logs)} values")
    series = {}
    log_fact = mpf(0)  # log (n+1)!
    denom = mpf(0)
    for n in range(1, N + 1):
        log_fact += mp.log(n + 1)
        denom += logs[n - 1]
        series[n] = (2 * log_fact + logs[n]) / denom
    points = tuple(max(series[n] for n in window(h, 1)) for h in horizons(N))
    return XiEstimate(points[-1], points, classify_trend(points, tol))


@dataclass(frozen=True)
class Equivalence:
    verdict: str  # monotone-equivalent | not-equivalent | inconclusive
    deviation: tuple[mpf, mpf, mpf]  # window max of 1 - psi(n)/M(n) at each horizon


MONOTONE_EQUIVALENT = "monotone-equivalent"
NOT_EQUIVALENT = "not-equivalent"
INCONCLUSIVE = "inconclusive"


@highprec
def equivalence_diagnostic(spec: PsiSpec, N: int, tol: float = DEFAULT_TOL) -> Equivalence:
    """Evidence on whether psi(n) / max_{k<=n} psi(k) tends to 1."""
    if N < 16:
        raise ValueError("equivalence_diagnostic needs N >= 16")
    limit = spec.domain_limit()
    if limit is not None:
        N = min(N, limit)
        if N < 16:
            raise ValueError("equivalence_diagnostic needs at least 16 values")
    dev = {}
    running = mpf(0)
    for n in range(1, N + 1):
        v = spec.value(n)
        running = max(running, v)
        dev[n] = mpf(0) if running == 0 else 1 - v / running
    points = tuple(max(dev[n] for n in window(h, 1)) for h in horizons(N))
    if points[-1] <= tol:
        verdict = MONOTONE_EQUIVALENT
    else:
        cls = classify_trend(points, tol)
        if cls == ZERO:
            verdict = MONOTONE_EQUIVALENT
        elif cls in (FINITE, INFINITE):
            verdict = NOT_EQUIVALENT
        else:
            verdict = INCONCLUSIVE
    return Equivalence(verdict, points)


@dataclass(frozen=True)
class DimensionPrediction:
    set_id: str
    value: mpf | None
    marker: str | None
    provenance: str
    uncertain: bool = False


SET_IDS = ("E_sup", "E_inf", "E", "E_sup_Lambda", "E_inf_Lambda", "E_Lambda", "F_Lambda", "Lambda")


def limit_constant(est: Estimate, tol: float = DEFAULT_TOL, offset: int = 0, log_scale: bool = True) -> mpf:
    """Turn a proxy trend into a limit value in [1, inf].

    ``log_scale``: the estimate holds log X (for A, B, gamma); otherwise it
    holds ``offset + Y`` and the limit is ``offset + lim Y`` (for C).
    """
    vals = [v - offset for v in est.trend] if not log_scale else list(est.trend)
    if max(vals) <= 0:
        return mpf(1) if log_scale else mpf(offset)
    cls = classify_trend(vals, tol) if min(vals) > 0 else UNCERTAIN
    if cls == ZERO:
        lim = mpf(0)
    elif cls == INFINITE:
        lim = mp.inf
    else:
        lim = max(mpf(0), est.value - offset if not log_scale else est.value)
    if log_scale:
        return mp.exp(lim)
    return offset + lim


def _recip(x: mpf) -> mpf:
    return mpf(0) if mp.isinf(x) else 1 / (x + 1)


def log_scale_dimension(alpha) -> mpf:
    """0 for alpha < 1, (alpha - 1) / (2 alpha) otherwise."""
    alpha = mpf(alpha)
    if alpha < 1:
        return mpf(0)
    return (alpha - 1) / (2 * alpha)


@dataclass(frozen=True)
class Regimes:
    log_scale: str  # trend class of psi(n)/log n
    linear: str  # trend class of psi(n)/n
    alpha: mpf | None  # finite limit of psi(n)/log n, when there is one
    A: mpf
    B: mpf
    C: mpf
    gamma: mpf
    equivalence: Equivalence
    uncertain: bool


@highprec
def regimes(spec: PsiSpec, N: int, tol: float = DEFAULT_TOL, report: GrowthReport | None = None) -> Regimes:
    report = report or growth_constants(spec, N)
    log_cls = report.alpha.regime(tol)
    lin_cls = report.linear.regime(tol)
    uncertain = UNCERTAIN in (log_cls, lin_cls)
    if log_cls == UNCERTAIN:
        # pick the side the last step points to
        t = report.alpha.trend
        log_cls = INFINITE if t[2] > t[1] else FINITE
    if lin_cls == UNCERTAIN:
        t = report.linear.trend
        lin_cls = INFINITE if t[2] > t[1] else (ZERO if t[2] < t[1] else FINITE)
    if log_cls in (ZERO, FINITE):
        alpha = mpf(0) if log_cls == ZERO else report.alpha.value
        lin_cls = ZERO
    else:
        alpha = None
    N_eq = N if spec.domain_limit() is None else min(N, spec.domain_limit())
    return Regimes(
        log_scale=log_cls,
        linear=lin_cls,
        alpha=alpha,
        A=limit_constant(report.log_A, tol),
        B=limit_constant(report.log_B, tol),
        C=limit_constant(report.C, tol, offset=1, log_scale=False),
        gamma=limit_constant(report.log_gamma, tol),
        equivalence=equivalence_diagnostic(spec, N_eq, tol),
        uncertain=uncertain,
    )


@highprec
def predict_dimensions(spec: PsiSpec, N: int, tol: float = DEFAULT_TOL) -> list[DimensionPrediction]:
    """Hausdorff dimension of each set, from the finite-horizon regime of psi."""
    if N < 16:
        raise ValueError("predict_dimensions needs N >= 16")
    r = regimes(spec, N, tol)
    u = r.uncertain
    out = []

    if r.linear == ZERO:
        out.append(DimensionPrediction("E_sup", mpf(1), None, "psi(n)/n -> 0: full dimension", u))
    elif r.linear == FINITE:
        out.append(
            DimensionPrediction(
                "E_sup", None, "requires-S(alpha)", "psi(n)/n -> alpha in (0, inf): no closed form", u
            )
        )
    else:
        out.append(DimensionPrediction("E_sup", _recip(r.A), None, "psi(n)/n -> inf: 1/(A+1)", u))
    out.append(DimensionPrediction("E_inf", _recip(r.B), None, "1/(B+1)", u))
    out.append(DimensionPrediction("E", _recip(r.C), None, "1/(C+1)", u))

    empty = r.equivalence.verdict == NOT_EQUIVALENT
    if r.alpha is not None:
        d = log_scale_dimension(r.alpha)
        why = f"psi(n)/log n -> {mp.nstr(r.alpha, 12)}: " + ("0 below 1" if r.alpha < 1 else "(alpha-1)/(2 alpha)")
        out.append(DimensionPrediction("E_sup_Lambda", d, None, why, u))
        out.append(DimensionPrediction("E_inf_Lambda", d, None, why, u))
        e_lambda = d
    else:
        out.append(DimensionPrediction("E_sup_Lambda", _recip(r.A), None, "psi(n)/log n -> inf: 1/(A+1)", u))
        out.append(DimensionPrediction("E_inf_Lambda", _recip(r.B), None, "psi(n)/log n -> inf: 1/(B+1)", u))
        e_lambda = _recip(r.C)
        why = "psi(n)/log n -> inf: 1/(C+1)"
    if empty:
        out.append(
            DimensionPrediction("E_Lambda", None, "empty", "psi is not equivalent to a non-decreasing function", u)
        )
    else:
        out.append(DimensionPrediction("E_Lambda", e_lambda, None, why, u))
    out.append(DimensionPrediction("F_Lambda", _recip(r.gamma), None, "1/(gamma+1)", u))
    out.append(DimensionPrediction("Lambda", mpf(1) / 2, None, "non-decreasing partial quotients", False))
    return out
