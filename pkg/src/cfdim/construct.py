"""Explicit points (finite prefixes of their expansions) inside the fractal sets.

Digits can grow like exp(psi(n)), so every sequence is carried in two forms:
``logs`` (mpf, always present) and ``values`` (exact ints, present only when the
total size fits the bit budget). Exact words are checked with integer
arithmetic; log-only words are checked in the log domain and flagged approximate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from mpmath import iv, mp, mpf

from ._num import ceil_real, floor_pow, floor_real, highprec, to_fraction, to_mpf
from .cfcore import is_nondecreasing
from .errors import BudgetExceeded, PsiDomainError
from .psi.growth import DEFAULT_TOL, classify_trend, equivalence_diagnostic, horizons, window
from .psi.spec import PsiSpec

DEFAULT_BIT_BUDGET = 10**6
RULES = ("low", "mid", "high-avoid")


def _bits_of_logs(logs) -> int:
    return int(sum(max(mpf(0), x) for x in logs) / mp.ln2) + len(logs)


@dataclass(frozen=True)
class ConstructedWord:
    logs: tuple[mpf, ...]
    digits: tuple[int, ...] | None = None

    @property
    def exact(self) -> bool:
        return self.digits is not None

    def __len__(self) -> int:
        return len(self.logs)

    def word(self) -> tuple[int, ...]:
        if self.digits is None:
            raise BudgetExceeded("materialising digits", "more bits", "the bit budget")
        return self.digits

    def is_nondecreasing(self) -> bool:
        if self.digits is not None:
            return is_nondecreasing(self.digits)
        return all(a <= b for a, b in zip(self.logs, self.logs[1:]))

    @classmethod
    def from_digits(cls, digits: Sequence[int]) -> "ConstructedWord":
        return cls(tuple(mp.log(d) for d in digits), tuple(digits))


# -- t sequences ----------------------------------------------------------------


@dataclass(frozen=True)
class TSequence:
    rule: str
    logs: tuple[mpf, ...]
    values: tuple[int, ...] | None
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.values is not None:
            bad = [(n, v) for n, v in enumerate(self.values, 1) if v < 2]
            if bad:
                n, v = bad[0]
                raise ValueError(f"t_n must be >= 2, got t_{n} = {v}")

    def __len__(self) -> int:
        return len(self.logs)

    def is_nondecreasing(self) -> bool:
        if self.values is not None:
            return is_nondecreasing(self.values)
        return all(a <= b for a, b in zip(self.logs, self.logs[1:]))

    @classmethod
    def explicit(cls, values: Sequence[int]) -> "TSequence":
        vals = tuple(int(v) for v in values)
        return cls("explicit", tuple(mp.log(v) for v in vals), vals)

    @classmethod
    @highprec
    def power(cls, alpha, N: int) -> "TSequence":
        """t_n = 2 floor(n ** (alpha - 1)), alpha > 1."""
        a = to_fraction(alpha)
        if a <= 1:
            raise ValueError("power rule needs alpha > 1")
        vals = tuple(2 * floor_pow(n, a - 1) for n in range(1, N + 1))
        return cls("power", tuple(mp.log(v) for v in vals), vals, {"alpha": a})

    @classmethod
    @highprec
    def from_psi(cls, spec: PsiSpec, N: int, bit_budget: int = DEFAULT_BIT_BUDGET) -> "TSequence":
        """t_n = floor(exp(psi(n) + 1))."""
        exps = [spec.value(n) + 1 for n in range(1, N + 1)]
        if _bits_of_logs(exps) > bit_budget:
            t = cls("from_psi", tuple(exps), None, {"psi": str(spec)})
        else:
            vals = tuple(floor_real(lambda n=n: mp.exp(spec.value(n) + 1)) for n in range(1, N + 1))
            t = cls("from_psi", tuple(mp.log(v) for v in vals), vals, {"psi": str(spec)})
        if spec.monotone:
            assert t.is_nondecreasing(), "t_n from a non-decreasing psi must be non-decreasing"
        return t

    @classmethod
    @highprec
    def from_d(cls, spec: PsiSpec, A, eps, N: int, bit_budget: int = DEFAULT_BIT_BUDGET) -> "TSequence":
        """t_n = 2 floor(d_{n+1}) from the d-sequence of psi."""
        d = d_sequence(spec, A, eps, N + 1)
        logs = d.log_d[1 : N + 1]
        if _bits_of_logs(logs) > bit_budget:
            t = cls("from_d", tuple(mp.ln2 + x for x in logs), None, {"psi": str(spec), "A": A, "eps": eps})
        else:
            bits = int(max(logs) / mp.ln2) + 80
            with mp.workprec(max(mp.prec, bits)):
                wide = d_sequence(spec, A, eps, N + 1, check=False)
                vals = tuple(2 * floor_real(lambda x=x: mp.exp(x)) for x in wide.log_d[1 : N + 1])
            t = cls("from_d", tuple(mp.log(v) for v in vals), vals, {"psi": str(spec), "A": A, "eps": eps})
        assert t.is_nondecreasing(), "t_n = 2 floor(d_{n+1}) must be non-decreasing"
        return t


# -- points of E({t_n}) ---------------------------------------------------------------


@highprec
def build_point(t: TSequence, N: int, rule: str = "low", bit_budget: int = DEFAULT_BIT_BUDGET) -> ConstructedWord:
    """Digits with n t_n <= a_n < (n+1) t_n for n = 1..N.

    ``low`` takes a_n = n t_n, ``mid`` n t_n + floor(t_n/2), ``high-avoid`` (n+1) t_n - 1.
    """
    if rule not in RULES:
        raise ValueError(f"rule must be one of {RULES}")
    if len(t) < N:
        raise ValueError(f"t has {len(t)} terms, need {N}")
    if t.values is not None:
        digits = []
        for n, tn in enumerate(t.values[:N], 1):
            if rule == "low":
                a = n * tn
            elif rule == "mid":
                a = n * tn + tn // 2
            else:
                a = (n + 1) * tn - 1
            digits.append(a)
        if sum(a.bit_length() for a in digits) <= bit_budget:
            if rule == "low" and t.is_nondecreasing():
                # a_{n+1} >= (n+1) t_{n+1} >= (n+1) t_n > n t_n = a_n
                assert all(x < y for x, y in zip(digits, digits[1:]))
            return ConstructedWord.from_digits(digits)
    logs = []
    for n, lt in enumerate(t.logs[:N], 1):
        if rule == "low":
            logs.append(mp.log(n) + lt)
        elif rule == "mid":
            logs.append(mp.log(n + mpf(1) / 2) + lt)
        else:
            logs.append(mp.log(n + 1) + lt + mp.log1p(-1 / ((n + 1) * mp.exp(lt))))
    return ConstructedWord(tuple(logs), None)


@dataclass(frozen=True)
class MembershipCheck:
    ok: bool
    exact: bool
    first_failure: int | None


@highprec
def check_point(w: ConstructedWord, t: TSequence) -> MembershipCheck:
    """Re-check n t_n <= a_n < (n+1) t_n for every digit of ``w``."""
    if w.exact and t.values is not None:
        for n, (a, tn) in enumerate(zip(w.digits, t.values), 1):
            if not (n * tn <= a < (n + 1) * tn):
                return MembershipCheck(False, True, n)
        return MembershipCheck(True, True, None)
    for n, (la, lt) in enumerate(zip(w.logs, t.logs), 1):
        if not (mp.log(n) + lt <= la <= mp.log(n + 1) + lt):
            return MembershipCheck(False, False, n)
    return MembershipCheck(True, False, None)


# -- theta and the d-sequence ------------------------------------------------------


@dataclass(frozen=True)
class Theta:
    value: mpf
    exact: bool  # False: only a horizon-N upper bound on the infinite minimum


@highprec
def theta(spec: PsiSpec, n: int, N: int) -> Theta:
    """min over n <= k <= N of psi(k), exact when psi is non-decreasing there."""
    if N < n:
        raise ValueError("theta needs N >= n")
    if spec.monotone:
        return Theta(spec.value(n), True)
    vals = [spec.value(k) for k in range(n, N + 1)]
    if all(a <= b for a, b in zip(vals, vals[1:])):
        return Theta(vals[0], True)
    return Theta(min(vals), False)


def _suffix_minima(spec: PsiSpec, N: int) -> list[mpf]:
    vals = [spec.value(k) for k in range(1, N + 1)]
    if spec.monotone:
        return vals
    out = vals[:]
    for i in range(N - 2, -1, -1):
        out[i] = min(out[i], out[i + 1])
    return out


@dataclass(frozen=True)
class DSequence:
    epsilon: mpf
    A: mpf
    theta: tuple[mpf, ...]
    log_d: tuple[mpf, ...]  # log d_1 .. log d_N
    product_branch: tuple[bool, ...]  # True where the product term was the minimum
    monotone: bool  # d_{n+1} >= d_n for all n >= 2
    first_monotone_failure: int | None
    log_d_over_log_n: tuple[mpf, mpf, mpf]  # window min at N//4, N//2, N
    growth_regime: str
    prefix_ratio_max: mpf  # tail max of log d_{n+2} / (log d_2 + ... + log d_{n+1})
    prefix_ratio_ok: bool
    cn_trend: tuple[mpf, mpf, mpf]  # window max of log d_n / psi(n)
    theta_exact: bool


@highprec
def d_sequence(spec: PsiSpec, A, epsilon, N: int, tol: float = 1e-9, check: bool = True) -> DSequence:
    """log d_1 = theta(1); log d_n = min(theta(n), (A - 1 + eps) * sum_{k<n} log d_k)."""
    A_ = to_mpf(to_fraction(A)) if not isinstance(A, mpf) else A
    eps = to_mpf(to_fraction(epsilon)) if not isinstance(epsilon, mpf) else epsilon
    if A_ < 1:
        raise ValueError("d_sequence needs A >= 1")
    if eps <= 0:
        raise ValueError("d_sequence needs epsilon > 0")
    if N < 3:
        raise ValueError("d_sequence needs N >= 3")
    th = _suffix_minima(spec, N)
    theta_exact = spec.monotone or all(a <= b for a, b in zip(th, [spec.value(k) for k in range(1, N + 1)]))
    c = A_ - 1 + eps
    log_d = [th[0]]
    branch = [False]
    total = th[0]
    for n in range(2, N + 1):
        prod = c * total
        if prod < th[n - 1]:
            log_d.append(prod)
            branch.append(True)
        else:
            log_d.append(th[n - 1])
            branch.append(False)
        total += log_d[-1]

    failure = next((n for n in range(2, N) if log_d[n] < log_d[n - 1]), None)
    if not check:
        zero3 = (mpf(0),) * 3
        return DSequence(eps, A_, tuple(th), tuple(log_d), tuple(branch), failure is None, failure,
                         zero3, "", mpf(0), True, zero3, theta_exact)

    ratio = {n: log_d[n - 1] / mp.log(n) for n in range(2, N + 1)}
    growth = tuple(min(ratio[n] for n in window(max(h, 2))) for h in horizons(N))

    # prefix[n] = log d_2 + ... + log d_{n+1}
    prefix_ratios = []
    running = mpf(0)
    prefix = {}
    for n in range(1, N):
        running += log_d[n]
        prefix[n] = running
    for n in window(N, 1):
        if n + 2 <= N and prefix[n] > 0:
            prefix_ratios.append(log_d[n + 1] / prefix[n])
    prefix_ratio_max = max(prefix_ratios) if prefix_ratios else mpf(0)

    cn = {}
    for n in range(1, N + 1):
        p = spec.value(n)
        if p > 0:
            cn[n] = log_d[n - 1] / p
    cn_trend = tuple(max((cn[n] for n in window(max(h, 2), 1) if n in cn), default=mpf(0)) for h in horizons(N))
    return DSequence(
        epsilon=eps,
        A=A_,
        theta=tuple(th),
        log_d=tuple(log_d),
        product_branch=tuple(branch),
        monotone=failure is None,
        first_monotone_failure=failure,
        log_d_over_log_n=growth,
        growth_regime=classify_trend(growth),
        prefix_ratio_max=prefix_ratio_max,
        prefix_ratio_ok=prefix_ratio_max <= c + tol,
        cn_trend=cn_trend,
        theta_exact=theta_exact,
    )


# -- the monotone point x~ -------------------------------------------------------------


@dataclass(frozen=True)
class XTilde:
    word: ConstructedWord
    envelope: tuple[mpf, ...]  # running maximum of psi
    ratios: tuple[mpf | None, ...]  # log a_n / psi(n)
    equivalence: str  # verdict, or "unchecked" below 16 terms


@highprec
def build_xtilde(spec: PsiSpec, N: int, bit_budget: int = DEFAULT_BIT_BUDGET, tol: float = DEFAULT_TOL) -> XTilde:
    """a_n = floor(exp(psi~(n))) with psi~ the running maximum of psi."""
    verdict = "unchecked"
    if N >= 16:
        verdict = equivalence_diagnostic(spec, N, tol).verdict
        if verdict == "not-equivalent":
            raise PsiDomainError(
                "psi is not equivalent to a non-decreasing function; the target set is empty"
            )
    vals = [spec.value(n) for n in range(1, N + 1)]
    env, running = [], mpf(0)
    for v in vals:
        running = max(running, v)
        env.append(running)
    if _bits_of_logs(env) > bit_budget:
        logs = []
        for x in env:
            # log floor(e^x) = x + log(1 - frac(e^x) e^-x); below the budget only x is kept
            logs.append(x)
        word = ConstructedWord(tuple(logs), None)
    else:
        # psi~(n) is the value of psi at the argmax, so re-evaluate that term wider
        argmax, best = [], (0, mpf(-1))
        for n, v in enumerate(vals, 1):
            if v > best[1]:
                best = (n, v)
            argmax.append(best[0])
        digits = tuple(floor_real(lambda m=m: mp.exp(spec.value(m))) for m in argmax)
        word = ConstructedWord.from_digits(digits)
    ratios = tuple((word.logs[i] / v) if v > 0 else None for i, v in enumerate(vals))
    return XTilde(word, tuple(env), ratios, verdict)


# -- points of F(Lambda, a, b) ---------------------------------------------------------


@highprec
def build_F_point(a, b, N: int, bit_budget: int = DEFAULT_BIT_BUDGET) -> ConstructedWord:
    """a_n = ceil(a ** (b ** n)), the smallest digits allowed in F(Lambda, a, b)."""
    a_, b_ = to_fraction(a), to_fraction(b)
    if a_ <= 1 or b_ <= 1:
        raise ValueError("build_F_point needs a > 1 and b > 1")
    bits = mp.log(to_mpf(a_), 2) * sum(to_mpf(b_) ** n for n in range(1, N + 1))
    if bits > bit_budget:
        raise BudgetExceeded(f"F-set point with a={a}, b={b}, N={N}", int(bits), bit_budget)
    digits = []
    for n in range(1, N + 1):
        e = b_**n
        if a_.denominator == 1 and e.denominator == 1:
            digits.append(a_.numerator ** e.numerator)
        else:
            digits.append(ceil_real(lambda e=e: mp.power(to_mpf(a_), to_mpf(e))))
    return ConstructedWord.from_digits(digits)


def check_F_point(w: ConstructedWord, a, b) -> bool:
    """a_n >= a ** (b ** n) for every digit, compared in logs with outward rounding."""
    a_, b_ = to_fraction(a), to_fraction(b)
    saved = iv.prec
    iv.prec = max(mp.prec, 128)
    try:
        log_a = iv.log(iv.mpf(a_.numerator)) - iv.log(iv.mpf(a_.denominator))
        for n, d in enumerate(w.word(), 1):
            e = b_**n
            if a_.denominator == 1 and e.denominator == 1:
                if d < a_.numerator ** e.numerator:
                    return False
                continue
            lhs = iv.log(iv.mpf(d))
            rhs = log_a * (iv.mpf(e.numerator) / iv.mpf(e.denominator))
            if lhs.a >= rhs.b:
                continue
            if lhs.b < rhs.a:
                return False
            # overlapping intervals: settle exactly, d ** q >= a ** p with e = p/q
            if d ** e.denominator * a_.denominator**e.numerator < a_.numerator**e.numerator:
                return False
    finally:
        iv.prec = saved
    return True


# -- membership statistics -------------------------------------------------------------


@dataclass(frozen=True)
class MembershipStats:
    nondecreasing: bool
    ratios: tuple[mpf | None, ...]  # log a_n / psi(n); None where psi(n) = 0
    tail_min: mpf | None
    tail_max: mpf | None


@highprec
def membership_stats(w, spec: PsiSpec) -> MembershipStats:
    """is_nondecreasing and r_n = log a_n / psi(n) with tail-window min/max."""
    if not isinstance(w, ConstructedWord):
        w = ConstructedWord.from_digits(tuple(w))
    N = len(w)
    ratios = []
    for n in range(1, N + 1):
        p = spec.value(n)
        ratios.append(w.logs[n - 1] / p if p > 0 else None)
    tail = [ratios[n - 1] for n in range(max(1, N // 2), N + 1) if ratios[n - 1] is not None]
    return MembershipStats(
        w.is_nondecreasing(),
        tuple(ratios),
        min(tail) if tail else None,
        max(tail) if tail else None,
    )


# -- JSON export -------------------------------------------------------------------------


@highprec
def word_to_json(w: ConstructedWord) -> dict:
    """Exact words as decimal digit strings; others as runs of mantissa * 2**exp2.

    Approximate digits are rounded to 17 significant mantissa digits and equal
    neighbours are merged into one run with a count.
    """
    if w.exact:
        return {"exact": True, "length": str(len(w)), "digits": [str(d) for d in w.digits]}
    runs: list[dict] = []
    for x in w.logs:
        l2 = x / mp.ln2
        e = int(mp.floor(l2))
        m = mp.nstr(mp.power(2, l2 - e), 17, strip_zeros=False)
        if runs and runs[-1]["mantissa"] == m and runs[-1]["exp2"] == str(e):
            runs[-1]["count"] = str(int(runs[-1]["count"]) + 1)
        else:
            runs.append({"mantissa": m, "exp2": str(e), "count": "1"})
    return {"exact": False, "length": str(len(w)), "runs": runs}
