from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from cfdim.construct import (
    RULES,
    ConstructedWord,
    TSequence,
    build_F_point,
    build_point,
    build_xtilde,
    check_F_point,
    check_point,
    d_sequence,
    membership_stats,
    theta,
    word_to_json,
)
from cfdim.errors import BudgetExceeded, PsiDomainError
from cfdim.psi import parse_psi, table


@pytest.fixture(autouse=True)
def _working_precision():
    with mp.workprec(128):
        yield


# -- theta and d_n ------------------------------------------------------------------------------


def test_theta_examples():
    th = theta(parse_psi("alog:2"), 5, 50)
    assert th.exact and th.value == 2 * mp.log(5)
    th = theta(parse_psi("exp:3"), 4, 50)
    assert th.exact and th.value == 81
    th = theta(table([5, 3, 8, 4, 9]), 1, 5)
    assert not th.exact and th.value == 3
    # a table that happens to be non-decreasing on the window is exact
    assert theta(table([5, 3, 8, 9, 9]), 3, 5).exact


def test_d_sequence_recursion_by_hand():
    d = d_sequence(parse_psi("exp:3"), 3, "0.1", 6)
    c = mpf(3) - 1 + mpf("0.1")
    expected = [mpf(3)]
    for n in range(2, 7):
        expected.append(min(mpf(3) ** n, c * sum(expected)))
    assert all(mp.almosteq(a, b) for a, b in zip(d.log_d, expected))
    assert d.product_branch == (False, True, True, True, True, True)


def test_d_sequence_power_two():
    d = d_sequence(parse_psi("pow:2"), 1, "0.5", 400)
    assert d.monotone
    # log d_n grows like 1.5^n until it catches n^2, after which d_n = exp(n^2)
    assert d.log_d[-1] == 400**2
    assert d.cn_trend[-1] == 1
    assert d.growth_regime == "infinite"


def test_d_sequence_identity_table():
    d = d_sequence(table(range(1, 201)), 1, "0.5", 200)
    assert d.log_d[0] == 1
    assert d.monotone
    assert [float(x) for x in d.cn_trend][-1] == pytest.approx(1.0)


@pytest.mark.parametrize("A,eps", [("0.5", "0.1"), ("1", "0"), ("2", "-0.1")])
def test_d_sequence_rejects(A, eps):
    with pytest.raises(ValueError):
        d_sequence(parse_psi("exp:2"), A, eps, 10)


def test_d_sequence_needs_three_terms():
    with pytest.raises(ValueError):
        d_sequence(parse_psi("exp:2"), 2, "0.1", 2)


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(["exp:2", "exp:3", "pow:2", "pow:1.5", "n^2 + n", "alog:5", "n * log(n + 1)"]),
    st.sampled_from(["1", "1.5", "2", "3"]),
    st.sampled_from(["0.01", "0.1", "0.5"]),
    st.integers(3, 80),
)
def test_d_sequence_invariants(psi, A, eps, N):
    d = d_sequence(parse_psi(psi), A, eps, N)
    c = mpf(A) - 1 + mpf(eps)
    # non-decreasing from n = 2 on
    assert d.monotone, d.first_monotone_failure
    total = mpf(0)
    for n, (x, prod) in enumerate(zip(d.log_d, d.product_branch), 1):
        if n >= 2:
            # the recursion's bound, with the product over all earlier d_k
            assert x <= c * total * (1 + mpf(2) ** -100)
            if prod:
                assert mp.almosteq(x, c * total)
        total += x


# -- t sequences and E({t_n}) points -----------------------------------------------------------


def test_t_sequences():
    assert TSequence.power(3, 4).values == (2, 8, 18, 32)
    assert TSequence.power("2.5", 4).values == (2, 4, 10, 16)  # 2 floor(n^1.5)
    with pytest.raises(ValueError):
        TSequence.power(1, 4)
    with pytest.raises(ValueError):
        TSequence.explicit([2, 1, 3])
    t = TSequence.from_psi(parse_psi("alog:2"), 6)
    assert t.values == tuple(math.floor(math.e * n * n) for n in range(1, 7))
    t = TSequence.from_d(parse_psi("exp:3"), 3, "0.1", 8)
    assert t.is_nondecreasing() and t.values[0] == 2 * math.floor(math.exp(6.3))


def test_t_sequence_log_only_over_budget():
    t = TSequence.from_psi(parse_psi("exp:2"), 30, bit_budget=10_000)
    assert t.values is None
    assert mp.almosteq(t.logs[4], 2**5 + 1)


def test_build_point_examples():
    assert build_point(TSequence.explicit([2] * 4), 4).digits == (2, 4, 6, 8)
    assert build_point(TSequence.power(3, 3), 3).digits == (2, 16, 54)
    assert build_point(TSequence.explicit([4] * 3), 3, "mid").digits == (6, 10, 14)
    assert build_point(TSequence.explicit([4] * 3), 3, "high-avoid").digits == (7, 11, 15)
    with pytest.raises(ValueError):
        build_point(TSequence.explicit([2] * 3), 4)
    with pytest.raises(ValueError):
        build_point(TSequence.explicit([2] * 3), 3, "wild")


@given(st.lists(st.integers(2, 10**9), min_size=1, max_size=40), st.sampled_from(RULES))
def test_build_point_membership(values, rule):
    t = TSequence.explicit(sorted(values))
    w = build_point(t, len(values), rule)
    for n, (a, tn) in enumerate(zip(w.digits, t.values), 1):
        assert n * tn <= a < (n + 1) * tn
    if rule == "low":
        assert all(x < y for x, y in zip(w.digits, w.digits[1:]))


def test_check_point_detects_failure():
    t = TSequence.explicit([2, 2, 2])
    assert not check_point(ConstructedWord.from_digits((2, 4, 8)), t).ok
    assert check_point(ConstructedWord.from_digits((3, 5, 7)), t).ok


# -- x~ ---------------------------------------------------------------------------------------


def test_xtilde_examples():
    x = build_xtilde(parse_psi("n"), 50)
    assert x.word.digits[:4] == (2, 7, 20, 54)
    assert x.word.digits == tuple(int(mp.floor(mp.exp(n))) for n in range(1, 51))
    x = build_xtilde(parse_psi("alog:2"), 40)
    assert x.word.digits == tuple(n * n for n in range(1, 41))
    assert all(r == 1 for r in x.ratios[1:])
    x = build_xtilde(table([1, 3, 2, 5]), 4)
    assert x.envelope == (1, 3, 3, 5)
    assert x.word.digits == (2, 20, 20, 148)


def test_xtilde_rejects_non_equivalent():
    alternating = table([2**n if n % 2 == 0 else 2 ** ((n - 1) // 2) for n in range(1, 65)])
    with pytest.raises(PsiDomainError):
        build_xtilde(alternating, 64)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 400), min_size=16, max_size=40))
def test_xtilde_floor_error_bound(values):
    spec = table([v / 10 for v in values])
    try:
        x = build_xtilde(spec, len(values))
    except PsiDomainError:
        return
    assert x.word.is_nondecreasing()
    for la, env in zip(x.word.logs, x.envelope):
        if env >= 1:
            assert abs(la - env) <= -mp.log(1 - mp.exp(-env))


# -- F points ------------------------------------------------------------------------------------


def test_F_point_examples():
    assert build_F_point(2, 2, 4).digits == (4, 16, 256, 65536)
    assert build_F_point(2, "1.5", 3).digits == (3, 5, 11)
    w = build_F_point("1.5", "1.7", 8)
    assert check_F_point(w, "1.5", "1.7")
    assert w.is_nondecreasing()


def test_F_point_recheck_catches_small_digits():
    assert not check_F_point(ConstructedWord.from_digits((3, 4, 11)), 2, "1.5")
    assert not check_F_point(ConstructedWord.from_digits((4, 16, 255)), 2, 2)


def test_F_point_budget():
    with pytest.raises(BudgetExceeded):
        build_F_point(2, 2, 30, bit_budget=10**6)


# -- membership statistics ---------------------------------------------------------------------


def test_membership_stats_examples():
    st_ = membership_stats(build_xtilde(parse_psi("n"), 50).word, parse_psi("n"))
    assert st_.nondecreasing
    assert abs(st_.tail_min - 1) <= 1e-6 and abs(st_.tail_max - 1) <= 1e-6
    assert not membership_stats([1, 1, 2, 1], parse_psi("alog:1")).nondecreasing
    st_ = membership_stats([2, 4, 6, 8], parse_psi("alog:1"))
    assert st_.ratios[0] is None
    assert [float(r) for r in st_.ratios[1:]] == pytest.approx([math.log(2 * n) / math.log(n) for n in (2, 3, 4)])


def test_word_json():
    assert word_to_json(ConstructedWord.from_digits((3, 5))) == {"exact": True, "length": "2", "digits": ["3", "5"]}
    w = ConstructedWord((mp.log(2**70),) * 3 + (mp.log(3 * 2**80),), None)
    doc = word_to_json(w)
    assert doc["exact"] is False and doc["length"] == "4"
    assert doc["runs"][0] == {"mantissa": "1.0000000000000000", "exp2": "70", "count": "3"}
    assert doc["runs"][1]["exp2"] == "81" and doc["runs"][1]["mantissa"].startswith("1.5")
