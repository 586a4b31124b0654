from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from cfdim.enumeration import (
    FamilySpec,
    bound_A_k,
    count,
    count_D,
    enumerate_family,
    log_bound_C_k,
    stirling_bounds,
)
from cfdim.errors import BudgetExceeded


def test_count_examples():
    assert count_D(5, 5) == 126
    assert count_D(1, 7) == 1
    assert count_D(3, 1) == 3


def test_enumerate_examples():
    assert list(enumerate_family(FamilySpec.D(2, 2))) == [(1, 1), (1, 2), (2, 2)]
    assert list(enumerate_family(FamilySpec.C(1, 0, k=2))) == [(1, 1), (1, 2), (2, 2)]
    a = FamilySpec.A(1, 1, "0.01", k=3)
    assert a.lower_bounds() == (1, 2, 3)
    assert a.ceiling() == 3
    assert list(enumerate_family(a)) == [(1, 2, 3), (1, 3, 3), (2, 2, 3), (2, 3, 3), (3, 3, 3)]


def test_bounded_family_is_all_words():
    fam = FamilySpec.bounded([2, 1], k=3)
    words = list(enumerate_family(fam))
    assert len(words) == 8 == count(fam)
    assert (2, 1, 1) in words
    assert words == sorted(words)


def test_parse_round_trip():
    for text in ["D:l=5,n=5", "A:alpha1=2,alpha2=2,eps=0.05,k=6", "C:alpha=1,eps=0.2,k=4", "bounded:digits=1,2,k=12"]:
        fam = FamilySpec.parse(text)
        assert FamilySpec.parse(str(fam)) == fam


@pytest.mark.parametrize(
    "text", ["D:l=0,n=3", "A:alpha1=1,alpha2=0.5,eps=0", "A:alpha1=1,alpha2=1,eps=1", "X:k=3", "bounded:digits=0"]
)
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        FamilySpec.parse(text)


def test_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_family(FamilySpec.D(20, 20), budget=1000)


@given(st.integers(2, 60), st.integers(2, 60))
def test_pascal(ell, n):
    assert count_D(ell, n) == count_D(ell - 1, n) + count_D(ell, n - 1)


@given(st.integers(1, 6), st.integers(1, 6))
def test_enumeration_is_sorted_unique_and_counted(ell, n):
    words = list(enumerate_family(FamilySpec.D(ell, n)))
    assert words == sorted(set(words))
    assert len(words) == count_D(ell, n) == math.comb(n + ell - 1, n)


@given(
    st.sampled_from(["1", "1.5", "2"]),
    st.sampled_from(["0", "0.5"]),
    st.sampled_from(["0.01", "0.1"]),
    st.integers(1, 5),
)
def test_A_family_matches_brute_force(a1, extra, eps, k):
    from fractions import Fraction

    a2 = Fraction(a1) + Fraction(extra)
    fam = FamilySpec.A(a1, a2, eps, k=k)
    hi = fam.ceiling()
    if hi**k > 200_000:
        return
    expected = oracles.brute_family(k, fam.lower_bounds(), hi)
    assert list(enumerate_family(fam)) == expected
    assert count(fam) == len(expected)


@given(st.integers(1, 5))
def test_slices_partition_the_family(k):
    fam = FamilySpec.C(1, "0.3", k=max(k, 2))
    whole = list(enumerate_family(fam))
    parts = []
    for d in range(1, fam.ceiling() + 1):
        parts.extend(enumerate_family(fam, first_digit=d))
    assert parts == whole


def test_exact_rational_powers():
    # 4**1.5 = 8 exactly: the ceiling must not become 7
    assert FamilySpec.C("0.5", 1, k=4).ceiling() == 8
    assert FamilySpec.C(2, "0.05", k=12).ceiling() == 163


def test_bounds_values():
    assert bound_A_k(1, 1, 0) >= 1
    assert log_bound_C_k(4, 1, "0.2") > 0
    lo, hi = stirling_bounds(10)
    assert lo <= math.factorial(10) <= hi
    with pytest.raises(ValueError):
        log_bound_C_k(1, 1, 0)
