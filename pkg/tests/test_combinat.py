from fractions import Fraction
from itertools import combinations
from math import comb

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freeparticles.combinat import (
    SetPartition,
    bell,
    catalan,
    enumerate_nc_partitions,
    enumerate_set_partitions,
    falling_factorial,
    is_noncrossing,
    k_coefficient,
    refines,
    stirling2,
    touchard,
)
from freeparticles.errors import ResourceLimitError


# --- independent oracles ---------------------------------------------------

def partitions_by_insertion(n):
    """Insert element m into each existing block or a new block."""
    parts = [[]]
    for m in range(1, n + 1):
        nxt = []
        for p in parts:
            for i in range(len(p)):
                nxt.append([b + [m] if j == i else b for j, b in enumerate(p)])
            nxt.append(p + [[m]])
        parts = nxt
    return {SetPartition.from_blocks(p) for p in parts}


def crossing_by_pairs(p):
    """Quadratic scan over block pairs for x1 < y1 < x2 < y2."""
    for bi, bj in combinations(p.blocks, 2):
        for a, b in ((bi, bj), (bj, bi)):
            for x1, x2 in combinations(a, 2):
                for y1, y2 in combinations(b, 2):
                    if x1 < y1 < x2 < y2:
                        return True
    return False


def bell_by_stirling(n):
    return sum(stirling_by_inclusion_exclusion(n, j) for j in range(n + 1))


def stirling_by_inclusion_exclusion(i, j):
    from math import factorial
    return sum((-1) ** t * comb(j, t) * (j - t) ** i for t in range(j + 1)) // factorial(j)


BELL = [1, 1, 2, 5, 15, 52, 203, 877, 4140]
CATALAN = [1, 1, 2, 5, 14, 42, 132, 429, 1430]


# --- enumeration -----------------------------------------------------------

def test_n1_single_partition():
    assert enumerate_set_partitions(1) == (SetPartition(1, ((1,),)),)


@pytest.mark.parametrize("n,count", [(3, 5), (4, 15)])
def test_set_partition_counts(n, count):
    assert len(enumerate_set_partitions(n)) == count


@pytest.mark.parametrize("n", range(1, 8))
def test_enumeration_matches_insertion_oracle(n):
    parts = enumerate_set_partitions(n)
    assert len(set(parts)) == len(parts)
    assert set(parts) == partitions_by_insertion(n)


def test_partition_cap():
    with pytest.raises(ResourceLimitError):
        enumerate_set_partitions(11)
    with pytest.raises(ResourceLimitError):
        enumerate_nc_partitions(5, cap=4)
    assert len(enumerate_set_partitions(10)) == 115975


def test_canonical_form_enforced():
    with pytest.raises(ValueError):
        SetPartition(3, ((2, 3), (1,)))
    with pytest.raises(ValueError):
        SetPartition(3, ((1, 2),))
    assert SetPartition.from_blocks([[3, 2], [1]]) == SetPartition(3, ((1,), (2, 3)))


def test_crossing_examples():
    assert not is_noncrossing(SetPartition.from_blocks([[1, 3], [2, 4]]))
    assert is_noncrossing(SetPartition.from_blocks([[1, 4], [2, 3]]))
    assert all(is_noncrossing(p) for p in enumerate_set_partitions(3))


@pytest.mark.parametrize("n", range(1, 9))
def test_noncrossing_matches_pair_scan(n):
    for p in enumerate_set_partitions(n):
        assert is_noncrossing(p) == (not crossing_by_pairs(p))


@pytest.mark.parametrize("n,count", [(3, 5), (4, 14), (6, 132)])
def test_nc_counts(n, count):
    assert len(enumerate_nc_partitions(n)) == count


def test_nc_4_misses_only_the_crossing():
    missing = set(enumerate_set_partitions(4)) - set(enumerate_nc_partitions(4))
    assert missing == {SetPartition.from_blocks([[1, 3], [2, 4]])}


@pytest.mark.parametrize("n", range(1, 9))
def test_counts_against_closed_forms(n):
    assert len(enumerate_set_partitions(n)) == bell(n) == BELL[n] == bell_by_stirling(n)
    assert len(enumerate_nc_partitions(n)) == catalan(n) == CATALAN[n] == comb(2 * n, n) // (n + 1)
    assert set(enumerate_nc_partitions(n)) <= set(enumerate_set_partitions(n))


def test_bell_catalan_small():
    assert catalan(0) == 1 and catalan(4) == 14 and bell(4) == 15


# --- refinement order ------------------------------------------------------

def test_refines_examples():
    p4 = enumerate_set_partitions(4)
    finest = SetPartition.from_blocks([[1], [2], [3], [4]])
    assert all(refines(finest, q) for q in p4)
    assert all(refines(q, q) for q in p4)
    assert not refines(SetPartition.from_blocks([[1, 2], [3]]), SetPartition.from_blocks([[1], [2, 3]]))
    with pytest.raises(ValueError):
        refines(finest, SetPartition.from_blocks([[1, 2, 3]]))


partitions5 = st.sampled_from(enumerate_set_partitions(5))


@given(partitions5, partitions5, partitions5)
@settings(max_examples=300, deadline=None)
def test_refines_is_partial_order(p, q, r):
    if refines(p, q) and refines(q, p):
        assert p == q
    if refines(p, q) and refines(q, r):
        assert refines(p, r)


# --- Stirling, falling factorials, K ---------------------------------------

def test_stirling_values():
    assert all(stirling2(i, 1) == 1 for i in range(1, 10))
    assert stirling2(4, 2) == 7
    assert stirling2(5, 3) == 25
    assert stirling2(3, 5) == 0 and stirling2(3, 0) == 0 and stirling2(0, 0) == 1


def test_stirling_4_2_by_enumeration():
    assert sum(1 for p in enumerate_set_partitions(4) if len(p) == 2) == 7


@pytest.mark.parametrize("i", range(0, 9))
def test_stirling_matches_inclusion_exclusion(i):
    for j in range(0, i + 1):
        assert stirling2(i, j) == stirling_by_inclusion_exclusion(i, j)


def test_falling_factorial():
    assert falling_factorial(7, 0) == 1
    assert falling_factorial(5, 3) == 60
    assert falling_factorial(2, 4) == 0


def test_power_as_falling_factorials():
    for m in range(1, 9):
        for N in range(1, 11):
            assert N**m == sum(stirling2(m, j) * falling_factorial(N, j) for j in range(1, m + 1))


def test_k_coefficient():
    assert all(k_coefficient(N, 2, 1) == N - 1 for N in range(1, 12))
    assert k_coefficient(3, 4, 2) == 12
    for N in range(2, 11):
        for m in range(1, 7):
            assert k_coefficient(N, m + 1, m) == falling_factorial(N - 1, m)
    with pytest.raises(ValueError):
        k_coefficient(3, 2, 2)


def test_k_coefficient_recursion():
    # K(N,i,m) - (N-1)_m S(i,m+1) = K(N,i,m+1)
    for N in range(2, 8):
        for i in range(3, 8):
            for m in range(1, i - 1):
                assert k_coefficient(N, i, m) - falling_factorial(N - 1, m) * stirling2(i, m + 1) \
                    == k_coefficient(N, i, m + 1)


# --- Touchard --------------------------------------------------------------

def test_touchard_small():
    a = Fraction(3, 7)
    assert touchard(0, a) == 1
    assert touchard(1, a) == a
    assert touchard(2, a) == a**2 + a
    assert touchard(3, 1) == 5


@pytest.mark.parametrize("i", range(0, 7))
@pytest.mark.parametrize("alpha", [Fraction(1, 2), Fraction(3), Fraction(10)])
def test_touchard_matches_poisson_series(i, alpha):
    mpmath.mp.dps = 40
    a = mpmath.mpf(alpha.numerator) / alpha.denominator
    series = mpmath.exp(-a) * mpmath.nsum(lambda N: N**i * a**N / mpmath.factorial(N), [0, mpmath.inf])
    assert abs(series - mpmath.mpf(touchard(i, alpha).numerator) / touchard(i, alpha).denominator) < 1e-25
