import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freeparticles.cumulants import (
    MomentFunctional,
    centered_cumulant,
    classical_cumulant,
    classical_moment_from_cumulants,
    free_cumulant,
    moments_from_free_cumulants,
)
from freeparticles.errors import ResourceLimitError

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=20)


def table_functional(values):
    return lambda w: values[tuple(w)]


def random_table(rng, letters, kmax):
    from itertools import product
    table = {}
    for k in range(1, kmax + 1):
        for w in product(letters, repeat=k):
            table[w] = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    return table


def bernoulli(p):
    # a projection with trace p: every moment equals p
    return lambda w: p


def test_bernoulli_hand_values():
    mf = bernoulli(Fraction(1, 10))
    assert free_cumulant(mf, "a") == Fraction(1, 10)
    assert free_cumulant(mf, "aa") == Fraction(9, 100)
    assert free_cumulant(mf, "aaa") == Fraction(9, 125)


def test_semicircle_cumulants():
    # Catalan moments on even words: R2 = 1, all others vanish
    from freeparticles.combinat import catalan

    def mf(w):
        return Fraction(catalan(len(w) // 2)) if len(w) % 2 == 0 else Fraction(0)

    assert [free_cumulant(mf, "a" * k) for k in range(1, 8)] == [0, 1, 0, 0, 0, 0, 0]


def test_classical_gaussian_and_poisson():
    # Gaussian: moments are double factorials
    gauss = {1: 0, 2: 1, 3: 0, 4: 3, 5: 0, 6: 15}
    assert [classical_cumulant(lambda w: gauss[len(w)], "a" * k) for k in range(1, 7)] == [0, 1, 0, 0, 0, 0]
    # Poisson(1): moments are Bell numbers, every cumulant is 1
    bells = {1: 1, 2: 2, 3: 5, 4: 15, 5: 52}
    assert [classical_cumulant(lambda w: bells[len(w)], "a" * k) for k in range(1, 6)] == [1] * 5


@pytest.mark.parametrize("seed", range(5))
def test_roundtrip_on_random_tables(seed):
    rng = random.Random(seed)
    table = random_table(rng, "xy", 5)
    mf = table_functional(table)
    memo = {}
    rc = lambda w: free_cumulant(mf, w, memo=memo)
    cmemo = {}
    cc = lambda w: classical_cumulant(mf, w, memo=cmemo)
    for w, m in table.items():
        assert moments_from_free_cumulants(rc, w) == m
        assert classical_moment_from_cumulants(cc, w) == m


@given(st.lists(rationals, min_size=2, max_size=2), rationals, rationals)
@settings(max_examples=50, deadline=None)
def test_multilinearity(vals, a, b):
    """Cumulants of linear combinations expand multilinearly."""
    def mf(w):
        # any fixed evaluator will do; cumulants are linear in the moment table
        out = Fraction(1)
        for letter in w:
            out *= vals[0] if letter == "x" else vals[1]
        return out + 1

    def mf_comb(w):
        # letter "z" stands for a*x + b*y; expand the word
        from itertools import product
        total = Fraction(0)
        slots = [[(Fraction(1), c)] if c != "z" else [(a, "x"), (b, "y")] for c in w]
        for choice in product(*slots):
            coef = Fraction(1)
            for c, _ in choice:
                coef *= c
            total += coef * mf(tuple(l for _, l in choice))
        return total

    lhs = free_cumulant(mf_comb, ("z", "x", "z"))
    rhs = (a * a * free_cumulant(mf, "xxx") + a * b * free_cumulant(mf, "xxy")
           + b * a * free_cumulant(mf, "yxx") + b * b * free_cumulant(mf, "yxy"))
    assert lhs == rhs


def _shifted_moment(m, mean, k):
    """Moment of (a - mean)^k by the binomial expansion."""
    return sum(comb(k, j) * m(j) * (-mean) ** (k - j) for j in range(k + 1))


@given(st.lists(rationals, min_size=5, max_size=5))
@settings(max_examples=60, deadline=None)
def test_centering_single_variable(ms):
    moments = [Fraction(1)] + ms
    m = lambda j: moments[j]
    mean = moments[1]
    mf = lambda w: moments[len(w)]
    shifted = lambda w: _shifted_moment(m, mean, len(w))
    assert centered_cumulant(mf, "a") == 0
    for k in range(2, 6):
        assert centered_cumulant(mf, "a" * k) == free_cumulant(mf, "a" * k)
        assert free_cumulant(shifted, "a" * k) == free_cumulant(mf, "a" * k)
    assert free_cumulant(shifted, "a") == 0


def test_moment_functional_cache_and_caps():
    calls = []

    def ev(w):
        calls.append(w)
        return Fraction(len(w))

    mf = MomentFunctional(ev, cap=3)
    assert mf("ab") == 2 and mf("ab") == 2
    assert len(calls) == 1
    with pytest.raises(ResourceLimitError):
        mf("abcd")
    with pytest.raises(ValueError):
        free_cumulant(ev, "")
    with pytest.raises(ResourceLimitError):
        free_cumulant(ev, "a" * 9)
