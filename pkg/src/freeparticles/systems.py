"""Finite-volume traces of freely independent particle systems.

The fixed-N trace is computed through cumulant additivity: the free cumulants
of A(Lambda, N; f) = sum_i M_i(f) are N times the single-particle cumulants,
and moments follow by non-crossing resummation. The Poissonized trace sums the
fixed-N traces against Poisson(alpha) weights; since the fixed-N trace is
sum_theta N^|theta| R(theta), the Poisson average is sum_theta T_|theta|(alpha) R(theta)
with T_i the Touchard polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence, Union

from .combinat import enumerate_nc_partitions, stirling2, touchard
from .cumulants import WORD_CAP, free_cumulant, restrict
from .errors import TailBoundError
from .space import (
    DiscreteSpace,
    JumpMeasure,
    TestFunction,
    as_fraction,
    integrate_product,
    product_space_moment,
    total_mass,
)


@dataclass(frozen=True)
class FixedN:
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"particle number must be >= 1, got {self.N}")


@dataclass(frozen=True)
class PoissonAlpha:
    alpha: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        if self.alpha < 0:
            raise ValueError(f"Poisson parameter must be nonnegative, got {self.alpha}")


Count = Union[FixedN, PoissonAlpha]


@dataclass(frozen=True)
class ParticleSystemSpec:
    """A particle system on ``space``; ``jumps=None`` means unmarked (nu = delta_1)."""

    space: DiscreteSpace
    count: Count
    jumps: JumpMeasure | None = None
    # single-particle cumulants by word; they do not depend on the count
    _memo: dict = field(default_factory=dict, init=False, compare=False, hash=False, repr=False)

    def with_count(self, count: Count) -> "ParticleSystemSpec":
        out = replace(self, count=count)
        object.__setattr__(out, "_memo", self._memo)
        return out


def effective_volume(spec: ParticleSystemSpec) -> Fraction:
    """sigma(Lambda), times nu(Delta) for marked systems."""
    v = total_mass(spec.space)
    if spec.jumps is not None:
        v *= spec.jumps.total_mass()
    return v


def single_particle_moment(spec: ParticleSystemSpec, fs: Sequence[TestFunction]) -> Fraction:
    fs = tuple(fs)
    if spec.jumps is None:
        return integrate_product(spec.space, fs) / total_mass(spec.space)
    return product_space_moment(spec.space, spec.jumps, fs)


def single_particle_free_cumulant(spec: ParticleSystemSpec, fs: Sequence[TestFunction]) -> Fraction:
    return free_cumulant(lambda w: single_particle_moment(spec, w), tuple(fs), memo=spec._memo)


def _nc_terms(spec: ParticleSystemSpec, fs: Sequence[TestFunction], centered: bool = False):
    """(number of blocks, product of single-particle cumulants) for each NC partition.

    With ``centered`` the partitions having a singleton block are dropped.
    """
    word = tuple(fs)
    if not word:
        raise ValueError("need at least one test function")
    if len(word) > WORD_CAP:
        # delegate the error message
        free_cumulant(lambda w: 0, word)
    terms = []
    for p in enumerate_nc_partitions(len(word)):
        if centered and any(len(b) == 1 for b in p.blocks):
            continue
        prod = Fraction(1)
        for b in p.blocks:
            prod *= single_particle_free_cumulant(spec, restrict(word, b))
            if prod == 0:
                break
        if prod:
            terms.append((len(p), prod))
    return terms


def _particle_number(spec: ParticleSystemSpec) -> int:
    if not isinstance(spec.count, FixedN):
        raise ValueError("this trace needs a fixed particle number")
    return spec.count.N


def _alpha(spec: ParticleSystemSpec) -> Fraction:
    if not isinstance(spec.count, PoissonAlpha):
        raise ValueError("this trace needs a Poisson particle number")
    return spec.count.alpha


def fixed_n_trace(spec: ParticleSystemSpec, fs: Sequence[TestFunction]) -> Fraction:
    """tau_{Lambda,N}(A(f_1) ... A(f_k)) for N free particles."""
    N = _particle_number(spec)
    return sum((N**nb * prod for nb, prod in _nc_terms(spec, fs)), Fraction(0))


def centered_fixed_n_trace(spec: ParticleSystemSpec, fs: Sequence[TestFunction]) -> Fraction:
    """Same with every A(f) replaced by A(f) - tau(A(f))."""
    N = _particle_number(spec)
    return sum((N**nb * prod for nb, prod in _nc_terms(spec, fs, centered=True)), Fraction(0))


def poissonized_trace(spec: ParticleSystemSpec, fs: Sequence[TestFunction]) -> Fraction:
    alpha = _alpha(spec)
    return sum((touchard(nb, alpha) * prod for nb, prod in _nc_terms(spec, fs)), Fraction(0))


def centered_poissonized_trace(spec: ParticleSystemSpec, fs: Sequence[TestFunction]) -> Fraction:
    """Each N-particle sector is centered separately before Poisson averaging."""
    alpha = _alpha(spec)
    return sum((touchard(nb, alpha) * prod for nb, prod in _nc_terms(spec, fs, centered=True)), Fraction(0))


# --- Poisson series with certified tails -------------------------------------


def poisson_pmf(alpha: float, N: int) -> float:
    if alpha == 0:
        return 1.0 if N == 0 else 0.0
    return math.exp(N * math.log(alpha) - alpha - math.lgamma(N + 1))


def poisson_sf(alpha: float, m: int) -> float:
    """Upper bound (tight up to rounding) on P(Poisson(alpha) > m)."""
    if m < 0:
        return 1.0
    if alpha == 0:
        return 0.0
    total = 0.0
    N = m + 1
    while True:
        t = poisson_pmf(alpha, N)
        total += t
        r = alpha / (N + 1)
        if r <= 0.5:
            rest = t * r / (1 - r)
            if rest <= 1e-3 * total or t == 0.0:
                return total + rest
        N += 1


def poisson_power_tail(alpha: float, i: int, m: int) -> float:
    """Upper bound on sum_{N > m} P(N) N^i for N ~ Poisson(alpha).

    Uses N^i = sum_j S(i,j) (N)_j and sum_{N>m} P(N) (N)_j = alpha^j P(N > m - j).
    """
    return sum(stirling2(i, j) * alpha**j * poisson_sf(alpha, m - j) for j in range(i + 1))


def _auto_cutoff(alpha: float, bound, tail_tol: float) -> int:
    m = max(1, math.ceil(alpha))
    while bound(m) > tail_tol:
        m = math.ceil(m * 1.25) + 5
    return m


def poissonized_trace_series(spec: ParticleSystemSpec, fs: Sequence[TestFunction],
                             n_max: int | None = None, tail_tol: float = 1e-9) -> float:
    """Truncated Poisson-weighted sum of fixed-N traces, in floating point.

    The omitted tail is bounded via the polynomial-in-N form of the fixed-N
    trace; ``TailBoundError`` is raised if the bound at ``n_max`` exceeds
    ``tail_tol``. ``n_max=None`` picks a cutoff meeting the tolerance.
    """
    alpha = float(_alpha(spec))
    terms = _nc_terms(spec, fs)

    def bound(m: int) -> float:
        return sum(abs(float(prod)) * poisson_power_tail(alpha, nb, m) for nb, prod in terms)

    if n_max is None:
        n_max = _auto_cutoff(alpha, bound, tail_tol)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    tail = bound(n_max)
    if tail > tail_tol:
        raise TailBoundError(f"tail bound {tail:.3e} exceeds {tail_tol:.1e} at n_max={n_max}")
    # the N = 0 sector is the empty system, whose trace vanishes on nonempty words
    total = 0.0
    for N in range(1, n_max + 1):
        w = poisson_pmf(alpha, N)
        if w == 0.0:
            continue
        total += w * float(sum((N**nb * prod for nb, prod in terms), Fraction(0)))
    return total
