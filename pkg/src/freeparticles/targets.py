"""Limit objects: free Levy white noise (free Poisson when nu = delta_1) and its
classical counterpart, both at the level of moments and cumulants."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .cumulants import classical_moment_from_cumulants, moments_from_free_cumulants
from .space import DiscreteSpace, JumpMeasure, TestFunction, integrate_product, jump_moment


def _jumps(jm: JumpMeasure | None) -> JumpMeasure:
    return JumpMeasure.delta_one() if jm is None else jm


def levy_free_cumulant(sp: DiscreteSpace, jm: JumpMeasure | None, fs: Sequence[TestFunction]) -> Fraction:
    """R^(k)(A(f_1), ..., A(f_k)) = int s^k dnu * int f_1 ... f_k dsigma."""
    fs = tuple(fs)
    return jump_moment(_jumps(jm), len(fs)) * integrate_product(sp, fs)


def levy_moment(sp: DiscreteSpace, jm: JumpMeasure | None, fs: Sequence[TestFunction]) -> Fraction:
    """Vacuum expectation tau(A(f_1) ... A(f_k))."""
    return moments_from_free_cumulants(lambda w: levy_free_cumulant(sp, jm, w), tuple(fs))


def centered_levy_moment(sp: DiscreteSpace, jm: JumpMeasure | None, fs: Sequence[TestFunction]) -> Fraction:
    def rc(w):
        return Fraction(0) if len(w) == 1 else levy_free_cumulant(sp, jm, w)

    return moments_from_free_cumulants(rc, tuple(fs))


def classical_levy_moment(sp: DiscreteSpace, jm: JumpMeasure | None, fs: Sequence[TestFunction]) -> Fraction:
    """E <f_1, eta> ... <f_k, eta> for the classical measure-valued Levy process."""
    return classical_moment_from_cumulants(lambda w: levy_free_cumulant(sp, jm, w), tuple(fs))
