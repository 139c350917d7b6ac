"""Exact moments and free cumulants of freely independent particle systems
and of the free Poisson / free Levy white noise they approximate."""

from .combinat import (
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
from .cumulants import (
    MomentFunctional,
    centered_cumulant,
    classical_moment_from_cumulants,
    free_cumulant,
    moments_from_free_cumulants,
)
from .space import DiscreteSpace, JumpMeasure, TestFunction
from .systems import (
    FixedN,
    ParticleSystemSpec,
    PoissonAlpha,
    centered_fixed_n_trace,
    centered_poissonized_trace,
    fixed_n_trace,
    poissonized_trace,
    poissonized_trace_series,
)
from .targets import centered_levy_moment, classical_levy_moment, levy_free_cumulant, levy_moment

__version__ = "0.1.0"
