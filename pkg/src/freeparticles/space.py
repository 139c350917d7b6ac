"""Finite exact models of the base measure space and the jump (Levy) measure.

Every test function is a simple function, constant on the cells of a
``DiscreteSpace``. All integrals reduce to finite rational sums.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings. Floats are rejected."""
    if isinstance(x, float):
        raise TypeError(f"refusing inexact float {x!r}; pass a 'p/q' string")
    return Fraction(x)


@dataclass(frozen=True)
class DiscreteSpace:
    cells: tuple[str, ...]
    sigma_mass: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(str(c) for c in self.cells))
        object.__setattr__(self, "sigma_mass", tuple(as_fraction(m) for m in self.sigma_mass))
        if not self.cells:
            raise ValueError("a space needs at least one cell")
        if len(self.cells) != len(self.sigma_mass):
            raise ValueError("one mass per cell required")
        if len(set(self.cells)) != len(self.cells):
            raise ValueError("duplicate cell identifiers")
        if any(m < 0 for m in self.sigma_mass):
            raise ValueError("cell masses must be nonnegative")
        if sum(self.sigma_mass) <= 0:
            raise ValueError("total mass must be positive")

    @classmethod
    def from_masses(cls, masses: Mapping[str, object]) -> "DiscreteSpace":
        return cls(tuple(masses), tuple(masses.values()))

    @classmethod
    def uniform(cls, ncells: int, mass=1) -> "DiscreteSpace":
        return cls(tuple(f"c{i}" for i in range(ncells)), (Fraction(mass),) * ncells)

    def __len__(self) -> int:
        return len(self.cells)

    def index(self, cell: str) -> int:
        return self.cells.index(cell)

    def mass_of(self, cells: Iterable[str]) -> Fraction:
        return sum((self.sigma_mass[self.index(c)] for c in cells), Fraction(0))

    def with_mass(self, cell: str, mass) -> "DiscreteSpace":
        masses = list(self.sigma_mass)
        masses[self.index(cell)] = as_fraction(mass)
        return DiscreteSpace(self.cells, tuple(masses))


@dataclass(frozen=True)
class TestFunction:
    """A simple function, given by its value on each cell."""

    __test__ = False  # not a pytest class

    values: tuple[Fraction, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(as_fraction(v) for v in self.values))

    @classmethod
    def indicator(cls, sp: DiscreteSpace, cells: Iterable[str], name: str = "") -> "TestFunction":
        support = set(cells)
        unknown = support - set(sp.cells)
        if unknown:
            raise ValueError(f"unknown cells {sorted(unknown)}")
        return cls(tuple(Fraction(int(c in support)) for c in sp.cells), name)

    @classmethod
    def constant(cls, sp: DiscreteSpace, value=1, name: str = "") -> "TestFunction":
        return cls((as_fraction(value),) * len(sp), name)

    @classmethod
    def from_mapping(cls, sp: DiscreteSpace, values: Mapping[str, object], name: str = "") -> "TestFunction":
        """Missing cells default to zero."""
        unknown = set(values) - set(sp.cells)
        if unknown:
            raise ValueError(f"unknown cells {sorted(unknown)}")
        return cls(tuple(as_fraction(values.get(c, 0)) for c in sp.cells), name)

    def __repr__(self) -> str:
        if self.name:
            return f"TestFunction({self.name})"
        return f"TestFunction({[str(v) for v in self.values]})"

    def __str__(self) -> str:
        return self.name or repr(self)

    def __mul__(self, other: "TestFunction") -> "TestFunction":
        return TestFunction(tuple(a * b for a, b in zip(self.values, other.values)))

    def __add__(self, other: "TestFunction") -> "TestFunction":
        return TestFunction(tuple(a + b for a, b in zip(self.values, other.values)))

    def scale(self, c) -> "TestFunction":
        c = as_fraction(c)
        return TestFunction(tuple(c * v for v in self.values))

    def sup_norm(self) -> Fraction:
        return max(abs(v) for v in self.values)


@dataclass(frozen=True)
class JumpMeasure:
    """Finitely many atoms (jump size s != 0, nu-mass > 0)."""

    atoms: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        atoms = tuple((as_fraction(s), as_fraction(m)) for s, m in self.atoms)
        if not atoms:
            raise ValueError("a jump measure needs at least one atom")
        if any(s == 0 for s, _ in atoms):
            raise ValueError("jump sizes must be nonzero")
        if any(m <= 0 for _, m in atoms):
            raise ValueError("atom masses must be positive")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def delta_one(cls) -> "JumpMeasure":
        return cls(((Fraction(1), Fraction(1)),))

    def total_mass(self) -> Fraction:
        return sum((m for _, m in self.atoms), Fraction(0))

    def max_jump(self) -> Fraction:
        return max(abs(s) for s, _ in self.atoms)


def _check_functions(sp: DiscreteSpace, fs: Sequence[TestFunction]) -> None:
    if not fs:
        raise ValueError("need at least one test function")
    for f in fs:
        if len(f.values) != len(sp):
            raise ValueError(f"{f!r} has {len(f.values)} values but the space has {len(sp)} cells")


def total_mass(sp: DiscreteSpace) -> Fraction:
    return sum(sp.sigma_mass, Fraction(0))


def integrate_product(sp: DiscreteSpace, fs: Sequence[TestFunction]) -> Fraction:
    """Integral of the pointwise product f_1 ... f_k against sigma."""
    _check_functions(sp, fs)
    total = Fraction(0)
    for c, mass in enumerate(sp.sigma_mass):
        if mass == 0:
            continue
        prod = mass
        for f in fs:
            prod *= f.values[c]
            if prod == 0:
                break
        total += prod
    return total


def jump_moment(jm: JumpMeasure, n: int) -> Fraction:
    """Integral of s^n against nu."""
    if n < 1:
        raise ValueError("jump moments are defined for n >= 1")
    return sum((s**n * m for s, m in jm.atoms), Fraction(0))


def normalized_probability(sp: DiscreteSpace) -> DiscreteSpace:
    v = total_mass(sp)
    return DiscreteSpace(sp.cells, tuple(m / v for m in sp.sigma_mass))


def product_space_moment(sp: DiscreteSpace, jm: JumpMeasure, fs: Sequence[TestFunction]) -> Fraction:
    """Mixed moment of one marked particle under (sigma x nu) / V.

    Here V = sigma(Lambda) * nu(Delta) and the random variable attached to f is
    (x, s) -> f(x) s.
    """
    v = total_mass(sp) * jm.total_mass()
    return integrate_product(sp, fs) * jump_moment(jm, len(fs)) / v
