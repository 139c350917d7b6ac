from fractions import Fraction

import pytest

from freeparticles.space import DiscreteSpace, JumpMeasure, TestFunction


def bernoulli_space(V, theta=1):
    """Cell 'theta' of mass ``theta`` inside a space of total mass V."""
    V, theta = Fraction(V), Fraction(theta)
    return DiscreteSpace.from_masses({"theta": theta, "bulk": V - theta})


@pytest.fixture
def space10():
    return bernoulli_space(10)


@pytest.fixture
def chi_theta(space10):
    return TestFunction.indicator(space10, ["theta"], "f")


@pytest.fixture
def three_cells():
    return DiscreteSpace.from_masses({"a": 1, "b": Fraction(1, 2), "c": Fraction(3, 2)})


@pytest.fixture
def two_atoms():
    return JumpMeasure(((Fraction(2), Fraction(1)), (Fraction(-1, 2), Fraction(1, 3))))


@pytest.fixture
def symmetric_atoms():
    return JumpMeasure(((Fraction(1), Fraction(1)), (Fraction(-1), Fraction(1))))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
