from fractions import Fraction

import pytest

from freeparticles.space import (
    DiscreteSpace,
    JumpMeasure,
    TestFunction,
    as_fraction,
    integrate_product,
    jump_moment,
    normalized_probability,
    product_space_moment,
    total_mass,
)


def test_as_fraction_refuses_floats():
    assert as_fraction("3/4") == Fraction(3, 4)
    assert as_fraction(2) == 2
    with pytest.raises(TypeError):
        as_fraction(0.5)


@pytest.mark.parametrize("cells,masses", [
    ((), ()),
    (("a",), (1, 2)),
    (("a", "a"), (1, 1)),
    (("a",), (-1,)),
    (("a",), (0,)),
])
def test_space_validation(cells, masses):
    with pytest.raises(ValueError):
        DiscreteSpace(cells, masses)


def test_space_helpers(three_cells):
    assert total_mass(three_cells) == 3
    assert three_cells.mass_of(["b", "c"]) == 2
    sp = three_cells.with_mass("a", "5/2")
    assert total_mass(sp) == Fraction(9, 2) and total_mass(three_cells) == 3
    assert total_mass(normalized_probability(sp)) == 1
    assert DiscreteSpace.uniform(4).cells == ("c0", "c1", "c2", "c3")


def test_functions(three_cells):
    f = TestFunction.indicator(three_cells, ["a", "b"], "f")
    g = TestFunction.from_mapping(three_cells, {"b": 2, "c": "-1/3"})
    assert g.values == (0, 2, Fraction(-1, 3))
    assert (f * g).values == (0, 2, 0)
    assert (f + g).values == (1, 3, Fraction(-1, 3))
    assert g.scale(3).values == (0, 6, -1)
    assert g.sup_norm() == 2
    assert TestFunction.constant(three_cells, 7).values == (7, 7, 7)
    with pytest.raises(ValueError):
        TestFunction.indicator(three_cells, ["z"])
    with pytest.raises(ValueError):
        TestFunction.from_mapping(three_cells, {"z": 1})
    assert hash(f) == hash(TestFunction.indicator(three_cells, ["a", "b"], "f"))


def test_integrals(three_cells, two_atoms):
    f = TestFunction.from_mapping(three_cells, {"a": 2, "b": 4, "c": 1})
    one = TestFunction.constant(three_cells)
    assert integrate_product(three_cells, [one]) == 3
    assert integrate_product(three_cells, [f, f]) == 4 + 8 + Fraction(3, 2)
    with pytest.raises(ValueError):
        integrate_product(three_cells, [])
    with pytest.raises(ValueError):
        integrate_product(three_cells, [TestFunction((1,))])
    assert jump_moment(two_atoms, 2) == 4 + Fraction(1, 12)
    assert jump_moment(two_atoms, 3) == 8 - Fraction(1, 24)
    # V = 3 * 4/3
    assert product_space_moment(three_cells, two_atoms, [one]) == (2 - Fraction(1, 6)) * 3 / 4


def test_jump_measure_validation():
    with pytest.raises(ValueError):
        JumpMeasure(())
    with pytest.raises(ValueError):
        JumpMeasure(((0, 1),))
    with pytest.raises(ValueError):
        JumpMeasure(((1, 0),))
    d = JumpMeasure.delta_one()
    assert d.total_mass() == 1 and d.max_jump() == 1
