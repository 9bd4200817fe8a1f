from fractions import Fraction

import pytest

from superhydro.cli.golden import read_labelled
from superhydro.grassmann import Expr
from superhydro.model import (
    EQUATION_ORDER,
    ODD_EQUATIONS,
    build_general_system,
    classical_limit,
    component_system,
    decompose,
    discrete_symmetry_check,
)
from superhydro.superalgebra import GENERATORS, symmetry_multipliers


@pytest.fixture(scope="module")
def general():
    return component_system()


def test_general_decomposition_matches_golden_equations(general):
    golden = read_labelled("general_system.txt")
    assert set(golden) == set(EQUATION_ORDER)
    for name in EQUATION_ORDER:
        assert general[name] == golden[name], name


def test_zero_parameter_decomposition_matches_golden_equations(zero_sys):
    golden = read_labelled("zero_system.txt")
    for name in EQUATION_ORDER:
        assert zero_sys[name] == golden[name], name


def test_specialization_commutes_with_decomposition(general):
    zero = {f"a{i}": 0 for i in range(1, 7)}
    direct = decompose(build_general_system(zero))
    from superhydro.grassmann import Symbol

    subs = {Symbol(f"a{i}"): Expr.zero() for i in range(1, 7)}
    for name in EQUATION_ORDER:
        assert general[name].subs(subs) == direct[name]


def test_equation_parities(general):
    for name in EQUATION_ORDER:
        assert general.parity(name) == (1 if name in ODD_EQUATIONS else 0)


def test_classical_limit(zero_sys):
    golden = read_labelled("classical_system.txt")
    lim = classical_limit(zero_sys)
    assert lim["R"] == golden["R"] and lim["S"] == golden["S"]
    for name in EQUATION_ORDER:
        if name not in ("R", "S"):
            assert lim[name] == Expr.zero()


def test_discrete_swap(general, zero_sys):
    assert discrete_symmetry_check(zero_sys)
    assert discrete_symmetry_check(general)
    lopsided = component_system({"a1": 1, "a2": 0, "a3": 0, "a4": 0, "a5": 0, "a6": 0})
    assert not discrete_symmetry_check(lopsided)


@pytest.mark.parametrize("gen", GENERATORS)
def test_every_generator_is_a_symmetry(gen, zero_sys):
    mult = symmetry_multipliers(gen, zero_sys)
    assert set(mult) == set(EQUATION_ORDER)
    if gen[0] in "PTZ":
        assert all(v == 0 for v in mult.values())


def test_dilation_multipliers_m3(zero_sys):
    # hand count: M3 weights eta 1, psi -1, U 1, V -1 on the leading jets
    assert symmetry_multipliers("M3", zero_sys) == {
        "R": 0, "S": 0, "eta": 1, "psi": -1, "pi": 0, "omega": 0, "U": 1, "V": -1,
    }
    assert all(isinstance(v, Fraction) for v in symmetry_multipliers("M1", zero_sys).values())
