import pytest

from superhydro import parse
from superhydro.classify import parse_element
from superhydro.grassmann import X
from superhydro.reduce import (
    SELECTED,
    ReductionError,
    check_ansatz,
    check_invariance,
    compare_row,
    invariants,
    load_row,
    reduced_system,
)


@pytest.mark.parametrize("rid", SELECTED)
def test_generated_chart_is_invariant(rid):
    chart = invariants(load_row(rid).element)
    assert all(not v.terms for v in check_invariance(chart).values())
    assert check_ansatz(chart)
    for name, parity in chart.functions:
        assert parity == (1 if name in ("eta", "psi", "pi", "omega", "H", "Psi", "P", "Omega") else 0)


@pytest.mark.parametrize("rid", SELECTED)
def test_reduced_system_matches_golden_row(rid):
    rep = compare_row(rid)
    assert rep.chart_matches
    assert rep.invariant
    for eq in rep.equations:
        assert eq.match, (rid, eq.name)
        assert eq.factor == 1
        assert eq.golden_prefactor == eq.prefactor


def test_travelling_wave_chart():
    chart = invariants(parse_element("P0 + eps*P1"))
    assert chart.xi == parse("x - eps*t")
    assert all(v == parse(f"{k}(x - eps*t)") for k, v in chart.ansatz.items())


def test_exponential_chart():
    chart = invariants(parse_element("M3 + eps*P0"))
    assert chart.ansatz["eta"] == parse("exp(eps*t)*!H(x)")
    assert chart.ansatz["U"] == parse("exp(eps*t)*Y(x)")
    assert chart.ansatz["V"] == parse("exp(-eps*t)*Z(x)")


def test_fermionic_translation_chart():
    chart = invariants(parse_element("P0 + eps*P1 + mu*T1 + !alpha*Z1"))
    assert chart.ansatz["eta"] == parse("!H(x - eps*t) + !alpha*t")
    assert chart.ansatz["U"] == parse("Y(x - eps*t) + mu*t")


def test_reduced_equation_examples():
    eqs = reduced_system(invariants(parse_element("P0 + eps*P1"))).equations
    assert eqs["U"] == parse("(S(xi) - eps)*U'(xi)")
    eqs = reduced_system(invariants(parse_element("M4 + eps*P1"))).equations
    assert eqs["U"] == parse("Y'(xi) + eps*S(xi)*Y(xi)")
    eqs = reduced_system(invariants(parse_element("P0 + eps*P1 + !alpha*Z3"))).equations
    assert eqs["pi"] == parse("!alpha + (S(xi) - eps)*!P'(xi) - eps*U'(xi)*psi'(xi)")


def test_scaling_flow_falls_back_to_x():
    chart = invariants(parse_element("M2 + P1"))
    assert chart.flow == X
    assert all(not v.terms for v in check_invariance(chart).values())
    reduced_system(chart)


def test_unsupported_shapes():
    with pytest.raises(ReductionError):
        invariants(parse_element("M3"))
    with pytest.raises(ReductionError):
        invariants(parse_element("M2 + !a*Z1"))


def test_non_invariant_ansatz_is_detected():
    chart = invariants(parse_element("P0 + eps*P1"))
    bad = dict(chart.ansatz, R=chart.ansatz["R"] + parse("t"))
    from dataclasses import replace

    with pytest.raises(ReductionError):
        reduced_system(replace(chart, ansatz=bad))
