import json

import pytest

from superhydro import parse
from superhydro.solutions import (
    catalog,
    erratum_search,
    is_solution,
    record,
    report,
    report_json,
    sign_flips,
    verify,
)

IDS = ("S2", "S3", "S5", "S8", "S4", "S7a", "S7b", "S1", "S6")


def test_catalog_has_nine_records():
    assert tuple(r.id for r in catalog()) == IDS
    assert record("S8").constraints[0][2] == "!D1*!D2 = -C1*C2"
    assert record("S3").constraints[0][2] == "!F1*!F2 = -n"
    assert record("S7b").assignments["V"] == parse("V(x - eps*t)")


@pytest.mark.parametrize("rid", IDS)
def test_catalog_records_verify(rid):
    res = verify(record(rid))
    assert len(res) == 8
    assert all(r.is_zero() for r in res)


@pytest.mark.parametrize("rid", IDS)
def test_flipping_the_r_assignment_breaks_the_solution(rid):
    rec = record(rid)
    flipped = rec.with_assignment("R", -rec.assignments["R"])
    assert not is_solution(flipped)


@pytest.mark.parametrize("rid", ("S3", "S5", "S8"))
def test_dropping_a_constraint_breaks_the_solution(rid):
    assert not is_solution(record(rid).without_constraint(0))


def test_s7b_negative_control_lands_in_v_equation():
    rec = record("S7b").with_assignment("R", parse("-eps"))
    res = verify(rec)
    assert not res[-1].is_zero()
    assert res[0].is_zero() and res[1].is_zero()


def test_s7b_is_insensitive_to_the_sign_of_s():
    # with U, eta, pi constant, S multiplies only vanishing derivatives
    assert is_solution(record("S7b").with_assignment("S", parse("eps")))


def test_erratum_search_recovers_a_single_flip():
    rec = record("S5")
    broken = rec.with_assignment("V", -rec.assignments["V"])
    assert not is_solution(broken)
    assert ("V", 0) in erratum_search(broken)


def test_sign_flips_cover_every_term():
    rec = record("S4")
    assert sum(1 for _ in sign_flips(rec)) == sum(len(v.terms) for v in rec.assignments.values())


def test_report_shape():
    rep = report([record("S7b")])
    assert rep["all_zero"]
    assert rep["records"][0]["zero_count"] == 8
    assert json.loads(report_json([record("S5")]))["records"][0]["constraints"] == ["!D1*!D2 = eps"]
