import itertools
import random
from fractions import Fraction

import pytest

from superhydro import parse
from superhydro.classify import parse_element
from superhydro.cli.golden import read_table
from superhydro.grassmann import Expr
from superhydro.superalgebra import (
    GEN_PARITY,
    GENERATORS,
    M_NAMES,
    Element,
    adjoint_exp,
    basis_vector_fields,
    bracket,
    element_from_vector_field,
    scale_by_torus,
    structure_table,
    superbracket,
    vf_bracket,
    weight,
)


def test_structure_table_matches_golden_table():
    table, golden = structure_table(), read_table()
    assert len(golden) == 144
    for key, text in golden.items():
        assert table[key] == parse_element(text), key


def _sign(p, q):
    return -1 if (p and q) else 1


def test_graded_jacobi_on_all_basis_triples():
    n = 0
    for a, b, c in itertools.product(GENERATORS, repeat=3):
        pa, pb, pc = GEN_PARITY[a], GEN_PARITY[b], GEN_PARITY[c]
        total = (
            superbracket(a, superbracket(b, c)).scale(_sign(pa, pc))
            + superbracket(b, superbracket(c, a)).scale(_sign(pb, pa))
            + superbracket(c, superbracket(a, b)).scale(_sign(pc, pb))
        )
        assert total.is_zero(), (a, b, c)
        n += 1
    assert n == 1728


def test_graded_antisymmetry():
    for a, b in itertools.product(GENERATORS, repeat=2):
        s = -_sign(GEN_PARITY[a], GEN_PARITY[b])
        assert superbracket(a, b) == superbracket(b, a).scale(s)


def test_bracket_agrees_with_vector_fields_for_graded_scalars():
    vfs = basis_vector_fields()
    a = Element.make({"Z1": parse("!u"), "M2": 3})
    b = Element.make({"Z3": parse("!v"), "P0": Fraction(1, 2), "M4": 1})
    direct = element_from_vector_field(vf_bracket(a.to_vector_field(), b.to_vector_field()))
    assert bracket(a, b) == direct
    assert vfs["M1"].coeff("x") == parse("x")


def test_adjoint_action_is_a_homomorphism():
    rng = random.Random(5)
    for _ in range(40):
        y = rng.choice(GENERATORS)
        s = parse("!s") if GEN_PARITY[y] else Expr.const(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        a, b = rng.choice(GENERATORS), rng.choice(GENERATORS)
        lhs = adjoint_exp(y, s, superbracket(a, b))
        rhs = bracket(adjoint_exp(y, s, Element.basis(a)), adjoint_exp(y, s, Element.basis(b)))
        assert lhs == rhs, (y, a, b)


def test_translation_conjugation_terminates():
    # [P1, M1] = P1, so Ad(exp(s P1)) M1 = M1 + s P1
    assert adjoint_exp("P1", parse("s"), Element.basis("M1")) == parse_element("M1 + s*P1")


def test_torus_scaling_uses_weights():
    x = parse_element("P0 + P1 + Z2")
    for m in M_NAMES:
        out = scale_by_torus(m, 2, x)
        for g in ("P0", "P1", "Z2"):
            assert out[g] == Expr.const(2) ** weight(m, g)
    with pytest.raises(ValueError):
        scale_by_torus("M1", -1, x)


def test_dilation_weights_are_diagonal():
    for m in M_NAMES:
        for g in GENERATORS:
            w = weight(m, g)
            assert superbracket(m, g) == Element.basis(g).scale(w)
