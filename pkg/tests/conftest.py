import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from oracle import EVEN_NAMES, ODD_NAMES, word_to_poly  # noqa: E402

from superhydro import parse  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

LETTERS = EVEN_NAMES + ODD_NAMES


def build(terms):
    """(kernel Expr, oracle Poly) for a list of (coeff, letters)."""
    from superhydro.grassmann import Expr

    e = Expr.zero()
    p = word_to_poly(0, [])
    for c, letters in terms:
        t = Expr.const(c)
        for n in letters:
            t = t * parse(n)
        e = e + t
        p = p + word_to_poly(c, letters)
    return e, p


coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
words = st.lists(st.sampled_from(LETTERS), max_size=4)
term_lists = st.lists(st.tuples(coeffs, words), min_size=0, max_size=4)


def random_terms(rng: random.Random, max_terms=4):
    out = []
    for _ in range(rng.randint(0, max_terms)):
        c = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        out.append((c, [rng.choice(LETTERS) for _ in range(rng.randint(0, 4))]))
    return out


@pytest.fixture(scope="session")
def zero_sys():
    from superhydro.model import zero_parameter_system

    return zero_parameter_system()


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
