"""Symmetry reduction along a one-dimensional subalgebra.

Supported generators have affine-diagonal coefficients: every coordinate
``z`` is moved by ``a*z + b`` with ``a`` rational or a constant expression.
The characteristic system is integrated in closed form with one of ``t``
or ``x`` as the flow parameter, giving a group-invariant chart.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .grassmann import (
    FIELD_PARITY,
    T,
    X,
    XI,
    Expr,
    Func,
    exp,
)
from .model import EQUATION_ORDER, ComponentSystem, zero_parameter_system
from .superalgebra import FIBER, Element

REDUCED_NAMES = {"R": "F", "S": "G", "eta": "H", "psi": "Psi", "pi": "P", "omega": "Omega", "U": "Y", "V": "Z"}


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class ReductionChart:
    """Group-invariant change of variables.

    ``solve`` expresses the non-flow coordinate through ``xi`` and ``flow``;
    ``invariants`` maps each field to its invariant in the fiber coordinates.
    """

    xi: Expr
    ansatz: dict
    functions: tuple  # (name, parity)
    flow: object
    solve: Expr
    invariants: dict = dc_field(default_factory=dict)
    generator: Element | None = None

    @property
    def other(self):
        return X if self.flow == T else T


@dataclass(frozen=True)
class ReducedSystem:
    equations: dict  # field name -> Expr in jets of functions of xi
    prefactors: dict  # field name -> cancelled factor

    def ordered(self) -> list:
        return [self.equations[k] for k in EQUATION_ORDER]


# ---------------------------------------------------------------- invariants


def _affine(c: Expr, z):
    """Split ``c = a*z + b``; raise if the shape is not affine in ``z``."""
    a = c.diff(z)
    b = c.subs({z: Expr.zero()})
    if a.free_symbols & {X, T, *FIBER.values()} or b.free_symbols & {X, T, *FIBER.values()}:
        raise ReductionError(f"unsupported coefficient shape: {c}")
    if a.has_odd():
        raise ReductionError(f"odd scaling coefficient: {c}")
    if (a * Expr.atom(z) + b) != c:
        raise ReductionError(f"unsupported coefficient shape: {c}")
    return a, b


class _Flow:
    """Closed-form solution along the moving coordinate ``z`` with ``dz/ds = a*z + b``."""

    def __init__(self, z, a: Expr, b: Expr):
        self.z, self.a, self.b = z, a, b
        self.shifted = Expr.atom(z) + (b / a if a.terms else Expr.zero())

    def e(self, k: Expr) -> Expr:
        """exp(k*s)."""
        if not k.terms:
            return Expr.one()
        if not self.a.terms:
            return exp(k * Expr.atom(self.z) / self.b)
        ratio = k / self.a
        r = ratio.as_fraction()
        if r is None:
            raise ReductionError("symbolic power along a scaling flow")
        return self.shifted ** r

    def s(self) -> Expr:
        if self.a.terms:
            raise ReductionError("logarithmic invariant is not supported")
        return Expr.atom(self.z) / self.b


def invariants(element: Element) -> ReductionChart:
    """Invariant chart of the one-parameter group generated by ``element``.

    ``t`` is tried first as the flow parameter, then ``x``.
    """
    vf = element.to_vector_field()
    coeffs = {T: _affine(vf.coeff("t"), T), X: _affine(vf.coeff("x"), X)}
    moving = [z for z in (T, X) if any(c.terms for c in coeffs[z])]
    if not moving:
        raise ReductionError("generator does not move x or t")
    error = None
    for z in moving:
        try:
            return _chart(element, vf, z, coeffs)
        except ReductionError as exc:
            error = exc
    raise error


def _chart(element, vf, z, coeffs) -> ReductionChart:
    other = X if z == T else T
    flow = _Flow(z, *coeffs[z])
    a_o, b_o = coeffs[other]
    o = Expr.atom(other)
    xi_sym = Expr.atom(XI)
    if a_o.terms:
        xi = (o + b_o / a_o) * flow.e(-a_o)
        solve = xi_sym * flow.e(a_o) - b_o / a_o
    elif b_o.terms:
        xi = o - b_o * flow.s()
        solve = xi_sym + b_o * flow.s()
    else:
        xi, solve = o, xi_sym

    ansatz, inv, functions = {}, {}, []
    for name, parity in FIELD_PARITY.items():
        lam, c = _affine(vf.coeff(name), FIBER[name])
        f = Expr.atom(FIBER[name])
        plain = not lam.terms and not c.terms
        fname = name if plain else REDUCED_NAMES[name]
        phi = Expr.atom(Func(fname, (xi,), None, parity))
        if lam.terms:
            ansatz[name] = flow.e(lam) * phi - c / lam
            inv[name] = flow.e(-lam) * (f + c / lam)
        else:
            shift = c * flow.s() if c.terms else Expr.zero()
            ansatz[name] = phi + shift
            inv[name] = f - shift
        functions.append((fname, parity))
    inv["xi"] = xi
    return ReductionChart(xi, ansatz, tuple(functions), flow.z, solve, inv, element)


def check_invariance(chart: ReductionChart) -> dict:
    """Generator applied to each invariant; all entries vanish for a valid chart."""
    vf = chart.generator.to_vector_field()
    return {k: vf(v) for k, v in chart.invariants.items()}


def check_ansatz(chart: ReductionChart) -> bool:
    """Each invariant evaluated on the ansatz depends on (x, t) through xi only."""
    flow = {chart.flow}
    for name, inv in chart.invariants.items():
        if name == "xi":
            continue
        val = inv.subs({FIBER[name]: chart.ansatz[name]})
        val = val.subs({chart.other: chart.solve})
        if val.free_symbols & flow:
            return False
    return True


# ---------------------------------------------------------------- reduced system


def _depends(atom, z) -> bool:
    return z in atom.free_symbols


def _strip_prefactor(e: Expr, z):
    """Divide out the common factor carrying all dependence on ``z``."""
    common = None
    for (even, _), _ in e.terms:
        part = tuple((a, k) for a, k in even if _depends(a, z))
        if common is None:
            common = part
        elif part != common:
            raise ReductionError(f"residual dependence on {z.name} in {e}")
    if not common:
        return Expr.one(), e
    pre = Expr.product(1, common, [])
    return pre, e * pre.inverse()


def reduced_system(chart: ReductionChart, system: ComponentSystem | None = None) -> ReducedSystem:
    system = system or zero_parameter_system()
    eqs, pres = {}, {}
    for name in EQUATION_ORDER:
        e = system[name].substitute_fields(chart.ansatz)
        e = e.subs({chart.other: chart.solve})
        pre, e = _strip_prefactor(e, chart.flow)
        if e.free_symbols & {X, T}:
            raise ReductionError(f"equation {name} keeps explicit x/t: {e}")
        eqs[name], pres[name] = e, pre
    return ReducedSystem(eqs, pres)


# ---------------------------------------------------------------- golden rows

SELECTED = ("L4", "L5", "L7", "L10", "L13", "L15", "L68", "L149")


@dataclass
class GoldenRow:
    id: str
    element: Element
    chart: ReductionChart
    equations: dict
    reparam: Expr
    prefactors: dict


def _rename(e: Expr, names: dict) -> Expr:
    if not names:
        return e

    def fn(a):
        if type(a) is Func and a.name in names:
            return Expr.atom(Func(names[a.name], tuple(x.replace(fn) for x in a.args), a.derivs, a.parity))
        return None

    return e.replace(fn)


def load_row(rid: str) -> GoldenRow:
    from .classify import parse_element
    from .cli.golden import read_data
    from .cli.parser import parse

    entries = {}
    for lineno, line in enumerate(read_data(f"reductions/{rid}.txt").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, body = line.partition(":")
        if not sep:
            raise ValueError(f"{rid}:{lineno}: expected 'key: value'")
        entries[key.strip()] = body.strip()
    names = {}
    for pair in filter(None, (p.strip() for p in entries.get("rename", "").split(";"))):
        old, _, new = pair.partition("=")
        names[old.strip()] = new.strip()
    element = parse_element(entries["element"])
    (solve_key,) = [k for k in entries if k.startswith("solve ")]
    other = {"x": X, "t": T}[solve_key.split()[1]]
    xi = parse(entries["xi"])
    ansatz = {k: parse(entries[k]) for k in FIELD_PARITY}
    functions = []
    for k, v in ansatz.items():
        for a in v.atoms():
            if type(a) is Func and a.args == (xi,):
                functions.append((a.name, a.parity))
    chart = ReductionChart(
        xi, ansatz, tuple(functions), T if other == X else X, parse(entries[solve_key]), {}, element
    )
    eqs = {k: _rename(parse(entries[f"eq {k}"]), names) for k in EQUATION_ORDER}
    pres = {k: parse(entries[f"prefactor {k}"]) for k in EQUATION_ORDER if f"prefactor {k}" in entries}
    reparam = parse(entries.get("reparam", "xi"))
    return GoldenRow(rid, element, chart, eqs, reparam, pres)


def charts_equivalent(generated: ReductionChart, reference: ReductionChart, reparam: Expr) -> bool:
    """True when ``reference`` is ``generated`` with xi replaced by ``reparam(xi)``."""
    if reference.xi != reparam.subs({XI: generated.xi}):
        return False

    def fn(a):
        if type(a) is Func and a.args == (reference.xi,):
            return Expr.atom(Func(a.name, (generated.xi,), a.derivs, a.parity))
        return None

    return all(reference.ansatz[k].replace(fn) == generated.ansatz[k] for k in FIELD_PARITY)


def proportional(a: Expr, b: Expr):
    """Rational c with a == c*b, or None."""
    if not b.terms:
        return Fraction(1) if not a.terms else None
    mono, cb = b.terms[0]
    ca = dict(a.terms).get(mono)
    if ca is None:
        return None
    c = ca / cb
    return c if (a - b * c).is_zero() else None


@dataclass
class EquationReport:
    name: str
    computed: Expr
    golden: Expr
    prefactor: Expr
    golden_prefactor: Expr | None
    factor: Fraction | None

    @property
    def match(self) -> bool:
        pre_ok = self.golden_prefactor is None or self.golden_prefactor == self.prefactor
        return self.factor is not None and pre_ok


@dataclass
class RowReport:
    id: str
    invariant: bool
    chart_matches: bool
    equations: list

    @property
    def ok(self) -> bool:
        return self.invariant and self.chart_matches and all(r.match for r in self.equations)


def compare_row(rid: str, system: ComponentSystem | None = None) -> RowReport:
    """Generate the chart for a selected row and compare against its golden file."""
    row = load_row(rid)
    chart = invariants(row.element)
    invariant = all(not v.terms for v in check_invariance(chart).values()) and check_ansatz(chart)
    same = charts_equivalent(chart, row.chart, row.reparam)
    # the reference chart is the generated one up to reparametrization, so its
    # reduced system is written in the reference variable
    reduced = reduced_system(row.chart, system)
    reports = [
        EquationReport(
            k, reduced.equations[k], row.equations[k], reduced.prefactors[k],
            row.prefactors.get(k), proportional(reduced.equations[k], row.equations[k]),
        )
        for k in EQUATION_ORDER
    ]
    return RowReport(rid, invariant, same, reports)


def selected_element(rid: str) -> Element:
    return load_row(rid).element

