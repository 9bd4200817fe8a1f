"""The twelve-dimensional Lie superalgebra of point symmetries.

Two independent routes are provided: vector fields with graded coefficients
(``VectorField``) and structure constants on coefficient vectors
(``Element``).  The structure constants are computed from the vector fields.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .grassmann import (
    EVEN,
    FIELD_PARITY,
    ODD,
    Expr,
    Func,
    Symbol,
    T,
    X,
    as_expr,
    exp,
    field,
)

GENERATORS = ("M1", "M2", "M3", "M4", "P0", "P1", "T1", "T2", "Z1", "Z2", "Z3", "Z4")
M_NAMES = GENERATORS[:4]
N_NAMES = GENERATORS[4:]
INDEX = {g: i for i, g in enumerate(GENERATORS)}
GEN_PARITY = {g: (ODD if g.startswith("Z") else EVEN) for g in GENERATORS}

# Fiber coordinates of the symmetry vector fields.
FIBER = {name: Symbol(name, "fcoord" if p == ODD else "coord") for name, p in FIELD_PARITY.items()}
COORDS = {"x": X, "t": T, **FIBER}


class AlgebraError(ValueError):
    pass


# ---------------------------------------------------------------- vector fields


@dataclass(frozen=True)
class VectorField:
    """sum_z coeffs[z] * d/dz, with left derivatives along odd coordinates."""

    coeffs: tuple  # sorted tuple of (coordinate name, Expr)
    parity: int = EVEN

    @staticmethod
    def make(coeffs: Mapping[str, Expr], parity: int = EVEN) -> "VectorField":
        items = tuple(sorted((k, as_expr(v)) for k, v in coeffs.items() if as_expr(v).terms))
        return VectorField(items, parity)

    def coeff(self, name) -> Expr:
        return dict(self.coeffs).get(name, Expr.zero())

    def __call__(self, f) -> Expr:
        f = as_expr(f)
        out = Expr.zero()
        for name, c in self.coeffs:
            out = out + c * f.diff(COORDS[name])
        return out

    def __add__(self, other: "VectorField") -> "VectorField":
        d = dict(self.coeffs)
        for k, v in other.coeffs:
            d[k] = d.get(k, Expr.zero()) + v
        return VectorField.make(d, self.parity)

    def scale(self, c) -> "VectorField":
        c = as_expr(c)
        return VectorField.make({k: c * v for k, v in self.coeffs}, (self.parity + c.parity) % 2)


def vf_bracket(a: VectorField, b: VectorField) -> VectorField:
    sign = -1 if (a.parity and b.parity) else 1
    names = {k for k, _ in a.coeffs} | {k for k, _ in b.coeffs}
    out = {}
    for z in names:
        out[z] = a(b.coeff(z)) - b(a.coeff(z)) * sign
    return VectorField.make(out, (a.parity + b.parity) % 2)


def _fib(name):
    return Expr.atom(COORDS[name])


def _dilation(weights) -> VectorField:
    return VectorField.make({k: _fib(k) * w for k, w in weights.items()})


@lru_cache(maxsize=None)
def basis_vector_fields() -> dict:
    return {
        "P0": VectorField.make({"t": 1}),
        "P1": VectorField.make({"x": 1}),
        "T1": VectorField.make({"U": 1}),
        "T2": VectorField.make({"V": 1}),
        "Z1": VectorField.make({"eta": 1}, ODD),
        "Z2": VectorField.make({"psi": 1}, ODD),
        "Z3": VectorField.make({"pi": 1}, ODD),
        "Z4": VectorField.make({"omega": 1}, ODD),
        "M1": _dilation({"x": 1, "R": 1, "S": 1, "psi": 2, "omega": 3, "U": -1, "V": 4}),
        "M2": _dilation({"t": 1, "R": -1, "S": -1, "psi": -1, "omega": -2, "U": 1, "V": -2}),
        "M3": _dilation({"eta": 1, "psi": -1, "U": 1, "V": -1}),
        "M4": _dilation({"pi": 1, "omega": -1, "U": 1, "V": -1}),
    }


# ---------------------------------------------------------------- elements


@dataclass(frozen=True)
class Element:
    """sum_i coeffs[i] * GENERATORS[i]; coefficients may be graded expressions."""

    coeffs: tuple

    @staticmethod
    def make(mapping: Mapping[str, object]) -> "Element":
        c = [Expr.zero()] * len(GENERATORS)
        for k, v in mapping.items():
            c[INDEX[k]] = c[INDEX[k]] + as_expr(v)
        return Element(tuple(c))

    @staticmethod
    def basis(name: str) -> "Element":
        return Element.make({name: 1})

    @staticmethod
    def zero() -> "Element":
        return Element((Expr.zero(),) * len(GENERATORS))

    def __getitem__(self, name) -> Expr:
        return self.coeffs[INDEX[name]]

    def items(self):
        return [(g, c) for g, c in zip(GENERATORS, self.coeffs) if c.terms]

    def support(self) -> tuple:
        return tuple(g for g, c in zip(GENERATORS, self.coeffs) if c.terms)

    def __add__(self, other):
        return Element(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return Element(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return Element(tuple(-a for a in self.coeffs))

    def scale(self, c) -> "Element":
        """Left multiplication by a scalar expression."""
        c = as_expr(c)
        return Element(tuple(c * a for a in self.coeffs))

    def map(self, fn) -> "Element":
        return Element(tuple(fn(a) for a in self.coeffs))

    def is_zero(self) -> bool:
        return not any(c.terms for c in self.coeffs)

    @property
    def parity(self) -> int:
        ps = {(c.parity + GEN_PARITY[g]) % 2 for g, c in self.items()}
        if len(ps) > 1:
            raise AlgebraError("element is not parity-homogeneous")
        return ps.pop() if ps else EVEN

    def m_part(self) -> "Element":
        return Element(self.coeffs[:4] + (Expr.zero(),) * 8)

    def n_part(self) -> "Element":
        return Element((Expr.zero(),) * 4 + self.coeffs[4:])

    def to_vector_field(self) -> VectorField:
        vfs = basis_vector_fields()
        out = VectorField.make({}, self.parity)
        for g, c in self.items():
            out = out + vfs[g].scale(c)
        return VectorField(out.coeffs, self.parity)

    def __str__(self):
        from .cli.render import to_text

        parts = []
        for g, c in self.items():
            s = to_text(c)
            if c == 1:
                parts.append(g)
            elif c == -1:
                parts.append("-" + g)
            elif len(c.terms) == 1:
                parts.append(f"{s}*{g}")
            else:
                parts.append(f"({s})*{g}")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")


def element_from_vector_field(vf: VectorField) -> Element:
    """Coordinates of a vector field in the basis; raises if it is outside the span."""
    def const(e):
        return e.subs({s: 0 for s in COORDS.values() if s.parity == EVEN}).subs(
            {s: 0 for s in COORDS.values() if s.parity == ODD})

    c = {
        "M1": vf.coeff("x").pdiff(X),
        "M2": vf.coeff("t").pdiff(T),
        "M3": vf.coeff("eta").pdiff(FIBER["eta"]),
        "M4": vf.coeff("pi").pdiff(FIBER["pi"]),
        "P0": const(vf.coeff("t")),
        "P1": const(vf.coeff("x")),
        "T1": const(vf.coeff("U")),
        "T2": const(vf.coeff("V")),
        "Z1": const(vf.coeff("eta")),
        "Z2": const(vf.coeff("psi")),
        "Z3": const(vf.coeff("pi")),
        "Z4": const(vf.coeff("omega")),
    }
    el = Element.make(c)
    back = el.to_vector_field()
    names = {k for k, _ in back.coeffs} | {k for k, _ in vf.coeffs}
    for z in names:
        if not (back.coeff(z) - vf.coeff(z)).is_zero():
            raise AlgebraError("vector field is not in the span of the basis")
    return el


@lru_cache(maxsize=None)
def structure_table() -> dict:
    """{(A, B): [A, B]} for all 144 ordered pairs, from the vector fields."""
    vfs = basis_vector_fields()
    return {(a, b): element_from_vector_field(vf_bracket(vfs[a], vfs[b])) for a in GENERATORS for b in GENERATORS}


@lru_cache(maxsize=None)
def _constants() -> dict:
    """(A, B) -> list of (Fraction, C) with [A, B] = sum f C."""
    out = {}
    for key, el in structure_table().items():
        terms = []
        for g, c in el.items():
            f = c.as_fraction()
            if f is None:
                raise AlgebraError("structure constants must be numbers")
            terms.append((f, g))
        out[key] = terms
    return out


def bracket(a: Element, b: Element) -> Element:
    """Graded bracket via structure constants.

    For homogeneous scalars, [a E, b F] = (-1)^{|E||b|} a b [E, F].
    """
    consts = _constants()
    acc = [Expr.zero()] * len(GENERATORS)
    for ga, ca in a.items():
        pe = GEN_PARITY[ga]
        for gb, cb in b.items():
            terms = consts[(ga, gb)]
            if not terms:
                continue
            sign = -1 if (pe and cb.parity) else 1
            prod = ca * cb * sign
            if not prod.terms:
                continue
            for f, g in terms:
                acc[INDEX[g]] = acc[INDEX[g]] + prod * f
    return Element(tuple(acc))


def superbracket(a, b) -> Element:
    """Bracket of two elements or generator names."""
    if isinstance(a, str):
        a = Element.basis(a)
    if isinstance(b, str):
        b = Element.basis(b)
    return bracket(a, b)


def weight(m: str, g: str) -> Fraction:
    """lambda with [m, g] = lambda g for a dilation m and basis vector g."""
    terms = _constants()[(m, g)]
    if not terms:
        return Fraction(0)
    (f, h), = terms
    if h != g:
        raise AlgebraError(f"{g} is not an eigenvector of ad {m}")
    return f


@lru_cache(maxsize=None)
def weight_matrix() -> dict:
    return {(m, g): weight(m, g) for m in M_NAMES for g in GENERATORS}


def _m_only(y: Element) -> bool:
    return all(g in M_NAMES for g in y.support())


def adjoint_exp(y, s, x: Element, max_terms: int = 32) -> Element:
    """Ad(exp(s Y)) X = sum_n ad_{sY}^n X / n!.

    Along dilations the series is summed as exponentials of the weights; along
    the abelian ideal it terminates.
    """
    if isinstance(y, str):
        y = Element.basis(y)
    s = as_expr(s)
    if y.is_zero():
        return x
    if _m_only(y):
        lam = {g: sum((y[m].as_fraction() * weight(m, g) for m in M_NAMES if y[m].terms), Fraction(0))
               for g in GENERATORS}
        return Element(tuple(c * exp(s * lam[g]) if c.terms else c for g, c in zip(GENERATORS, x.coeffs)))
    sy = y.scale(s)
    total, term = x, x
    for n in range(1, max_terms):
        term = bracket(sy, term).scale(Fraction(1, n))
        if term.is_zero():
            return total
        total = total + term
    raise AlgebraError("adjoint series did not terminate")


def scale_by_torus(m: str, tau, x: Element) -> Element:
    """Ad(exp(s m)) X with e^s = tau, a positive number (rational or radical)."""
    tau = as_expr(tau)
    f = tau.as_fraction()
    if (f is not None and f <= 0) or tau.free_symbols:
        raise AlgebraError("scale factor must be a positive number")
    return Element(tuple(c * tau ** weight(m, g) if c.terms else c for g, c in zip(GENERATORS, x.coeffs)))


# ---------------------------------------------------------------- symmetry check


def _field_form(e: Expr) -> Expr:
    """Replace fiber coordinates by the fields of (x, t)."""
    return e.subs({FIBER[n]: field(n) for n in FIELD_PARITY})


_XT = (Expr.atom(X), Expr.atom(T))


def prolong(vf: VectorField, delta: Expr) -> Expr:
    """Action of the prolonged vector field on a differential expression."""
    xi_x = _field_form(vf.coeff("x"))
    xi_t = _field_form(vf.coeff("t"))
    out = xi_x * delta.diff(X) + xi_t * delta.diff(T)
    char = {}
    for name in FIELD_PARITY:
        f = field(name)
        char[name] = _field_form(vf.coeff(name)) - xi_x * f.diff(X) - xi_t * f.diff(T)
    jets = {}
    for a in delta.atoms():
        if type(a) is Func and a.name in FIELD_PARITY and a.args == _XT:
            jets[a] = a.derivs
    for a, (dx, dt) in sorted(jets.items(), key=lambda kv: kv[0].key):
        q = char[a.name]
        for _ in range(dx):
            q = q.diff(X)
        for _ in range(dt):
            q = q.diff(T)
        if q.terms:
            out = out + q * delta.pdiff(a)
    return out


def symmetry_multipliers(generator: str, system) -> dict:
    """Constants c_k with pr X (Delta_k) = c_k Delta_k for every equation."""
    vf = basis_vector_fields()[generator]
    out = {}
    for name, eq in system.equations.items():
        image = prolong(vf, eq)
        if not image.terms:
            out[name] = Fraction(0)
            continue
        m0, c0 = image.terms[0]
        ratio = None
        for m, c in eq.terms:
            if m == m0:
                ratio = c0 / c
                break
        if ratio is None or (image - eq * ratio).terms:
            raise AlgebraError(f"{generator} is not a symmetry of the {name} equation")
        out[name] = ratio
    return out
