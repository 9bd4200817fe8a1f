"""The two-superfield system and its component equations.

Superfields::

    A = U + theta eta + phi pi + theta phi R
    B = V + theta psi + phi omega + theta phi S

The general system has six real parameters a1..a6; the first superfield
equation uses a1..a3, the second a4..a6 with the roles of A and B swapped.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .grassmann import Expr, Symbol, as_expr, field, symbol
from .superspace import apply, component_split, superfield_a, superfield_b

# Order of the component equations, labelled by the field whose time
# derivative leads each one.
EQUATION_ORDER = ("R", "S", "eta", "psi", "pi", "omega", "U", "V")
ODD_EQUATIONS = frozenset({"eta", "psi", "pi", "omega"})
SWAP = {"R": "S", "S": "R", "eta": "psi", "psi": "eta", "pi": "omega", "omega": "pi", "U": "V", "V": "U"}


def parameters(values=None) -> dict:
    """a1..a6 as expressions; missing entries stay symbolic."""
    values = values or {}
    return {f"a{i}": as_expr(values[f"a{i}"]) if f"a{i}" in values else symbol(f"a{i}") for i in range(1, 7)}


def _superfield_equation(A, B, p1, p2, p3) -> Expr:
    last = p2 - p1 - p3 - 1
    return (
        apply(["Dt", "Dt"], A)
        + p1 * B * apply(["Dx", "Dx", "Dx", "Dt"], A)
        + p2 * apply("Dx", B) * apply(["Dx", "Dx", "Dt"], A)
        + p3 * apply("Dt", B) * apply(["Dx", "Dx", "Dx"], A)
        + last * apply(["Dx", "Dt"], B) * apply(["Dx", "Dx"], A)
    )


@dataclass(frozen=True)
class SuperSystem:
    first: Expr
    second: Expr
    params: dict = dc_field(default_factory=dict)


def build_general_system(params=None) -> SuperSystem:
    """The pair of superfield equations; ``params`` maps ``a1``..``a6`` to values."""
    p = parameters(params)
    A, B = superfield_a(), superfield_b()
    return SuperSystem(
        _superfield_equation(A, B, p["a1"], p["a2"], p["a3"]),
        _superfield_equation(B, A, p["a4"], p["a5"], p["a6"]),
        p,
    )


@dataclass(frozen=True)
class ComponentSystem:
    """Eight component equations keyed by their leading field."""

    equations: dict

    def __getitem__(self, name) -> Expr:
        return self.equations[name]

    def ordered(self) -> list:
        return [self.equations[k] for k in EQUATION_ORDER]

    def parity(self, name) -> int:
        return self.equations[name].parity

    def map(self, fn) -> "ComponentSystem":
        return ComponentSystem({k: fn(v) for k, v in self.equations.items()})


def decompose(system: SuperSystem) -> ComponentSystem:
    """Split both superfield equations into their theta/phi components."""
    c = component_split(system.first)
    d = component_split(system.second)
    return ComponentSystem({
        "U": c[0], "eta": c[1], "pi": c[2], "R": c[3],
        "V": d[0], "psi": d[1], "omega": d[2], "S": d[3],
    })


def component_system(params=None) -> ComponentSystem:
    return decompose(build_general_system(params))


def zero_parameter_system() -> ComponentSystem:
    return component_system({f"a{i}": 0 for i in range(1, 7)})


def classical_limit(cs: ComponentSystem) -> ComponentSystem:
    """Set eta, psi, pi, omega, U, V to zero."""
    binding = {"R": field("R"), "S": field("S")}
    binding.update({k: Expr.zero() for k in ("eta", "psi", "pi", "omega", "U", "V")})
    return cs.map(lambda e: e.substitute_fields(binding))


PARAM_SWAP = {f"a{i}": f"a{i + 3}" for i in (1, 2, 3)} | {f"a{i + 3}": f"a{i}" for i in (1, 2, 3)}


def swap_fields(e: Expr) -> Expr:
    """Exchange the two superfields, together with the parameter triples."""
    e = e.substitute_fields({k: field(v) for k, v in SWAP.items()})
    return e.subs({Symbol(k): symbol(v) for k, v in PARAM_SWAP.items()})


def discrete_symmetry_check(cs: ComponentSystem) -> bool:
    """True when swapping R<->S, eta<->psi, pi<->omega, U<->V permutes the equations."""
    return all(swap_fields(cs[name]) == cs[SWAP[name]] for name in EQUATION_ORDER)
