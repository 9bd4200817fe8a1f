"""Superspace derivatives, supercharges and component splitting.

Coordinates are (x, t, theta, phi).  The covariant derivatives are
``D_x = theta d_x + d_theta`` and ``D_t = phi d_t + d_phi``; the supercharges
flip the sign of the odd derivative.
"""
from __future__ import annotations

from .grassmann import PHI, THETA, T, X, Expr, GrassmannError, Symbol, as_expr, field

_THETA = Expr.atom(THETA)
_PHI = Expr.atom(PHI)

# name -> (odd coordinate, even coordinate, sign of the odd derivative)
OPERATORS = {
    "Dx": (THETA, X, 1),
    "Dt": (PHI, T, 1),
    "Qx": (THETA, X, -1),
    "Qt": (PHI, T, -1),
}


def apply_operator(op: str, e) -> Expr:
    """Apply one of ``Dx``, ``Dt``, ``Qx``, ``Qt`` to an expression."""
    try:
        odd, even, sign = OPERATORS[op]
    except KeyError:
        raise GrassmannError(f"unknown operator {op!r}") from None
    e = as_expr(e)
    return Expr.atom(odd) * e.diff(even) + e.diff(odd) * sign


def apply(ops, e) -> Expr:
    """Apply a word of operators, rightmost first (``["Dx", "Dt"]`` is Dx Dt)."""
    if isinstance(ops, str):
        ops = [ops]
    for op in reversed(list(ops)):
        e = apply_operator(op, e)
    return e


def compose_anticommutator(op1: str, op2: str, probe) -> Expr:
    """{op1, op2} applied to ``probe``."""
    return apply([op1, op2], probe) + apply([op2, op1], probe)


def superfield(body: str, theta_part: str, phi_part: str, top: str) -> Expr:
    """body + theta*theta_part + phi*phi_part + theta*phi*top, all fields of (x, t)."""
    return (
        field(body)
        + _THETA * field(theta_part)
        + _PHI * field(phi_part)
        + _THETA * _PHI * field(top)
    )


def superfield_a() -> Expr:
    return superfield("U", "eta", "pi", "R")


def superfield_b() -> Expr:
    return superfield("V", "psi", "omega", "S")


def component_split(e) -> tuple:
    """Components (c0, c1, c2, c3) with e = c0 + theta c1 + phi c2 + theta phi c3."""
    e = as_expr(e)
    parts = ({}, {}, {}, {})
    for (even, odd), c in e.terms:
        has_t = bool(odd) and odd[0] == THETA
        rest = odd[1:] if has_t else odd
        has_p = bool(rest) and rest[0] == PHI
        rest = rest[1:] if has_p else rest
        if THETA in rest or PHI in rest:
            raise GrassmannError("odd coordinate out of canonical position")
        for a, _ in even:
            if a.free_symbols & {THETA, PHI}:
                raise GrassmannError("odd coordinate inside an even factor")
        idx = (2 if has_p else 0) + (1 if has_t else 0)
        d = parts[idx]
        m = (even, rest)
        d[m] = d.get(m, 0) + c
    return tuple(Expr._from_dict(d) for d in parts)


def recombine(c0, c1, c2, c3) -> Expr:
    return as_expr(c0) + _THETA * c1 + _PHI * c2 + _THETA * _PHI * c3


def shift_even(e, coord: Symbol, delta) -> Expr:
    """e with ``coord -> coord + delta`` for a nilpotent ``delta`` with delta^2 = 0."""
    delta = as_expr(delta)
    if (delta * delta).terms:
        raise GrassmannError("shift must square to zero")
    e = as_expr(e)
    return e + delta * e.diff(coord)


def finite_susy_shift(e, direction: str, alpha) -> Expr:
    """Apply ``x -> x + alpha theta, theta -> theta - alpha`` (or the t/phi analogue)."""
    odd, even, _ = OPERATORS["Dx" if direction == "x" else "Dt"]
    alpha = as_expr(alpha)
    shifted = shift_even(e, even, alpha * Expr.atom(odd))
    return shifted.subs({odd: Expr.atom(odd) - alpha})
