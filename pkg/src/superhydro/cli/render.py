"""Text and LaTeX renderings of expressions.

The text form is the input grammar of ``parser.parse`` and round-trips
exactly.
"""
from __future__ import annotations

from fractions import Fraction

from ..grassmann import FIELD_PARITY, ODD, Base, Exp, Expr, Func, Integral, Radical, Symbol, X, T

_XT = None


def _is_xt(args) -> bool:
    global _XT
    if _XT is None:
        _XT = (Expr.atom(X), Expr.atom(T))
    return args == _XT


def _exponent_text(e) -> str:
    if isinstance(e, Fraction):
        if e.denominator == 1 and e > 0:
            return str(e.numerator)
        return f"({e})"
    return f"({to_text(e)})"


def atom_text(a) -> str:
    if type(a) is Symbol:
        return "!" + a.name if a.kind == "fconst" else a.name
    if type(a) is Func:
        if a.name in FIELD_PARITY and _is_xt(a.args) and FIELD_PARITY[a.name] == a.parity:
            dx, dt = a.derivs
            return a.name + ("_" + "x" * dx + "t" * dt if dx or dt else "")
        bang = "!" if a.parity == ODD and a.name not in FIELD_PARITY else ""
        args = ", ".join(to_text(x) for x in a.args)
        if len(a.args) == 1:
            return f"{bang}{a.name}{chr(39) * a.derivs[0]}({args})"
        if any(a.derivs):
            return f"{bang}{a.name}[{','.join(map(str, a.derivs))}]({args})"
        return f"{bang}{a.name}({args})"
    if type(a) is Exp:
        return f"exp({to_text(a.arg)})"
    if type(a) is Integral:
        return f"Int({to_text(a.integrand)}, {a.var.name}, {to_text(a.arg)})"
    if type(a) is Base:
        return f"({to_text(a.expr)})"
    if type(a) is Radical:
        return str(a.prime)
    raise TypeError(a)


def _term_factors(mono):
    even, odd = mono
    out = []
    for a, e in even:
        s = atom_text(a)
        if e != 1:
            s += "^" + _exponent_text(e)
        out.append(s)
    out.extend(atom_text(a) for a in odd)
    return out


def to_text(e: Expr) -> str:
    if not e.terms:
        return "0"
    parts = []
    for i, (mono, c) in enumerate(e.terms):
        factors = _term_factors(mono)
        mag = abs(c)
        if mag != 1 or not factors:
            factors.insert(0, str(mag))
        body = "*".join(factors)
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


# ---------------------------------------------------------------- LaTeX

_GREEK = {
    "theta": r"\theta", "phi": r"\phi", "xi": r"\xi", "eps": r"\varepsilon",
    "mu": r"\mu", "nu": r"\nu", "eta": r"\eta", "psi": r"\psi", "pi": r"\pi",
    "omega": r"\omega", "alpha": r"\alpha", "beta": r"\beta", "Psi": r"\Psi",
    "Omega": r"\Omega",
}


def _tex_name(name: str) -> str:
    if name in _GREEK:
        return _GREEK[name]
    head = name.rstrip("0123456789")
    tail = name[len(head):]
    head = _GREEK.get(head, head if len(head) == 1 else r"\mathrm{" + head + "}")
    return head + ("_{" + tail + "}" if tail else "")


def atom_tex(a) -> str:
    if type(a) is Symbol:
        s = _tex_name(a.name)
        return r"\underline{" + s + "}" if a.kind == "fconst" else s
    if type(a) is Func:
        if a.name in FIELD_PARITY and _is_xt(a.args):
            dx, dt = a.derivs
            sub = "x" * dx + "t" * dt
            return _tex_name(a.name) + ("_{" + sub + "}" if sub else "")
        args = ", ".join(to_tex(x) for x in a.args)
        if len(a.args) == 1:
            return _tex_name(a.name) + "'" * a.derivs[0] + r"\left(" + args + r"\right)"
        return _tex_name(a.name) + "^{(" + ",".join(map(str, a.derivs)) + r")}\left(" + args + r"\right)"
    if type(a) is Exp:
        return "e^{" + to_tex(a.arg) + "}"
    if type(a) is Integral:
        return r"\left.\int " + to_tex(a.integrand) + r"\,d" + _tex_name(a.var.name) + r"\right|_{" + to_tex(a.arg) + "}"
    if type(a) is Base:
        return r"\left(" + to_tex(a.expr) + r"\right)"
    if type(a) is Radical:
        return str(a.prime)
    raise TypeError(a)


def to_tex(e: Expr) -> str:
    if not e.terms:
        return "0"
    parts = []
    for i, ((even, odd), c) in enumerate(e.terms):
        factors = []
        for a, k in even:
            s = atom_tex(a)
            if k != 1:
                ks = str(k) if isinstance(k, Fraction) else to_tex(k)
                s = "{" + s + "}^{" + ks + "}"
            factors.append(s)
        factors.extend(atom_tex(a) for a in odd)
        mag = abs(c)
        if mag != 1 or not factors:
            coeff = str(mag) if mag.denominator == 1 else r"\frac{%d}{%d}" % (mag.numerator, mag.denominator)
            factors.insert(0, coeff)
        body = " ".join(factors)
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)
