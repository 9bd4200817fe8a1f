"""Representative one-dimensional subalgebras and adjoint normalization.

``normalize_element`` brings an element to its representative in three moves:

1. scale the ray so the leading dilation coefficient is 1;
2. conjugate by ``exp(n N_j)`` to clear every translation/odd direction on
   which the dilation part acts with nonzero weight;
3. rescale the remaining sign/unit directions to magnitude 1 with dilations
   (and, when there is no dilation part, the ray scaling).

Every move is recorded in a ``Conjugator`` whose application is exact.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .cli.parser import parse
from .grassmann import Expr, GrassmannError, Symbol, as_expr
from .superalgebra import (
    GEN_PARITY,
    GENERATORS,
    M_NAMES,
    N_NAMES,
    AlgebraError,
    Element,
    adjoint_exp,
    scale_by_torus,
    weight,
)

SIGNS = ("eps", "mu", "nu")
REAL_LINEAR = ("a", "b", "c")
REAL_FREE = ("k", "l", "m")
STAGE_GENERATOR = {1: "P0", 2: "P1", 3: "T1", 4: "T2", 5: "Z1", 6: "Z2", 7: "Z3", 8: "Z4"}


class NoMatchError(LookupError):
    """No representative matches the normalized element."""


# ---------------------------------------------------------------- parsing elements


def element_from_expr(e: Expr) -> Element:
    """Read ``sum coeff * G`` with generator names used as plain symbols."""
    e = as_expr(e)
    coeffs = {}
    rest = e
    for g in GENERATORS:
        sym = Symbol(g, "const")
        c = e.pdiff(sym)
        if c.terms:
            if any(Symbol(h, "const") in c.free_symbols for h in GENERATORS):
                raise AlgebraError("element must be linear in the generators")
            coeffs[g] = c
            rest = rest - c * Expr.atom(sym)
    if rest.terms:
        raise AlgebraError("element has a part outside the generator span")
    return Element.make(coeffs)


def parse_element(text: str) -> Element:
    return element_from_expr(parse(text))


# ---------------------------------------------------------------- records


@dataclass(frozen=True)
class Constraint:
    text: str
    lhs: Optional[Expr] = None  # equality lhs = 0; None for a nonzero condition
    nonzero: Optional[str] = None


@dataclass(frozen=True)
class SubalgebraRecord:
    id: int
    element: Element
    text: str
    constraints: tuple
    stage: int
    kind: str
    flags: str = ""

    @property
    def label(self) -> str:
        return f"L{self.id}"

    def parameters(self) -> list:
        names = set()
        for c in self.element.coeffs:
            names |= {s.name for s in c.free_symbols}
        order = REAL_LINEAR + REAL_FREE + SIGNS
        return sorted(names, key=lambda n: (order.index(n) if n in order else 99, n))

    def instantiate(self, params: dict) -> Element:
        mapping = {}
        for c in self.element.coeffs:
            for s in c.free_symbols:
                if s.name in params:
                    mapping[s] = as_expr(params[s.name])
        return self.element.map(lambda c: c.subs(mapping) if c.free_symbols else c)

    def m_forms(self) -> dict:
        return {m: self.element[m] for m in M_NAMES}

    def n_support(self) -> tuple:
        return tuple(g for g in N_NAMES if self.element[g].terms)

    def unit_directions(self) -> tuple:
        """N directions whose coefficient is 1 or a sign symbol."""
        out = []
        for g in N_NAMES:
            c = self.element[g]
            if c == 1 or (len(c.terms) == 1 and c.terms[0][1] == 1 and
                          all(type(a) is Symbol and a.kind == "sign" for a in c.atoms())):
                out.append(g)
        return tuple(out)

    def check_constraints(self, params: dict) -> bool:
        for con in self.constraints:
            if con.lhs is not None:
                v = con.lhs.subs({Symbol(n, "const"): as_expr(params[n]) for n in REAL_LINEAR if n in params})
                if v.terms:
                    return False
            elif con.nonzero in params and as_expr(params[con.nonzero]) == 0:
                return False
        return True

    def generators_used(self) -> set:
        return set(self.element.support())


def _parse_constraint(text: str) -> Constraint:
    text = text.strip()
    m = re.fullmatch(r"(\w+)\s*!=\s*0", text)
    if m:
        return Constraint(text, None, m.group(1))
    lhs, rhs = text.split("=")
    return Constraint(text, parse(lhs) - parse(rhs))


def parse_record_line(line: str) -> SubalgebraRecord:
    parts = [p.strip() for p in line.split("|")]
    if len(parts) != 6 or not parts[0].startswith("L"):
        raise ValueError(f"malformed subalgebra record: {line!r}")
    ident, text, cons, stage, kind, flags = parts
    constraints = tuple(_parse_constraint(c) for c in cons.split(";") if c.strip())
    if kind not in ("splitting", "nonsplitting"):
        raise ValueError(f"bad kind in record {ident}")
    return SubalgebraRecord(int(ident[1:]), parse_element(text), text, constraints, int(stage), kind, flags)


def load_records(text: str) -> list:
    out = []
    for line in text.splitlines():
        if line.strip() and not line.lstrip().startswith("#"):
            out.append(parse_record_line(line))
    return out


@lru_cache(maxsize=None)
def _default_records() -> tuple:
    from .cli.golden import read_data

    return tuple(load_records(read_data("subalgebras.txt")))


def representatives() -> list:
    return list(_default_records())


def record(ident) -> SubalgebraRecord:
    n = int(str(ident).lstrip("L"))
    for r in _default_records():
        if r.id == n:
            return r
    raise KeyError(f"no subalgebra L{n}")


@lru_cache(maxsize=None)
def _index_by_support() -> dict:
    out = {}
    for r in _default_records():
        out.setdefault(r.n_support(), []).append(r)
    return out


# ---------------------------------------------------------------- conjugators


@dataclass(frozen=True)
class Step:
    """One conjugation ``Ad(exp(s G))``.

    For dilations the parameter is the positive number ``e^s`` (a rational
    times radicals); for the other generators it is ``s`` itself, odd for
    the Z generators.
    """

    generator: str
    parameter: Expr

    def apply(self, g: Element) -> Element:
        if self.generator in M_NAMES:
            return scale_by_torus(self.generator, self.parameter, g)
        return adjoint_exp(self.generator, self.parameter, g)

    def describe(self) -> str:
        if self.generator in M_NAMES:
            return f"exp(s*{self.generator}), e^s = {self.parameter}"
        return f"exp(({self.parameter})*{self.generator})"


@dataclass(frozen=True)
class Conjugator:
    """target = ray_scale * Ad(chain) source."""

    chain: tuple = ()
    ray_scale: Expr = Expr.one()

    def apply(self, g: Element) -> Element:
        for step in self.chain:
            g = step.apply(g)
        return g.scale(self.ray_scale) if self.ray_scale != 1 else g

    def then(self, other: "Conjugator") -> "Conjugator":
        return Conjugator(self.chain + other.chain, as_expr(self.ray_scale) * other.ray_scale)


@dataclass(frozen=True)
class Classification:
    record: SubalgebraRecord
    params: dict
    conjugator: Conjugator
    normal_form: Element

    @property
    def id(self) -> int:
        return self.record.id


# ---------------------------------------------------------------- linear algebra


def _solve_linear(rows, rhs, unknowns):
    """Exact solve of rows * u = rhs.  Returns dict or None if inconsistent.

    Underdetermined unknowns that are free are set to 0.
    """
    n = len(unknowns)
    mat = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for col in range(n):
        p = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        if p is None:
            continue
        mat[r], mat[p] = mat[p], mat[r]
        pv = mat[r][col]
        mat[r] = [v / pv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        piv_cols.append(col)
        r += 1
    for i in range(r, len(mat)):
        if mat[i][n] != 0:
            return None
    sol = {u: Fraction(0) for u in unknowns}
    for i, col in enumerate(piv_cols):
        sol[unknowns[col]] = mat[i][n]
    return sol


def _integer_right_inverse(w):
    """Integer A with W A = I for an integer matrix W (r x n), or None."""
    r = len(w)
    if r == 0:
        return []
    n = len(w[0])
    m = [list(map(int, row)) for row in w]
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def colop(j, k, q):  # col_j -= q col_k
        for row in m:
            row[j] -= q * row[k]
        for row in u:
            row[j] -= q * row[k]

    def swap(j, k):
        for row in m:
            row[j], row[k] = row[k], row[j]
        for row in u:
            row[j], row[k] = row[k], row[j]

    for i in range(r):
        if i >= n:
            return None
        while True:
            nz = [j for j in range(i, n) if m[i][j] != 0]
            if not nz:
                return None
            k = min(nz, key=lambda j: abs(m[i][j]))
            swap(i, k)
            done = True
            for j in range(i + 1, n):
                if m[i][j]:
                    colop(j, i, m[i][j] // m[i][i])
                    if m[i][j]:
                        done = False
            if done:
                break
        if abs(m[i][i]) != 1:
            return None
    # W U = [L 0], L lower triangular with unit diagonal magnitudes
    linv = [[Fraction(0)] * r for _ in range(r)]
    for j in range(r):
        e = [Fraction(1 if i == j else 0) for i in range(r)]
        x = [Fraction(0)] * r
        for i in range(r):
            x[i] = (e[i] - sum(m[i][k] * x[k] for k in range(i))) / m[i][i]
        for i in range(r):
            linv[i][j] = x[i]
    return [[sum(u[g][k] * linv[k][j] for k in range(r)) for j in range(r)] for g in range(n)]


def _rational_right_inverse(w):
    """W^T (W W^T)^-1 over the rationals, or None when W lacks full row rank."""
    r = len(w)
    gram = [[sum(Fraction(w[i][k]) * w[j][k] for k in range(len(w[0]))) for j in range(r)] for i in range(r)]
    inv = []
    for j in range(r):
        sol = _solve_linear(gram, [Fraction(1 if i == j else 0) for i in range(r)], list(range(r)))
        if sol is None:
            return None
        inv.append([sol[i] for i in range(r)])
    inv = [list(col) for col in zip(*inv)]  # columns were solved one at a time
    return [[sum(Fraction(w[k][g]) * inv[k][j] for k in range(r)) for j in range(r)] for g in range(len(w[0]))]


# ---------------------------------------------------------------- normalization


def _rational(c: Expr, what: str) -> Fraction:
    v = c.as_fraction()
    if v is None:
        raise AlgebraError(f"{what} coefficient must be a rational number, got {c}")
    return v


def _match(g: Element, odd_element: bool):
    """Candidate records for a cleaned element: list of (record, params)."""
    support = tuple(n for n in N_NAMES if g[n].terms)
    out = []
    for r in _index_by_support().get(support, []):
        params = {}
        forms = r.m_forms()
        unknowns = [n for n in REAL_LINEAR if any(Symbol(n, "const") in forms[m].free_symbols for m in M_NAMES)]
        rows, rhs = [], []
        for mname in M_NAMES:
            f = forms[mname]
            row = [f.pdiff(Symbol(u, "const")).as_fraction() for u in unknowns]
            const = f.subs({Symbol(u, "const"): 0 for u in unknowns}).as_fraction()
            if const is None or any(v is None for v in row):
                raise AlgebraError(f"record L{r.id} has a nonlinear dilation part")
            rows.append(row)
            rhs.append(_rational(g[mname], "dilation") - const)
        sol = _solve_linear(rows, rhs, unknowns)
        if sol is None:
            continue
        # check the solution reproduces every form (free unknowns set to 0)
        params.update(sol)
        if not r.check_constraints(params):
            continue
        out.append((r, params))
    return out


def _n_weights(m_coeffs: dict, name: str) -> Fraction:
    return sum((c * weight(mname, name) for mname, c in m_coeffs.items()), Fraction(0))


def normalize_element(g: Element) -> Classification:
    """Map ``g`` to its representative record, parameters and certificate."""
    if g.is_zero():
        raise AlgebraError("zero element")
    parity = g.parity
    if parity == 0:
        for n in ("M1", "M2", "M3", "M4", "P0", "P1", "T1", "T2"):
            _rational(g[n], n)
    bosonic = [n for n in GENERATORS if GEN_PARITY[n] == 0 and g[n].terms]
    if parity == 0 and not bosonic:
        raise AlgebraError("even element without a bosonic part is nilpotent; no representative")
    if parity == 1:
        if any(g[n].terms for n in GENERATORS if GEN_PARITY[n] == 0):
            raise AlgebraError("odd element with even generators")
        for n in ("Z1", "Z2", "Z3", "Z4"):
            if g[n].terms:
                _rational(g[n], n)

    conj = Conjugator()
    m_coeffs = {m: g[m].as_fraction() for m in M_NAMES if g[m].terms}
    if m_coeffs:
        lead = next(m for m in M_NAMES if m in m_coeffs)
        s = Fraction(1) / m_coeffs[lead]
        g = g.scale(s)
        conj = Conjugator((), Expr.const(s))
        m_coeffs = {m: c * s for m, c in m_coeffs.items()}
        steps = []
        for n in N_NAMES:
            lam = _n_weights(m_coeffs, n)
            if lam != 0 and g[n].terms:
                steps.append(Step(n, g[n] * (Fraction(1) / lam)))
        for st in steps:
            g = st.apply(g)
        conj = conj.then(Conjugator(tuple(steps)))
        for n in N_NAMES:
            if _n_weights(m_coeffs, n) != 0 and g[n].terms:
                raise AlgebraError("failed to clear a removable direction")
    else:
        first = next(n for n in N_NAMES if g[n].terms)
        if g[first].as_fraction() < 0:
            g = g.scale(-1)
            conj = Conjugator((), Expr.const(-1))

    candidates = _match(g, parity == 1)
    if not candidates:
        raise NoMatchError(f"no representative matches {g}")
    best = None
    for r, params in sorted(candidates, key=lambda rp: rp[0].id):
        try:
            result = _finish(r, params, g, conj, bool(m_coeffs))
        except AlgebraError:
            continue
        best = result
        break
    if best is None:
        raise NoMatchError(f"no representative can be normalized exactly for {g}")
    return best


def _finish(r: SubalgebraRecord, params: dict, g: Element, conj: Conjugator, has_m: bool) -> Classification:
    units = r.unit_directions()
    cols = [] if has_m else ["ray"]
    cols += list(M_NAMES)
    w = [[1 if c == "ray" else int(weight(c, j)) for c in cols] for j in units]
    mags = [abs(_rational(g[j], j)) for j in units]
    steps, ray = [], Expr.one()
    if any(v != 1 for v in mags):
        a = _integer_right_inverse(w) or _rational_right_inverse(w)
        if a is None:
            raise AlgebraError(f"directions {units} cannot be rescaled independently")
        for ci, cname in enumerate(cols):
            tau = Expr.one()
            for k, v in enumerate(mags):
                if a[ci][k]:
                    tau = tau * Expr.const(v) ** -a[ci][k]
            if tau == 1:
                continue
            if cname == "ray":
                ray = tau
            else:
                steps.append(Step(cname, tau))
    local = Conjugator(tuple(steps), ray)
    g = local.apply(g)
    conj = conj.then(local)
    for j in units:
        if abs(_rational(g[j], j)) != 1:
            raise AlgebraError("unit normalization failed")
    # read off parameters
    out = dict(params)
    for n in N_NAMES:
        c = r.element[n]
        if not c.terms:
            continue
        val = g[n]
        if c == 1:
            if val != 1:
                raise AlgebraError("unit coefficient has the wrong sign")
            continue
        (mono, coeff), = c.terms
        atoms = c.atoms()
        (atom,) = atoms
        v = val * (Fraction(1) / coeff)
        if atom.kind in ("sign", "const"):
            f = v.as_fraction()
            out[atom.name] = f if f is not None else v
        else:
            out[atom.name] = v
    if not r.check_constraints(out):
        raise AlgebraError("parameters violate the record constraints")
    if r.instantiate(out) != g:
        raise AlgebraError("instantiated record differs from the normal form")
    return Classification(r, out, conj, g)


def verify_certificate(source: Element, result: Classification) -> bool:
    return result.conjugator.apply(source) == result.record.instantiate(result.params)


# ---------------------------------------------------------------- audits


def sample_parameters(r: SubalgebraRecord, rng) -> dict:
    """Random admissible parameters: nonzero small rationals, signs, formal odd constants."""
    params = {}
    names = r.parameters()
    free = [n for n in names if n in REAL_LINEAR]
    eqs = [c.lhs for c in r.constraints if c.lhs is not None]
    solved = set()
    for eq in eqs:
        target = next(n for n in free if Symbol(n, "const") in eq.free_symbols and n not in solved)
        solved.add(target)
    for _ in range(100):
        for n in free:
            if n not in solved:
                params[n] = Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 4))
        ok = True
        for eq, target in zip(eqs, sorted(solved, key=free.index)):
            sym = Symbol(target, "const")
            known = {Symbol(n, "const"): Expr.const(v) for n, v in params.items() if n in REAL_LINEAR and n != target}
            e = eq.subs(known)
            coef = e.pdiff(sym).as_fraction()
            const = e.subs({sym: 0}).as_fraction()
            params[target] = -const / coef
            if params[target] == 0:
                ok = False
        if ok:
            break
    for n in names:
        if n in REAL_FREE:
            params[n] = Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 3))
        elif n in SIGNS:
            params[n] = Fraction(rng.choice([-1, 1]))
        elif n not in params:
            params[n] = parse("!" + n) if n in ("alpha", "beta", "gamma", "delta") else params.get(n)
    return params


def verify_fixed_points(samples: int = 3, seed: int = 0) -> dict:
    """Normalize sampled instances of every record; report failures."""
    import random

    rng = random.Random(seed)
    failures = []
    checked = 0
    for r in _default_records():
        for _ in range(samples):
            params = sample_parameters(r, rng)
            g = r.instantiate(params)
            try:
                res = normalize_element(g)
            except (AlgebraError, NoMatchError, GrassmannError) as exc:
                failures.append((r.id, params, str(exc)))
                continue
            checked += 1
            same = res.id == r.id or (r.flags.startswith("suspect-duplicate") and
                                      res.record.text == r.text)
            if not same:
                failures.append((r.id, params, f"normalized to L{res.id}"))
    return {"checked": checked, "failures": failures}


def random_conjugator(rng, odd_names=("s1", "s2", "s3")) -> Conjugator:
    steps = []
    for _ in range(rng.randint(1, 5)):
        gname = rng.choice(GENERATORS)
        if gname in M_NAMES:
            p = Expr.const(Fraction(rng.randint(1, 5), rng.randint(1, 5)))
        elif gname.startswith("Z"):
            p = parse("!" + rng.choice(odd_names)) * rng.randint(1, 3)
        else:
            p = Expr.const(Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
        steps.append(Step(gname, p))
    return Conjugator(tuple(steps), Expr.const(rng.choice([-3, -1, 1, 2])))
