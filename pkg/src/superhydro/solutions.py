"""Catalog of exact invariant solutions and their residual check.

Each record assigns an expression to every field.  Substituting the
assignments into the component system (with the record's constraints on
products of fermionic constants) must give eight vanishing residuals.
Arbitrary functions stay symbolic throughout.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace

from .grassmann import FIELD_PARITY, Expr, apply_constraints
from .model import EQUATION_ORDER, ComponentSystem, zero_parameter_system

CATALOG_FILE = "solutions.txt"
_HEADER = re.compile(r"^\[(\w+)\]\s*$", re.M)


@dataclass(frozen=True)
class SolutionRecord:
    id: str
    subalgebra: str
    assignments: dict  # field -> Expr
    constraints: tuple = ()  # (lhs, rhs, text)
    functions: tuple = ()  # Expr atoms declared arbitrary

    def without_constraint(self, index: int) -> "SolutionRecord":
        return replace(self, constraints=self.constraints[:index] + self.constraints[index + 1:])

    def with_assignment(self, name: str, value: Expr) -> "SolutionRecord":
        return replace(self, assignments={**self.assignments, name: value})


def _parse_block(rid: str, body: str) -> SolutionRecord:
    from .cli.parser import parse

    kv = {}
    for line in body.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, val = line.partition(":")
        if not sep:
            raise ValueError(f"{rid}: expected 'key: value', got {line!r}")
        kv[key.strip()] = val.strip()
    missing = set(FIELD_PARITY) - set(kv)
    if missing:
        raise ValueError(f"{rid}: no assignment for {sorted(missing)}")
    constraints = []
    for text in filter(None, (c.strip() for c in kv.get("constraint", "").split(";"))):
        lhs, _, rhs = text.partition("=")
        constraints.append((parse(lhs), parse(rhs), text))
    functions = tuple(parse(f) for f in filter(None, (s.strip() for s in kv.get("function", "").split(";"))))
    return SolutionRecord(
        rid, kv.get("subalgebra", ""), {k: parse(kv[k]) for k in FIELD_PARITY}, tuple(constraints), functions
    )


def load_catalog(text: str) -> list:
    parts = _HEADER.split(text)
    return [_parse_block(rid, body) for rid, body in zip(parts[1::2], parts[2::2])]


def catalog() -> list:
    from .cli.golden import read_data

    return load_catalog(read_data(CATALOG_FILE))


def record(rid: str) -> SolutionRecord:
    for r in catalog():
        if r.id == rid:
            return r
    raise KeyError(f"no solution {rid}")


def verify(rec: SolutionRecord, system: ComponentSystem | None = None) -> list:
    """The eight residuals, in equation order, with denominators cleared."""
    system = system or zero_parameter_system()
    rules = [(lhs, rhs) for lhs, rhs, _ in rec.constraints]
    out = []
    for name in EQUATION_ORDER:
        r = system[name].substitute_fields(rec.assignments)
        if rules:
            r = apply_constraints(r, rules)
        out.append(r.clear_denominators())
    return out


def is_solution(rec: SolutionRecord, system: ComponentSystem | None = None) -> bool:
    return all(r.is_zero() for r in verify(rec, system))


def sign_flips(rec: SolutionRecord):
    """Every record obtained by negating one term of one assignment."""
    for name in FIELD_PARITY:
        value = rec.assignments[name]
        for i, (mono, c) in enumerate(value.terms):
            flipped = Expr._from_mono(mono, -c)
            rest = Expr(value.terms[:i] + value.terms[i + 1:])
            yield name, i, rec.with_assignment(name, rest + flipped)


def erratum_search(rec: SolutionRecord, system: ComponentSystem | None = None) -> list:
    """Single-term sign flips that turn ``rec`` into a verified solution."""
    system = system or zero_parameter_system()
    return [(name, i) for name, i, cand in sign_flips(rec) if is_solution(cand, system)]


def report(records=None, system: ComponentSystem | None = None) -> dict:
    """JSON-ready verification report."""
    from .cli.render import to_text

    records = catalog() if records is None else records
    system = system or zero_parameter_system()
    out = []
    for rec in records:
        res = verify(rec, system)
        out.append({
            "id": rec.id,
            "subalgebra": rec.subalgebra,
            "constraints": [text for _, _, text in rec.constraints],
            "residuals": [
                {"equation": name, "zero": r.is_zero(), "residual": to_text(r)}
                for name, r in zip(EQUATION_ORDER, res)
            ],
            "zero_count": sum(r.is_zero() for r in res),
        })
    return {"records": out, "all_zero": all(r["zero_count"] == len(EQUATION_ORDER) for r in out)}


def report_json(records=None) -> str:
    return json.dumps(report(records), indent=2, sort_keys=True)
