"""Command-line entry point.

Every verb builds a report dictionary ``{"command", "ok", "diffs", "result"}``
which is rendered as text, JSON or LaTeX.  The exit status is 0 iff the
report has no golden diffs and no nonzero residuals.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from ..grassmann import Expr
from .parser import ParseError, parse
from .render import to_tex, to_text

VERBS = ("expand", "bracket", "table", "classify", "reduce", "verify", "list-subalgebras", "parse-check")


class CommandError(Exception):
    pass


def _value_text(v) -> str:
    if isinstance(v, Expr):
        return to_text(v)
    if isinstance(v, Fraction) and v.denominator == 1:
        return str(v.numerator)
    return str(v)


def _element_tex(g) -> str:
    parts = []
    for name, c in g.items():
        gen = name[0] + "_{" + name[1:] + "}"
        if c == 1:
            parts.append(gen)
        elif len(c.terms) == 1:
            parts.append(to_tex(c) + " " + gen)
        else:
            parts.append(r"\left(" + to_tex(c) + r"\right) " + gen)
    return " + ".join(parts) if parts else "0"


def _report(command, result, diffs=(), ok=None):
    diffs = list(diffs)
    return {"command": command, "ok": (not diffs) if ok is None else ok and not diffs, "diffs": diffs, "result": result}


# ---------------------------------------------------------------- verbs


def cmd_expand(args):
    from ..model import EQUATION_ORDER, component_system, zero_parameter_system
    from .golden import read_labelled

    if args.params == "zero":
        cs, golden = zero_parameter_system(), read_labelled("zero_system.txt")
    else:
        cs, golden = component_system(), read_labelled("general_system.txt")
    eqs, diffs = [], []
    for name in EQUATION_ORDER:
        e = cs[name]
        eqs.append({"equation": name, "text": to_text(e), "tex": to_tex(e)})
        if golden.get(name) != e:
            diffs.append({"equation": name, "computed": to_text(e), "golden": to_text(golden[name]) if name in golden else None})
    return _report("expand", {"params": args.params, "equations": eqs}, diffs)


def cmd_bracket(args):
    from ..classify import parse_element
    from ..superalgebra import superbracket

    a, b = parse_element(args.a), parse_element(args.b)
    c = superbracket(a, b)
    return _report("bracket", {"a": str(a), "b": str(b), "value": str(c), "tex": _element_tex(c)})


def cmd_table(args):
    from ..classify import parse_element
    from ..superalgebra import GENERATORS, structure_table
    from .golden import read_table

    table, golden = structure_table(), read_table()
    entries, diffs = [], []
    for row in GENERATORS:
        for col in GENERATORS:
            v = table[(row, col)]
            entries.append({"row": row, "col": col, "value": str(v), "tex": _element_tex(v)})
            if parse_element(golden[(row, col)]) != v:
                diffs.append({"row": row, "col": col, "computed": str(v), "golden": golden[(row, col)]})
    return _report("table", {"entries": entries}, diffs)


def cmd_classify(args):
    from ..classify import NoMatchError, normalize_element, parse_element, verify_certificate

    g = parse_element(args.element)
    try:
        c = normalize_element(g)
    except NoMatchError as exc:
        return _report("classify", {"element": str(g), "error": str(exc)}, ok=False)
    conj = c.conjugator
    return _report("classify", {
        "element": str(g),
        "id": c.record.label,
        "representative": c.record.text,
        "params": {k: _value_text(v) for k, v in c.params.items()},
        "chain": [s.describe() for s in conj.chain],
        "ray_scale": to_text(Expr.const(conj.ray_scale) if not isinstance(conj.ray_scale, Expr) else conj.ray_scale),
        "normal_form": str(c.normal_form),
        "normal_form_tex": _element_tex(c.normal_form),
        "certificate": verify_certificate(g, c),
    }, ok=verify_certificate(g, c))


def _chart_result(chart, reduced):
    return {
        "xi": to_text(chart.xi),
        "ansatz": {k: to_text(v) for k, v in chart.ansatz.items()},
        "ansatz_tex": {k: to_tex(v) for k, v in chart.ansatz.items()},
        "equations": [
            {"equation": k, "text": to_text(reduced.equations[k]), "tex": to_tex(reduced.equations[k]),
             "prefactor": to_text(reduced.prefactors[k])}
            for k in reduced.equations
        ],
    }


def cmd_reduce(args):
    from .. import reduce as rd
    from ..classify import parse_element

    if args.element:
        chart = rd.invariants(parse_element(args.element))
        bad = [k for k, v in rd.check_invariance(chart).items() if v.terms]
        result = _chart_result(chart, rd.reduced_system(chart))
        result["invariant"] = not bad
        return _report("reduce", result, ok=not bad)
    if args.subalgebra not in rd.SELECTED:
        raise CommandError(f"unknown subalgebra {args.subalgebra}; golden rows: {', '.join(rd.SELECTED)}")
    row = rd.load_row(args.subalgebra)
    chart = rd.invariants(row.element)
    rep = rd.compare_row(args.subalgebra)
    result = _chart_result(chart, rd.reduced_system(chart))
    result.update(subalgebra=args.subalgebra, element=str(row.element), invariant=rep.invariant,
                  reference_chart_equivalent=rep.chart_matches)
    diffs = [
        {"equation": e.name, "computed": to_text(e.computed), "golden": to_text(e.golden),
         "prefactor": to_text(e.prefactor)}
        for e in rep.equations if not e.match
    ]
    if not rep.chart_matches:
        diffs.append({"equation": "chart", "computed": result["xi"], "golden": to_text(row.chart.xi), "prefactor": "1"})
    return _report("reduce", result, diffs, ok=rep.invariant)


def cmd_verify(args):
    from .. import solutions

    recs = solutions.catalog()
    if args.solution != "all":
        recs = [r for r in recs if r.id == args.solution]
        if not recs:
            raise CommandError(f"unknown solution {args.solution}")
    rep = solutions.report(recs)
    return _report("verify", rep, ok=rep["all_zero"])


def cmd_list(args):
    from ..classify import representatives

    out = []
    for r in representatives():
        if args.stage is not None and r.stage != args.stage:
            continue
        out.append({"id": r.label, "element": r.text, "constraints": [c.text for c in r.constraints],
                    "stage": r.stage, "kind": r.kind, "flags": r.flags})
    return _report("list-subalgebras", {"records": out})


def _golden_expressions():
    from .. import reduce as rd
    from .golden import read_data

    for name in ("zero_system.txt", "general_system.txt", "classical_system.txt"):
        for line in read_data(name).splitlines():
            if line.strip() and not line.startswith("#"):
                yield name, line.partition(":")[2]
    for rid in rd.SELECTED:
        for line in read_data(f"reductions/{rid}.txt").splitlines():
            key, _, body = line.partition(":")
            if line.strip() and not line.startswith("#") and key.strip() not in ("element", "rename"):
                yield f"reductions/{rid}.txt", body
    for line in read_data("solutions.txt").splitlines():
        key, _, body = line.partition(":")
        if key.strip() in ("R", "S", "eta", "psi", "pi", "omega", "U", "V"):
            yield "solutions.txt", body


def cmd_parse_check(args):
    sources = [("argv", t) for t in args.expressions] or list(_golden_expressions())
    checked, diffs = [], []
    for src, text in sources:
        e = parse(text)
        back = to_text(e)
        if parse(back) != e:
            diffs.append({"source": src, "input": text.strip(), "rendered": back})
        checked.append({"source": src, "text": back, "tex": to_tex(e)})
    return _report("parse-check", {"count": len(checked), "expressions": checked if args.expressions else []}, diffs)


# ---------------------------------------------------------------- output


def _text(rep) -> str:
    r, cmd = rep["result"], rep["command"]
    lines = []
    if cmd == "expand":
        lines += [f"{e['equation']}: {e['text']}" for e in r["equations"]]
    elif cmd == "bracket":
        lines.append(f"[{r['a']}, {r['b']}] = {r['value']}")
    elif cmd == "table":
        lines.append(f"{len(r['entries'])} entries")
    elif cmd == "classify":
        if "error" in r:
            lines.append(f"no match: {r['error']}")
        else:
            params = ", ".join(f"{k}={'+' + v if k in ('eps', 'mu', 'nu') and not v.startswith('-') else v}"
                               for k, v in r["params"].items())
            lines.append(r["id"] + (f", {params}" if params else ""))
            lines.append(f"representative: {r['normal_form']}")
            lines += [f"  step {i + 1}: {s}" for i, s in enumerate(r["chain"])]
            lines.append(f"  ray scale: {r['ray_scale']}")
    elif cmd == "reduce":
        lines.append(f"xi = {r['xi']}")
        lines += [f"{k} = {v}" for k, v in r["ansatz"].items()]
        lines += [f"{e['equation']}: {e['text']} = 0" for e in r["equations"]]
        if "subalgebra" in r:
            lines.append(f"golden diffs: {len(rep['diffs'])}")
    elif cmd == "verify":
        for rec in r["records"]:
            lines.append(f"{rec['id']}: {rec['zero_count']}/{len(rec['residuals'])} residuals zero")
            lines += [f"  {x['equation']}: {x['residual']}" for x in rec["residuals"] if not x["zero"]]
    elif cmd == "list-subalgebras":
        lines += [f"{x['id']} | {x['element']} | stage {x['stage']} | {x['kind']}" + (f" | {x['flags']}" if x["flags"] else "")
                  for x in r["records"]]
    elif cmd == "parse-check":
        lines += [x["text"] for x in r["expressions"]]
        lines.append(f"{r['count']} expressions round-trip" if not rep["diffs"] else f"{len(rep['diffs'])} round-trip failures")
    for d in rep["diffs"]:
        lines.append("DIFF " + json.dumps(d, sort_keys=True))
    return "\n".join(lines)


def _latex(rep) -> str:
    r, cmd = rep["result"], rep["command"]
    if cmd == "expand":
        rows = [e["tex"] + " = 0" for e in r["equations"]]
    elif cmd == "bracket":
        rows = [r["tex"]]
    elif cmd == "table":
        rows = [f"[{x['row']}, {x['col']}] = {x['tex']}" for x in r["entries"]]
    elif cmd == "classify":
        rows = [r.get("normal_form_tex", "")]
    elif cmd == "reduce":
        rows = [k + " = " + v for k, v in r["ansatz_tex"].items()] + [e["tex"] + " = 0" for e in r["equations"]]
    elif cmd == "parse-check":
        rows = [x["tex"] for x in r["expressions"]]
    else:
        return _text(rep)
    return "\\begin{align*}\n" + " \\\\\n".join(rows) + "\n\\end{align*}"


def render(rep, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rep, indent=2, sort_keys=True)
    if fmt == "latex":
        return _latex(rep)
    return _text(rep)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="superhydro", description="Supersymmetric hydrodynamic system toolkit.")
    p.add_argument("--format", choices=("text", "json", "latex"), default="text")
    sub = p.add_subparsers(dest="verb", required=True)
    s = sub.add_parser("expand", help="component equations")
    s.add_argument("--params", choices=("zero", "general"), default="zero")
    s = sub.add_parser("bracket", help="supercommutator of two elements")
    s.add_argument("a")
    s.add_argument("b")
    sub.add_parser("table", help="12x12 bracket table with golden diff")
    s = sub.add_parser("classify", help="representative and conjugator of an element")
    s.add_argument("element")
    s = sub.add_parser("reduce", help="invariant chart and reduced system")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--subalgebra")
    g.add_argument("--element")
    s = sub.add_parser("verify", help="residuals of catalog solutions")
    s.add_argument("--solution", default="all")
    s = sub.add_parser("list-subalgebras", help="the representative list")
    s.add_argument("--stage", type=int)
    s = sub.add_parser("parse-check", help="parse/render round trip (golden files by default)")
    s.add_argument("expressions", nargs="*")
    for sp in sub.choices.values():
        sp.add_argument("--format", choices=("text", "json", "latex"), default=argparse.SUPPRESS)
    return p


HANDLERS = {
    "expand": cmd_expand, "bracket": cmd_bracket, "table": cmd_table, "classify": cmd_classify,
    "reduce": cmd_reduce, "verify": cmd_verify, "list-subalgebras": cmd_list, "parse-check": cmd_parse_check,
}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        rep = HANDLERS[args.verb](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CommandError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(render(rep, args.format), file=out)
    return 0 if rep["ok"] else 1


def main() -> None:
    sys.exit(run())
