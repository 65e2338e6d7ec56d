"""Command-line entry point: ``pprog run`` and ``pprog export``.

Exit codes for ``run``: 0 non-contextual, 2 contextual, 3 inconsistent or
infeasible, 1 program or IO error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import scenario as scen
from .distribution import PTable
from .errors import PProgramError
from .evaluator import evaluate
from .frontend import load
from .pipeline import (
    Analysis,
    InconsistentAcyclic,
    NonContextualAcyclic,
    NonContextualScenario,
    ScenarioInfeasible,
    StrongContextual,
    analyze,
    build_scenario,
    resolve_design,
)
from .schema import build_schema, is_acyclic, render_trace

EXIT_CODES = {
    NonContextualAcyclic: 0,
    NonContextualScenario: 0,
    StrongContextual: 2,
    InconsistentAcyclic: 3,
    ScenarioInfeasible: 3,
}


def fmt(p) -> str:
    if isinstance(p, Fraction):
        return f"{p.numerator}/{p.denominator}"
    return f"{p:.6f}"


def parse_prob(text: str):
    """Inverse of :func:`fmt`: ``n/d`` is exact, a decimal is a float."""
    return Fraction(text) if "/" in text else float(text)


def table_dict(t: PTable) -> dict:
    return {
        "header": list(t.header),
        "rows": [{"values": list(k), "p": fmt(p)} for k, p in t.rows.items()],
    }


def verdict_dict(a: Analysis) -> dict:
    v = a.verdict
    details = {"tolerance": fmt(a.tolerance) if isinstance(a.tolerance, Fraction) else a.tolerance}
    if isinstance(v, (NonContextualAcyclic, InconsistentAcyclic)):
        details["separators"] = [
            {"a": c.a, "b": c.b, "separator": list(c.separator), "distance": fmt(c.distance), "ok": c.ok}
            for c in v.report.checks
        ]
    if isinstance(v, NonContextualAcyclic):
        details["joint"] = table_dict(v.joint)
    elif isinstance(v, NonContextualScenario):
        details["model"] = {e.label(): fmt(p) for e, p in sorted(v.model.items(), key=lambda kv: kv[0].label())}
        if v.witness is not None:
            details["witness"] = {e.label(): fmt(p) for e, p in sorted(v.witness.items(), key=lambda kv: kv[0].label())}
    elif isinstance(v, StrongContextual):
        details["violatedEdges"] = [
            {"events": [e.label() for e in edge], "sum": fmt(total)} for edge, total in v.violated_edges
        ]
        details["discrepancies"] = [
            {"variable": d.variable, "contextA": d.context_a, "pA": fmt(d.p_a), "contextB": d.context_b, "pB": fmt(d.p_b)}
            for d in v.discrepancies
        ]
    return {"kind": v.kind, "details": details}


def report_dict(a: Analysis, program_name: str, dump_scenario: bool = False) -> dict:
    trace = [{"step": 1, "state": str(a.trace.initial), "action": None}]
    for i, (step, state) in enumerate(zip(a.trace.steps, a.trace.states), start=2):
        trace.append({"step": i, "state": str(state), "action": step.describe()})
    out = {
        "program": program_name,
        "mode": "sampled" if a.sampled else "exact",
        "contexts": [
            {"name": n, "mode": str(t.mode), **table_dict(t)} for n, t in a.tables.items()
        ],
        "schema": {
            "acyclic": a.acyclic,
            "edges": [{"context": n, "variables": list(vs)} for n, vs in a.schema.edges],
            "trace": trace,
        },
    }
    if a.join_tree is not None:
        jt = a.join_tree
        out["joinTree"] = {
            "edges": [{"a": x, "b": y, "separator": sorted(sep)} for x, y, sep in jt.edges],
            "ordering": list(jt.ordering),
        }
    if a.scenario is not None:
        s = a.scenario
        out["scenario"] = {"design": s.design, "vertexCount": len(s.vertices), "edgeCount": len(s.edges)}
        if dump_scenario:
            out["scenario"]["dump"] = scen.dump(s)
    out["verdict"] = verdict_dict(a)
    return out


def render_table(name: str, t: PTable) -> str:
    lines = [f"{name}:  " + "  ".join(t.header) + "  p"]
    for k, p in t.rows.items():
        lines.append("    " + "  ".join(str(x).rjust(len(h)) for x, h in zip(k, t.header)) + "  " + fmt(p))
    return "\n".join(lines)


def render_text(a: Analysis, program_name: str, dump_scenario: bool = False) -> str:
    out = [f"program: {program_name}", f"mode: {'sampled' if a.sampled else 'exact'}", "", "== contexts"]
    for n, t in a.tables.items():
        out.append(render_table(n, t))
    out += ["", "== schema", f"acyclic: {'yes' if a.acyclic else 'no'}", render_trace(a.trace, explain=True)]
    if a.join_tree is not None:
        jt = a.join_tree
        out += ["", "== join tree"]
        out += [f"{x} -- {y}  separator {{{','.join(sorted(sep))}}}" for x, y, sep in jt.edges]
        out.append("ordering: " + " ⊗ ".join(jt.ordering))
    if a.scenario is not None:
        s = a.scenario
        out += ["", "== scenario", f"design: {s.design}, {len(s.vertices)} vertices, {len(s.edges)} edges"]
        if dump_scenario:
            out.append(scen.dump(s).rstrip())
    v = a.verdict
    out += ["", "== verdict", v.kind]
    if isinstance(v, NonContextualAcyclic):
        out.append(render_table("joint", v.joint))
    elif isinstance(v, InconsistentAcyclic):
        for c in v.report.failures:
            out.append(f"{c.a}/{c.b} disagree on {{{','.join(c.separator)}}}: distance {fmt(c.distance)}")
    elif isinstance(v, StrongContextual):
        for edge, total in v.violated_edges:
            out.append("edge {" + " | ".join(e.label() for e in edge) + f"}} sums to {fmt(total)}")
        for d in v.discrepancies:
            out.append(f"p({d.variable}=1): {fmt(d.p_a)} in {d.context_a} vs {fmt(d.p_b)} in {d.context_b}")
    elif isinstance(v, NonContextualScenario):
        out.append("observed assignment is a probabilistic model on every edge")
    return "\n".join(out) + "\n"


def _sampling(args):
    if args.samples is None and args.seed is None:
        return None, None
    return args.samples, args.seed


def _tolerance(args):
    if args.tolerance is None:
        return None
    sampled = args.samples is not None or args.seed is not None
    return float(args.tolerance) if sampled else Fraction(args.tolerance)


def cmd_run(args) -> int:
    source = Path(args.path).read_text(encoding="utf-8")
    vp = load(source)
    samples, seed = _sampling(args)
    a = analyze(vp, samples=samples, seed=seed, tol=_tolerance(args), lp=args.lp)
    name = Path(args.path).name
    if args.format == "json":
        sys.stdout.write(json.dumps(report_dict(a, name, args.dump_scenario), indent=2) + "\n")
    else:
        sys.stdout.write(render_text(a, name, args.dump_scenario))
    return EXIT_CODES[type(a.verdict)]


def cmd_export(args) -> int:
    path = Path(args.path)
    vp = load(path.read_text(encoding="utf-8"))
    samples, seed = _sampling(args)
    tables = evaluate(vp.contexts, samples=samples, seed=seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for n, t in tables.items():
        (out / f"{n}.csv").write_text(t.to_csv(), encoding="utf-8")
        print(out / f"{n}.csv")
    if args.dump_scenario:
        design = resolve_design(vp, is_acyclic(build_schema(tables)))
        if design != "acyclic":
            target = out / f"{path.stem}.scenario.txt"
            target.write_text(scen.dump(build_scenario(vp, design)), encoding="utf-8")
            print(target)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pprog", description="Contextuality analysis of P-programs")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("path", help="P-program source (.pp)")
        sp.add_argument("--exact", action="store_true", help="exact enumeration (default)")
        sp.add_argument("--samples", type=int, help="sample N joint outcomes per context")
        sp.add_argument("--seed", type=int, help="global seed for sampling (default 0)")
        sp.add_argument("--dump-scenario", action="store_true", help="also emit the scenario listing")

    run = sub.add_parser("run", help="evaluate a program and report its verdict")
    common(run)
    run.add_argument("--tolerance", help="override the comparison tolerance")
    run.add_argument("--format", choices=("text", "json"), default="text")
    run.add_argument("--lp", action="store_true", help="also check that the scenario admits any model")
    run.set_defaults(func=cmd_run)

    exp = sub.add_parser("export", help="write one CSV p-table per context")
    common(exp)
    exp.add_argument("--out", default=".", help="output directory")
    exp.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.exact and (args.samples is not None or args.seed is not None):
        print("error: --exact cannot be combined with --samples/--seed", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except PProgramError as e:
        print(f"{args.path}: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
