"""The end-to-end contextuality verdict for a validated program."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

from .distribution import PTable, Sampled, marginalize
from .errors import UnsupportedSchema, ValidationError
from .evaluator import evaluate
from .feasibility import lp_feasible, verify_assignment
from .frontend import Design, ValidatedProgram
from .joiner import ConsistencyReport, check_marginal_consistency, hoeffding_epsilon, join_all
from .scenario import Scenario, bind_contexts, component_scenario, fr_oneway, fr_product, observed_assignment, order_scenario
from .schema import GrahamTrace, JoinTree, SchemaHypergraph, build_schema, graham_reduce, join_tree

ACYCLIC = "acyclic"


@dataclass(frozen=True)
class MarginalDiscrepancy:
    variable: str
    context_a: str
    p_a: object  # p(variable = 1) in context_a
    context_b: str
    p_b: object


@dataclass(frozen=True)
class NonContextualAcyclic:
    joint: PTable
    report: ConsistencyReport
    kind = "non-contextual-acyclic"


@dataclass(frozen=True)
class InconsistentAcyclic:
    report: ConsistencyReport
    kind = "inconsistent-acyclic"


@dataclass(frozen=True)
class NonContextualScenario:
    model: dict  # the observed assignment, verified on every edge
    witness: Optional[dict]  # a data-free model from the LP
    kind = "non-contextual-scenario"


@dataclass(frozen=True)
class StrongContextual:
    violated_edges: list
    discrepancies: list = field(default_factory=list)
    kind = "strong-contextual"


@dataclass(frozen=True)
class ScenarioInfeasible:
    kind = "scenario-infeasible"


Verdict = Union[NonContextualAcyclic, InconsistentAcyclic, NonContextualScenario, StrongContextual, ScenarioInfeasible]


@dataclass
class Analysis:
    program: ValidatedProgram
    tables: dict
    schema: SchemaHypergraph
    trace: GrahamTrace
    acyclic: bool
    design: str  # "acyclic", "order", "no-signal" or "signal"
    verdict: Verdict
    tolerance: object
    join_tree: Optional[JoinTree] = None
    scenario: Optional[Scenario] = None

    @property
    def sampled(self) -> bool:
        return any(isinstance(t.mode, Sampled) for t in self.tables.values())


def resolve_design(vp: ValidatedProgram, acyclic: bool) -> str:
    d = vp.directive
    ctxs = vp.contexts
    order_pattern = (
        len(ctxs) == 2
        and set(ctxs[0].joint) == set(ctxs[1].joint)
        and ctxs[0].joint != ctxs[1].joint
    )
    if d.design is Design.ORDER:
        if len(ctxs) != 2 or set(ctxs[0].joint) != set(ctxs[1].joint):
            raise ValidationError("design 'order' needs exactly two contexts over the same variables")
        return "order"
    if d.design is Design.NO_SIGNAL:
        return "no-signal"
    if d.design is Design.SIGNAL:
        return "signal"
    if order_pattern:
        return "order"
    if acyclic:
        return ACYCLIC
    raise UnsupportedSchema(
        f"schema {build_schema((c.name, c.joint) for c in ctxs)} is cyclic and the program names no "
        "design; use 'no-signal' or 'signal(X->Y)' with two components, or 'order'"
    )


def marginal_discrepancies(tables: dict, tol=0) -> list[MarginalDiscrepancy]:
    """Every pair of contexts whose p(v = 1) differ by more than ``tol``."""
    out = []
    names = list(tables)
    variables = sorted({v for t in tables.values() for v in t.header})
    for v in variables:
        having = [n for n in names if v in tables[n].header]
        for a, b in itertools.combinations(having, 2):
            pa = marginalize(tables[a], (v,)).rows[(1,)]
            pb = marginalize(tables[b], (v,)).rows[(1,)]
            if abs(pa - pb) > tol:
                out.append(MarginalDiscrepancy(v, a, pa, b, pb))
    return out


def _min_samples(tables) -> Optional[int]:
    ns = [t.mode.n for t in tables.values() if isinstance(t.mode, Sampled)]
    return min(ns) if ns else None


def build_scenario(vp: ValidatedProgram, design: str) -> Scenario:
    ctxs = vp.contexts
    if design == "order":
        return order_scenario(ctxs[0], ctxs[1])
    comps = vp.program.components
    x = {c.name: component_scenario(c) for c in comps}
    if design == "no-signal":
        s = fr_product(x[comps[0].name], x[comps[1].name])
    else:
        d = vp.directive
        s = fr_oneway(x[d.source], x[d.target], tag=f"oneway({d.source}->{d.target})")
    return bind_contexts(s, {c.name: c.joint for c in ctxs})


def analyze(vp: ValidatedProgram, samples=None, seed=None, tol=None, lp: bool = False) -> Analysis:
    """Evaluate every context named by the directive and decide contextuality.

    Exact mode (the default) compares with zero tolerance.  Sampled mode uses
    a 99% Hoeffding bound per cell, scaled by edge size for scenario sums;
    ``tol`` overrides either.
    """
    tables = evaluate(vp.contexts, samples=samples, seed=seed)
    schema = build_schema(tables)
    residual, trace = graham_reduce(schema)
    acyclic = not residual.edges
    design = resolve_design(vp, acyclic)
    n = _min_samples(tables)
    cell_tol = (0 if n is None else hoeffding_epsilon(n)) if tol is None else tol

    if design == ACYCLIC:
        jt = join_tree(schema)
        report = check_marginal_consistency(jt, tables, cell_tol)
        if not report.ok:
            v = InconsistentAcyclic(report)
        else:
            v = NonContextualAcyclic(join_all(jt, tables, cell_tol), report)
        return Analysis(vp, tables, schema, trace, acyclic, design, v, cell_tol, join_tree=jt)

    scenario = build_scenario(vp, design)
    if tol is None and n is not None:
        edge_tol = max(len(e) for e in scenario.edges) * cell_tol
    else:
        edge_tol = cell_tol
    if lp and lp_feasible(scenario) is None:
        v = ScenarioInfeasible()
    else:
        observed = observed_assignment(scenario, tables)
        violated = verify_assignment(scenario, observed, edge_tol)
        if violated:
            v = StrongContextual(violated, marginal_discrepancies(tables, cell_tol))
        else:
            v = NonContextualScenario(observed, lp_feasible(scenario))
    return Analysis(vp, tables, schema, trace, acyclic, design, v, edge_tol, scenario=scenario)


def verdict(vp: ValidatedProgram, samples=None, seed=None, tol=None, lp: bool = False) -> Verdict:
    return analyze(vp, samples, seed, tol, lp).verdict
