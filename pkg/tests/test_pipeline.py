from fractions import Fraction as F

import pytest

from conftest import program_source
from oracles import analytic_marginals
from pprog.errors import UnsupportedSchema, ValidationError
from pprog.frontend import load
from pprog.pipeline import (
    InconsistentAcyclic,
    NonContextualAcyclic,
    NonContextualScenario,
    ScenarioInfeasible,
    StrongContextual,
    analyze,
    verdict,
)


def test_coins_join_to_a_32_row_joint(coins):
    a = analyze(coins)
    assert a.design == "acyclic"
    assert isinstance(a.verdict, NonContextualAcyclic)
    assert len(a.verdict.joint.rows) == 32
    assert a.join_tree.ordering == ("P3", "P1", "P2", "P4")


def test_order_effects_verdict(order_effects):
    a = analyze(order_effects)
    assert a.design == "order"
    v = a.verdict
    assert isinstance(v, StrongContextual)
    assert sorted(total for _, total in v.violated_edges) == [F(41, 50), F(59, 50)]
    found = {(d.variable, d.p_a, d.p_b) for d in v.discrepancies}
    assert found == {("A", F(7, 10), F(13, 25)), ("B", F(59, 100), F(2, 5))}


def test_bell_verdict_and_discrepancies(bell):
    v = verdict(bell)
    assert isinstance(v, StrongContextual)
    assert len(v.violated_edges) == 8
    table = {(d.variable, d.context_a, d.context_b): (d.p_a, d.p_b) for d in v.discrepancies}
    assert table[("A1", "P1", "P2")] == (F(3, 5), F(2, 5))
    assert table[("B1", "P1", "P3")] == (F(1, 2), F(7, 10))


def test_bell_discrepancies_match_analytic_marginals(bell):
    v = verdict(bell)
    for d in v.discrepancies:
        pa = analytic_marginals(bell.program.context(d.context_a))[d.variable]
        pb = analytic_marginals(bell.program.context(d.context_b))[d.variable]
        assert (d.p_a, d.p_b) == (pa, pb) and pa != pb


def test_signal_program_violates_through_a_marginals(bell_signal):
    a = analyze(bell_signal)
    assert a.design == "signal"
    assert len(a.scenario.edges) == 8
    v = a.verdict
    assert isinstance(v, StrongContextual)
    # only edges that cross two contexts on a shared A variable can fail
    for edge, _ in v.violated_edges:
        shared = set.intersection(*(set(e.values) for e in edge))
        assert shared <= {"A1", "A2"} and len(shared) == 1
    shared_vars = {next(iter(set.intersection(*(set(e.values) for e in edge)))) for edge, _ in v.violated_edges}
    assert shared_vars == {"A1", "A2"}


def test_signal_program_with_equal_a_marginals_is_non_contextual():
    src = program_source("bell_signal").replace("var A1 = flip(0.4)", "var A1 = flip(0.6)")
    src = src.replace("var A2 = flip(0.4)", "var A2 = flip(0.2)")
    v = verdict(load(src))
    assert isinstance(v, NonContextualScenario)
    assert v.witness is not None


def test_info_fusion_is_non_contextual():
    v = verdict(load(program_source("info_fusion")))
    assert isinstance(v, NonContextualScenario)


def test_equal_order_marginals_are_non_contextual():
    src = (
        "var P1 = context(){ var A = flip(0.5) var B = flip(0.5) var p=[A,B] return {Infer({samples:10},p)} };\n"
        "var P2 = context(){ var B = flip(0.5) var A = flip(0.5) var p=[B,A] return {Infer({samples:10},p)} };\n"
        "return {model(P1,P2)}"
    )
    assert isinstance(verdict(load(src)), NonContextualScenario)


def test_inconsistent_acyclic():
    src = program_source("coins_acyclic").replace("var A1 = flip(0.6)\n     var B2", "var A1 = flip(0.4)\n     var B2")
    a = analyze(load(src))
    assert isinstance(a.verdict, InconsistentAcyclic)
    (failure,) = a.verdict.report.failures
    assert (failure.a, failure.b, failure.distance) == ("P1", "P2", F(1, 5))


def test_cyclic_schema_without_design():
    src = program_source("bell_no_signal").replace("model({design: 'no-signal',P1,P2,P3,P4})", "model(P1,P2,P3,P4)")
    with pytest.raises(UnsupportedSchema, match="cyclic"):
        analyze(load(src))


def test_explicit_order_design_needs_matching_contexts():
    src = program_source("coins_acyclic").replace("model(P1,P2,P3,P4)", "model({design: 'order',P1,P2})")
    with pytest.raises(ValidationError):
        analyze(load(src))


def test_lp_flag_keeps_feasible_scenarios():
    # constructed scenarios have equal-size edges, so a uniform model always exists
    src = (
        "var P1 = context(){ var A = flip(0.5) var p=[A] return {Infer({samples:10},p)} };\n"
        "var P2 = context(){ var A = flip(0.5) var p=[A] return {Infer({samples:10},p)} };\n"
        "return {model({design: 'order',P1,P2})}"
    )
    a = analyze(load(src), lp=True)
    assert not isinstance(a.verdict, ScenarioInfeasible)
    assert len(a.scenario.edges) == 2


def test_sampled_mode_uses_hoeffding_tolerance(coins, bell):
    a = analyze(coins, samples=5000, seed=1)
    assert a.sampled and isinstance(a.verdict, NonContextualAcyclic)
    b = analyze(bell, samples=5000, seed=1)
    assert isinstance(b.verdict, StrongContextual)
    assert b.tolerance == pytest.approx(4 * 0.0230, abs=1e-3)


def test_sampled_run_is_reproducible(bell):
    a, b = analyze(bell, samples=2000, seed=9), analyze(bell, samples=2000, seed=9)
    assert {k: t.rows for k, t in a.tables.items()} == {k: t.rows for k, t in b.tables.items()}
