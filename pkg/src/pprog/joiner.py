"""Probabilistic join of p-tables along a join tree."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .distribution import PTable, Sampled, assignments, combine_modes, marginal_distance, marginalize
from .errors import InconsistentMarginals
from .schema import JoinTree


def hoeffding_epsilon(n: int, confidence: float = 0.99) -> float:
    """Per-cell deviation bound for an empirical frequency from ``n`` draws."""
    return math.sqrt(math.log(2 / (1 - confidence)) / (2 * n))


def default_tolerance(t1: PTable, t2: PTable):
    sampled = [t.mode.n for t in (t1, t2) if isinstance(t.mode, Sampled)]
    return hoeffding_epsilon(min(sampled)) if sampled else 0


@dataclass(frozen=True)
class SeparatorCheck:
    a: str
    b: str
    separator: tuple[str, ...]
    distance: object
    tolerance: object

    @property
    def ok(self) -> bool:
        return self.distance <= self.tolerance


@dataclass(frozen=True)
class ConsistencyReport:
    checks: tuple[SeparatorCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> tuple[SeparatorCheck, ...]:
        return tuple(c for c in self.checks if not c.ok)


def check_marginal_consistency(jt: JoinTree, tables: Mapping[str, PTable], tol=None) -> ConsistencyReport:
    checks = []
    for a, b, sep in jt.edges:
        if not sep:
            continue
        s = tuple(sorted(sep))
        ta, tb = tables[a], tables[b]
        d = marginal_distance(marginalize(ta, s), marginalize(tb, s))
        checks.append(SeparatorCheck(a, b, s, d, default_tolerance(ta, tb) if tol is None else tol))
    return ConsistencyReport(tuple(checks))


def pairwise_join(t1: PTable, t2: PTable, tol=None) -> PTable:
    """p(x, y) = p1(x) p2(y) / m(s), with m the separator marginal of ``t1``.

    A zero separator mass yields zero (0/0 := 0).  Sampled inputs are
    renormalised, since within-tolerance disagreement can leak mass.
    """
    sep = tuple(v for v in t1.header if v in t2.header)
    header = t1.header + tuple(v for v in t2.header if v not in t1.header)
    mode = combine_modes(t1.mode, t2.mode)
    exact = t1.exact and t2.exact
    if not sep:
        m = None
    else:
        m1, m2 = marginalize(t1, sep), marginalize(t2, sep)
        limit = default_tolerance(t1, t2) if tol is None else tol
        d = marginal_distance(m1, m2)
        if d > limit:
            raise InconsistentMarginals(f"separator {sep}: distance {d} exceeds {limit}")
        m = m1
    pos_sep = [t1.header.index(v) for v in sep]
    rest2 = [v for v in t2.header if v not in sep]
    zero = Fraction(0) if exact else 0.0
    rows = {}
    for k1, p1 in t1.rows.items():
        s = tuple(k1[i] for i in pos_sep)
        denom = m.rows[s] if m is not None else 1
        for tail in assignments(len(rest2)):
            full = dict(zip(t1.header, k1))
            full.update(zip(rest2, tail))
            k2 = tuple(full[v] for v in t2.header)
            p2 = t2.rows[k2]
            rows[k1 + tail] = zero if denom == 0 else p1 * p2 / denom
    if not exact:
        total = sum(rows.values())
        rows = {k: p / total for k, p in rows.items()}
    return PTable(header, rows, mode)


def join_all(jt: JoinTree, tables: Mapping[str, PTable], tol=None, ordering: Optional[Sequence[str]] = None) -> PTable:
    """Fold ``pairwise_join`` along the tree construction ordering."""
    order = tuple(ordering) if ordering is not None else jt.ordering
    if set(order) != set(jt.nodes) or len(order) != len(jt.nodes):
        raise ValueError(f"ordering {order} does not cover the tree nodes")
    report = check_marginal_consistency(jt, tables, tol)
    if not report.ok:
        f = report.failures[0]
        raise InconsistentMarginals(f"{f.a}/{f.b} disagree on {f.separator}: distance {f.distance}")
    acc = tables[order[0]]
    for name in order[1:]:
        acc = pairwise_join(acc, tables[name], tol)
    return acc


def factorize(jt: JoinTree, tables: Mapping[str, PTable]) -> PTable:
    """Closed-form Markov factorisation: product of node tables divided by the
    product of separator marginals (each taken from the edge's first node).
    """
    variables = sorted({v for n in jt.nodes for v in tables[n].header})
    exact = all(tables[n].exact for n in jt.nodes)
    seps = []
    for a, _b, sep in jt.edges:
        if sep:
            seps.append(marginalize(tables[a], tuple(sorted(sep))))
    rows = {}
    for key in assignments(len(variables)):
        world = dict(zip(variables, key))
        num = Fraction(1) if exact else 1.0
        for n in jt.nodes:
            t = tables[n]
            num *= t.rows[tuple(world[v] for v in t.header)]
        den = Fraction(1) if exact else 1.0
        for m in seps:
            den *= m.rows[tuple(world[v] for v in m.header)]
        rows[key] = num / den if den != 0 else num * 0
    mode = combine_modes(*(tables[n].mode for n in jt.nodes))
    return PTable(variables, rows, mode)


def verify_recovery(joint: PTable, tables: Mapping[str, PTable], tol=0) -> bool:
    return all(marginal_distance(marginalize(joint, t.header), t) <= tol for t in tables.values())
