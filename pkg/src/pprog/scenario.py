"""Event-level contextuality scenarios and their compositions.

A scenario is a hypergraph whose vertices are outcome events and whose edges
are complete measurements.  Products of two component scenarios give the
direct, Foulis-Randall and one-way (signalling) compositions; two contexts
over the same variables in different orders give an order-effects scenario.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .errors import HeaderMismatch, MissingContextTable, VariableOverlap


@dataclass(frozen=True)
class Event:
    assignment: tuple[tuple[str, int], ...]  # sorted by variable name
    context: Optional[str] = None

    @classmethod
    def of(cls, values: Mapping[str, int], context: Optional[str] = None) -> "Event":
        if not values:
            raise ValueError("an event assigns at least one variable")
        return cls(tuple(sorted(values.items())), context)

    @property
    def values(self) -> dict:
        return dict(self.assignment)

    @property
    def variables(self) -> frozenset:
        return frozenset(v for v, _ in self.assignment)

    def merge(self, other: "Event") -> "Event":
        return Event.of({**self.values, **other.values})

    def label(self) -> str:
        body = ",".join(f"{v}={x}" for v, x in self.assignment)
        return f"{self.context}:{body}" if self.context else body


@dataclass(frozen=True)
class Scenario:
    vertices: frozenset
    edges: frozenset  # of frozensets of Event
    design: str

    @property
    def variables(self) -> frozenset:
        return frozenset(v for e in self.vertices for v in e.variables)

    def sorted_edges(self) -> list[list[Event]]:
        return sorted((sorted(e, key=Event.label) for e in self.edges), key=lambda es: [x.label() for x in es])


def is_complete_measurement(events: Iterable[Event]) -> bool:
    """True iff the events are mutually exclusive and jointly exhaustive.

    Checked structurally: some variable is assigned by every event, both of its
    values occur, and each branch is again complete once that variable is
    dropped.  Adaptive (FR-style) edges pass; arbitrary subsets do not.
    """
    rows = [e.values for e in events]
    return _complete(rows)


def _complete(rows) -> bool:
    if not rows:
        return False
    if all(not r for r in rows):
        return len(rows) == 1
    if any(not r for r in rows):
        return False
    common = set(rows[0]).intersection(*rows[1:])
    for v in sorted(common):
        branches = []
        for x in (0, 1):
            branches.append([{k: y for k, y in r.items() if k != v} for r in rows if r[v] == x])
        if all(_complete(b) for b in branches):
            return True
    return False


def check_scenario(s: Scenario) -> None:
    covered = set()
    for e in s.edges:
        if not e:
            raise ValueError("empty edge")
        if not is_complete_measurement(e):
            raise ValueError(f"edge {sorted(v.label() for v in e)} is not a complete measurement")
        covered |= e
    if covered != set(s.vertices):
        raise ValueError("some vertex lies in no edge")


def component_scenario(component) -> Scenario:
    """One two-outcome edge per variable of a component definition."""
    variables = getattr(component, "variables", component)
    edges = frozenset(frozenset(Event.of({v: x}) for x in (0, 1)) for v in variables)
    vertices = frozenset(ev for e in edges for ev in e)
    return Scenario(vertices, edges, "component")


def _disjoint(xa: Scenario, xb: Scenario):
    shared = xa.variables & xb.variables
    if shared:
        raise VariableOverlap(f"scenarios share variables {sorted(shared)}")


def _vertex_product(xa: Scenario, xb: Scenario) -> frozenset:
    return frozenset(a.merge(b) for a in xa.vertices for b in xb.vertices)


def direct_product(xa: Scenario, xb: Scenario) -> Scenario:
    _disjoint(xa, xb)
    edges = frozenset(
        frozenset(a.merge(b) for a in ea for b in eb) for ea in xa.edges for eb in xb.edges
    )
    return Scenario(_vertex_product(xa, xb), edges, "direct")


def _spanning_edges(xa: Scenario, xb: Scenario) -> set:
    """Edges sum_{v in ea} {v} x f(v) over every ea in E(xa) and f: ea -> E(xb)."""
    out = set()
    b_edges = [sorted(e, key=Event.label) for e in xb.edges]
    for ea in xa.edges:
        ea = sorted(ea, key=Event.label)
        for choice in itertools.product(b_edges, repeat=len(ea)):
            out.add(frozenset(v.merge(w) for v, eb in zip(ea, choice) for w in eb))
    return out


def fr_product(xa: Scenario, xb: Scenario) -> Scenario:
    _disjoint(xa, xb)
    edges = _spanning_edges(xa, xb) | _spanning_edges(xb, xa)
    return Scenario(_vertex_product(xa, xb), frozenset(edges), "fr")


def fr_oneway(source: Scenario, target: Scenario, tag: str = "oneway") -> Scenario:
    """Only the source-rooted spanning edges: the target cannot signal back
    to the source, while the source may influence the target."""
    _disjoint(source, target)
    return Scenario(_vertex_product(source, target), frozenset(_spanning_edges(source, target)), tag)


def bind_contexts(s: Scenario, headers: Mapping[str, Iterable[str]]) -> Scenario:
    """Tag each product vertex with the context measuring exactly its variables."""
    by_vars = {}
    for name, vs in headers.items():
        key = frozenset(vs)
        if key in by_vars:
            raise ValueError(f"contexts {by_vars[key]} and {name} measure the same variables")
        by_vars[key] = name
    relabel = {}
    for v in s.vertices:
        if v.variables not in by_vars:
            raise MissingContextTable(f"no context measures {sorted(v.variables)}")
        relabel[v] = Event(v.assignment, by_vars[v.variables])
    edges = frozenset(frozenset(relabel[v] for v in e) for e in s.edges)
    return Scenario(frozenset(relabel.values()), edges, s.design)


def _context_events(name: str, joint) -> list[Event]:
    return [Event.of(dict(zip(joint, key)), name) for key in itertools.product((1, 0), repeat=len(joint))]


def order_scenario(c1, c2) -> Scenario:
    """Two contexts over one variable set, measured in different orders.

    Besides the two context edges there are two substitution edges, splitting
    on the first variable measured in ``c1``: for each value ``a`` they keep
    ``c1``'s events with that value and swap the rest for their ``c2``
    equivalents.  Identical orders degenerate to the two context edges.
    """
    j1, j2 = tuple(c1.joint), tuple(c2.joint)
    if set(j1) != set(j2):
        raise HeaderMismatch(f"{c1.name} measures {j1}, {c2.name} measures {j2}")
    ev1, ev2 = _context_events(c1.name, j1), _context_events(c2.name, j2)
    edges = {frozenset(ev1), frozenset(ev2)}
    if j1 != j2:
        first = j1[0]
        for a in (1, 0):
            keep = [e for e in ev1 if e.values[first] == a]
            swap = [e for e in ev2 if e.values[first] != a]
            edges.add(frozenset(keep + swap))
    return Scenario(frozenset(ev1 + ev2), frozenset(edges), "order")


def observed_assignment(s: Scenario, tables: Mapping) -> dict:
    out = {}
    for v in s.vertices:
        t = tables.get(v.context)
        if t is None:
            raise MissingContextTable(f"vertex {v.label()} has no table")
        if set(t.header) != v.variables:
            raise HeaderMismatch(f"vertex {v.label()} is not a full row of {v.context}")
        out[v] = t.prob(v.values)
    return out


def dump(s: Scenario) -> str:
    """Stable text listing of vertices and edges."""
    lines = [f"design: {s.design}", f"vertices ({len(s.vertices)}):"]
    lines.extend("  " + v.label() for v in sorted(s.vertices, key=Event.label))
    lines.append(f"edges ({len(s.edges)}):")
    for e in s.sorted_edges():
        lines.append("  {" + " | ".join(v.label() for v in e) + "}")
    return "\n".join(lines) + "\n"
