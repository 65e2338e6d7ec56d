"""Variable-level hypergraph of p-table headers.

Graham (GYO) reduction decides acyclicity; acyclic schemas get a join tree
built as a maximum-weight spanning tree of the edge-intersection graph.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .errors import CyclicSchema, DuplicateContextName


@dataclass(frozen=True)
class SchemaHypergraph:
    edges: tuple[tuple[str, tuple[str, ...]], ...]  # (context name, header)

    @property
    def nodes(self) -> frozenset:
        return frozenset(v for _, vs in self.edges for v in vs)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.edges)

    def edge(self, name: str) -> tuple[str, ...]:
        return dict(self.edges)[name]

    def edge_multiset(self) -> list[frozenset]:
        return sorted((frozenset(vs) for _, vs in self.edges), key=lambda s: sorted(s))

    def __str__(self):
        if not self.edges:
            return "∅"
        return ", ".join("{" + ",".join(vs) + "}" for _, vs in self.edges)


def build_schema(tables: Union[Mapping, Iterable]) -> SchemaHypergraph:
    """One edge per named table. ``tables`` maps (or pairs) names to p-tables
    or to plain variable sequences."""
    pairs = list(tables.items()) if isinstance(tables, Mapping) else list(tables)
    if not pairs:
        raise ValueError("schema needs at least one table")
    seen = set()
    edges = []
    for name, t in pairs:
        if name in seen:
            raise DuplicateContextName(name)
        seen.add(name)
        header = tuple(getattr(t, "header", t))
        edges.append((name, header))
    return SchemaHypergraph(tuple(edges))


@dataclass(frozen=True)
class DeleteEdge:
    edge: str
    contained_in: str

    def describe(self):
        return f"delete edge {self.edge} (contained in {self.contained_in})"


@dataclass(frozen=True)
class DeleteNode:
    node: str
    sole_edge: str

    def describe(self):
        return f"delete node {self.node} (only in {self.sole_edge})"


Step = Union[DeleteEdge, DeleteNode]


@dataclass(frozen=True)
class GrahamTrace:
    initial: SchemaHypergraph
    steps: tuple[Step, ...]
    states: tuple[SchemaHypergraph, ...]  # state after each step

    @property
    def final(self) -> SchemaHypergraph:
        return self.states[-1] if self.states else self.initial


def apply_step(h: SchemaHypergraph, step: Step) -> SchemaHypergraph:
    if isinstance(step, DeleteEdge):
        return SchemaHypergraph(tuple(e for e in h.edges if e[0] != step.edge))
    edges = []
    for name, vs in h.edges:
        if name == step.sole_edge:
            vs = tuple(v for v in vs if v != step.node)
            if not vs:  # an emptied edge disappears with its last node
                continue
        edges.append((name, vs))
    return SchemaHypergraph(tuple(edges))


def _edge_steps(h: SchemaHypergraph) -> list[DeleteEdge]:
    steps = []
    for (a, va), (b, vb) in itertools.permutations(h.edges, 2):
        sa, sb = set(va), set(vb)
        # equal headers: the later name is the one removed
        if sa < sb or (sa == sb and a > b):
            steps.append(DeleteEdge(a, b))
    # one step per deletable edge, witnessed by its least container
    best = {}
    for s in sorted(steps, key=lambda s: (s.edge, s.contained_in)):
        best.setdefault(s.edge, s)
    return list(best.values())


def _node_steps(h: SchemaHypergraph) -> list[DeleteNode]:
    count = {}
    for _, vs in h.edges:
        for v in vs:
            count[v] = count.get(v, 0) + 1
    return [DeleteNode(v, name) for name, vs in h.edges for v in vs if count[v] == 1]


def candidate_steps(h: SchemaHypergraph) -> list[Step]:
    return [*_edge_steps(h), *_node_steps(h)]


def _default_pick(h: SchemaHypergraph) -> Optional[Step]:
    edge_steps = _edge_steps(h)
    if edge_steps:
        return min(edge_steps, key=lambda s: s.edge)
    # peel the most recently listed edge first, its last lone node first;
    # this reproduces the classic textbook trace on the coin example
    nodes = _node_steps(h)
    return nodes[-1] if nodes else None


def graham_reduce(
    h: SchemaHypergraph, pick: Optional[Callable[[Sequence[Step]], Step]] = None
) -> tuple[SchemaHypergraph, GrahamTrace]:
    """Apply edge-containment and lone-node deletions to a fixed point.

    ``pick`` chooses among all applicable steps; the default is deterministic.
    The residual is empty iff the schema is acyclic.
    """
    steps, states = [], []
    cur = h
    while True:
        if pick is None:
            step = _default_pick(cur)
        else:
            options = candidate_steps(cur)
            step = pick(options) if options else None
        if step is None:
            break
        cur = apply_step(cur, step)
        steps.append(step)
        states.append(cur)
    return cur, GrahamTrace(h, tuple(steps), tuple(states))


def is_acyclic(h: SchemaHypergraph) -> bool:
    residual, _ = graham_reduce(h)
    return not residual.edges


def render_trace(trace: GrahamTrace, explain: bool = False) -> str:
    """Numbered hypergraph states, the first being the input schema."""
    lines = [f"1. {trace.initial}"]
    for i, (step, state) in enumerate(zip(trace.steps, trace.states), start=2):
        line = f"{i}. {state}"
        if explain:
            line += f"    [{step.describe()}]"
        lines.append(line)
    return "\n".join(lines)


# --------------------------------------------------------------- join trees


@dataclass(frozen=True)
class JoinTree:
    headers: tuple[tuple[str, tuple[str, ...]], ...]
    edges: tuple[tuple[str, str, frozenset], ...]  # (a, b, separator), a < b
    ordering: tuple[str, ...]

    @property
    def nodes(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.headers)

    def header(self, name: str) -> tuple[str, ...]:
        return dict(self.headers)[name]

    def neighbours(self, name: str) -> list[str]:
        out = []
        for a, b, _ in self.edges:
            if a == name:
                out.append(b)
            elif b == name:
                out.append(a)
        return sorted(out)

    def separator(self, a: str, b: str) -> frozenset:
        for x, y, sep in self.edges:
            if {x, y} == {a, b}:
                return sep
        raise KeyError((a, b))

    def path(self, a: str, b: str) -> list[str]:
        prev = {a: None}
        frontier = [a]
        while frontier:
            nxt = []
            for n in frontier:
                for m in self.neighbours(n):
                    if m not in prev:
                        prev[m] = n
                        nxt.append(m)
            frontier = nxt
        if b not in prev:
            raise KeyError(f"{b} not reachable from {a}")
        out = [b]
        while out[-1] != a:
            out.append(prev[out[-1]])
        return out[::-1]

    def is_tree(self) -> bool:
        n = len(self.headers)
        if len(self.edges) != n - 1:
            return False
        return all(self._reachable(self.nodes[0], m) for m in self.nodes)

    def _reachable(self, a, b):
        try:
            self.path(a, b)
            return True
        except KeyError:
            return False

    def has_running_intersection(self) -> bool:
        hs = {n: set(vs) for n, vs in self.headers}
        for a, b in itertools.combinations(self.nodes, 2):
            common = hs[a] & hs[b]
            if any(not common <= hs[m] for m in self.path(a, b)):
                return False
        return True

    def valid_orderings(self) -> list[tuple[str, ...]]:
        """Every ordering whose prefixes are connected subtrees."""
        out = []

        def extend(prefix):
            if len(prefix) == len(self.nodes):
                out.append(tuple(prefix))
                return
            frontier = sorted({m for n in prefix for m in self.neighbours(n)} - set(prefix))
            for m in frontier:
                extend(prefix + [m])

        for start in self.nodes:
            extend([start])
        return out


def join_tree(h: SchemaHypergraph) -> JoinTree:
    """Maximum-weight spanning tree of the edge-intersection graph.

    Weights are intersection sizes; ties break lexicographically on context
    names.  Contained or duplicate headers simply hang off a container, with
    their whole header as separator.
    """
    if not is_acyclic(h):
        raise CyclicSchema(f"schema {h} is cyclic")
    headers = dict(h.edges)
    names = sorted(headers)
    pairs = []
    for a, b in itertools.combinations(names, 2):
        sep = frozenset(headers[a]) & frozenset(headers[b])
        pairs.append((-len(sep), a, b, sep))
    pairs.sort(key=lambda p: (p[0], p[1], p[2]))
    parent = {n: n for n in names}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = []
    for _, a, b, sep in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            tree.append((a, b, sep))
    partial = JoinTree(h.edges, tuple(tree), ())
    return JoinTree(h.edges, tuple(tree), _construction_ordering(partial))


def _construction_ordering(jt: JoinTree) -> tuple[str, ...]:
    names = sorted(jt.nodes)
    leaves = [n for n in names if len(jt.neighbours(n)) <= 1]
    order = [leaves[0]]
    seen = {leaves[0]}
    while len(order) < len(names):
        options = []
        for n in order:
            for m in jt.neighbours(n):
                if m not in seen:
                    # prefer contexts that actually overlap what is joined so far
                    options.append((not jt.separator(n, m), m))
        _, m = min(options)
        order.append(m)
        seen.add(m)
    return tuple(order)
