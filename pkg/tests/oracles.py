"""Independent reference computations used as test oracles.

None of these call into the code paths they check.
"""

import itertools
import math
from fractions import Fraction

GRID = 32


def hoeffding(n, confidence=0.99):
    return math.sqrt(math.log(2 / (1 - confidence)) / (2 * n))


def analytic_marginals(context):
    """p(v = 1) for every declared variable, by the law of total probability."""
    p = {}
    for s in context.random_statements:
        if hasattr(s, "bias"):
            p[s.name] = s.bias
        else:
            pc = p[s.condition]
            p[s.name] = pc * s.bias_if_true + (1 - pc) * s.bias_if_false
    return p


def brute_force_joint(context):
    """Joint over the declared variables by summing over all 2^k worlds."""
    stmts = context.random_statements
    out = {}
    for world in itertools.product((0, 1), repeat=len(stmts)):
        env = dict(zip((s.name for s in stmts), world))
        prob = Fraction(1)
        for s in stmts:
            b = s.bias if hasattr(s, "bias") else (s.bias_if_true if env[s.condition] else s.bias_if_false)
            prob *= b if env[s.name] else 1 - b
        key = tuple(env[v] for v in context.joint)
        out[key] = out.get(key, Fraction(0)) + prob
    return out


def is_oneway_edge(events, first_vars, second_vars):
    """Adaptive one-way protocol: measure one variable of the first party,
    then, depending on its outcome, one variable of the second party."""
    rows = [e.values for e in events]
    if len(rows) != 4:
        return False
    firsts = {v for r in rows for v in r if v in first_vars}
    if len(firsts) != 1:
        return False
    (a,) = firsts
    for x in (0, 1):
        branch = [r for r in rows if r.get(a) == x]
        if len(branch) != 2:
            return False
        seconds = {v for r in branch for v in r if v in second_vars}
        if len(seconds) != 1:
            return False
        (b,) = seconds
        if sorted(r[b] for r in branch) != [0, 1]:
            return False
    return True


def brute_force_fr_edges(vertices, a_vars, b_vars, directions=("ab", "ba")):
    """Every 4-subset of the product vertices that a one-way protocol realises."""
    vs = sorted(vertices, key=lambda e: e.label())
    out = set()
    for combo in itertools.combinations(vs, 4):
        if ("ab" in directions and is_oneway_edge(combo, a_vars, b_vars)) or (
            "ba" in directions and is_oneway_edge(combo, b_vars, a_vars)
        ):
            out.add(frozenset(combo))
    return out


def grid_feasible(vertices, edges, fixed):
    """Depth-first search for a model whose free values are multiples of 1/32.

    Works in integer units of 1/32; ``fixed`` values must be on the grid.
    """
    fixed_units = {}
    for v, x in fixed.items():
        u = Fraction(x) * GRID
        if u.denominator != 1:
            raise ValueError("fixed values must lie on the grid")
        fixed_units[v] = int(u)
    if any(not 0 <= u <= GRID for u in fixed_units.values()):
        return False
    free = [v for v in vertices if v not in fixed_units]
    edges = [list(e) for e in edges]
    # branch first on vertices that close the most edges early
    free.sort(key=lambda v: -sum(v in e for e in edges))

    def propagate(assign):
        # an edge with one unknown forces it; forced values are on the grid too
        changed = True
        while changed:
            changed = False
            for e in edges:
                unknown = [v for v in e if v not in assign]
                known = sum(assign[v] for v in e if v in assign)
                if known > GRID:
                    return False
                if not unknown and known != GRID:
                    return False
                if len(unknown) == 1:
                    assign[unknown[0]] = GRID - known
                    changed = True
        return True

    def search(assign):
        assign = dict(assign)
        if not propagate(assign):
            return False
        rest = [v for v in free if v not in assign]
        if not rest:
            return True
        v = rest[0]
        room = min((GRID - sum(assign.get(u, 0) for u in e) for e in edges if v in e), default=0)
        for x in range(room + 1):
            assign[v] = x
            if search(assign):
                return True
        return False

    return search(fixed_units)


def acyclic_by_spanning_weight(edges):
    """A hypergraph is acyclic iff a maximum-weight spanning forest of its
    edge-intersection graph weighs sum(deg(v) - 1) over its nodes."""
    edges = [frozenset(e) for e in edges]
    degree = {}
    for e in edges:
        for v in e:
            degree[v] = degree.get(v, 0) + 1
    target = sum(d - 1 for d in degree.values())
    # Prim over the complete graph; zero-weight links join components
    inside = {0}
    weight = 0
    while len(inside) < len(edges):
        best = max(
            (len(edges[i] & edges[j]), j) for i in inside for j in range(len(edges)) if j not in inside
        )
        weight += best[0]
        inside.add(best[1])
    return weight == target


def basic_solution_feasible(vertices, edges, fixed):
    """Exact feasibility of {sum over each edge = 1, p >= 0} by enumerating
    supports: a feasible system has a basic solution whose support columns
    are linearly independent, and that solution is the unique one there."""
    free = [v for v in vertices if v not in fixed]
    rows = []
    for e in edges:
        r = 1 - sum((Fraction(fixed[v]) for v in e if v in fixed), Fraction(0))
        rows.append(([Fraction(int(v in e)) for v in free], r))
    if any(not 0 <= Fraction(x) <= 1 for x in fixed.values()):
        return False
    for k in range(len(free) + 1):
        for support in itertools.combinations(range(len(free)), k):
            sol = _solve_unique([[c[j] for j in support] for c, _ in rows], [r for _, r in rows])
            if sol is not None and all(x >= 0 for x in sol):
                return True
    return False


def _solve_unique(A, b):
    """Solution of A x = b if it exists and is unique, else None."""
    m = [row[:] + [rhs] for row, rhs in zip(A, b)]
    n = len(A[0]) if A else 0
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            return None  # dependent column: not unique
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    if any(row[-1] != 0 for row in m[r:]):
        return None
    return [m[i][-1] / m[i][i] for i in range(n)]
