"""Probabilistic models on scenarios: edge-normalisation checks and exact LP
feasibility (phase-one simplex over ``Fraction`` with Bland's rule)."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional

from .errors import PartialAssignment
from .scenario import Event, Scenario


def verify_assignment(s: Scenario, a: Mapping[Event, object], tol=0) -> list[tuple[list[Event], object]]:
    """Edges whose probabilities do not sum to 1 within ``tol``.

    An empty result means ``a`` is a probabilistic model on ``s``.
    """
    missing = [v for v in s.vertices if v not in a]
    if missing:
        raise PartialAssignment(f"{len(missing)} vertices unassigned, e.g. {missing[0].label()}")
    bad = []
    for edge in s.sorted_edges():
        total = sum(a[v] for v in edge)
        if abs(total - 1) > tol:
            bad.append((edge, total))
    return bad


def lp_feasible(s: Scenario, fixed: Optional[Mapping[Event, object]] = None) -> Optional[dict]:
    """A model p: V -> [0, 1] summing to 1 on every edge and agreeing with
    ``fixed`` where given, or None if no such model exists.  Exact."""
    fixed = {v: Fraction(x) for v, x in (fixed or {}).items()}
    unknown = [v for v in fixed if v not in s.vertices]
    if unknown:
        raise ValueError(f"fixed vertex {unknown[0].label()} is not in the scenario")
    if any(not 0 <= x <= 1 for x in fixed.values()):
        return None
    free = sorted((v for v in s.vertices if v not in fixed), key=Event.label)
    col = {v: j for j, v in enumerate(free)}
    rows, rhs = [], []
    for edge in s.sorted_edges():
        r = 1 - sum((fixed[v] for v in edge if v in fixed), Fraction(0))
        coeffs = [Fraction(0)] * len(free)
        for v in edge:
            if v in col:
                coeffs[col[v]] = Fraction(1)
        if not any(coeffs):
            if r != 0:
                return None
            continue
        rows.append(coeffs)
        rhs.append(r)
    # every free vertex lies in some edge, so x <= 1 follows from x >= 0
    x = phase_one(rows, rhs, len(free))
    if x is None:
        return None
    model = dict(fixed)
    model.update(zip(free, x))
    return model


def phase_one(A: list[list[Fraction]], b: list[Fraction], n: int) -> Optional[list[Fraction]]:
    """Find x >= 0 with A x = b, or None.

    Artificial variables n..n+m-1 start basic; Bland's rule (lowest index
    entering and leaving) guarantees termination.
    """
    m = len(A)
    if m == 0:
        return [Fraction(0)] * n
    width = n + m
    T = []
    for i in range(m):
        sign = -1 if b[i] < 0 else 1
        row = [sign * a for a in A[i]] + [Fraction(int(k == i)) for k in range(m)] + [sign * b[i]]
        T.append(row)
    basis = list(range(n, n + m))
    # reduced costs of min sum(artificials), last entry is -objective
    cost = [Fraction(0)] * (width + 1)
    for row in T:
        for j in range(n):
            cost[j] -= row[j]
        cost[width] -= row[width]

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i, row in enumerate(T):
            if row[enter] > 0:
                ratio = row[width] / row[enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:  # cannot happen: phase one is bounded below by 0
            raise RuntimeError("unbounded phase-one problem")
        _pivot(T, cost, leave, enter)
        basis[leave] = enter

    if cost[width] != 0:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = T[i][width]
    return x


def _pivot(T, cost, r, c):
    pr = T[r]
    piv = pr[c]
    if piv != 1:
        T[r] = pr = [v / piv for v in pr]
    for i, row in enumerate(T):
        if i != r and row[c] != 0:
            f = row[c]
            T[i] = [a - f * p for a, p in zip(row, pr)]
    f = cost[c]
    if f != 0:
        cost[:] = [a - f * p for a, p in zip(cost, pr)]
