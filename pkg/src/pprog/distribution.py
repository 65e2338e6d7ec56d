"""P-tables: finite joint distributions over named binary variables."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import HeaderMismatch, UnknownVariable

Prob = Union[Fraction, float]


@dataclass(frozen=True)
class Exact:
    def __str__(self):
        return "exact"


@dataclass(frozen=True)
class Sampled:
    n: int
    seed: int

    def __str__(self):
        return f"sampled(n={self.n}, seed={self.seed})"


EXACT = Exact()


def assignments(k: int):
    """All 0/1 rows of width ``k``, ones first (11, 10, 01, 00 for k=2)."""
    return itertools.product((1, 0), repeat=k)


class PTable:
    """Joint distribution over ``header``; every one of the 2^k rows is stored.

    Rows are keyed by value tuples aligned with ``header``.  Exact tables hold
    ``Fraction`` probabilities and must sum to exactly 1; sampled tables hold
    floats and must sum to 1 within 1e-9.
    """

    __slots__ = ("header", "rows", "mode")

    def __init__(self, header: Iterable[str], rows: Mapping[tuple, Prob], mode=EXACT):
        header = tuple(header)
        if len(set(header)) != len(header):
            raise ValueError(f"duplicate variable in header {header}")
        full = {}
        for key in assignments(len(header)):
            p = rows.get(key, 0)
            if isinstance(mode, Exact):
                p = Fraction(p)
            else:
                p = float(p)
            if p < 0:
                raise ValueError(f"negative probability {p} for row {key}")
            full[key] = p
        extra = set(rows) - set(full)
        if extra:
            raise ValueError(f"rows {sorted(extra)} do not match header {header}")
        mass = sum(full.values())
        if isinstance(mode, Exact):
            if mass != 1:
                raise ValueError(f"exact table has mass {mass}")
        elif abs(mass - 1) > 1e-9:
            raise ValueError(f"sampled table has mass {mass}")
        self.header = header
        self.rows = full
        self.mode = mode

    @property
    def exact(self) -> bool:
        return isinstance(self.mode, Exact)

    def prob(self, assignment: Mapping[str, int]) -> Prob:
        """Probability of a (possibly partial) assignment over header variables."""
        for v in assignment:
            if v not in self.header:
                raise UnknownVariable(v)
        idx = [(i, assignment[v]) for i, v in enumerate(self.header) if v in assignment]
        return sum(
            (p for key, p in self.rows.items() if all(key[i] == x for i, x in idx)),
            Fraction(0) if self.exact else 0.0,
        )

    def items(self):
        """(assignment dict, probability) pairs in canonical row order."""
        for key, p in self.rows.items():
            yield dict(zip(self.header, key)), p

    def reorder(self, header: Iterable[str]) -> "PTable":
        header = tuple(header)
        if sorted(header) != sorted(self.header):
            raise HeaderMismatch(f"{header} is not a permutation of {self.header}")
        pos = [self.header.index(v) for v in header]
        return PTable(header, {tuple(k[i] for i in pos): p for k, p in self.rows.items()}, self.mode)

    def __eq__(self, other):
        if not isinstance(other, PTable):
            return NotImplemented
        if set(self.header) != set(other.header) or self.mode != other.mode:
            return False
        return self.reorder(other.header).rows == other.rows

    __hash__ = None

    def __repr__(self):
        return f"PTable({self.header}, {self.rows}, {self.mode})"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([*self.header, "p"])
        for key, p in self.rows.items():
            w.writerow([*key, format_prob(p)])
        return buf.getvalue()


def format_prob(p: Prob) -> str:
    if isinstance(p, Fraction):
        return f"{p.numerator}/{p.denominator}"
    return f"{p:.6f}"


def from_csv(text: str, mode=EXACT) -> PTable:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header[-1] != "p":
        raise ValueError("last CSV column must be 'p'")
    rows = {}
    for rec in reader:
        if not rec:
            continue
        key = tuple(int(x) for x in rec[:-1])
        rows[key] = Fraction(rec[-1]) if isinstance(mode, Exact) else float(rec[-1])
    return PTable(header[:-1], rows, mode)


def marginalize(t: PTable, variables: Iterable[str]) -> PTable:
    variables = tuple(variables)
    if not variables:
        raise ValueError("cannot marginalize to an empty variable set")
    for v in variables:
        if v not in t.header:
            raise UnknownVariable(f"{v!r} not in header {t.header}")
    pos = [t.header.index(v) for v in variables]
    zero = Fraction(0) if t.exact else 0.0
    out = {key: zero for key in assignments(len(variables))}
    for key, p in t.rows.items():
        sub = tuple(key[i] for i in pos)
        out[sub] += p
    return PTable(variables, out, t.mode)


def marginal_distance(t1: PTable, t2: PTable) -> Prob:
    """Sup-norm distance between two tables over the same variable set."""
    if set(t1.header) != set(t2.header):
        raise HeaderMismatch(f"{t1.header} vs {t2.header}")
    aligned = t2.reorder(t1.header)
    return max(abs(p - aligned.rows[key]) for key, p in t1.rows.items())


def product(t1: PTable, t2: PTable) -> PTable:
    """Independent product of tables over disjoint headers."""
    if set(t1.header) & set(t2.header):
        raise HeaderMismatch("product needs disjoint headers")
    rows = {k1 + k2: p1 * p2 for k1, p1 in t1.rows.items() for k2, p2 in t2.rows.items()}
    return PTable(t1.header + t2.header, rows, combine_modes(t1.mode, t2.mode))


def combine_modes(*modes):
    sampled = [m for m in modes if isinstance(m, Sampled)]
    if not sampled:
        return EXACT
    return min(sampled, key=lambda m: m.n)
