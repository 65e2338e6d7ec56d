"""Turn a context scope into a p-table, exactly or by seeded sampling.

Sampling uses numpy's Philox counter-based generator.  Each context gets its
own stream keyed by ``(seed, sha256(context name))``, so adding or removing a
context never changes the draws of another one.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction

import numpy as np

from .distribution import EXACT, PTable, Sampled, assignments
from .frontend import ContextDef, FlipDecl


def eval_exact(c: ContextDef) -> PTable:
    worlds = [({}, Fraction(1))]
    for s in c.random_statements:
        nxt = []
        for world, p in worlds:
            bias = s.bias if isinstance(s, FlipDecl) else (
                s.bias_if_true if world[s.condition] == 1 else s.bias_if_false
            )
            for value, q in ((1, bias), (0, 1 - bias)):
                nxt.append(({**world, s.name: value}, p * q))
        worlds = nxt
    joint = c.joint
    rows = {key: Fraction(0) for key in assignments(len(joint))}
    for world, p in worlds:
        rows[tuple(world[v] for v in joint)] += p
    return PTable(joint, rows, EXACT)


def context_generator(seed: int, name: str) -> np.random.Generator:
    digest = hashlib.sha256(name.encode("utf-8")).digest()
    key = int.from_bytes(digest[:8], "little")
    ss = np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, key])
    return np.random.Generator(np.random.Philox(ss))


def eval_sampled(c: ContextDef, n: int, seed: int) -> PTable:
    """Empirical table from ``n`` joint draws of the context's statements."""
    if n < 1:
        raise ValueError("sample count must be positive")
    rng = context_generator(seed, c.name)
    draws = {}
    for s in c.random_statements:
        u = rng.random(n)
        if isinstance(s, FlipDecl):
            bias = np.full(n, float(s.bias))
        else:
            cond = draws[s.condition]
            bias = np.where(cond == 1, float(s.bias_if_true), float(s.bias_if_false))
        # u < bias, so flip(1) is always 1 and flip(0) always 0
        draws[s.name] = (u < bias).astype(np.int8)
    joint = c.joint
    # pack each row's bits into an integer index, most significant first
    index = np.zeros(n, dtype=np.int64)
    for v in joint:
        index = (index << 1) | draws[v]
    counts = np.bincount(index, minlength=2 ** len(joint))
    rows = {}
    for key in assignments(len(joint)):
        code = 0
        for bit in key:
            code = (code << 1) | bit
        rows[key] = counts[code] / n
    return PTable(joint, rows, Sampled(n, seed))


def evaluate(contexts, samples=None, seed=None) -> dict:
    """Evaluate contexts by name. Exact unless ``seed`` or ``samples`` is given;
    in sampled mode ``samples`` overrides each context's declared count."""
    if samples is None and seed is None:
        return {c.name: eval_exact(c) for c in contexts}
    seed = 0 if seed is None else seed
    return {c.name: eval_sampled(c, samples or c.samples, seed) for c in contexts}
