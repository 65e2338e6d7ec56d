from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pprog.distribution import EXACT, PTable, Sampled, from_csv, marginal_distance, marginalize, product
from pprog.errors import HeaderMismatch, UnknownVariable
from pprog.evaluator import eval_exact


@st.composite
def tables(draw, max_vars=4):
    k = draw(st.integers(1, max_vars))
    header = [f"V{i}" for i in range(k)]
    header = draw(st.permutations(header))
    weights = draw(st.lists(st.integers(0, 20), min_size=2**k, max_size=2**k).filter(any))
    total = sum(weights)
    keys = [tuple((i >> (k - 1 - j)) & 1 for j in range(k)) for i in range(2**k)]
    return PTable(header, {key: F(w, total) for key, w in zip(keys, weights)})


@given(tables())
def test_marginalize_to_full_header_is_identity(t):
    assert marginalize(t, t.header) == t


@given(tables(), st.data())
def test_marginalize_is_idempotent_and_composes(t, data):
    sub = data.draw(st.lists(st.sampled_from(t.header), min_size=1, unique=True))
    inner = data.draw(st.lists(st.sampled_from(sub), min_size=1, unique=True))
    once = marginalize(t, sub)
    assert marginalize(once, sub) == once
    assert marginalize(once, inner) == marginalize(t, inner)


@given(tables())
def test_total_mass_preserved(t):
    for v in t.header:
        assert sum(marginalize(t, (v,)).rows.values()) == 1


def test_exact_mass_is_checked():
    with pytest.raises(ValueError, match="mass"):
        PTable(("A",), {(1,): F(1, 2), (0,): F(1, 3)})


def test_negative_probability_rejected():
    with pytest.raises(ValueError, match="negative"):
        PTable(("A",), {(1,): F(3, 2), (0,): F(-1, 2)})


def test_sampled_mass_tolerance():
    PTable(("A",), {(1,): 0.1 + 0.2, (0,): 0.7}, Sampled(10, 0))


def test_unknown_variable(coins):
    t = eval_exact(coins.program.context("P1"))
    with pytest.raises(UnknownVariable):
        marginalize(t, ("B2",))
    with pytest.raises(UnknownVariable):
        t.prob({"B2": 1})


def test_coin_marginal_of_a1(coins):
    t = eval_exact(coins.program.context("P1"))
    assert marginalize(t, ("A1",)).rows == {(1,): F(3, 5), (0,): F(2, 5)}
    assert t.prob({"A1": 1}) == F(3, 5)


def test_order_effects_marginal_distance(order_effects):
    p1, p2 = (eval_exact(c) for c in order_effects.contexts)
    a1, a2 = marginalize(p1, ("A",)), marginalize(p2, ("A",))
    assert a1.rows[(1,)] == F(7, 10)
    assert a2.rows[(1,)] == F(13, 25)
    assert marginal_distance(a1, a2) == F(9, 50)


def test_distance_needs_same_variables():
    a = PTable(("A",), {(1,): 1})
    b = PTable(("B",), {(1,): 1})
    with pytest.raises(HeaderMismatch):
        marginal_distance(a, b)


def test_equality_aligns_by_name():
    t = PTable(("A", "B"), {(1, 0): F(1, 4), (0, 1): F(3, 4)})
    assert t == t.reorder(("B", "A"))
    assert t.reorder(("B", "A")).rows[(0, 1)] == F(1, 4)


def test_product_of_independent_tables():
    a = PTable(("A",), {(1,): F(1, 3), (0,): F(2, 3)})
    b = PTable(("B",), {(1,): F(1, 2), (0,): F(1, 2)})
    ab = product(a, b)
    assert ab.prob({"A": 1, "B": 0}) == F(1, 6)
    assert ab.mode == EXACT


@given(tables())
def test_csv_round_trip(t):
    assert from_csv(t.to_csv()) == t


def test_csv_layout(coins):
    text = eval_exact(coins.program.context("P1")).to_csv()
    assert text.splitlines() == ["A1,B1,p", "1,1,3/10", "1,0,3/10", "0,1,1/5", "0,0,1/5"]
