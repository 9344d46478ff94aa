import random
from math import comb

import pytest

from borderforge.algebra import Context
from borderforge.errors import NotAnOrderIdeal
from borderforge.orderideal import (
    OrderIdeal,
    is_order_ideal,
    reconstruct_from_corners,
    universe,
)
from borderforge.sampling import sample_order_ideal

CTX2 = Context(7, 2)


def oi(terms, ctx=CTX2):
    return OrderIdeal(ctx, terms)


def test_closure_validated():
    oi([(0, 0), (0, 1)])
    with pytest.raises(NotAnOrderIdeal):
        oi([(0, 1)])  # y without 1
    with pytest.raises(NotAnOrderIdeal):
        oi([(0, 0), (1, 1)])  # xy without x, y


def test_border_paper_example():
    # O = {1, y} has border {x, xy, y^2}
    assert set(oi([(0, 0), (0, 1)]).border()) == {(1, 0), (1, 1), (0, 2)}


def test_border_unit_and_box():
    assert set(oi([(0, 0)]).border()) == {(1, 0), (0, 1)}
    box = oi([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert set(box.border()) == {(2, 0), (2, 1), (1, 2), (0, 2)}


def test_border_sorted_descending():
    b = oi([(0, 0), (0, 1)]).border()
    assert list(b) == CTX2.sort_terms(b)


def test_corner_terms_examples():
    assert oi([(0, 0)]).corner_terms() == ((0, 0),)
    assert oi([(0, 0), (0, 1)]).corner_terms() == ((0, 1),)
    assert set(universe(CTX2, 1).corner_terms()) == {(1, 0), (0, 1)}


def test_universe_sizes_binomial():
    for n in range(1, 6):
        ctx = Context(7, n)
        for d in range(0, 9):
            assert len(universe(ctx, d)) == comb(n + d, n)


def test_universe_corners_are_top_degree():
    for n in (2, 3, 4):
        ctx = Context(7, n)
        for d in (1, 2, 3):
            corners = universe(ctx, d).corner_terms()
            assert all(sum(t) == d for t in corners)
            assert len(corners) == comb(n + d - 1, n - 1)


def test_reconstruct_from_corners_examples():
    assert set(reconstruct_from_corners(CTX2, [(0, 1)]).terms) == {
        (0, 0),
        (0, 1),
    }
    assert reconstruct_from_corners(CTX2, [(1, 0), (0, 1)]) == universe(CTX2, 1)
    assert len(reconstruct_from_corners(CTX2, [])) == 0


def test_corner_roundtrip_on_sampled_ideals():
    rng = random.Random(7)
    for n in (2, 3, 4):
        ctx = Context(31, n)
        for _ in range(250):
            sampled = sample_order_ideal(ctx, [3] * n, rng)
            corners = sampled.corner_terms()
            assert reconstruct_from_corners(ctx, corners) == sampled
            border = sampled.border()
            assert not set(border) & set(sampled.terms)
            assert is_order_ideal(set(sampled.terms) | set(border))


def test_empty_order_ideal_border_is_unit():
    empty = OrderIdeal(CTX2, [])
    assert empty.border() == ((0, 0),)
    assert empty.max_degree() == -1
