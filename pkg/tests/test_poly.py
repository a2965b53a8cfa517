from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from osplax import poly as P


def test_symbol_and_constant():
    x = P.symbol("x")
    assert P.degree(x, "x") == 1
    assert P.is_constant(P.const(3))
    assert P.constant_value(P.const(Fraction(3, 4))) == Fraction(3, 4)
    assert P.const(0) == {}


def test_linear_and_evaluate():
    p = P.from_linear(x=1, y=-1, c=2)
    assert P.constant_value(P.evaluate(p, {"x": 5, "y": 1})) == 6
    assert P.degree(P.evaluate(p, {"x": 5}), "y") == 1


def test_compose_shifts_argument():
    x = P.symbol("x")
    sq = P.mul(x, x)
    shifted = P.compose(sq, {"x": P.from_linear(x=1, x1=1)})
    want = P.add(P.add(P.mul(x, x), P.scale(P.mul(x, P.symbol("x1")), 2)), P.power(P.symbol("x1"), 2))
    assert shifted == want


def test_swap_symbols_is_involution():
    p = P.add(P.mul(P.symbol("x"), P.symbol("y", 2)), P.const(Fraction(1, 3)))
    assert P.swap_symbols(P.swap_symbols(p, "x", "y"), "x", "y") == p
    assert P.degree(P.swap_symbols(p, "x", "y"), "x") == 2


def test_negative_powers_of_t_and_coefficient():
    p = P.add(P.symbol("t", -1), P.symbol("x"))
    assert P.degree(p, "t") == 0
    assert P.coefficient(p, "t", 0) == P.symbol("x")
    assert P.coefficient(p, "t", -1) == P.const(1)


small = st.fractions(min_value=-5, max_value=5, max_denominator=4)
polys = st.builds(lambda a, b, c: P.from_linear(x=a, y=b, c=c), small, small, small)


@settings(max_examples=200)
@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert P.mul(p, P.add(q, r)) == P.add(P.mul(p, q), P.mul(p, r))
    assert P.mul(P.mul(p, q), r) == P.mul(p, P.mul(q, r))
    assert P.mul(p, q) == P.mul(q, p)
    assert P.add(p, P.neg(p)) == {}


@pytest.mark.parametrize("k", [0, 1, 3])
def test_power_matches_repeated_product(k):
    p = P.from_linear(x=1, c=-2)
    acc = P.const(1)
    for _ in range(k):
        acc = P.mul(acc, p)
    assert P.power(p, k) == acc
