import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hdlf.errors import DimMismatch
from hdlf.herbrand import (HerbrandMap, LexIndex, RamJumps, compose, degree, evaluate, from_jumps,
                           invert, last_edge, lex_min, multiplicity, random_ramjumps)


def single():
    return RamJumps(1, (3,), ((2,),), (3, 1))


def integrate(d: RamJumps, j: LexIndex) -> LexIndex:
    """Sum of |I_x| over the pieces [i_t, i_{t+1}] cut at j, then divided by ebar."""
    j = LexIndex(j)
    cuts = [LexIndex.zero(d.r)] + list(d.jumps)
    total = LexIndex.zero(d.r)
    for t, lo in enumerate(cuts):
        hi = cuts[t + 1] if t + 1 < len(cuts) else None
        top = j if hi is None else lex_min(j, hi)
        if top > lo:
            total = total + (top - lo).scale(d.orders[t])
    return total.hadamard([Fraction(1, e) for e in d.ebar])


def test_single_jump_values():
    phi = from_jumps(single())
    assert evaluate(phi, [0]) == LexIndex([0])
    assert evaluate(phi, [5]) == LexIndex([3])
    assert evaluate(invert(phi), [3]) == LexIndex([5])
    assert last_edge(phi) == (LexIndex([2]), LexIndex([2]))


@pytest.mark.parametrize("x", [Fraction(k, 4) for k in range(0, 40)])
def test_single_jump_two_branch_shape(x):
    y = evaluate(from_jumps(single()), [x]).coords[0]
    assert y == (x if x <= 2 else 2 + (x - 2) / 3)


def test_identity_and_trivial():
    I = HerbrandMap.identity(2)
    assert evaluate(I, [Fraction(7, 3), -1]) == LexIndex([Fraction(7, 3), -1])
    assert last_edge(I) == (LexIndex.zero(2), LexIndex.zero(2))
    assert degree(I) == 1
    assert invert(I) == I
    triv = from_jumps(RamJumps(1, (1,), (), (1,)))
    assert evaluate(triv, [9]) == LexIndex([9])


def test_degree_and_multiplicity():
    phi = from_jumps(RamJumps(1, (1,), ((1,), (3,)), (9, 3, 1)))
    assert degree(phi) == 9
    assert multiplicity(phi, [2]) == 1
    assert multiplicity(phi, [Fraction(1, 2)]) == 1
    assert multiplicity(phi, [1]) != 1


def test_two_dimensional_closed_form_vs_integration():
    d = RamJumps(2, (3, 3), ((1, 0), (1, 2)), (9, 3, 1))
    assert evaluate(from_jumps(d), [1, 2]) == LexIndex([3, 2]) == integrate(d, LexIndex([1, 2]))


def test_compose_with_identity():
    phi = from_jumps(single())
    assert compose(phi, HerbrandMap.identity(1)) == phi
    assert compose(HerbrandMap.identity(1), phi) == phi


def test_dimension_mismatch():
    with pytest.raises(DimMismatch):
        compose(from_jumps(single()), HerbrandMap.identity(2))


def test_json_round_trip():
    d = RamJumps(2, (3, 3), ((1, 0), (1, 2)), (9, 3, 1))
    assert RamJumps.from_json(d.to_json()) == d
    phi = from_jumps(d)
    assert HerbrandMap.from_json(phi.to_json()) == phi


def test_invalid_jumps_rejected():
    with pytest.raises(ValueError):
        RamJumps(1, (1,), ((2,), (1,)), (9, 3, 1))
    with pytest.raises(ValueError):
        RamJumps(1, (1,), ((2,),), (3, 2))


seeds = st.integers(0, 10 ** 6)


def point(rng, r):
    """A random element of J_r: lexicographically nonnegative."""
    head = Fraction(rng.randint(0, 60), rng.randint(1, 6))
    tail = [Fraction(rng.randint(-2 if head else 0, 60), rng.randint(1, 6)) for _ in range(r - 1)]
    return LexIndex([head] + tail)


@given(seeds)
def test_closed_form_matches_integration(seed):
    rng = random.Random(seed)
    d = random_ramjumps(rng)
    phi = from_jumps(d)
    for _ in range(10):
        x = point(rng, d.r)
        assert evaluate(phi, x) == integrate(d, x)


@given(seeds)
def test_monotone(seed):
    rng = random.Random(seed)
    phi = from_jumps(random_ramjumps(rng))
    xs = sorted(set(point(rng, phi.r) for _ in range(12)))
    ys = [evaluate(phi, x) for x in xs]
    assert all(a < b for a, b in zip(ys, ys[1:]))


@given(seeds)
def test_compose_pointwise_and_associative(seed):
    rng = random.Random(seed)
    r = rng.choice([1, 2])
    f, g, h = (from_jumps(random_ramjumps(rng, r=r)) for _ in range(3))
    fg = compose(f, g)
    for _ in range(10):
        x = point(rng, r)
        assert evaluate(fg, x) == evaluate(f, evaluate(g, x))
    assert compose(compose(f, g), h) == compose(f, compose(g, h))
    assert degree(fg) == degree(f) * degree(g)


@given(seeds)
def test_invert_round_trip(seed):
    rng = random.Random(seed)
    phi = from_jumps(random_ramjumps(rng))
    psi = invert(phi)
    for _ in range(10):
        x = point(rng, phi.r)
        assert evaluate(psi, evaluate(phi, x)) == x
        assert evaluate(phi, evaluate(psi, x)) == x
    assert degree(psi) * degree(phi) == 1
