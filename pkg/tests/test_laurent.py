from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hdlf.base_arith import finite_field
from hdlf.errors import BoxMismatch
from hdlf.herbrand import LexIndex
from hdlf.laurent import (FieldDomain, MLaurent, TruncBox, artin_schreier_reduce, frobenius, inv,
                          nvaluation, pth_root)

F5 = FieldDomain(finite_field(5))
F9 = finite_field(3, 2)
D9 = FieldDomain(F9)
BOX2 = TruncBox((Fraction(-6), Fraction(-6)), (Fraction(8), Fraction(8)))
BOX1 = TruncBox((Fraction(-30),), (Fraction(20),))


def series(dom, N, terms, box):
    return MLaurent.make(dom, N, terms, box)


def test_addition_examples():
    t1inv = series(F5, 2, {(-1, 0): 1}, BOX2)
    f = series(F5, 2, {(-1, 0): 1, (0, 1): 1}, BOX2)
    assert f + t1inv == series(F5, 2, {(-1, 0): 2, (0, 1): 1}, BOX2)
    assert f + MLaurent.zero(F5, 2, BOX2) == f
    assert (f + (-f)).is_zero()


def test_multiplication_and_inverse_examples():
    one = MLaurent.one(F5, 2, BOX2)
    t1 = MLaurent.gen(F5, 2, 1, BOX2)
    f = series(F5, 2, {(-1, 0): 1, (0, 1): 3}, BOX2)
    assert f * one == f
    geo = series(F5, 2, {(k, 0): 1 for k in range(9)}, BOX2)
    assert inv(one - t1) == geo
    assert inv(t1) == series(F5, 2, {(-1, 0): 1}, BOX2)


def test_nvaluation_examples():
    assert nvaluation(MLaurent.gen(F5, 2, 1, BOX2)) == LexIndex([1, 0])
    assert nvaluation(MLaurent.gen(F5, 2, 2, BOX2)) == LexIndex([0, 1])
    assert nvaluation(series(F5, 2, {(-5, -1): 1, (-2, 0): 1}, BOX2)) == LexIndex([-5, -1])


def test_frobenius_and_root_examples():
    g = F9.gen()
    t = MLaurent.gen(D9, 1, 1, BOX1)
    assert frobenius(t) == series(D9, 1, {(3,): 1}, BOX1)
    assert pth_root(series(D9, 1, {(9,): g ** 3}, BOX1)) == series(D9, 1, {(3,): g}, BOX1)


def test_artin_schreier_examples():
    g = F9.gen()
    # one rewrite: alpha^3 t^-6 ~ alpha t^-2
    assert artin_schreier_reduce(series(D9, 1, {(-6,): g ** 3}, BOX1)) == series(D9, 1, {(-2,): g}, BOX1)
    # exponent -9 rewrites twice, ending at t^-1
    assert artin_schreier_reduce(series(D9, 1, {(-9,): g ** 9}, BOX1)) == series(D9, 1, {(-1,): g}, BOX1)
    assert artin_schreier_reduce(series(D9, 1, {(2,): 1}, BOX1)).is_zero()
    normal = series(D9, 1, {(-4,): g, (-1,): 1}, BOX1)
    assert artin_schreier_reduce(normal) == normal


def test_mismatched_domains():
    with pytest.raises(BoxMismatch):
        MLaurent.gen(F5, 2, 1, BOX2) + MLaurent.gen(D9, 1, 1, BOX1)


def test_json_round_trip():
    f = series(D9, 1, {(-4,): F9.gen(), (3,): 2}, BOX1)
    assert MLaurent.from_json(f.to_json()) == f


coeff9 = st.tuples(st.integers(0, 2), st.integers(0, 2)).map(lambda c: F9(list(c)))


def terms_strategy(lo, hi, N=1):
    exps = st.tuples(*[st.integers(lo, hi)] * N)
    return st.dictionaries(exps, coeff9, max_size=6)


@given(terms_strategy(-3, 5), terms_strategy(-3, 5), terms_strategy(-3, 5))
def test_ring_axioms_within_box(a, b, c):
    box = TruncBox((Fraction(-12),), (Fraction(8),))
    f, g, h = (series(D9, 1, x, box) for x in (a, b, c))
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@given(terms_strategy(1, 6), coeff9.filter(lambda x: not x.is_zero()), st.integers(-3, 3))
def test_inverse(tail, lead, k):
    box = TruncBox((Fraction(k),), (Fraction(10),))
    terms = {(k + e[0],): c for e, c in tail.items()}
    terms[(k,)] = lead
    f = series(D9, 1, terms, box)
    prod = f * inv(f)
    assert prod.box.hi[0] >= 0
    assert prod.equal_within(MLaurent.one(D9, 1, prod.box), prod.box)


@given(terms_strategy(-4, 4))
def test_pth_root_inverts_frobenius(a):
    f = series(D9, 1, a, TruncBox((Fraction(-5),), (Fraction(5),)))
    assert pth_root(frobenius(f)) == f


@given(terms_strategy(-8, -1), terms_strategy(-3, -1))
def test_reduce_is_idempotent_and_kills_coboundaries(a, b):
    f = series(D9, 1, a, BOX1)
    g = series(D9, 1, b, BOX1)
    r = artin_schreier_reduce(f)
    assert artin_schreier_reduce(r) == r
    assert all(e[0] < 0 and e[0] % 3 != 0 for e in r.terms)
    assert artin_schreier_reduce(f + frobenius(g) - g) == r
