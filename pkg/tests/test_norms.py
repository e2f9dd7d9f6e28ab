import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hdlf.base_arith import INFINITY, EisRing, cyclotomic_ring, finite_field
from hdlf.errors import DivergentExponent, NoCloseRoot, PropertyViolation, RingLacksPi1
from hdlf.herbrand import LexIndex
from hdlf.laurent import FieldDomain, MLaurent, TruncBox
from hdlf.norms import (BasicTower2D, CompatSeq, CycTower, TowerLevel, TowerSpec, alpha_recursion,
                        build_pi_seq, cyclotomic_descent_problem, cyclotomic_jump, cyclotomic_tower_spec,
                        duality_map, embed_series, epsilon, exp_p, kummer_pi1, norm_descend, padic_exp,
                        pth_projection_check, random_compat, verify_tower)
from hdlf.witt import WittVec, fontaine_gamma, teich, witt_add, witt_from_int, witt_mul, witt_neg


@pytest.fixture(scope="module")
def t3():
    return CycTower(3, 4, 8)


@pytest.fixture(scope="module")
def pis3(t3):
    return build_pi_seq(t3)


def series1(coeffs: dict):
    F = FieldDomain(finite_field(3))
    return MLaurent.make(F, 1, coeffs, TruncBox((Fraction(0),), (Fraction(64),)))


def test_alpha_recursion_examples():
    run = alpha_recursion(5, [3 ** m for m in range(6)], 3)
    assert run.alphas[1] == LexIndex([13])
    assert run.ratios[1] == Fraction(13, 3)
    assert all(a == LexIndex([0]) for a in alpha_recursion(0, [3 ** m for m in range(6)], 3).alphas)


def test_epsilon(t3):
    eps = epsilon(t3)
    assert eps.values[0] == t3.top.one()
    assert (eps.values[1] - 1).valuation() == Fraction(1, 2)
    for x, y in zip(eps.values, eps.values[1:]):
        assert y ** 3 == x
    assert all(d == INFINITY for d in eps.defects())


def test_norm_check(t3):
    assert all(r["pass"] and r["sign"] == 1 for r in t3.norm_check())
    assert all(r["pass"] and r["sign"] == -1 for r in CycTower(2, 4, 8).norm_check())


def test_pi_sequence_certificates(pis3):
    seq, certs = pis3
    assert seq.c == Fraction(55, 54)
    assert [c.measured_v1 for c in certs] == [Fraction(7, 6), Fraction(19, 18), Fraction(55, 54)]
    assert all(c.passed for c in certs)
    assert seq.values[1] ** 3 - seq.values[0] != 0


def test_broken_sequence_is_rejected(t3):
    with pytest.raises(PropertyViolation):
        CompatSeq(3, 1, 0, [t3.pi(0), t3.pi(1) + 1])


def test_tower_specs(t3):
    spec = cyclotomic_tower_spec(t3)
    assert [lv.jump for lv in spec.levels] == [LexIndex([2]), LexIndex([8])]
    assert [cyclotomic_jump(3, n) for n in range(2)] == [2, 8]
    assert spec.c_star == 2 and verify_tower(spec)
    assert TowerSpec.from_json(spec.to_json()) == spec
    assert not verify_tower(TowerSpec(spec.N, 3, 0, Fraction(100), spec.levels))
    assert not verify_tower(TowerSpec(2, 3, 0, Fraction(1), [TowerLevel(0, 3, (3, 3), LexIndex([2, 0]))]))


def test_thresholds(t3):
    th = t3.thresholds()
    assert (th["c_star"], th["c1"], th["c2"], th["c1_vp"]) == (2, Fraction(2, 3), 1, Fraction(1, 3))


def test_embed_examples(pis3):
    seq, _ = pis3
    e = embed_series([seq], series1({(1,): 1}))
    assert e.values == seq.values and e.c == seq.c
    e2 = embed_series([seq], series1({(1,): 1, (2,): 1}))
    assert all(x == y + y * y for x, y in zip(e2.values, seq.values))


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6))
def test_embed_is_multiplicative(pis3, seed):
    seq, _ = pis3
    rng = random.Random(seed)
    f = series1({(k,): rng.randrange(3) for k in range(1, 4)})
    g = series1({(k,): rng.randrange(3) for k in range(0, 3)})
    lhs = embed_series([seq], f * g)
    rhs = embed_series([seq], f) * embed_series([seq], g)
    assert lhs.congruent(rhs)


@pytest.mark.parametrize("u", [1, 2])
def test_descent_recovers_previous_uniformizer(t3, u):
    cert = norm_descend(cyclotomic_descent_problem(t3, u), t3.pi(u + 1))
    assert cert.passed and cert.root == t3.pi(u) and cert.unique
    assert cert.size_condition is False
    assert cert.measured_v1 == [Fraction(19, 3), Fraction(55, 3)][u - 1]


@pytest.mark.parametrize("perturb", ["3pi0", "p3"])
def test_descent_negative_controls(t3, perturb):
    delta = t3.top(3) * t3.pi(0) if perturb == "3pi0" else t3.top(27)
    with pytest.raises(NoCloseRoot):
        norm_descend(cyclotomic_descent_problem(t3, 1, perturb=delta), t3.pi(2))


@pytest.mark.parametrize("n", [1, 2])
def test_pth_projection(n):
    ok, rows = pth_projection_check(BasicTower2D(3, 3, 8), n)
    assert ok and rows


def test_padic_exp():
    R = cyclotomic_ring(3, 1, 6)
    pi = R.uniformizer()
    with pytest.raises(DivergentExponent):
        padic_exp(pi)
    x, y = pi * 3, pi * pi * 3
    assert padic_exp(x + y).congruent(padic_exp(x) * padic_exp(y), 5)
    assert padic_exp(R.zero()) == R.one()
    assert exp_p(pi).congruent(padic_exp(pi * 3), 5)


def test_kummer_pi1():
    R = cyclotomic_ring(3, 1, 6)
    pi1 = kummer_pi1(R)
    assert (pi1 ** 2 + 3).valuation() >= 6
    with pytest.raises(RingLacksPi1):
        kummer_pi1(EisRing(5, 4, [-5, 0, 1]))


@pytest.mark.parametrize("p,depth,expected", [(2, 5, 2), (3, 4, Fraction(3, 2))])
def test_duality_of_eps_minus_one(p, depth, expected):
    t = CycTower(p, depth, 8)
    eps = epsilon(t)
    f = witt_add(teich(eps, 3, p), witt_neg(witt_from_int(1, eps, 3, p)))
    d = duality_map(f, 1)
    assert d.log_arg_valuation == expected
    assert d.in_one_plus_pO
    assert d.value.congruent(padic_exp(-(t.zeta(1) - 1) * p), d.precision)


def test_duality_of_zero(t3):
    eps = epsilon(t3)
    d = duality_map(WittVec(3, [eps.zero()] * 3), 1)
    assert d.value == t3.top.one().with_prec(d.value.prec)


def test_duality_additive_to_multiplicative(t3, pis3):
    seq, _ = pis3
    rng = random.Random(8)
    for _ in range(3):
        f1 = WittVec(3, [random_compat(rng, seq) for _ in range(3)])
        f2 = WittVec(3, [random_compat(rng, seq) for _ in range(3)])
        a, b, c = duality_map(witt_add(f1, f2), 1), duality_map(f1, 1), duality_map(f2, 1)
        prod = b.value * c.value
        assert a.value.congruent(prod, min(a.precision, prod.prec))


def test_gamma_is_a_ring_map(pis3):
    seq, _ = pis3
    rng = random.Random(2)
    f1 = WittVec(3, [random_compat(rng, seq) for _ in range(3)])
    f2 = WittVec(3, [random_compat(rng, seq) for _ in range(3)])
    g1, g2 = fontaine_gamma(f1), fontaine_gamma(f2)
    gs, gm = fontaine_gamma(witt_add(f1, f2)), fontaine_gamma(witt_mul(f1, f2))
    s, m = g1.value + g2.value, g1.value * g2.value
    assert gs.value.congruent(s, min(gs.precision, s.prec))
    assert gm.value.congruent(m, min(gm.precision, m.prec))
