import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hdlf.base_arith import INFINITY, cyclotomic_ring, finite_field
from hdlf.epp import (ASDatum, EppInvariants, EppTrace, TraceEntry, char0_translate, check_lemmas,
                      invariants, random_corpus, random_datum, rewrite_step, run, termination_bound,
                      translation_additivity, translation_disc_check)
from hdlf.errors import EmptySecondSet
from hdlf.laurent import FieldDomain, MLaurent, TruncBox

F3 = FieldDomain(finite_field(3))
BOX = TruncBox((Fraction(-12), Fraction(-6)), (Fraction(0), Fraction(6)))


def datum(terms, case="b2", c=1, dom=F3):
    return ASDatum(MLaurent.make(dom, 2, terms, BOX), case, Fraction(c))


def test_invariant_examples():
    inv = invariants(datum({(-2, 0): 1, (-5, -1): 1}))
    assert (inv.A, inv.B, inv.Bs(0)) == (-2, -5, -5)
    inv = invariants(datum({(-5, 0): 1, (-2, -3): 1}))
    assert (inv.A, inv.B, inv.Bs(1)) == (-5, -2, -2)
    assert invariants(datum({(-1, 1): 1})).A == 0
    assert invariants(datum({(-1, 0): 1, (-2, 1): 1}, case="c")).A == -1
    assert invariants(datum({(-2, 1): 1}, case="c")).A == INFINITY


def test_empty_second_set():
    with pytest.raises(EmptySecondSet):
        invariants(datum({(-1, 0): 1}))


def test_unperturbed_substitution_keeps_normalized_invariants():
    d = datum({(-3, -1): 2})
    s = rewrite_step(d, delta={})
    assert s.e_scale == 3
    assert s.xi == MLaurent.make(F3, 2, {(-9, -1): 2}, s.xi.box)
    assert invariants(s).Bs(0) == invariants(d).Bs(0) == -3


def test_immediate_halt():
    tr = run(datum({(-2, 0): 1, (-5, -1): 1}))
    assert tr.n_star == 0 and tr.steps == 0
    assert check_lemmas(tr) == []


def test_b2_run_frozen():
    tr = run(datum({(-5, 0): 1, (-2, -3): 1}))
    assert tr.n_star == 3
    A = [e.inv.A for e in tr.special()]
    assert A == [Fraction(-11, 3), Fraction(-23, 9), Fraction(-41, 27), Fraction(-41, 81)]
    assert all(r.passed for r in check_lemmas(tr))


def test_case_c_run_within_bound():
    tr = run(datum({(-7, 0): 1, (-2, 1): 1}, case="c"))
    assert tr.n_star == 4
    assert termination_bound(tr) == {"ceil": 4, "strict": 4}
    assert all(e.inv.B == -2 for e in tr.entries)
    assert all(r.passed for r in check_lemmas(tr))


def test_hand_built_violation_is_reported():
    def inv(A, B):
        return EppInvariants(Fraction(A), Fraction(B), {})
    tr = EppTrace("c", 3, Fraction(1))
    tr.entries = [TraceEntry(-1, "start", inv(-7, -2), 1, 2),
                  TraceEntry(0, "E~", inv(-7, -2), 1, 2),
                  TraceEntry(0, "E", inv(-7, -2), 3, 2)]
    failed = [r.lemma for r in check_lemmas(tr) if not r.passed]
    assert failed == ["c-special"]


def test_json_round_trip():
    d = random_datum(random.Random(3), 3, "b2", 8)
    assert ASDatum.from_json(d.to_json()).xi == d.xi


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]), st.sampled_from(["b2", "c"]), st.booleans())
def test_random_runs_satisfy_lemmas(seed, p, case, hard):
    rng = random.Random(seed)
    d = random_datum(rng, p, case, rng.randint(2, 12), hard=hard)
    assert d.normal_form_ok()
    tr = run(d, 50)
    assert tr.n_star is not None
    assert all(r.passed for r in check_lemmas(tr))
    if case == "c":
        assert tr.n_star <= termination_bound(tr)["ceil"]


@given(st.integers(0, 10 ** 6))
def test_rewrite_preserves_normal_form(seed):
    rng = random.Random(seed)
    d = random_datum(rng, 3, rng.choice(["b2", "c"]), 10, hard=True)
    assert rewrite_step(d).normal_form_ok()
    assert rewrite_step(d, q=1).normal_form_ok()


def test_corpus_is_deterministic():
    a = [d.to_json() for d in random_corpus(11, 10)]
    b = [d.to_json() for d in random_corpus(11, 10)]
    assert a == b


@pytest.fixture(scope="module")
def ring3():
    return cyclotomic_ring(3, 1, 4)


def test_translation_of_zero(ring3):
    t = char0_translate(ring3.zero())
    assert t.w_num.valuation() == INFINITY
    assert (t.v - 1).valuation() == INFINITY


def test_translation_discriminants_agree(ring3):
    rep = translation_disc_check(ring3.uniformizer())
    assert rep["equal"] and rep["disc_as"] == rep["expected"] == 2


def test_translation_additivity(ring3):
    pi = ring3.uniformizer()
    assert translation_additivity(pi, pi * pi)
    assert translation_additivity(pi * 2, pi ** 3)
