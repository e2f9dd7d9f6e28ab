"""Simulation of the elimination of wild ramification.

A datum is an Artin-Schreier (theta^p - theta = xi, case "b2") or purely
inseparable (theta^p = xi, case "c") equation over k((t_2))((t_1)).  Each
round of the recursion performs two substitutions of the first
parameter:

* a generic step t_old = T (1 + delta~), which keeps the ramification
  scale (the passage to the field E~_i);
* a special step t_old = T^p (1 + delta) with v^1(delta) >= c, which
  multiplies the scale by p (the passage to E_i).

After every substitution the series is brought back to normal form and
the invariants A, B, B^(s) are read off.  Invariants are recorded divided
by the current scale ``e_scale`` so that all steps are compared in one
v^1 frame.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .base_arith import INFINITY, EisElem, finite_field, rat_mod, vp
from .errors import EmptySecondSet, NonTerminated
from .krasner import EisPoly, poly_disc
from .laurent import FieldDomain, MLaurent, TruncBox, artin_schreier_reduce
from .norms import kummer_pi1
from .witt import artin_hasse

CASES = ("b2", "c")


def _binom_mod(a: int, k: int, p: int) -> int:
    """Generalized binomial coefficient C(a, k) reduced mod p (a may be negative)."""
    num = 1
    for i in range(k):
        num *= a - i
    return (num // math.factorial(k)) % p


@dataclass(frozen=True)
class ASDatum:
    xi: MLaurent
    case: str
    c: Fraction
    e_scale: int = 1

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        if self.case not in CASES:
            raise ValueError(f"case must be one of {CASES}")
        if self.c <= 0:
            raise ValueError("c must be positive")
        if self.xi.domain.char == 0:
            raise ValueError("xi must have coefficients in a finite field")
        if self.xi.box.D != 1:
            raise ValueError("exponents must be integers")

    @property
    def p(self) -> int:
        return self.xi.domain.p

    @property
    def N(self) -> int:
        return self.xi.N

    def normal_form_ok(self) -> bool:
        p, N = self.p, self.N
        zero = (Fraction(0),) * N
        for e in self.xi.terms:
            divisible = all(x % p == 0 for x in e)
            if self.case == "b2":
                if e > zero or (e != zero and divisible):
                    return False
            elif divisible:
                return False
        return True

    def to_json(self):
        return {"case": self.case, "c": str(self.c), "e_scale": self.e_scale, "xi": self.xi.to_json()}

    @classmethod
    def from_json(cls, obj):
        return cls(MLaurent.from_json(obj["xi"]), obj["case"], Fraction(obj["c"]), int(obj.get("e_scale", 1)))


@dataclass(frozen=True)
class EppInvariants:
    A: object
    B: Fraction
    B_s: dict

    def Bs(self, s: int) -> Fraction:
        return self.B_s.get(s, Fraction(0))

    @property
    def s_max(self) -> int:
        return max(self.B_s) if self.B_s else 0

    def to_json(self):
        return {"A": "inf" if self.A == INFINITY else str(self.A), "B": str(self.B),
                "B_s": {str(s): str(v) for s, v in sorted(self.B_s.items())}}


def invariants(d: ASDatum) -> EppInvariants:
    """A, B and B^(s) of the datum, divided by e_scale."""
    p, e = d.p, d.e_scale
    Aset, Bset = [], []
    Bs: dict = {}
    for ex in d.xi.terms:
        a1, aN = ex[0] / e, ex[-1]
        if d.case == "b2":
            if aN == 0:
                Aset.append(a1)
            else:
                Bset.append(a1)
                s = vp(int(aN), p)
                Bs[s] = min(Bs.get(s, a1), a1)
        else:
            if aN % p == 0:
                Aset.append(a1)
            else:
                Bset.append(a1)
    if not Bset:
        raise EmptySecondSet("no term of xi involves the last parameter in the required way")
    if d.case == "b2":
        A = min(Aset) if Aset else Fraction(0)
    else:
        A = min(Aset) if Aset else INFINITY
    return EppInvariants(A, min(Bset), Bs)


def default_delta(c: Fraction, e_new: int, p: int) -> int:
    """Least m with m / e_new >= c and p not dividing m: delta = T^m."""
    m = math.ceil(c * e_new)
    while m % p == 0:
        m += 1
    return max(m, 1)


def _substitute(d: ASDatum, q: int, delta: dict, hi1: Fraction) -> dict:
    """Replace t_1 by T^q (1 + delta) in xi, keeping T-exponents <= hi1 (raw, new units).

    ``delta`` maps exponent vectors (in the new parameters) to F_q coefficients.
    """
    p = d.p
    F = d.xi.domain
    one = F.one()
    dmin = min((e[0] for e in delta), default=None)
    if dmin is not None and dmin <= 0:
        raise ValueError("the perturbation must have positive first valuation")
    powers = [{(Fraction(0),) * d.N: one}]
    out: dict = {}
    for ex, coef in d.xi.terms.items():
        a1 = int(ex[0])
        base = (Fraction(q * a1),) + tuple(ex[1:])
        if base[0] > hi1:
            continue
        kmax = 0 if dmin is None else int((hi1 - base[0]) / dmin)
        while len(powers) <= kmax:
            prev = powers[-1]
            nxt: dict = {}
            for e1, c1 in prev.items():
                for e2, c2 in delta.items():
                    e = tuple(x + y for x, y in zip(e1, e2))
                    if e[0] <= hi1 - base[0] + 0:
                        nxt[e] = nxt[e] + c1 * c2 if e in nxt else c1 * c2
            powers.append({e: c for e, c in nxt.items() if not F.is_zero(c)})
        for k in range(kmax + 1):
            b = _binom_mod(a1, k, p)
            if not b:
                continue
            for e, c in powers[k].items():
                ee = tuple(x + y for x, y in zip(base, e))
                if ee[0] > hi1:
                    continue
                v = coef * c * b
                out[ee] = out[ee] + v if ee in out else v
    return {e: c for e, c in out.items() if not F.is_zero(c)}


def _strip_pth_powers(terms: dict, p: int) -> dict:
    """Case c: drop terms that are p-th powers (all exponents divisible by p)."""
    return {e: c for e, c in terms.items() if not all(x % p == 0 for x in e)}


def rewrite_step(d: ASDatum, q: int | None = None, delta: dict | None = None,
                 box_hi: Fraction | None = None) -> ASDatum:
    """Substitute t_1 = T^q (1 + delta) and return to normal form.

    q defaults to p (a special step).  delta defaults to T^m with the least m
    giving v^1(delta) >= c; pass {} for delta = 0.  ``box_hi`` bounds the
    normalized first exponent kept (0 in case b2, 2c in case c).
    """
    p = d.p
    q = p if q is None else q
    e_new = d.e_scale * q
    if delta is None:
        if q == p:
            m = default_delta(d.c, e_new, p)
        else:
            m = e_new
        delta = {(Fraction(m),) + (Fraction(0),) * (d.N - 1): d.xi.domain.one()}
    if box_hi is None:
        box_hi = Fraction(0) if d.case == "b2" else 2 * d.c
    hi1 = Fraction(math.floor(box_hi * e_new))
    terms = _substitute(d, q, delta, hi1)
    lo = [min([Fraction(0)] + [e[i] for e in terms]) for i in range(d.N)]
    hi = [hi1] + [max([Fraction(0)] + [e[i] for e in terms]) for i in range(1, d.N)]
    box = TruncBox(tuple(lo), tuple(hi), 1)
    xi = MLaurent(d.N, d.xi.domain, terms, box)
    if d.case == "b2":
        xi = artin_schreier_reduce(xi)
    else:
        xi = MLaurent(d.N, d.xi.domain, _strip_pth_powers(xi.terms, p), box, True)
    return ASDatum(xi, d.case, d.c, e_new)


@dataclass
class TraceEntry:
    index: int
    phase: str
    inv: EppInvariants
    e_scale: int
    terms: int

    def to_json(self):
        return {"index": self.index, "phase": self.phase, "e_scale": self.e_scale, "terms": self.terms,
                "invariants": self.inv.to_json()}


@dataclass
class EppTrace:
    case: str
    p: int
    c: Fraction
    entries: list = field(default_factory=list)
    n_star: int | None = None
    steps: int = 0

    def special(self):
        return [e for e in self.entries if e.phase == "E"]

    def to_json(self):
        return {"case": self.case, "p": self.p, "c": str(self.c), "n_star": self.n_star, "steps": self.steps,
                "entries": [e.to_json() for e in self.entries]}


def _terminated(inv: EppInvariants) -> bool:
    return inv.A == INFINITY or inv.A > inv.B


def run(d0: ASDatum, max_steps: int = 50, schedule=None, raise_on_limit: bool = False) -> EppTrace:
    """Alternate generic and special steps until A_i > B_i.

    ``schedule(i, phase, datum)`` may return (q, delta) to override the
    default perturbations.  Entries: the start datum, then for each round i
    the pair ("E~", i) and ("E", i).  Data that start with A > B halt at
    once with n* = 0 and no steps.
    """
    tr = EppTrace(d0.case, d0.p, d0.c)
    tr.entries.append(TraceEntry(-1, "start", invariants(d0), d0.e_scale, len(d0.xi)))
    if _terminated(tr.entries[0].inv):
        tr.n_star = 0
        return tr
    d = d0
    for i in range(max_steps):
        for phase, q in (("E~", 1), ("E", d0.p)):
            delta = None
            if schedule is not None:
                got = schedule(i, phase, d)
                if got is not None:
                    q, delta = got
            d = rewrite_step(d, q, delta)
            inv = invariants(d)
            tr.entries.append(TraceEntry(i, phase, inv, d.e_scale, len(d.xi)))
        tr.steps = i + 1
        if _terminated(tr.entries[-1].inv):
            tr.n_star = i
            return tr
    if raise_on_limit:
        raise NonTerminated(max_steps)
    return tr


def termination_bound(trace: EppTrace) -> dict:
    """ceil((B - A_0)/c) with A_0 taken after the first special step, and the strict form."""
    first = trace.special()[0].inv if trace.special() else None
    if first is None or first.A == INFINITY:
        return {"ceil": 0, "strict": 0}
    gap = (first.B - first.A) / trace.c
    if gap < 0:
        return {"ceil": 0, "strict": 0}
    return {"ceil": math.ceil(gap), "strict": math.floor(gap) + 1}


# ---------------------------------------------------------------------------
# lemma checks


@dataclass
class LemmaResult:
    lemma: str
    index: int
    passed: bool
    detail: str = ""

    def to_json(self):
        return {"lemma": self.lemma, "index": self.index, "pass": self.passed, "detail": self.detail}


def _ge(x, y) -> bool:
    if x == INFINITY:
        return True
    if y == INFINITY:
        return False
    return x >= y


def _min_shift(inv: EppInvariants, s: int, p: int, s_top: int) -> Fraction:
    return min(inv.Bs(s + u) / p ** u for u in range(0, s_top - s + 1))


def check_lemmas(trace: EppTrace) -> list:
    """Evaluate every inequality of the recursion at every step."""
    p, c = trace.p, trace.c
    res = []
    ents = trace.entries
    for k in range(1, len(ents)):
        prev, cur = ents[k - 1], ents[k]
        a, b = prev.inv, cur.inv
        s_top = max(a.s_max, b.s_max) + 1
        i = cur.index
        if cur.phase == "E~":
            name = "generic-first" if i == 0 else "generic"
            if trace.case == "b2":
                res.append(LemmaResult(name + ":A", i, _ge(b.A, a.A), f"{b.A} >= {a.A}"))
                ok = all(b.Bs(s) >= _min_shift(a, s, p, s_top) for s in range(s_top + 1))
                res.append(LemmaResult(name + ":Bs", i, ok))
            else:
                res.append(LemmaResult("c-" + name, i,
                                       _ge(b.A, a.A) and b.B == a.B, f"A {b.A} >= {a.A}, B {b.B} = {a.B}"))
        else:
            if trace.case == "b2":
                At = a.A
                res.append(LemmaResult("special:A", i, _ge(b.A, min(At / p, At + c)), f"{b.A} vs {At}"))
                cand = [a.Bs(0), a.Bs(1) / p] + [(a.Bs(u) + c) / p ** u for u in range(2, s_top + 1)]
                res.append(LemmaResult("special:B0", i, b.Bs(0) >= min(cand)))
                ok = True
                for s in range(1, s_top + 1):
                    cand = [a.Bs(s + 1) / p] + [(a.Bs(s + u) + c) / p ** u for u in range(0, s_top - s + 1)]
                    ok = ok and b.Bs(s) >= min(cand)
                res.append(LemmaResult("special:Bs", i, ok))
            else:
                res.append(LemmaResult("c-special", i, _ge(b.A, a.A + c) and b.B == a.B,
                                       f"A {b.A} >= {a.A} + {c}, B {b.B} = {a.B}"))
    # monotonicity of A across special steps, and A <= 0 in case b2
    special = trace.special()
    for k in range(1, len(special)):
        res.append(LemmaResult("A-monotone", special[k].index, _ge(special[k].inv.A, special[k - 1].inv.A)))
    if trace.case == "b2":
        for e in special:
            res.append(LemmaResult("A<=0", e.index, e.inv.A <= 0))
        # once B^(0) is strictly below every B^(s), s >= 1, B freezes
        for k, e in enumerate(special):
            inv = e.inv
            others = [inv.Bs(s) for s in range(1, inv.s_max + 2)]
            if 0 in inv.B_s and all(inv.Bs(0) < x for x in others):
                ok = all(later.inv.B == inv.Bs(0) for later in special[k:])
                res.append(LemmaResult("B-freeze", e.index, ok))
    return res


# ---------------------------------------------------------------------------
# random data


def random_datum(rng: random.Random, p: int, case: str, n_terms: int = 10, c=1,
                 a1_range=(-12, -1), aN_range=(-6, 6), m: int = 1, hard: bool = False) -> ASDatum:
    """A random normal-form datum in two variables with every a_1 < 0.

    With ``hard`` the data start with A < B, so the recursion has work to do.
    """
    F = finite_field(p, m)
    dom = FieldDomain(F)
    lo1, hi1 = a1_range

    def in_B(e):
        return e[1] != 0 if case == "b2" else e[1] % p != 0

    def coeff():
        return F(rng.randrange(1, F.q))

    terms: dict = {}
    if hard:
        B0 = rng.randint(lo1 + 2, hi1)
        while True:
            e = (B0, rng.choice([x for x in range(aN_range[0], aN_range[1] + 1) if in_B((0, x))]))
            if not all(x % p == 0 for x in e):
                break
            B0 -= 1
        terms[e] = coeff()
        a = rng.randint(lo1, B0 - 1)
        while a % p == 0:
            a -= 1
        terms[(a, 0)] = coeff()
    while len(terms) < n_terms:
        e = (rng.randint(lo1, hi1), rng.randint(*aN_range))
        if all(x % p == 0 for x in e):
            continue
        if hard and in_B(e) and e[0] < B0:
            continue
        terms[e] = coeff()
    if not any(in_B(e) for e in terms):
        a = rng.randint(lo1, hi1)
        terms[(a, 1)] = F.one()
    lo = (Fraction(min(lo1, min(e[0] for e in terms))), Fraction(aN_range[0]))
    xi = MLaurent.make(dom, 2, {(Fraction(a), Fraction(b)): v for (a, b), v in terms.items()},
                       TruncBox(lo, (Fraction(0), Fraction(aN_range[1]))))
    if case == "b2":
        xi = artin_schreier_reduce(xi)
    d = ASDatum(xi, case, Fraction(c))
    if not d.normal_form_ok():
        raise AssertionError("generated datum is not in normal form")
    return d


def random_corpus(seed: int, count: int = 100, primes=(2, 3), cases=CASES, max_terms: int = 20, c=1):
    """Alternates primes and cases; every other datum starts with A < B."""
    rng = random.Random(seed)
    out = []
    for k in range(count):
        p = primes[k % len(primes)]
        case = cases[(k // len(primes)) % len(cases)]
        hard = (k // (len(primes) * len(cases))) % 2 == 0
        out.append(random_datum(rng, p, case, rng.randint(2, max_terms), c, hard=hard))
    return out


# ---------------------------------------------------------------------------
# Artin-Hasse translation between Kummer and Artin-Schreier data


def artin_hasse_eval(x: EisElem, D: int | None = None) -> EisElem:
    """E(x) for x in the maximal ideal, truncated where the terms drop below precision."""
    R = x.ring
    v = x.valuation()
    if v == INFINITY:
        return R.one()
    if v <= 0:
        raise ValueError("Artin-Hasse needs an argument in the maximal ideal")
    if D is None:
        D = int(Fraction(R.M) / v) + 1
    E = artin_hasse(D, R.p)
    coeffs = [R(rat_mod(c, R.p, R.M)) for c in E.coeffs]
    return R.poly_eval(coeffs, x)


@dataclass(frozen=True)
class Translation:
    v: EisElem
    w_num: EisElem
    w_shift: int

    def to_json(self):
        return {"v": self.v.to_json(), "w": {"num": self.w_num.to_json(), "p_power": self.w_shift}}


def char0_translate(V: EisElem) -> Translation:
    """Kummer unit v = E(pi_1 V) and the Artin-Schreier datum w = p^{-1} V (stored as (V, -1))."""
    pi1 = kummer_pi1(V.ring)
    if V.valuation() != INFINITY and V.valuation() <= 0:
        raise ValueError("V must lie in the maximal ideal")
    return Translation(artin_hasse_eval(pi1 * V), V, -1)


def _vL(x: EisElem) -> Fraction:
    return x.valuation(assert_nonzero=True) * x.ring.d


def translation_disc_check(V: EisElem) -> dict:
    """Discriminant valuations of theta^p - theta = w and Y^p = v, in v_p units."""
    R = V.ring
    p = R.p
    tr = char0_translate(V)
    # Artin-Schreier: Pi = 1/theta satisfies Pi^p + w^{-1} Pi^{p-1} - w^{-1} = 0
    m = -(_vL(V) - R.d)
    if m <= 0 or m % p == 0:
        raise ValueError(f"unsupported Artin-Schreier conductor m = {m}")
    winv = R(p).divexact(V)
    as_poly = EisPoly(R, [winv] + [R.zero()] * (p - 2) + [-winv])
    # Kummer: x = v - 1, Pi = pi^a / (Y - 1)
    x = tr.v - 1
    k = _vL(x)
    if k % p == 0 or (k + 1) % p:
        raise ValueError(f"unsupported Kummer datum: v_L(v - 1) = {k}")
    a = int((k + 1) // p)
    pi = R.uniformizer()
    coeffs = [-(((pi ** (a * jj)) * math.comb(p, jj)).divexact(x)) for jj in range(1, p + 1)]
    kum_poly = EisPoly(R, coeffs)
    d_as, d_k = poly_disc(as_poly), poly_disc(kum_poly)
    return {"m": int(m), "k": int(k), "disc_as": d_as, "disc_kummer": d_k, "equal": d_as == d_k,
            "expected": Fraction((p - 1) * (m + 1), R.d)}


def translation_additivity(V1: EisElem, V2: EisElem) -> bool:
    """E(pi_1(V1+V2)) = E(pi_1 V1) E(pi_1 V2) modulo pi_1 p m."""
    R = V1.ring
    a = char0_translate(V1 + V2).v
    b = char0_translate(V1).v * char0_translate(V2).v
    level = Fraction(1, R.p - 1) + 1 + Fraction(1, R.d)
    return a.congruent(b, level)
