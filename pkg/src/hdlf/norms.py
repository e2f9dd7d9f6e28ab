"""Towers, compatible sequences, norm descent and the duality map.

Every tower here is cyclotomic or built on a cyclotomic one.  All levels
of a CycTower live inside one top ring O[zeta_{p^D}], where
zeta_{p^u} = (1 + pi_top)^{p^{D-u}}, so level comparisons never need a
change of ring.

Thresholds follow one convention: c_star is measured in units of the
base level K_0 = Q_p(zeta_p) (so v(zeta_p - 1) = 1), while congruences of
ring elements are checked in v_p units (v(p) = 1); ``e0 = p - 1`` converts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from .base_arith import INFINITY, EisElem, EisRing, cyclotomic_ring, rat_mod, vp
from .errors import (DivergentExponent, NoCloseRoot, PrecisionExhausted, PropertyViolation,
                     RingLacksPi1)
from .herbrand import LexIndex, RamJumps, from_jumps
from .krasner import EisPoly, locate_root, poly_disc
from .laurent import FieldDomain, MLaurent, RingDomain, TruncBox
from .witt import WittVec, fontaine_gamma, teich, witt_add

# ---------------------------------------------------------------------------
# compatible sequences


class CompatSeq:
    """Levels x_u (u_min <= u <= u_max) with x_{u+1}^p = x_u mod v_p >= c.

    Elements of one top EisRing; this is a truncated element of Fontaine's
    ring R.  ``exact`` sequences satisfy x_{u+1}^p = x_u at full precision.
    Ring operations act levelwise; sums weaken the threshold to min(c, 1).
    """

    __slots__ = ("p", "c", "u_min", "values", "exact")

    def __init__(self, p: int, c, u_min: int, values: Sequence[EisElem], exact: bool = False,
                 check: bool = True):
        if not values:
            raise ValueError("a sequence needs at least one level")
        self.p = p
        self.c = Fraction(c)
        self.u_min = u_min
        self.values = tuple(values)
        self.exact = exact
        if self.c <= 0:
            raise ValueError("threshold must be positive")
        if check:
            self.verify()

    @property
    def ring(self) -> EisRing:
        return self.values[0].ring

    @property
    def u_max(self) -> int:
        return self.u_min + len(self.values) - 1

    @property
    def char(self) -> int:
        return self.p

    def value_at(self, u: int) -> EisElem:
        if not self.u_min <= u <= self.u_max:
            raise PrecisionExhausted(f"level {u} outside [{self.u_min}, {self.u_max}]")
        return self.values[u - self.u_min]

    def defects(self):
        """v_p(x_{u+1}^p - x_u) per level (INFINITY when zero at precision)."""
        out = []
        for u in range(self.u_min, self.u_max):
            d = self.value_at(u + 1) ** self.p - self.value_at(u)
            out.append(d.valuation())
        return out

    def verify(self):
        for u in range(self.u_min, self.u_max):
            d = self.value_at(u + 1) ** self.p - self.value_at(u)
            if self.exact:
                if d.valuation() != INFINITY:
                    raise PropertyViolation(f"level {u}: sequence is not exactly compatible")
            elif not d.congruent(self.ring.zero(), self.c):
                raise PropertyViolation(f"level {u}: x_(u+1)^p - x_u has valuation {d.valuation()} < {self.c}")
        return True

    # --- ring structure -------------------------------------------------------
    def _like(self, values, c, exact):
        return CompatSeq(self.p, c, self.u_min, values, exact, check=False)

    def _align(self, o):
        if isinstance(o, CompatSeq):
            if o.p != self.p:
                raise ValueError("sequences for different primes")
            lo, hi = max(self.u_min, o.u_min), min(self.u_max, o.u_max)
            if lo > hi:
                raise PrecisionExhausted("sequences share no level")
            a = [self.value_at(u) for u in range(lo, hi + 1)]
            b = [o.value_at(u) for u in range(lo, hi + 1)]
            return lo, a, b, o.c, o.exact
        # integers: constant sequences, compatible mod p
        n = int(o)
        return self.u_min, list(self.values), [self.ring(n)] * len(self.values), Fraction(1), n in (0, 1)

    def __add__(self, o):
        lo, a, b, c, ex = self._align(o)
        return CompatSeq(self.p, min(self.c, c, 1), lo, [x + y for x, y in zip(a, b)], False, check=False)

    __radd__ = __add__

    def __sub__(self, o):
        lo, a, b, c, ex = self._align(o)
        return CompatSeq(self.p, min(self.c, c, 1), lo, [x - y for x, y in zip(a, b)], False, check=False)

    def __rsub__(self, o):
        return (-self) + o

    def __neg__(self):
        c = self.c if self.p != 2 else min(self.c, 1)
        return self._like([-x for x in self.values], c, self.exact and self.p != 2)

    def __mul__(self, o):
        lo, a, b, c, ex = self._align(o)
        if not isinstance(o, CompatSeq):
            if int(o) == 1:
                return self
            return CompatSeq(self.p, min(self.c, 1), lo, [x * int(o) for x in a], False, check=False)
        exact = self.exact and ex
        return CompatSeq(self.p, min(self.c, c), lo, [x * y for x, y in zip(a, b)], exact, check=False)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return self._like([x ** k for x in self.values], self.c, self.exact)

    def one(self):
        return self._like([self.ring.one()] * len(self.values), self.ring.M, True)

    def zero(self):
        return self._like([self.ring.zero()] * len(self.values), self.ring.M, True)

    def sigma_inv(self, k: int = 1) -> "CompatSeq":
        """(sigma^{-k} x)_u = x_{u+k}: the inverse Frobenius of the perfect ring R."""
        if k < 0:
            return self.sigma(-k)
        if k >= len(self.values):
            raise PrecisionExhausted("not enough levels for the requested inverse Frobenius")
        return CompatSeq(self.p, self.c, self.u_min, self.values[k:], self.exact, check=False)

    def sigma(self, k: int = 1) -> "CompatSeq":
        vals = self.values
        for _ in range(k):
            vals = [x ** self.p for x in vals]
        return self._like(vals, self.c, self.exact)

    def congruent(self, other: "CompatSeq", c=None) -> bool:
        """Levelwise congruence on common levels, modulo the weaker threshold."""
        lo, a, b, oc, _ = self._align(other)
        c = min(self.c, oc) if c is None else Fraction(c)
        return all(x.congruent(y, c) for x, y in zip(a, b))

    def __repr__(self):
        return f"CompatSeq(p={self.p}, c={self.c}, levels={self.u_min}..{self.u_max})"

    def to_json(self):
        return {"p": self.p, "c": str(self.c), "u_min": self.u_min, "exact": self.exact,
                "values": [x.to_json() for x in self.values]}


# ---------------------------------------------------------------------------
# towers


@dataclass
class TowerLevel:
    n: int
    degree: int
    ebar: tuple
    jump: LexIndex
    sub_jumps: dict = field(default_factory=dict)

    def to_json(self):
        return {"n": self.n, "degree": self.degree, "ebar": list(self.ebar), "jump": self.jump.to_json(),
                "sub_jumps": {str(r): j.to_json() for r, j in sorted(self.sub_jumps.items())}}


@dataclass
class TowerSpec:
    N: int
    p: int
    n_star: int
    c_star: Fraction
    levels: list

    def to_json(self):
        return {"N": self.N, "p": self.p, "n_star": self.n_star, "c_star": str(self.c_star),
                "levels": [lv.to_json() for lv in self.levels]}

    @classmethod
    def from_json(cls, obj):
        levels = [TowerLevel(int(lv["n"]), int(lv["degree"]), tuple(lv["ebar"]), LexIndex(lv["jump"]),
                             {int(r): LexIndex(j) for r, j in lv.get("sub_jumps", {}).items()})
                  for lv in obj["levels"]]
        return cls(int(obj["N"]), int(obj["p"]), int(obj["n_star"]), Fraction(obj["c_star"]), levels)


def verify_tower(spec: TowerSpec) -> bool:
    """Degree p^N, ebar = (p,...,p) and pr_1 j >= p^n c_star at every recorded level."""
    bound_ok = True
    for lv in spec.levels:
        if lv.n < spec.n_star:
            continue
        if lv.degree != spec.p ** spec.N or tuple(lv.ebar) != (spec.p,) * spec.N:
            return False
        bound = spec.p ** lv.n * spec.c_star
        for j in [lv.jump] + list(lv.sub_jumps.values()):
            if j.coords[0] < bound:
                bound_ok = False
    return bound_ok


@dataclass(frozen=True)
class AlphaRun:
    alphas: tuple
    ratios: tuple
    first_below: int | None

    def to_json(self):
        return {"alphas": [a.to_json() for a in self.alphas], "ratios": [str(r) for r in self.ratios],
                "first_below": self.first_below}


def alpha_recursion(alpha0, jumps: Sequence, p: int, threshold=Fraction(1, 1000)) -> AlphaRun:
    """Worst case alpha_{m+1} = max(p alpha_m - (p-1) j_m, alpha_m)."""
    a = LexIndex(alpha0) if not isinstance(alpha0, (int, Fraction)) else LexIndex([alpha0])
    alphas, ratios = [a], [a.coords[0]]
    first = 0 if ratios[0] < threshold else None
    for m, j in enumerate(jumps):
        j = LexIndex(j) if not isinstance(j, (int, Fraction)) else LexIndex([j])
        cand = a.scale(p) - j.scale(p - 1)
        a = cand if cand > a else a
        alphas.append(a)
        ratios.append(a.coords[0] / p ** (m + 1))
        if first is None and ratios[-1] < threshold:
            first = m + 1
    return AlphaRun(tuple(alphas), tuple(ratios), first)


class CycTower:
    """Levels u = 0..depth-1 are O of Q_p(zeta_{p^{u+1}}), uniformizer pi_u = zeta_{p^{u+1}} - 1."""

    def __init__(self, p: int, depth: int, M: int):
        if depth < 2:
            raise ValueError("depth must be at least 2")
        self.p, self.depth, self.M = p, depth, M
        self.top = cyclotomic_ring(p, depth, M)
        one = self.top.one()
        z = one + self.top.uniformizer()
        zetas = {depth: z}
        for k in range(depth - 1, -1, -1):
            zetas[k] = zetas[k + 1] ** p
        self._zeta = zetas

    def zeta(self, k: int) -> EisElem:
        """zeta_{p^k} inside the top ring."""
        return self._zeta[k]

    def pi(self, u: int) -> EisElem:
        return self._zeta[u + 1] - 1

    def ram_index(self, u: int) -> int:
        """e(Q_p(zeta_{p^{u+1}}) / Q_p)."""
        return self.p ** u * (self.p - 1)

    def level_ring(self, u: int) -> EisRing:
        return cyclotomic_ring(self.p, u + 1, self.M)

    def embed_level(self, u: int, x: EisElem) -> EisElem:
        return self.top.poly_eval(list(x.c), self.pi(u))

    @property
    def c_star(self) -> Fraction:
        return min(Fraction(cyclotomic_jump(self.p, n), self.p ** n) for n in range(self.depth - 1))

    def thresholds(self) -> dict:
        c = self.c_star
        c1 = c / self.p
        return {"c_star": c, "c1": c1, "c2": self.p * c1 / 2, "e0": self.p - 1,
                "c1_vp": c1 / (self.p - 1)}

    def norm_check(self):
        """N(pi_{u+1}) = +-pi_u, via the product over the p conjugates."""
        out = []
        for u in range(self.depth - 2):
            prod = self.top.one()
            for k in range(self.p):
                prod = prod * (self.zeta(u + 2) * self.zeta(1) ** k - 1)
            sign = 1 if (prod - self.pi(u)).valuation() == INFINITY else (
                -1 if (prod + self.pi(u)).valuation() == INFINITY else 0)
            out.append({"level": u, "sign": sign, "pass": sign != 0})
        return out

    def to_json(self):
        return {"p": self.p, "depth": self.depth, "M": self.M}


def cyclotomic_jump(p: int, n: int) -> int:
    """Lower (= upper) jump of Q_p(zeta_{p^{n+2}}) / Q_p(zeta_{p^{n+1}}) in units of the larger field."""
    return p ** (n + 1) - 1


def cyclotomic_tower_spec(t: CycTower, measured: bool = True) -> TowerSpec:
    """TowerSpec of the cyclotomic tower; with ``measured`` the jumps come from resultants."""
    levels = []
    for n in range(t.depth - 2):
        if measured:
            F = cyclotomic_step_poly(t, n + 1)
            dv = poly_disc(F) * t.ram_index(n)
            # single jump of a cyclic degree-p step: v_K(D) = (p-1)(i+1)
            i = dv / (t.p - 1) - 1
        else:
            i = Fraction(cyclotomic_jump(t.p, n))
        levels.append(TowerLevel(n, t.p, (t.p,), LexIndex([i])))
    c = min(lv.jump.coords[0] / t.p ** lv.n for lv in levels) if levels else Fraction(t.p - 1)
    return TowerSpec(1, t.p, 0, c, levels)


def cyclotomic_step_poly(t: CycTower, u: int, perturb: EisElem | None = None) -> EisPoly:
    """(1+T)^p - zeta_{p^u}: the minimal polynomial of pi_u over level u-1."""
    p = t.p
    from math import comb
    coeffs = [t.top(comb(p, k)) for k in range(1, p)] + [t.top.one() - t.zeta(u)]
    if perturb is not None:
        coeffs[-1] = coeffs[-1] + perturb
    return EisPoly(t.top, coeffs)


def epsilon(t: CycTower) -> CompatSeq:
    """u -> zeta_{p^u}, u = 0..depth: eps^(0) = 1 and eps^(1) = zeta_p."""
    return CompatSeq(t.p, t.M, 0, [t.zeta(u) for u in range(t.depth + 1)], exact=True)


@dataclass(frozen=True)
class LevelCert:
    level: int
    measured_v1: object
    threshold: Fraction
    passed: bool

    def to_json(self):
        m = self.measured_v1
        return {"level": self.level, "measured_v1": "inf" if m == INFINITY else str(m),
                "threshold": str(self.threshold), "pass": self.passed}


def build_pi_seq(t: CycTower):
    """The uniformizer sequence pi_u with a measured uniform threshold.

    Returns (sequence, certificates).  The threshold is the minimum of the
    measured v_p(pi_{u+1}^p - pi_u).
    """
    measured = []
    for u in range(t.depth - 1):
        d = t.pi(u + 1) ** t.p - t.pi(u)
        v = d.valuation()
        if v == INFINITY:
            raise PrecisionExhausted(f"level {u}: defect vanishes at precision {d.prec}")
        measured.append(v)
    c = min(measured)
    if c <= 0:
        raise PropertyViolation("pi sequence is not compatible")
    seq = CompatSeq(t.p, c, 0, [t.pi(u) for u in range(t.depth)])
    certs = [LevelCert(u, m, c, m >= c) for u, m in enumerate(measured)]
    return seq, certs


def embed_series(params: Sequence[CompatSeq], f: MLaurent) -> CompatSeq:
    """sum [alpha_a] tau_u^(1)a_1 ... tau_u^(N)a_N evaluated levelwise.

    Coefficients must lie in F_p (their Teichmueller lifts are then fixed by
    Frobenius) and exponents must be nonnegative integers.
    """
    if len(params) != f.N:
        raise ValueError("need one parameter sequence per variable")
    dom = f.domain
    if not isinstance(dom, FieldDomain) or dom.field.m != 1:
        raise ValueError("embedding needs coefficients in the prime field")
    base = params[0]
    ring = base.ring
    acc = None
    for e, a in f.sorted_terms():
        if any(x < 0 or x.denominator != 1 for x in e):
            raise ValueError(f"exponent {e} is not a nonnegative integer vector")
        lift = ring.teich(a.n)
        term = CompatSeq(base.p, ring.M, base.u_min, [lift] * len(base.values), exact=True, check=False)
        for par, k in zip(params, e):
            if k:
                term = term * par ** int(k)
        acc = term if acc is None else acc + term
    if acc is None:
        return base.zero()
    return CompatSeq(acc.p, acc.c, acc.u_min, acc.values, acc.exact, check=True)


# ---------------------------------------------------------------------------
# norm descent


@dataclass(frozen=True)
class DescentCert:
    level: int
    root: EisElem
    A: LexIndex
    j: LexIndex
    a: LexIndex
    unique: bool
    measured_v1: Fraction
    bound: Fraction
    c_star: Fraction
    c1: Fraction
    c2: Fraction
    size_condition: bool
    passed: bool

    def to_json(self):
        return {"level": self.level, "root": self.root.to_json(), "A": self.A.to_json(),
                "j": self.j.to_json(), "a": self.a.to_json(), "unique": self.unique,
                "measured_v1": str(self.measured_v1), "threshold": str(self.bound),
                "c_star": str(self.c_star), "c1": str(self.c1), "c2": str(self.c2),
                "size_condition": self.size_condition, "pass": self.passed}


@dataclass
class DescentProblem:
    """F_u over a field K with e(K) = eK, roots generating L with e(L) = eL."""

    level: int
    F: EisPoly
    jumps: RamJumps
    eK: int
    eL: int
    candidates: list
    c_star: Fraction
    p: int


def cyclotomic_descent_problem(t: CycTower, u: int, perturb: EisElem | None = None) -> DescentProblem:
    if not 1 <= u <= t.depth - 2:
        raise ValueError(f"descent level must lie in 1..{t.depth - 2}")
    p = t.p
    F = cyclotomic_step_poly(t, u, perturb)
    jumps = RamJumps(1, (p,), ((p ** u - 1,),), (p, 1))
    cands = [t.zeta(u + 1) * t.zeta(1) ** k - 1 for k in range(p)]
    return DescentProblem(u, F, jumps, t.ram_index(u - 1), t.ram_index(u), cands, t.c_star, p)


def norm_descend(prob: DescentProblem, seed: EisElem) -> DescentCert:
    """The unique root theta_u of F_u close to seed^p, located by Krasner's lemma."""
    p = prob.p
    alpha = seed ** p
    val = prob.F(alpha).valuation()
    if val == INFINITY:
        raise PrecisionExhausted("F_u(seed^p) vanishes at working precision")
    A = LexIndex([val * prob.eK - 1])
    phi = from_jumps(prob.jumps)
    _, j = phi.last_edge()
    if not A > LexIndex.zero(1) or not A > j:
        raise NoCloseRoot(f"A = {A} does not exceed j = {j}")
    a, unique = locate_root(prob.jumps, A)
    want = a.coords[0] + 1
    close = []
    for cand in prob.candidates:
        if prob.F(cand).valuation() != INFINITY:
            continue
        dist = (alpha - cand).valuation()
        if dist != INFINITY and dist * prob.eL == want:
            close.append(cand)
    if not close:
        raise NoCloseRoot("no root of F_u at the distance predicted by the Herbrand function")
    if len(close) > 1:
        raise PropertyViolation("several roots at the Krasner distance")
    root = close[0]
    c1 = prob.c_star / p
    c2 = p * c1 / 2
    bound = p ** prob.level * c2
    measured = want
    size_ok = j.coords[0] + 1 < p ** prob.level * c1 / 2
    return DescentCert(prob.level, root, A, j, a, unique, measured, bound, prob.c_star, c1, c2,
                       size_ok, unique and measured >= bound)


# ---------------------------------------------------------------------------
# the two-dimensional basic tower


class BasicTower2D:
    """Level n: Q_p(zeta_{p^n}){{t}}(t^{1/p^n}), series in t with cyclotomic coefficients."""

    def __init__(self, p: int, depth: int, M: int, box_lo: int = -1, box_hi: int = 2):
        self.p, self.depth, self.M = p, depth, M
        self.cyc = CycTower(p, depth, M)
        self.domain = RingDomain(self.cyc.top)
        self.box_lo, self.box_hi = box_lo, box_hi

    def box(self, n: int) -> TruncBox:
        return TruncBox((Fraction(self.box_lo),), (Fraction(self.box_hi),), self.p ** n)

    def monomial(self, n: int, coeff: EisElem, a: int) -> MLaurent:
        """coeff * t^{a/p^n} in the level-n ring."""
        return MLaurent(1, self.domain, {(Fraction(a, self.p ** n),): coeff}, self.box(n + 1))

    def spanning_set(self, n: int):
        """(description, level-n monomial, level-(n+1) candidate preimage)."""
        p, t = self.p, self.cyc
        lo, hi = self.box_lo * p ** n, self.box_hi * p ** n // p
        avals = sorted({lo, -1, 0, 1, hi} & set(range(lo, hi + 1)))
        out = []
        d_n = (p - 1) * p ** (n - 1)
        for a in avals:
            out.append((f"t^{a}/{p}^{n}", self.monomial(n, t.top.one(), a),
                        self.monomial(n + 1, t.top.one(), a)))
            out.append((f"zeta_{p}^{n} t^{a}/{p}^{n}", self.monomial(n, t.zeta(n), a),
                        self.monomial(n + 1, t.zeta(n + 1), a)))
            for i in (1, d_n - 1):
                out.append((f"pi^{i} t^{a}/{p}^{n}", self.monomial(n, (t.zeta(n) - 1) ** i, a),
                            self.monomial(n + 1, (t.zeta(n + 1) - 1) ** i, a)))
        return out

    def to_json(self):
        return {"p": self.p, "depth": self.depth, "M": self.M, "box": [self.box_lo, self.box_hi]}


def pth_projection_check(t: BasicTower2D, n: int):
    """Each spanning monomial of level n is a p-th power mod m^1(c1) from level n+1."""
    if not 1 <= n < t.depth:
        raise ValueError(f"level must lie in 1..{t.depth - 1}")
    th = t.cyc.thresholds()
    c = th["c1_vp"]
    rows = []
    ok = True
    for desc, target, pre in t.spanning_set(n):
        diff = pre ** t.p - target
        v = diff.coeff_valuation() if not diff.is_zero() else INFINITY
        if v != INFINITY and v < c:
            prec = min(x.prec for x in diff.terms.values())
            if prec < c:
                raise PrecisionExhausted(f"{desc}: precision {prec} below threshold {c}")
        good = v == INFINITY or v >= c
        ok = ok and good
        rows.append({"monomial": desc, "measured_v1": "inf" if v == INFINITY else str(v),
                     "threshold": str(c), "pass": good})
    return ok, rows


# ---------------------------------------------------------------------------
# exponentials, pi_1 and the duality map


def padic_exp(Y: EisElem) -> EisElem:
    """exp(Y) for v(Y) > 1/(p-1), with the precision tracked through each term."""
    R = Y.ring
    p = R.p
    v = Y.vlow()
    if v <= Fraction(1, p - 1):
        raise DivergentExponent(f"v(Y) = {v} does not exceed 1/(p-1)")
    target = Y.prec if Y.valuation() != INFINITY else Fraction(R.M)
    target = min(target, Fraction(R.M))
    acc = R.one()
    power = R.one()
    n = 0
    while True:
        n += 1
        # lower bound for v(Y^n/n!) using v_p(n!) <= (n-1)/(p-1)
        if n * v - Fraction(n - 1, p - 1) >= target:
            break
        power = power * Y
        k = vp(factorial(n), p)
        term = power
        for _ in range(k):
            term = term.div_p()
        unit = factorial(n) // p ** k
        term = term * rat_mod(Fraction(1, unit), p, R.M)
        acc = acc + term
    return acc.with_prec(min(acc.prec, target))


def exp_p(y: EisElem) -> EisElem:
    """exp(p y)."""
    return padic_exp(y * y.ring.p)


def kummer_pi1(ring: EisRing) -> EisElem:
    """pi_1 with pi_1^{p-1} = -p, when the ring contains one."""
    p, d = ring.p, ring.d
    if d % (p - 1):
        raise RingLacksPi1(f"degree {d} is not divisible by p-1 = {p - 1}")
    x0 = ring.uniformizer() ** (d // (p - 1))
    u = (-(x0 ** (p - 1))).div_p()
    if u.residue() != 1:
        raise RingLacksPi1("-pi^d/p is not a (p-1)-th power modulo the maximal ideal")
    if p == 2:
        return x0 * u.inverse()
    r = ring.one()
    inv_pm1 = rat_mod(Fraction(1, p - 1), p, ring.M)
    for _ in range(4 * ring.M * d + 8):
        err = r ** (p - 1) - u
        if err.valuation() == INFINITY:
            break
        r = r - err * (r ** (p - 2)).inverse() * inv_pm1
    pi1 = x0 * r.inverse()
    if (pi1 ** (p - 1) + p).valuation() != INFINITY:
        raise PropertyViolation("pi_1^(p-1) != -p at working precision")
    return pi1


@dataclass(frozen=True)
class DualityValue:
    value: EisElem
    log_arg: EisElem
    log_arg_valuation: object
    precision: Fraction
    in_one_plus_pO: bool

    def to_json(self):
        v = self.log_arg_valuation
        return {"value": self.value.to_json(), "log_arg": self.log_arg.to_json(),
                "log_arg_valuation": "inf" if v == INFINITY else str(v),
                "precision": str(self.precision), "in_1_plus_pO": self.in_one_plus_pO}


def witt_sigma_inv(w: WittVec, k: int = 1) -> WittVec:
    return WittVec(w.p, [c.sigma_inv(k) for c in w.comps])


def duality_map(f: WittVec, M: int, t: CycTower | None = None) -> DualityValue:
    """exp(-p gamma(sigma^{-1} f) - ... - p^M gamma(sigma^{-M} f))."""
    p = f.p
    ring = f.comps[0].ring
    Y = ring.zero()
    for k in range(1, M + 1):
        g = fontaine_gamma(witt_sigma_inv(f, k))
        Y = Y - g.value * (p ** k)
    v = Y.valuation()
    if v == INFINITY:
        val = ring.one().with_prec(Y.prec)
        return DualityValue(val, Y, v, Y.prec, True)
    value = padic_exp(Y)
    member = (value - 1).vlow() >= 1
    return DualityValue(value, Y, v, value.prec, member)


def teich_witt(x: CompatSeq, L: int) -> WittVec:
    return teich(x, L, x.p)


def kernel_element(eps: CompatSeq, L: int) -> WittVec:
    """1 + [eps]^{1/p} + ... + [eps]^{(p-1)/p} in W_L(R)."""
    p = eps.p
    root = eps.sigma_inv(1)
    acc = teich_witt(root.one(), L)
    for i in range(1, p):
        acc = witt_add(acc, teich_witt(root ** i, L))
    return acc


def random_compat(rng: random.Random, pis: CompatSeq, degree: int = 3, positive: bool = True) -> CompatSeq:
    """A random polynomial in the pi-sequence with Teichmueller coefficients."""
    from .base_arith import finite_field
    F = finite_field(pis.p, 1)
    lo = 1 if positive else 0
    terms = {(k,): F(rng.randrange(pis.p)) for k in range(lo, degree + 1)}
    if all(c.n == 0 for c in terms.values()):
        terms[(lo,)] = F.one()
    f = MLaurent.make(FieldDomain(F), 1, terms, TruncBox((Fraction(0),), (Fraction(64),)))
    return embed_series([pis], f)
