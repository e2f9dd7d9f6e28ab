"""Witt vectors of finite length, the Artin-Hasse exponential and Fontaine's map.

Arithmetic is obtained from the ghost equations

    w_n = r_0^{p^n} + p r_1^{p^{n-1}} + ... + p^n r_n.

For coefficient rings with a torsion-free lift (integers, rationals,
F_q, Z/p^M, EisRing elements) the ghost equations are solved numerically
in the lift and the result is reduced.  For other rings (sequence rings,
series) the universal polynomials are first obtained by solving the same
equations symbolically over Q[X, Y] and then evaluated in the ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .base_arith import EisElem, Fq, PadicTrunc, vp_rat
from .errors import PrecisionExhausted

# ---------------------------------------------------------------------------
# sparse polynomials over Q, used only to derive universal polynomials


class _Poly:
    __slots__ = ("t",)

    def __init__(self, t=None):
        self.t = t or {}

    @classmethod
    def var(cls, i, nvars):
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): Fraction(1)})

    @classmethod
    def const(cls, c, nvars):
        return cls({(0,) * nvars: Fraction(c)}) if c else cls()

    def __add__(self, o):
        out = dict(self.t)
        for e, c in o.t.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return _Poly(out)

    def __neg__(self):
        return _Poly({e: -c for e, c in self.t.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if not isinstance(o, _Poly):
            o = Fraction(o)
            return _Poly({e: c * o for e, c in self.t.items()}) if o else _Poly()
        out = {}
        for e1, c1 in self.t.items():
            for e2, c2 in o.t.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return _Poly({e: c for e, c in out.items() if c})

    def __pow__(self, k):
        nvars = len(next(iter(self.t))) if self.t else 0
        result = _Poly.const(1, nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result


@lru_cache(maxsize=None)
def universal_polynomials(p: int, M: int, op: str):
    """Integer polynomials giving the components of a+b, a*b or -a.

    Returned as a tuple (one per component) of tuples of (exponent, int).
    Variables are X_0..X_{M-1} followed (for binary ops) by Y_0..Y_{M-1}.
    """
    nvars = 2 * M if op in ("add", "mul") else M
    X = [_Poly.var(i, nvars) for i in range(M)]
    Y = [_Poly.var(M + i, nvars) for i in range(M)] if nvars == 2 * M else None
    comps = []
    for n in range(M):
        gx = _Poly()
        for i in range(n + 1):
            gx = gx + (X[i] ** (p ** (n - i))) * (p ** i)
        if op == "neg":
            target = -gx
        else:
            gy = _Poly()
            for i in range(n + 1):
                gy = gy + (Y[i] ** (p ** (n - i))) * (p ** i)
            target = gx + gy if op == "add" else gx * gy
        for i in range(n):
            target = target - (comps[i] ** (p ** (n - i))) * (p ** i)
        comp = target * Fraction(1, p ** n)
        for c in comp.t.values():
            if c.denominator != 1:
                raise ArithmeticError("universal polynomial is not integral")
        comps.append(comp)
    return tuple(tuple((e, int(c)) for e, c in sorted(comp.t.items())) for comp in comps)


def _eval_poly(terms, values, one, char: int | None):
    """Evaluate an integer polynomial at ring elements."""
    nvars = len(values)
    maxdeg = [0] * nvars
    for e, _ in terms:
        for i, k in enumerate(e):
            if k > maxdeg[i]:
                maxdeg[i] = k
    powers = []
    for i in range(nvars):
        pw = [one]
        for _ in range(maxdeg[i]):
            pw.append(pw[-1] * values[i])
        powers.append(pw)
    acc = None
    for e, c in terms:
        if char:
            c %= char
            if c == 0:
                continue
        mono = None
        for i, k in enumerate(e):
            if k:
                mono = powers[i][k] if mono is None else mono * powers[i][k]
        term = (one if mono is None else mono) * c
        acc = term if acc is None else acc + term
    return (one - one) if acc is None else acc


# ---------------------------------------------------------------------------
# torsion-free lifts


class _ZMod:
    """Z[x]/(f) for a monic integer polynomial f, used as a torsion-free lift."""

    __slots__ = ("f", "c")

    def __init__(self, f: tuple, c):
        self.f = f
        self.c = tuple(c)

    def _red(self, c):
        d = len(self.f) - 1
        c = list(c)
        for k in range(len(c) - 1, d - 1, -1):
            a = c[k]
            if a:
                for i in range(d + 1):
                    c[k - d + i] -= a * self.f[i]
        c = c[:d] + [0] * (d - len(c))
        return tuple(c)

    def __add__(self, o):
        if isinstance(o, int):
            o = _ZMod(self.f, (o,) + (0,) * (len(self.c) - 1))
        return _ZMod(self.f, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return _ZMod(self.f, tuple(-a for a in self.c))

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if isinstance(o, int):
            return _ZMod(self.f, tuple(a * o for a in self.c))
        out = [0] * (2 * len(self.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    out[i + j] += a * b
        return _ZMod(self.f, self._red(out))

    __rmul__ = __mul__

    def __pow__(self, k):
        r = _ZMod(self.f, (1,) + (0,) * (len(self.c) - 1))
        b = self
        while k:
            if k & 1:
                r = r * b
            k >>= 1
            if k:
                b = b * b
        return r

    def divexact(self, n: int):
        for a in self.c:
            if a % n:
                raise ArithmeticError("inexact division in the lift")
        return _ZMod(self.f, tuple(a // n for a in self.c))


def _lift(x):
    """(lifted value, reducer) for rings with a torsion-free lift, else None."""
    if isinstance(x, bool):
        return None
    if isinstance(x, (int, Fraction)):
        return x, lambda v: v
    if isinstance(x, Fq):
        F = x.field
        if F.m == 1:
            return x.n, lambda v, F=F: F(int(v))
        f = tuple(F.modulus)
        return _ZMod(f, x.coords), lambda v, F=F: F([int(a) % F.p for a in v.c])
    if isinstance(x, PadicTrunc):
        p, M = x.p, x.M
        return x.value, lambda v, p=p, M=M: PadicTrunc(p, M, int(v))
    if isinstance(x, EisElem):
        R = x.ring
        return _ZMod(tuple(R.minpoly), x.c), lambda v, R=R, pr=x.prec: R.elem(v.c, pr)
    return None


def _divexact(v, n):
    if isinstance(v, _ZMod):
        return v.divexact(n)
    if isinstance(v, int):
        if v % n:
            raise ArithmeticError("inexact division in the lift")
        return v // n
    return Fraction(v) / n


def _ghost_values(comps, p):
    M = len(comps)
    out = []
    for n in range(M):
        acc = 0
        for i in range(n + 1):
            acc = comps[i] ** (p ** (n - i)) * (p ** i) + acc
        out.append(acc)
    return out


def _solve_ghost(ghosts, p):
    comps = []
    for n, w in enumerate(ghosts):
        acc = w
        for i in range(n):
            acc = acc - comps[i] ** (p ** (n - i)) * (p ** i)
        comps.append(_divexact(acc, p ** n))
    return comps


# ---------------------------------------------------------------------------


class WittVec:
    """A Witt vector (r_0, ..., r_{M-1}) over a commutative ring."""

    __slots__ = ("p", "comps")

    def __init__(self, p: int, comps: Sequence):
        self.p = p
        self.comps = tuple(comps)
        if not self.comps:
            raise ValueError("Witt vectors need length >= 1")

    @property
    def M(self):
        return len(self.comps)

    def __add__(self, o):
        return witt_add(self, o)

    def __mul__(self, o):
        return witt_mul(self, o)

    def __neg__(self):
        return witt_neg(self)

    def __sub__(self, o):
        return witt_add(self, witt_neg(o))

    def __eq__(self, o):
        return isinstance(o, WittVec) and self.p == o.p and self.comps == o.comps

    def __hash__(self):
        return hash((self.p, self.comps))

    def __repr__(self):
        return f"W{self.p}{list(self.comps)}"

    def to_json(self):
        def enc(x):
            if hasattr(x, "to_json"):
                return x.to_json()
            return str(x)
        return {"p": self.p, "M": self.M, "comps": [enc(c) for c in self.comps]}


def _zero_like(x):
    return x - x


def _one_like(x):
    if isinstance(x, (int, Fraction)):
        return 1
    if isinstance(x, Fq):
        return x.field.one()
    if isinstance(x, PadicTrunc):
        return PadicTrunc(x.p, x.M, 1)
    if isinstance(x, EisElem):
        return x.ring.one()
    if hasattr(x, "one"):
        return x.one()
    raise TypeError(f"no unit element known for {type(x)}")


def _char_of(x):
    if isinstance(x, Fq):
        return x.p
    return getattr(x, "char", None)


def _binary(a: WittVec, b: WittVec, op: str) -> WittVec:
    if a.p != b.p or a.M != b.M:
        raise ValueError("Witt vectors differ in p or length")
    p, M = a.p, a.M
    la = [_lift(x) for x in a.comps]
    lb = [_lift(x) for x in b.comps]
    if all(la) and all(lb):
        ga = _ghost_values([x for x, _ in la], p)
        gb = _ghost_values([x for x, _ in lb], p)
        gs = [x + y for x, y in zip(ga, gb)] if op == "add" else [x * y for x, y in zip(ga, gb)]
        comps = _solve_ghost(gs, p)
        red = la[0][1]
        return WittVec(p, [red(c) for c in comps])
    polys = universal_polynomials(p, M, op)
    vals = list(a.comps) + list(b.comps)
    one = _one_like(a.comps[0])
    char = _char_of(a.comps[0])
    return WittVec(p, [_eval_poly(polys[n], vals, one, char) for n in range(M)])


def witt_add(a: WittVec, b: WittVec) -> WittVec:
    return _binary(a, b, "add")


def witt_mul(a: WittVec, b: WittVec) -> WittVec:
    return _binary(a, b, "mul")


def witt_neg(a: WittVec) -> WittVec:
    p, M = a.p, a.M
    la = [_lift(x) for x in a.comps]
    if all(la):
        ga = _ghost_values([x for x, _ in la], p)
        comps = _solve_ghost([-g for g in ga], p)
        return WittVec(p, [la[0][1](c) for c in comps])
    polys = universal_polynomials(p, M, "neg")
    one = _one_like(a.comps[0])
    char = _char_of(a.comps[0])
    return WittVec(p, [_eval_poly(polys[n], list(a.comps), one, char) for n in range(M)])


def witt_sub(a: WittVec, b: WittVec) -> WittVec:
    return witt_add(a, witt_neg(b))


def ghost(w: WittVec):
    return _ghost_values(list(w.comps), w.p)


def teich(r, M: int, p: int) -> WittVec:
    z = _zero_like(r)
    return WittVec(p, [r] + [z] * (M - 1))


def witt_from_int(n: int, like, M: int, p: int) -> WittVec:
    """The image of the integer n in W_M of the ring containing ``like``."""
    comps = _solve_ghost([n] * M, p)
    one = _one_like(like)
    return WittVec(p, [one * int(c) for c in comps])


def witt_zero(like, M: int, p: int) -> WittVec:
    z = _zero_like(like)
    return WittVec(p, [z] * M)


def frobenius_w(w: WittVec) -> WittVec:
    """Componentwise p-th power (the Frobenius of W over a ring of characteristic p)."""
    char = _char_of(w.comps[0])
    if char != w.p:
        raise ValueError("componentwise Frobenius requires a ring of characteristic p")
    return WittVec(w.p, [x ** w.p for x in w.comps])


def verschiebung(w: WittVec) -> WittVec:
    z = _zero_like(w.comps[0])
    return WittVec(w.p, [z] + list(w.comps[:-1]))


# ---------------------------------------------------------------------------
# one-variable power series and the Artin-Hasse exponential


@dataclass(frozen=True)
class PowerSeries1:
    """sum c_k X^k for k <= D, exact rational coefficients."""

    coeffs: tuple

    @property
    def D(self):
        return len(self.coeffs) - 1

    @classmethod
    def from_list(cls, c, D):
        c = [Fraction(x) for x in c][: D + 1]
        return cls(tuple(c + [Fraction(0)] * (D + 1 - len(c))))

    def __add__(self, o):
        return PowerSeries1(tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    def __sub__(self, o):
        return PowerSeries1(tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __mul__(self, o):
        D = self.D
        out = [Fraction(0)] * (D + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(D + 1 - i):
                    out[i + j] += a * o.coeffs[j]
        return PowerSeries1(tuple(out))

    def __pow__(self, k):
        r = PowerSeries1.from_list([1], self.D)
        for _ in range(k):
            r = r * self
        return r

    def compose(self, inner: "PowerSeries1") -> "PowerSeries1":
        """self(inner) for inner with zero constant term."""
        if inner.coeffs[0] != 0:
            raise ValueError("inner series must have zero constant term")
        D = self.D
        acc = PowerSeries1.from_list([], D)
        power = PowerSeries1.from_list([1], D)
        for k in range(D + 1):
            if self.coeffs[k]:
                acc = acc + PowerSeries1(tuple(self.coeffs[k] * c for c in power.coeffs))
            power = power * inner
        return acc

    def exp(self) -> "PowerSeries1":
        """exp(self) for zero constant term, from n e_n = sum k l_k e_{n-k}."""
        if self.coeffs[0] != 0:
            raise ValueError("exp needs zero constant term")
        D = self.D
        e = [Fraction(1)] + [Fraction(0)] * D
        for n in range(1, D + 1):
            e[n] = sum(k * self.coeffs[k] * e[n - k] for k in range(1, n + 1)) / n
        return PowerSeries1(tuple(e))

    def to_json(self):
        return {"D": self.D, "coeffs": [str(c) for c in self.coeffs]}


def _monomial(k, c, D):
    out = [0] * (D + 1)
    if k <= D:
        out[k] = c
    return PowerSeries1.from_list(out, D)


def artin_hasse(D: int, p: int) -> PowerSeries1:
    """E(X) = exp(X + X^p/p + X^{p^2}/p^2 + ...) truncated at degree D."""
    if D < 1:
        raise ValueError("D must be >= 1")
    log = [Fraction(0)] * (D + 1)
    k = 0
    while p ** k <= D:
        log[p ** k] += Fraction(1, p ** k)
        k += 1
    return PowerSeries1(tuple(log)).exp()


def is_p_integral(s: PowerSeries1, p: int) -> bool:
    return all(c.denominator % p != 0 for c in s.coeffs)


def _in_ideal(s: PowerSeries1, p: int) -> bool:
    """Membership in the ideal (p^2 X, p X^p) of Z_p[[X]] up to degree D."""
    for n, c in enumerate(s.coeffs):
        need = 0 if n == 0 else (2 if n < p else 1)
        if n == 0:
            if c != 0:
                return False
        elif vp_rat(c, p) < need:
            return False
    return True


def artin_hasse_congruence_report(p: int, D: int) -> dict:
    """Expand E(X)^p, E(X^p)exp(pX) and E(X^p + pX) to degree D and compare."""
    E = artin_hasse(D, p)
    Ep = E ** p
    EXp = E.compose(_monomial(p, 1, D))
    exppX = _monomial(1, p, D).exp()
    middle = EXp * exppX
    right = E.compose(_monomial(p, 1, D) + _monomial(1, p, D))
    return {
        "p": p, "D": D,
        "power_identity": Ep == middle,
        "congruence": _in_ideal(middle - right, p),
        "p_integral": all(is_p_integral(s, p) for s in (Ep, middle, right)),
        "literal_EXp_vs_right": _in_ideal(EXp - right, p),
    }


def artin_hasse_congruence_check(p: int, D: int) -> bool:
    """E(X)^p = E(X^p) exp(pX) exactly, and that is congruent to E(X^p + pX)."""
    r = artin_hasse_congruence_report(p, D)
    return r["power_identity"] and r["congruence"] and r["p_integral"]


# ---------------------------------------------------------------------------
# Fontaine's map on sequences


def _power_precision(c, m: int, p: int) -> Fraction:
    """Certified precision of x^{p^m} when x is known modulo valuation c."""
    g = Fraction(c)
    for _ in range(m):
        g = min(g + 1, p * g)
    return g


@dataclass(frozen=True)
class GammaValue:
    value: EisElem
    precision: Fraction
    level: int

    def to_json(self):
        return {"value": self.value.to_json(), "precision": str(self.precision), "level": self.level}


def fontaine_gamma(w: WittVec, target_level: int | None = None) -> GammaValue:
    """sum_{n<M} p^n r^{(n)} with r^{(n)} approximated by r_u^{p^{u-n}}.

    Components must be sequence-ring elements exposing ``values`` (level u
    value at index u - u_min), ``u_min``, ``u_max`` and the threshold ``c``.
    """
    p = w.p
    comps = w.comps
    u_top = min(c.u_max for c in comps)
    if target_level is not None:
        u_top = min(u_top, target_level)
    L = len(comps)
    if u_top < L - 1:
        raise PrecisionExhausted("not enough levels for the requested Witt length")
    ring = comps[0].ring
    total = ring.zero()
    prec = Fraction(L)
    for n, r in enumerate(comps):
        x = r.value_at(u_top)
        m = u_top - n
        term = x ** (p ** m)
        total = total + term * (p ** n)
        prec = min(prec, n + _power_precision(min(r.c, 1), m, p))
    prec = min(prec, Fraction(ring.M))
    return GammaValue(total.with_prec(prec), prec, u_top)
