"""Truncated iterated Laurent series in N variables.

A series is a finite map from exponent vectors (multiples of 1/D) to
nonzero coefficients, together with a truncation box.  The box records
two things per variable: ``lo`` is a lower bound for the support of the
series being modelled, ``hi`` is the precision: every term whose exponent
is componentwise <= hi is known exactly.  Sums keep the smaller ``hi``;
products use ``hi = min(hi_f + lo_g, hi_g + lo_f)``, which is exactly the
region where no unknown tail term can contribute.

Three coefficient domains are supported: a finite field (characteristic
p), Teichmueller digits with t_1 = p (mixed characteristic, kept in the
unique digit presentation by a carry pass after every operation), and an
EisRing (used for the two-dimensional test tower).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable

from .base_arith import EisElem, EisRing, FiniteField, finite_field, teichmueller
from .errors import BoxExhausted, BoxMismatch, NotAPthPower, ZeroSeries
from .herbrand import LexIndex

DEFAULT_HI = 64


@dataclass(frozen=True)
class TruncBox:
    lo: tuple
    hi: tuple
    D: int = 1

    def __post_init__(self):
        lo = tuple(Fraction(x) for x in self.lo)
        hi = tuple(Fraction(x) for x in self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if self.D < 1:
            raise ValueError("D must be >= 1")
        if len(lo) != len(hi):
            raise ValueError("lo and hi differ in length")
        if any(a > b for a, b in zip(lo, hi)):
            raise BoxExhausted(f"empty box lo={lo} hi={hi}")
        for x in lo + hi:
            if (x * self.D).denominator != 1:
                raise ValueError(f"bound {x} is not a multiple of 1/{self.D}")

    @property
    def N(self):
        return len(self.lo)

    def holds(self, e) -> bool:
        return all(x <= h for x, h in zip(e, self.hi))

    def to_json(self):
        return {"lo": [str(x) for x in self.lo], "hi": [str(x) for x in self.hi], "D": self.D}

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(Fraction(x) for x in obj["lo"]), tuple(Fraction(x) for x in obj["hi"]),
                   int(obj.get("D", 1)))


# ---------------------------------------------------------------------------
# coefficient domains

class FieldDomain:
    tag = "Fq"

    def __init__(self, field: FiniteField):
        self.field = field
        self.p = field.p
        self.char = field.p
        self._rep = None

    def coerce(self, x):
        return self.field(x)

    def is_zero(self, c):
        return c.n == 0

    def one(self):
        return self.field.one()

    def trace_one(self):
        """A fixed element of trace 1, spanning the coset space k / (x^p - x)."""
        if self._rep is None:
            self._rep = next(x for x in self.field.elements() if x.trace() == 1)
        return self._rep

    def __eq__(self, other):
        return isinstance(other, FieldDomain) and self.field == other.field

    def to_json(self):
        return {"type": "Fq", "p": self.field.p, "m": self.field.m}

    def coeff_json(self, c):
        return list(c.coords) if self.field.m > 1 else c.n

    def coeff_from_json(self, obj):
        return self.field(obj)


class TeichDomain:
    """Teichmueller digits in F_p, with the first variable standing for p."""

    tag = "teich"

    def __init__(self, p: int):
        self.p = p
        self.char = 0
        self.field = finite_field(p, 1)

    def coerce(self, x):
        return self.field(x)

    def is_zero(self, c):
        return c.n == 0

    def one(self):
        return self.field.one()

    def __eq__(self, other):
        return isinstance(other, TeichDomain) and self.p == other.p

    def to_json(self):
        return {"type": "teich", "p": self.p}

    def coeff_json(self, c):
        return c.n

    def coeff_from_json(self, obj):
        return self.field(obj)


class RingDomain:
    tag = "EisRing"

    def __init__(self, ring: EisRing):
        self.ring = ring
        self.p = ring.p
        self.char = 0

    def coerce(self, x):
        return self.ring(x)

    def is_zero(self, c: EisElem):
        return c.is_zero()

    def one(self):
        return self.ring.one()

    def __eq__(self, other):
        return isinstance(other, RingDomain) and self.ring == other.ring

    def to_json(self):
        return {"type": "EisRing", "p": self.ring.p, "M": self.ring.M,
                "minpoly": list(self.ring.minpoly)}

    def coeff_json(self, c):
        return list(c.c)

    def coeff_from_json(self, obj):
        return self.ring.elem(obj)


def domain_from_json(obj):
    t = obj["type"]
    if t == "Fq":
        return FieldDomain(finite_field(int(obj["p"]), int(obj.get("m", 1))))
    if t == "teich":
        return TeichDomain(int(obj["p"]))
    if t == "EisRing":
        return RingDomain(EisRing(int(obj["p"]), int(obj["M"]), obj["minpoly"]))
    raise ValueError(f"unknown coefficient domain {t}")


def as_domain(x):
    if isinstance(x, (FieldDomain, TeichDomain, RingDomain)):
        return x
    if isinstance(x, FiniteField):
        return FieldDomain(x)
    if isinstance(x, EisRing):
        return RingDomain(x)
    raise TypeError(f"cannot use {x!r} as a coefficient domain")


# ---------------------------------------------------------------------------

def _exp(e) -> tuple:
    return tuple(Fraction(x) for x in e)


class MLaurent:
    __slots__ = ("N", "domain", "terms", "box")

    def __init__(self, N: int, domain, terms: dict, box: TruncBox, _canonical=False):
        self.N = N
        self.domain = as_domain(domain)
        self.box = box
        if box.N != N:
            raise BoxMismatch("box dimension differs from N")
        if _canonical:
            self.terms = terms
            return
        clean = {}
        items = []
        for e, c in terms.items():
            e = _exp(e)
            if len(e) != N:
                raise ValueError("exponent of wrong length")
            c = self.domain.coerce(c)
            if self.domain.is_zero(c):
                continue
            if any((x * box.D).denominator != 1 for x in e):
                raise ValueError(f"exponent {e} not a multiple of 1/{box.D}")
            if any(x < l for x, l in zip(e, box.lo)):
                raise BoxExhausted(f"term {e} below box {box.lo}")
            if not box.holds(e):
                continue
            items.append((e, c))
        if isinstance(self.domain, TeichDomain):
            clean = _teich_canonical(self.domain.p, N, box, [(e, c.n) for e, c in items], digits=True)
        else:
            for e, c in items:
                clean[e] = clean[e] + c if e in clean else c
            clean = {e: c for e, c in clean.items() if not self.domain.is_zero(c)}
        self.terms = clean

    # --- constructors ------------------------------------------------------
    @classmethod
    def make(cls, domain, N: int, terms: dict | Iterable, box: TruncBox | None = None):
        if not isinstance(terms, dict):
            terms = dict(terms)
        terms = {_exp(e): c for e, c in terms.items()}
        if box is None:
            box = default_box(N, terms.keys())
        return cls(N, domain, terms, box)

    @classmethod
    def zero(cls, domain, N: int, box: TruncBox):
        return cls(N, domain, {}, box)

    @classmethod
    def one(cls, domain, N: int, box: TruncBox):
        domain = as_domain(domain)
        return cls(N, domain, {(Fraction(0),) * N: domain.one()}, box)

    @classmethod
    def monomial(cls, domain, N: int, exp, coeff=1, box: TruncBox | None = None):
        return cls.make(domain, N, {_exp(exp): coeff}, box)

    @classmethod
    def gen(cls, domain, N: int, i: int, box: TruncBox | None = None):
        """The variable t_i (1-based)."""
        e = [0] * N
        e[i - 1] = 1
        return cls.make(domain, N, {tuple(e): 1}, box)

    # --- basics --------------------------------------------------------------
    def _compat(self, other):
        if not isinstance(other, MLaurent):
            raise TypeError("expected MLaurent")
        if other.N != self.N or other.domain != self.domain:
            raise BoxMismatch("series differ in dimension or coefficient domain")

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, MLaurent):
            return NotImplemented
        if self.N != other.N or self.domain != other.domain:
            return False
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[e] == other.terms[e] for e in self.terms)

    def equal_within(self, other, box: TruncBox | None = None) -> bool:
        """Equality of all terms lying in the common guarantee region."""
        box = box or _sum_box(self.box, other.box)
        a = {e: c for e, c in self.terms.items() if box.holds(e)}
        b = {e: c for e, c in other.terms.items() if box.holds(e)}
        return set(a) == set(b) and all(a[e] == b[e] for e in a)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(f"t{i+1}^{x}" for i, x in enumerate(e) if x != 0)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def with_box(self, box: TruncBox):
        return MLaurent(self.N, self.domain, dict(self.terms), box)

    # --- arithmetic ------------------------------------------------------------
    def __add__(self, other):
        self._compat(other)
        box = _sum_box(self.box, other.box)
        if isinstance(self.domain, TeichDomain):
            items = _teich_values(self) + _teich_values(other)
            return MLaurent(self.N, self.domain, _teich_canonical(self.domain.p, self.N, box, items), box, True)
        out = {}
        for src in (self.terms, other.terms):
            for e, c in src.items():
                if box.holds(e):
                    out[e] = out[e] + c if e in out else c
        return MLaurent(self.N, self.domain, {e: c for e, c in out.items() if not self.domain.is_zero(c)},
                        box, True)

    def __neg__(self):
        if isinstance(self.domain, TeichDomain):
            items = [(e, -v) for e, v in _teich_values(self)]
            return MLaurent(self.N, self.domain, _teich_canonical(self.domain.p, self.N, self.box, items),
                            self.box, True)
        return MLaurent(self.N, self.domain, {e: -c for e, c in self.terms.items()}, self.box, True)

    def __sub__(self, other):
        return self + (-other)

    def with_scalar(self, a):
        return MLaurent(self.N, self.domain, {e: c * a for e, c in self.terms.items()}, self.box)

    def __mul__(self, other):
        if not isinstance(other, MLaurent):
            return self.with_scalar(self.domain.coerce(other))
        self._compat(other)
        box = _prod_box(self.box, other.box)
        N = self.N
        if isinstance(self.domain, TeichDomain):
            items = []
            va, vb = _teich_values(self), _teich_values(other)
            for ea, ca in va:
                for eb, cb in vb:
                    e = tuple(x + y for x, y in zip(ea, eb))
                    if box.holds(e):
                        items.append((e, ca * cb))
            return MLaurent(N, self.domain, _teich_canonical(self.domain.p, N, box, items), box, True)
        out = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                if box.holds(e):
                    c = ca * cb
                    out[e] = out[e] + c if e in out else c
        return MLaurent(N, self.domain, {e: c for e, c in out.items() if not self.domain.is_zero(c)},
                        box, True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return inv(self) ** (-k)
        result = MLaurent.one(self.domain, self.N, self.box)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, exp):
        """Multiply by the monomial t^exp, moving the box along."""
        exp = _exp(exp)
        box = TruncBox(tuple(l + x for l, x in zip(self.box.lo, exp)),
                       tuple(h + x for h, x in zip(self.box.hi, exp)), self.box.D)
        return MLaurent(self.N, self.domain,
                        {tuple(a + b for a, b in zip(e, exp)): c for e, c in self.terms.items()}, box)

    def coeff_valuation(self):
        """Minimum valuation of the coefficients (EisRing domain)."""
        if not isinstance(self.domain, RingDomain):
            raise TypeError("only defined for EisRing coefficients")
        vals = [c.vlow() for c in self.terms.values()]
        return min(vals) if vals else self.domain.ring.M

    def to_json(self):
        p = getattr(self.domain, "p", None)
        return {"N": self.N, "p": p, "D": self.box.D, "domain": self.domain.to_json(),
                "box": self.box.to_json(),
                "terms": [{"exp": [str(x) for x in e], "coeff": self.domain.coeff_json(c)}
                          for e, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, obj):
        dom = domain_from_json(obj["domain"])
        box = TruncBox.from_json(obj["box"])
        terms = {_exp(t["exp"]): dom.coeff_from_json(t["coeff"]) for t in obj["terms"]}
        return cls(int(obj["N"]), dom, terms, box)


def default_box(N: int, exps, hi: int = DEFAULT_HI, D: int | None = None) -> TruncBox:
    exps = list(exps)
    if D is None:
        D = 1
        for e in exps:
            for x in e:
                D = lcm(D, Fraction(x).denominator)
    lo = [min([Fraction(0)] + [Fraction(e[i]) for e in exps]) for i in range(N)]
    lo = [Fraction(int((x * D).__floor__()), D) for x in lo]
    hiv = [max([Fraction(hi)] + [Fraction(e[i]) for e in exps]) for i in range(N)]
    return TruncBox(tuple(lo), tuple(hiv), D)


def _sum_box(a: TruncBox, b: TruncBox) -> TruncBox:
    return TruncBox(tuple(min(x, y) for x, y in zip(a.lo, b.lo)),
                    tuple(min(x, y) for x, y in zip(a.hi, b.hi)), lcm(a.D, b.D))


def _prod_box(a: TruncBox, b: TruncBox) -> TruncBox:
    lo = tuple(x + y for x, y in zip(a.lo, b.lo))
    hi = tuple(min(ha + lb, hb + la) for ha, la, hb, lb in zip(a.hi, a.lo, b.hi, b.lo))
    if any(l > h for l, h in zip(lo, hi)):
        raise BoxExhausted(f"product guarantee box is empty: lo={lo} hi={hi}")
    return TruncBox(lo, hi, lcm(a.D, b.D))


# --- Teichmueller digit canonicalization -------------------------------------

def _teich_values(f: MLaurent):
    p = f.domain.p
    prec = _teich_prec(f.box)
    return [(e, teichmueller(c, prec, p).value) for e, c in f.terms.items()]


def _teich_prec(box: TruncBox) -> int:
    return max(int(box.hi[0] - box.lo[0]) + 1, 1)


def _teich_canonical(p: int, N: int, box: TruncBox, items, digits=False):
    """Re-expand sum of (exp, p-adic integer) into Teichmueller digits.

    The first exponent must be an integer; it counts powers of p.
    """
    groups: dict = {}
    prec = _teich_prec(box)
    for e, v in items:
        if e[0].denominator != 1:
            raise ValueError("the p-exponent must be an integer")
        if digits:
            v = teichmueller(v, prec, p).value
        groups.setdefault(e[1:], []).append((int(e[0]), v))
    out = {}
    hi1 = int(box.hi[0])
    F = finite_field(p, 1)
    for tail, lst in groups.items():
        lo = min(k for k, _ in lst)
        P = hi1 - lo + 1
        if P <= 0:
            continue
        mod = p ** P
        V = sum(v * p ** (k - lo) for k, v in lst) % mod
        for k in range(P):
            if V == 0:
                break
            digit = V % p
            if digit:
                out[(Fraction(lo + k),) + tail] = F(digit)
                V = (V - teichmueller(digit, P - k, p).value) % p ** (P - k)
            V //= p
    return out


# ---------------------------------------------------------------------------
# operations

def add(f: MLaurent, g: MLaurent) -> MLaurent:
    return f + g


def mul(f: MLaurent, g: MLaurent) -> MLaurent:
    return f * g


def nvaluation(f: MLaurent) -> LexIndex:
    if not f.terms:
        raise ZeroSeries("valuation of the zero series")
    return LexIndex(min(f.terms))


def inv(f: MLaurent) -> MLaurent:
    """Inverse via a geometric series after factoring out the leading term."""
    if not f.terms:
        raise ZeroSeries("inverse of zero")
    v = min(f.terms)
    alpha = f.terms[v]
    dom = f.domain
    ainv = alpha.inverse()
    N, box = f.N, f.box
    negv = tuple(-x for x in v)
    gbox = TruncBox(tuple(Fraction(0) for _ in range(N)), tuple(h - x for h, x in zip(box.hi, v)), box.D)
    if any(h < 0 for h in gbox.hi):
        raise BoxExhausted("box too small for the inverse")
    g = MLaurent(N, dom, {}, gbox)
    for e, c in f.terms.items():
        ee = tuple(a - b for a, b in zip(e, v))
        if any(x < 0 for x in ee):
            raise BoxExhausted(f"term {e} is not a power series multiple of the leading term; "
                               "the box cannot hold the geometric expansion")
        g = g + MLaurent(N, dom, {ee: c * ainv}, gbox)
    one = MLaurent.one(dom, N, gbox)
    h = one - g
    total = one
    power = one
    while True:
        power = power * h
        if power.is_zero():
            break
        total = total + power
    # multiply by alpha^{-1} t^{-v}
    out = total.with_scalar(ainv).shift(negv)
    return out


def frobenius(f: MLaurent) -> MLaurent:
    if f.domain.char == 0:
        raise ValueError("Frobenius on series is only defined in characteristic p")
    p = f.domain.p
    box = TruncBox(tuple(x * p for x in f.box.lo), tuple(x * p for x in f.box.hi), f.box.D)
    return MLaurent(f.N, f.domain, {tuple(x * p for x in e): c ** p for e, c in f.terms.items()}, box)


def _divisible_by_p(e, p, D) -> bool:
    return all(((x * D) / p).denominator == 1 for x in e)


def pth_root(f: MLaurent) -> MLaurent:
    if f.domain.char == 0:
        raise ValueError("p-th roots of series need characteristic p")
    p, D = f.domain.p, f.box.D
    terms = {}
    for e, c in f.terms.items():
        if not _divisible_by_p(e, p, D):
            raise NotAPthPower(f"exponent {e} not divisible by {p}")
        terms[tuple(x / p for x in e)] = c.pth_root()
    lo = tuple(_floor_to(x / p, D) for x in f.box.lo)
    hi = tuple(_floor_to(x / p, D) for x in f.box.hi)
    return MLaurent(f.N, f.domain, terms, TruncBox(lo, hi, D))


def _floor_to(x: Fraction, D: int) -> Fraction:
    return Fraction((x * D).__floor__(), D)


def artin_schreier_reduce(f: MLaurent) -> MLaurent:
    """Normal form modulo x^p - x and the maximal ideal.

    Negative p-divisible monomials a*t^(p e) become a^(1/p) t^e until no such
    term is left, positive terms are dropped, and the constant term is
    replaced by the fixed representative Tr(a) * r0 of its coset.
    """
    if f.domain.char == 0:
        raise ValueError("Artin-Schreier reduction needs characteristic p")
    p, D, N = f.domain.p, f.box.D, f.N
    zero = (Fraction(0),) * N
    acc = {}
    todo = list(f.terms.items())
    while todo:
        e, c = todo.pop()
        if e > zero:
            continue
        if e != zero and _divisible_by_p(e, p, D):
            todo.append((tuple(x / p for x in e), c.pth_root()))
            continue
        acc[e] = acc[e] + c if e in acc else c
    out = {e: c for e, c in acc.items() if not f.domain.is_zero(c)}
    if zero in out:
        t = out[zero].trace()
        rep = f.domain.trace_one() * t
        if t:
            out[zero] = rep
        else:
            del out[zero]
    return MLaurent(N, f.domain, out, f.box, True)
