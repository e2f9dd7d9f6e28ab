"""Exact scalar arithmetic.

Prime fields and their small extensions, truncated p-adic integers,
Eisenstein extension rings of Z_p and Teichmueller lifts.  Valuations
are normalized by v(p) = 1 throughout; a uniformizer of a ring of
degree d therefore has valuation 1/d.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import HdlfError, PrecisionExhausted

INFINITY = math.inf
MAX_PRIME = 97


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def vp(n: int, p: int):
    """p-adic valuation of an integer; INFINITY for 0."""
    if n == 0:
        return INFINITY
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp_rat(x, p: int):
    x = Fraction(x)
    if x == 0:
        return INFINITY
    return vp(x.numerator, p) - vp(x.denominator, p)


def rat_mod(x, p: int, M: int) -> int:
    """Image of a p-integral rational in Z/p^M."""
    x = Fraction(x)
    mod = p ** M
    if x.denominator % p == 0:
        raise ValueError(f"{x} is not {p}-integral")
    return x.numerator * pow(x.denominator, -1, mod) % mod


# ---------------------------------------------------------------------------
# integer polynomials, coefficient lists from low to high degree

def zpoly_trim(a: list) -> list:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def zpoly_add(a, b):
    n = max(len(a), len(b))
    return zpoly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                       for i in range(n)])


def zpoly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return zpoly_trim(out)


def zpoly_divexact(a, b):
    """Quotient of integer polynomials when b is monic and divides a."""
    a = list(a)
    assert b[-1] == 1
    db = len(b) - 1
    q = [0] * max(len(a) - db, 0)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            q[k - db] = c
            for i in range(db + 1):
                a[k - db + i] -= c * b[i]
    if any(a):
        raise ValueError("inexact polynomial division")
    return zpoly_trim(q)


def shifted_power(k: int) -> list:
    """(1+x)^k as an integer polynomial."""
    return [math.comb(k, i) for i in range(k + 1)]


def cyclotomic_shifted(p: int, n: int) -> list:
    """Minimal polynomial over Q of zeta_{p^n} - 1, namely Phi_{p^n}(1+x)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    top = shifted_power(p ** n)
    top[0] -= 1
    low = shifted_power(p ** (n - 1))
    low[0] -= 1
    return zpoly_divexact(top, low)


# ---------------------------------------------------------------------------
# finite fields

CONWAY = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 4, 1),
    (7, 2): (3, 6, 1),
}


def _fp_poly_mulmod(a, b, mod, p):
    m = len(mod) - 1
    out = [0] * (2 * m - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    for k in range(len(out) - 1, m - 1, -1):
        c = out[k]
        if c:
            for i in range(m + 1):
                out[k - m + i] = (out[k - m + i] - c * mod[i]) % p
    return out[:m]


def _is_irreducible(mod, p) -> bool:
    """Brute force: no monic factor of degree <= m/2."""
    m = len(mod) - 1
    if m == 1:
        return True
    for deg in range(1, m // 2 + 1):
        for code in range(p ** deg):
            cand = [(code // p ** i) % p for i in range(deg)] + [1]
            r = list(mod)
            for k in range(m, deg - 1, -1):
                c = r[k]
                if c:
                    for i in range(deg + 1):
                        r[k - deg + i] = (r[k - deg + i] - c * cand[i]) % p
            if not any(r[:deg]):
                return False
    return True


def _first_irreducible(p, m):
    for code in range(p ** m):
        cand = [(code // p ** i) % p for i in range(m)] + [1]
        if cand[0] and _is_irreducible(cand, p):
            return tuple(cand)
    raise HdlfError("no irreducible polynomial found")


class FiniteField:
    """F_q with q = p^m, elements encoded by integers sum c_i p^i."""

    def __init__(self, p: int, m: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p) or p > MAX_PRIME:
            raise ValueError(f"p={p} must be a prime <= {MAX_PRIME}")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        self.p, self.m, self.q = p, m, p ** m
        if modulus is None:
            modulus = (0, 1) if m == 1 else CONWAY.get((p, m)) or _first_irreducible(p, m)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree m")
        if not _is_irreducible(list(modulus), p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = modulus
        if m > 1:
            self._build_tables()

    def _digits(self, n):
        return [(n // self.p ** i) % self.p for i in range(self.m)]

    def _code(self, digits):
        return sum(int(c) % self.p * self.p ** i for i, c in enumerate(digits))

    def _build_tables(self):
        q, p = self.q, self.p
        mod = list(self.modulus)
        for g in range(2, q):
            exp = [1]
            x = [1] + [0] * (self.m - 1)
            gd = self._digits(g)
            for _ in range(q - 2):
                x = _fp_poly_mulmod(x, gd, mod, p)
                exp.append(self._code(x))
            if len(set(exp)) == q - 1:
                break
        self._exp = exp
        self._log = {v: i for i, v in enumerate(exp)}
        self._addt = [[self._code([(a + b) % p for a, b in zip(self._digits(x), self._digits(y))])
                       for y in range(q)] for x in range(q)]
        self._negt = [self._code([(-a) % p for a in self._digits(x)]) for x in range(q)]

    # raw integer-code operations
    def _add(self, a, b):
        return (a + b) % self.p if self.m == 1 else self._addt[a][b]

    def _neg(self, a):
        return (-a) % self.p if self.m == 1 else self._negt[a]

    def _mul(self, a, b):
        if self.m == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def _pow(self, a, k):
        if self.m == 1:
            if a == 0:
                return 0 if k > 0 else 1
            return pow(a, k % (self.p - 1), self.p)
        if a == 0:
            if k < 0:
                raise ZeroDivisionError
            return 0 if k > 0 else 1
        return self._exp[(self._log[a] * k) % (self.q - 1)]

    def __call__(self, x) -> "Fq":
        if isinstance(x, Fq):
            if x.field is not self:
                raise ValueError("element of a different field")
            return x
        if isinstance(x, (list, tuple)):
            return Fq(self, self._code(x))
        return Fq(self, int(x) % self.p)

    def zero(self):
        return Fq(self, 0)

    def one(self):
        return Fq(self, 1)

    def gen(self):
        """Class of the variable (a primitive element for Conway moduli)."""
        return Fq(self, self.p if self.m > 1 else 1)

    def elements(self):
        return [Fq(self, n) for n in range(self.q)]

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.m})"

    def as_ring_tag(self):
        return {"type": "Fq", "p": self.p, "m": self.m}


@lru_cache(maxsize=None)
def finite_field(p: int, m: int = 1) -> FiniteField:
    return FiniteField(p, m)


class Fq:
    """Element of a finite field."""

    __slots__ = ("field", "n")

    def __init__(self, field: FiniteField, n: int):
        self.field = field
        self.n = n

    @property
    def p(self):
        return self.field.p

    @property
    def m(self):
        return self.field.m

    @property
    def coords(self):
        return tuple(self.field._digits(self.n))

    def _coerce(self, other):
        if isinstance(other, Fq):
            if other.field != self.field:
                raise ValueError("mixed fields")
            return other.n
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return Fq(self.field, self.field._add(self.n, b))

    __radd__ = __add__

    def __neg__(self):
        return Fq(self.field, self.field._neg(self.n))

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return Fq(self.field, self.field._add(self.n, self.field._neg(b)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return Fq(self.field, self.field._mul(self.n, b))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return Fq(self.field, self.field._pow(self.n, k))

    def inverse(self):
        if self.n == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self ** -1

    def __truediv__(self, other):
        return self * self.field(other).inverse()

    def __eq__(self, other):
        if isinstance(other, Fq):
            return self.field == other.field and self.n == other.n
        if isinstance(other, int):
            return self.n == other % self.field.p and (self.field.m == 1 or self.n < self.field.p)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.m, self.n))

    def __bool__(self):
        return self.n != 0

    def is_zero(self):
        return self.n == 0

    def frobenius(self):
        return self ** self.field.p

    def pth_root(self):
        return self ** (self.field.q // self.field.p)

    def trace(self) -> int:
        """Absolute trace to F_p, as an integer in [0, p)."""
        s, x = self.field.zero(), self
        for _ in range(self.field.m):
            s = s + x
            x = x.frobenius()
        return s.n

    def __repr__(self):
        if self.field.m == 1:
            return f"{self.n}"
        return f"Fq{self.field.p}^{self.field.m}{list(self.coords)}"

    def to_json(self):
        return {"p": self.p, "m": self.m, "coords": list(self.coords)}


def frobenius_fq(a: Fq) -> Fq:
    return a.frobenius()


# ---------------------------------------------------------------------------
# truncated p-adic integers

class PadicTrunc:
    """An integer modulo p^M."""

    __slots__ = ("p", "M", "value")

    def __init__(self, p: int, M: int, value: int):
        self.p, self.M = p, M
        self.value = int(value) % p ** M

    def _v(self, other):
        if isinstance(other, PadicTrunc):
            if (other.p, other.M) != (self.p, self.M):
                raise ValueError("mixed p-adic precisions")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return rat_mod(other, self.p, self.M)
        return NotImplemented

    def __add__(self, o):
        b = self._v(o)
        return b if b is NotImplemented else PadicTrunc(self.p, self.M, self.value + b)

    __radd__ = __add__

    def __sub__(self, o):
        b = self._v(o)
        return b if b is NotImplemented else PadicTrunc(self.p, self.M, self.value - b)

    def __rsub__(self, o):
        return -self + o

    def __neg__(self):
        return PadicTrunc(self.p, self.M, -self.value)

    def __mul__(self, o):
        b = self._v(o)
        return b if b is NotImplemented else PadicTrunc(self.p, self.M, self.value * b)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return PadicTrunc(self.p, self.M, pow(self.value, k, self.p ** self.M))

    def __eq__(self, o):
        b = self._v(o)
        if b is NotImplemented:
            return b
        return (self.value - b) % self.p ** self.M == 0

    def __hash__(self):
        return hash((self.p, self.M, self.value))

    def is_zero(self):
        return self.value == 0

    def valuation(self):
        return INFINITY if self.value == 0 else vp(self.value, self.p)

    def __repr__(self):
        return f"{self.value} + O({self.p}^{self.M})"

    def to_json(self):
        return {"p": self.p, "M": self.M, "value": self.value}


def teichmueller(a, M: int, p: int | None = None) -> PadicTrunc:
    """Teichmueller lift of a prime-field element modulo p^M."""
    if isinstance(a, Fq):
        if a.m > 1:
            raise HdlfError("Teichmueller lifts of non-prime-field elements are not supported")
        p, n = a.p, a.n
    else:
        if p is None:
            raise ValueError("p required for integer input")
        n = int(a) % p
    if M < 1:
        raise ValueError("M must be >= 1")
    mod = p ** M
    x = n
    while True:
        y = pow(x, p, mod)
        if y == x:
            return PadicTrunc(p, M, x)
        x = y


# ---------------------------------------------------------------------------
# Eisenstein rings

def is_eisenstein(minpoly: Sequence[int], p: int) -> bool:
    if len(minpoly) < 2 or minpoly[-1] != 1:
        return False
    if any(c % p for c in minpoly[:-1]):
        return False
    return vp(minpoly[0], p) == 1


class EisRing:
    """Z_p[x]/(f, p^M) for an Eisenstein polynomial f of degree d."""

    def __init__(self, p: int, M: int, minpoly: Sequence[int], name: str = "pi"):
        minpoly = [int(c) for c in minpoly]
        if not is_prime(p):
            raise ValueError("p must be prime")
        if M < 1:
            raise ValueError("M must be >= 1")
        if not is_eisenstein(minpoly, p):
            raise ValueError(f"{minpoly} is not Eisenstein at {p}")
        self.p, self.M, self.name = p, M, name
        self.minpoly = tuple(minpoly)
        self.d = d = len(minpoly) - 1
        self.mod = p ** M
        safe = d * self.mod * self.mod < 2 ** 62
        self._dtype = np.int64 if safe else object
        # rows: x^(d+k) reduced, k = 0..d-2
        red = []
        cur = [(-c) % self.mod for c in minpoly[:-1]]
        for _ in range(max(d - 1, 0)):
            red.append(cur)
            top = cur[-1]
            nxt = [0] + cur[:-1]
            cur = [(nxt[i] - top * minpoly[i]) % self.mod for i in range(d)]
        self._red = np.array(red, dtype=self._dtype).reshape(max(d - 1, 0), d)
        u0 = minpoly[0] // p
        u0inv = pow(u0, -1, self.mod)
        # p/pi = -(pi^(d-1) + a_{d-1} pi^(d-2) + ... + a_1)/u0
        self._p_over_pi = tuple((-c * u0inv) % self.mod for c in minpoly[1:])

    def __eq__(self, other):
        return isinstance(other, EisRing) and (self.p, self.M, self.minpoly) == (other.p, other.M, other.minpoly)

    def __hash__(self):
        return hash((self.p, self.M, self.minpoly))

    def __repr__(self):
        return f"EisRing(p={self.p}, M={self.M}, d={self.d})"

    def elem(self, coords: Iterable[int], prec=None) -> "EisElem":
        c = [int(x) % self.mod for x in coords]
        if len(c) > self.d:
            raise ValueError("too many coordinates")
        c += [0] * (self.d - len(c))
        return EisElem(self, tuple(c), self.M if prec is None else prec)

    def __call__(self, x) -> "EisElem":
        if isinstance(x, EisElem):
            if x.ring != self:
                raise ValueError("element of another ring")
            return x
        if isinstance(x, PadicTrunc):
            return self.elem([x.value], min(Fraction(x.M), self.M))
        if isinstance(x, Fraction):
            return self.elem([rat_mod(x, self.p, self.M)])
        return self.elem([int(x)])

    def zero(self):
        return self.elem([])

    def one(self):
        return self.elem([1])

    def uniformizer(self):
        if self.d == 1:
            return self.elem([-self.minpoly[0]])
        return self.elem([0, 1])

    def teich(self, a) -> "EisElem":
        return self.elem([teichmueller(a, self.M, self.p).value])

    def poly_eval(self, coeffs: Sequence, x: "EisElem") -> "EisElem":
        """Horner evaluation of a polynomial given low-to-high."""
        acc = self.zero()
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    def _mulcoords(self, a, b):
        d = self.d
        A = np.array(a, dtype=self._dtype)
        B = np.array(b, dtype=self._dtype)
        prod = np.convolve(A, B) % self.mod
        low = prod[:d]
        if d > 1:
            high = prod[d:]
            low = (low + high @ self._red) % self.mod
        return tuple(int(x) for x in low)


def _min_frac(*xs):
    return min(Fraction(x) if x != INFINITY else INFINITY for x in xs)


class EisElem:
    """Element of an EisRing together with its absolute precision.

    ``prec`` is a rational number: the element is known modulo the ideal of
    valuation >= prec.  It never exceeds the ring precision M.
    """

    __slots__ = ("ring", "c", "prec")

    def __init__(self, ring: EisRing, c: tuple, prec):
        self.ring = ring
        self.c = c
        self.prec = min(Fraction(prec), Fraction(ring.M))

    # --- valuation ---------------------------------------------------------
    def _raw_val(self):
        p, d = self.ring.p, self.ring.d
        best = INFINITY
        for i, x in enumerate(self.c):
            if x:
                v = vp(x, p) + Fraction(i, d)
                if v < best:
                    best = v
        return best

    def valuation(self, assert_nonzero: bool = False):
        """v(self) with v(p)=1, or INFINITY when zero at working precision."""
        v = self._raw_val()
        if v >= self.prec:
            if assert_nonzero:
                raise PrecisionExhausted(f"element is zero to precision {self.prec}")
            return INFINITY
        return v

    def vlow(self):
        """A certified lower bound for the valuation (exact when < prec)."""
        v = self._raw_val()
        return self.prec if v >= self.prec else v

    def is_zero(self):
        return self.valuation() == INFINITY

    # --- arithmetic ----------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, EisElem):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("mixed rings")
            return other
        if isinstance(other, (int, Fraction, PadicTrunc)):
            return self.ring(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        m = self.ring.mod
        return EisElem(self.ring, tuple((a + b) % m for a, b in zip(self.c, o.c)),
                       min(self.prec, o.prec))

    __radd__ = __add__

    def __neg__(self):
        m = self.ring.mod
        return EisElem(self.ring, tuple((-a) % m for a in self.c), self.prec)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        m = self.ring.mod
        return EisElem(self.ring, tuple((a - b) % m for a, b in zip(self.c, o.c)),
                       min(self.prec, o.prec))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        prec = min(self.prec + o.vlow(), o.prec + self.vlow())
        if isinstance(other, int):
            m = self.ring.mod
            return EisElem(self.ring, tuple(a * other % m for a in self.c), prec)
        return EisElem(self.ring, self.ring._mulcoords(self.c, o.c), prec)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def is_unit(self):
        return self.c[0] % self.ring.p != 0

    def inverse(self):
        """Inverse of a unit by Newton iteration."""
        if not self.is_unit():
            raise ZeroDivisionError("not a unit")
        R = self.ring
        x = R.elem([pow(self.c[0], -1, R.p)])
        target = Fraction(R.M)
        v = Fraction(1, R.d)
        while True:
            e = R.one() - self * x
            x = x + x * e
            v = 2 * v
            if v >= target:
                break
        return EisElem(R, x.c, self.prec)

    def div_pi(self):
        """Exact division by the uniformizer; loses 1/d of precision."""
        R = self.ring
        if self.c[0] % R.p:
            raise ZeroDivisionError("element not divisible by the uniformizer")
        q0 = self.c[0] // R.p
        tail = list(self.c[1:]) + [0]
        out = [(tail[i] + q0 * R._p_over_pi[i]) % R.mod for i in range(R.d)]
        return EisElem(R, tuple(out), self.prec - Fraction(1, R.d))

    def div_p(self):
        R = self.ring
        if any(x % R.p for x in self.c):
            raise ZeroDivisionError("element not divisible by p")
        return EisElem(R, tuple(x // R.p for x in self.c), self.prec - 1)

    def divexact(self, other: "EisElem") -> "EisElem":
        """self/other, assuming the quotient is integral."""
        other = self._lift(other)
        k = other.valuation(assert_nonzero=True) * other.ring.d
        num, den = self, other
        for _ in range(int(k)):
            den = den.div_pi()
            num = num.div_pi()
        return num * den.inverse()

    def residue(self) -> int:
        return self.c[0] % self.ring.p

    def congruent(self, other, level) -> bool:
        """True when self - other has valuation >= level (certified)."""
        diff = self - other
        if diff.prec < level:
            if diff._raw_val() < diff.prec:
                return False
            raise PrecisionExhausted(f"precision {diff.prec} below requested level {level}")
        return diff._raw_val() >= level

    def with_prec(self, prec):
        return EisElem(self.ring, self.c, min(self.prec, Fraction(prec)))

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        terms = [f"{x}*{self.ring.name}^{i}" for i, x in enumerate(self.c) if x]
        return (" + ".join(terms) or "0") + f" + O(v>={self.prec})"

    def to_json(self):
        return {"coords": list(self.c), "prec": str(self.prec)}


def ext_valuation(x: EisElem, assert_nonzero: bool = False):
    return x.valuation(assert_nonzero)


@lru_cache(maxsize=None)
def cyclotomic_ring(p: int, n: int, M: int) -> EisRing:
    """O of Q_p(zeta_{p^n}) with uniformizer zeta_{p^n} - 1, modulo p^M."""
    return EisRing(p, M, cyclotomic_shifted(p, n), name=f"pi{n}")
