"""Lexicographic index sets and piecewise-linear Herbrand functions.

A Herbrand map on J_r is stored as a list of breakpoints ``(x_k, y_k)``
and one positive scalar slope ``g_k`` per segment.  On the segment that
starts at ``x_k`` the map is

    y = y_k + ebar^{-1} * g_k * (x - x_k)

where ``ebar^{-1}`` acts componentwise.  Because every linear piece is a
positive diagonal matrix, lexicographic order is preserved, and the
breakpoint list determines the map completely.
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Sequence

from .errors import DimMismatch


def _frac(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


@total_ordering
class LexIndex:
    """An element of Q^r compared lexicographically.

    Elements of different dimension compare by dimension first, so every
    element of J_{r1} exceeds every element of J_{r2} when r1 > r2.
    """

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence):
        if isinstance(coords, LexIndex):
            coords = coords.coords
        if isinstance(coords, (int, Fraction, str)):
            coords = (coords,)
        self.coords = tuple(_frac(c) for c in coords)
        if not self.coords:
            raise ValueError("LexIndex needs at least one coordinate")

    @classmethod
    def _of(cls, coords: tuple) -> "LexIndex":
        """Wrap a tuple that already holds Fractions."""
        obj = object.__new__(cls)
        obj.coords = coords
        return obj

    @property
    def r(self) -> int:
        return len(self.coords)

    @classmethod
    def zero(cls, r: int) -> "LexIndex":
        return cls((0,) * r)

    @classmethod
    def unit(cls, r: int) -> "LexIndex":
        """(0, ..., 0, 1): the valuation of the last parameter."""
        return cls((0,) * (r - 1) + (1,))

    def in_J(self) -> bool:
        return self >= LexIndex.zero(self.r)

    def _check(self, other):
        if type(other) is LexIndex and len(other.coords) == len(self.coords):
            return other
        if not isinstance(other, LexIndex):
            other = LexIndex(other)
        if other.r != self.r:
            raise DimMismatch(f"dimensions {self.r} and {other.r}")
        return other

    def __eq__(self, other):
        if not isinstance(other, LexIndex):
            return NotImplemented
        return self.coords == other.coords

    def __lt__(self, other):
        if type(other) is not LexIndex and not isinstance(other, LexIndex):
            return NotImplemented
        a, b = self.coords, other.coords
        if len(a) != len(b):
            return len(a) < len(b)
        return a < b

    def __hash__(self):
        return hash(self.coords)

    def __add__(self, other):
        o = self._check(other)
        return LexIndex._of(tuple(a + b for a, b in zip(self.coords, o.coords)))

    def __sub__(self, other):
        o = self._check(other)
        return LexIndex._of(tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __neg__(self):
        return LexIndex._of(tuple(-a for a in self.coords))

    def scale(self, s) -> "LexIndex":
        s = Fraction(s)
        return LexIndex._of(tuple(s * a for a in self.coords))

    def hadamard(self, vec: Sequence) -> "LexIndex":
        """Componentwise product with a vector of rationals."""
        if len(vec) != self.r:
            raise DimMismatch("vector length differs from dimension")
        return LexIndex._of(tuple(Fraction(v) * a for v, a in zip(vec, self.coords)))

    def __repr__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"

    def to_json(self):
        return [str(c) for c in self.coords]


def lex_min(a: LexIndex, b: LexIndex) -> LexIndex:
    return a if a <= b else b


@dataclass(frozen=True)
class RamJumps:
    """Lower ramification jumps i_1 < ... < i_s with orders g_0 > ... > g_s = 1."""

    r: int
    ebar: tuple
    jumps: tuple
    orders: tuple

    def __post_init__(self):
        ebar = tuple(int(e) for e in self.ebar)
        jumps = tuple(LexIndex(j) for j in self.jumps)
        orders = tuple(int(g) for g in self.orders)
        object.__setattr__(self, "ebar", ebar)
        object.__setattr__(self, "jumps", jumps)
        object.__setattr__(self, "orders", orders)
        if self.r < 1 or len(ebar) != self.r or any(e < 1 for e in ebar):
            raise ValueError("ebar must be r positive integers")
        if len(orders) != len(jumps) + 1:
            raise ValueError("need exactly one more order than jumps")
        if orders[-1] != 1:
            raise ValueError("last order must be 1")
        if any(a <= b for a, b in zip(orders, orders[1:])):
            raise ValueError("orders must strictly decrease")
        zero = LexIndex.zero(self.r)
        for j in jumps:
            if j.r != self.r:
                raise DimMismatch("jump of wrong dimension")
            if not j > zero:
                raise ValueError("jumps must be strictly positive")
        if any(a >= b for a, b in zip(jumps, jumps[1:])):
            raise ValueError("jumps must strictly increase")

    @property
    def d(self) -> int:
        return self.orders[0]

    def order_at(self, x: LexIndex) -> int:
        """|I_x| in lower numbering: g_t for i_t < x <= i_{t+1}."""
        return self.orders[bisect.bisect_left(self.jumps, x)]

    def to_json(self):
        return {"r": self.r, "ebar": list(self.ebar),
                "jumps": [j.to_json() for j in self.jumps], "orders": list(self.orders)}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["r"]), tuple(obj["ebar"]),
                   tuple(LexIndex(j) for j in obj["jumps"]), tuple(obj["orders"]))


class HerbrandMap:
    def __init__(self, r: int, ebar: Sequence, breakpoints: Sequence, slopes: Sequence):
        self.r = r
        self.ebar = tuple(Fraction(e) for e in ebar)
        if len(self.ebar) != r or any(e <= 0 for e in self.ebar):
            raise ValueError("ebar must be r positive rationals")
        bps = [(LexIndex(x), LexIndex(y)) for x, y in breakpoints]
        sl = [Fraction(g) for g in slopes]
        if not bps or len(bps) != len(sl):
            raise ValueError("one slope per breakpoint required")
        zero = LexIndex.zero(r)
        if bps[0] != (zero, zero):
            raise ValueError("first breakpoint must be (0, 0)")
        if any(g <= 0 for g in sl):
            raise ValueError("slopes must be positive")
        if any(a[0] >= b[0] or a[1] >= b[1] for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must strictly increase")
        # merge equal adjacent slopes
        mb, ms = [bps[0]], [sl[0]]
        for bp, g in zip(bps[1:], sl[1:]):
            if g != ms[-1]:
                mb.append(bp)
                ms.append(g)
        self.breakpoints = tuple(mb)
        self.slopes = tuple(ms)
        self._inputs = [b[0] for b in self.breakpoints]
        self._outputs = [b[1] for b in self.breakpoints]
        self._inv_ebar = tuple(1 / e for e in self.ebar)
        # per-segment diagonal of the linear piece
        self._diag = tuple(tuple(g * e for e in self._inv_ebar) for g in self.slopes)
        self._zero = LexIndex.zero(r)

    @classmethod
    def identity(cls, r: int) -> "HerbrandMap":
        z = LexIndex.zero(r)
        return cls(r, (1,) * r, [(z, z)], [1])

    def _linear(self, k: int, dx: LexIndex) -> LexIndex:
        return LexIndex._of(tuple(f * a for f, a in zip(self._diag[k], dx.coords)))

    def segment(self, x: LexIndex) -> int:
        return bisect.bisect_right(self._inputs, x) - 1

    def __call__(self, j) -> LexIndex:
        return self.evaluate(j)

    def evaluate(self, j) -> LexIndex:
        if type(j) is not LexIndex:
            j = LexIndex(j)
        if j.r != self.r:
            raise DimMismatch(f"map on J_{self.r} evaluated at dimension {j.r}")
        if j.coords < self._zero.coords:
            raise ValueError("argument outside J_r")
        k = bisect.bisect_right(self._inputs, j) - 1
        x0, y0 = self.breakpoints[k]
        return LexIndex._of(tuple(y + f * (a - x) for y, f, a, x in
                                  zip(y0.coords, self._diag[k], j.coords, x0.coords)))

    def preimage(self, y) -> LexIndex:
        y = LexIndex(y)
        if y.r != self.r:
            raise DimMismatch("dimension mismatch")
        if y < LexIndex.zero(self.r):
            raise ValueError("argument outside J_r")
        k = bisect.bisect_right(self._outputs, y) - 1
        x0, y0 = self.breakpoints[k]
        return x0 + (y - y0).hadamard(self.ebar).scale(1 / self.slopes[k])

    def slope_at(self, x: LexIndex) -> Fraction:
        return self.slopes[self.segment(x)]

    def multiplicity(self, j) -> Fraction:
        """g_-(j)/g_+(j); equals 1 away from edge points."""
        j = LexIndex(j)
        k = self.segment(j)
        if k == 0 or self.breakpoints[k][0] != j:
            return Fraction(1)
        return self.slopes[k - 1] / self.slopes[k]

    def degree(self) -> Fraction:
        """Product of all multiplicities (first slope over last slope)."""
        return self.slopes[0] / self.slopes[-1]

    def edges(self):
        return list(self.breakpoints[1:])

    def last_edge(self):
        if len(self.breakpoints) == 1:
            z = LexIndex.zero(self.r)
            return z, z
        return self.breakpoints[-1]

    def __eq__(self, other):
        if not isinstance(other, HerbrandMap):
            return NotImplemented
        return (self.r, self.ebar, self.breakpoints, self.slopes) == \
            (other.r, other.ebar, other.breakpoints, other.slopes)

    def __hash__(self):
        return hash((self.r, self.ebar, self.breakpoints, self.slopes))

    def __repr__(self):
        return f"HerbrandMap(r={self.r}, ebar={self.ebar}, bps={self.breakpoints}, slopes={self.slopes})"

    def to_json(self):
        return {"r": self.r, "ebar": [str(e) for e in self.ebar],
                "breakpoints": [[x.to_json(), y.to_json()] for x, y in self.breakpoints],
                "slopes": [str(g) for g in self.slopes]}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["r"]), [Fraction(e) for e in obj["ebar"]],
                   [(LexIndex(x), LexIndex(y)) for x, y in obj["breakpoints"]],
                   [Fraction(g) for g in obj["slopes"]])


def from_jumps(d: RamJumps) -> HerbrandMap:
    """phi(j) = ebar^{-1} (g_0 min(j,i_1) + sum_t g_t clamp(j - i_t, 0, i_{t+1} - i_t))."""
    zero = LexIndex.zero(d.r)
    inv = tuple(Fraction(1, e) for e in d.ebar)
    bps = [(zero, zero)]
    y = zero
    prev = zero
    for t, i in enumerate(d.jumps):
        y = y + (i - prev).hadamard(inv).scale(d.orders[t])
        bps.append((i, y))
        prev = i
    return HerbrandMap(d.r, d.ebar, bps, d.orders)


def compose(outer: HerbrandMap, inner: HerbrandMap) -> HerbrandMap:
    """outer o inner as a canonical piecewise-linear map."""
    if outer.r != inner.r:
        raise DimMismatch("cannot compose maps on different J_r")
    xs = set(inner._inputs)
    for y in outer._inputs:
        xs.add(inner.preimage(y))
    xs = sorted(xs)
    bps, slopes = [], []
    for x in xs:
        y = inner.evaluate(x)
        bps.append((x, outer.evaluate(y)))
        slopes.append(outer.slope_at(y) * inner.slope_at(x))
    ebar = tuple(a * b for a, b in zip(outer.ebar, inner.ebar))
    return HerbrandMap(outer.r, ebar, bps, slopes)


def invert(phi: HerbrandMap) -> HerbrandMap:
    return HerbrandMap(phi.r, [1 / e for e in phi.ebar],
                       [(y, x) for x, y in phi.breakpoints],
                       [1 / g for g in phi.slopes])


def evaluate(phi: HerbrandMap, j) -> LexIndex:
    return phi.evaluate(j)


def last_edge(phi: HerbrandMap):
    return phi.last_edge()


def multiplicity(phi: HerbrandMap, j) -> Fraction:
    return phi.multiplicity(j)


def degree(phi: HerbrandMap) -> Fraction:
    return phi.degree()


# ---------------------------------------------------------------------------
# random data for property tests and corpora

def random_lex(rng: random.Random, r: int, den: int = 4, hi: int = 6, positive=True) -> LexIndex:
    while True:
        c = [Fraction(rng.randint(0 if positive else -hi * den, hi * den), rng.randint(1, den))
             for _ in range(r)]
        x = LexIndex(c)
        if not positive or x > LexIndex.zero(r):
            return x


def random_ramjumps(rng: random.Random, r: int | None = None, s_max: int = 3,
                    d_max: int = 27, ebar: str = "random") -> RamJumps:
    """Random jump data.

    ``ebar="last"`` produces the (1, ..., 1, d) shape used by the
    discriminant formulas; ``"random"`` draws arbitrary positive entries.
    """
    r = r or rng.randint(1, 2)
    s = rng.randint(0, min(s_max, d_max - 1))
    inner = sorted(rng.sample(range(2, d_max + 1), s), reverse=True) if s else []
    orders = tuple(inner + [1])
    jumps = set()
    while len(jumps) < s:
        jumps.add(random_lex(rng, r))
    jumps = tuple(sorted(jumps))
    if ebar == "last":
        eb = (1,) * (r - 1) + (orders[0],)
    else:
        eb = tuple(rng.randint(1, 9) for _ in range(r))
    return RamJumps(r, eb, jumps, orders)
