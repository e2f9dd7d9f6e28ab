"""Eisenstein polynomial oracles.

Two views of the same quantities are provided.  The synthetic view works
from jump data alone: the conjugates of a root theta lie at distances
i_t + v(theta) from it, with multiplicity g_{t-1} - g_t, and every
valuation of a polynomial value is a sum of minima against those
distances.  The concrete view works in an EisRing, where discriminants are
computed as resultants and polynomial values are evaluated directly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .base_arith import EisElem, EisRing
from .errors import PrecisionExhausted, ShapeMismatch
from .herbrand import LexIndex, RamJumps, from_jumps, lex_min


def root_distances(d: RamJumps, vtheta: LexIndex | None = None):
    """[(v_L(theta - theta_l), multiplicity)] over the conjugates theta_l != theta."""
    vtheta = LexIndex.unit(d.r) if vtheta is None else LexIndex(vtheta)
    return [(i + vtheta, d.orders[t] - d.orders[t + 1]) for t, i in enumerate(d.jumps)]


def _check_shape(d: RamJumps):
    want = (1,) * (d.r - 1) + (d.d,)
    if d.ebar != want:
        raise ShapeMismatch(f"ebar {d.ebar} is not of the shape {want}")


def distance_sum_valuation(d: RamJumps, a: LexIndex) -> LexIndex:
    """v_K(F(alpha)) from the root distances, when v_L(alpha - theta_0) = a + v_L(theta)."""
    _check_shape(d)
    a = LexIndex(a)
    vth = LexIndex.unit(d.r)
    total = a + vth
    for dist, mult in root_distances(d, vth):
        total = total + lex_min(a + vth, dist).scale(mult)
    return total.hadamard([Fraction(1, e) for e in d.ebar])


def value_valuation_synthetic(d: RamJumps, a) -> LexIndex:
    """Return v_K(F(alpha)) after checking it equals phi(a) + (0,...,0,1)."""
    a = LexIndex(a)
    if a.r != d.r or a < LexIndex.zero(d.r):
        raise ValueError("a must lie in J_r")
    lhs = distance_sum_valuation(d, a)
    rhs = from_jumps(d).evaluate(a) + LexIndex.unit(d.r)
    if lhs != rhs:
        raise AssertionError(f"distance sum {lhs} differs from phi(a)+unit {rhs}")
    return lhs


def locate_root(d: RamJumps, A) -> tuple:
    """(a, unique) with phi(a) = A; the nearest root is unique iff A > j(L/K)."""
    A = LexIndex(A)
    if not A > LexIndex.zero(d.r):
        raise ValueError("A must be strictly positive")
    phi = from_jumps(d)
    a = phi.preimage(A)
    _, j = phi.last_edge()
    return a, A > j


def disc_valuation(d: RamJumps, vtheta=None) -> LexIndex:
    """Closed form ebar*j - i + (d-1) v(theta), checked against the different sum."""
    _check_shape(d)
    vth = LexIndex.unit(d.r) if vtheta is None else LexIndex(vtheta)
    i, j = from_jumps(d).last_edge()
    closed = j.hadamard(d.ebar) - i + vth.scale(d.d - 1)
    oracle = LexIndex.zero(d.r)
    for dist, mult in root_distances(d, vth):
        oracle = oracle + dist.scale(mult)
    if closed != oracle:
        raise AssertionError(f"closed form {closed} differs from different sum {oracle}")
    return closed


def disc_bound_check(d: RamJumps) -> bool:
    """j(L/K) <= 2 v_K(D(F))."""
    _, j = from_jumps(d).last_edge()
    return j <= disc_valuation(d).scale(2)


# ---------------------------------------------------------------------------
# concrete polynomials over an EisRing

class EisPoly:
    """Monic T^d + a_1 T^{d-1} + ... + a_d with coefficients in an EisRing."""

    def __init__(self, ring: EisRing, coeffs: Sequence):
        self.ring = ring
        self.coeffs = tuple(ring(c) for c in coeffs)
        self.d = len(self.coeffs)
        if self.d < 1:
            raise ValueError("degree must be at least 1")

    @property
    def eisenstein(self) -> bool:
        if any(c.vlow() <= 0 for c in self.coeffs):
            return False
        return self.coeffs[-1].valuation() == Fraction(1, self.ring.d)

    def low_to_high(self):
        return list(reversed(self.coeffs)) + [self.ring.one()]

    def __call__(self, x: EisElem) -> EisElem:
        acc = self.ring.one()
        for c in self.coeffs:
            acc = acc * x + c
        return acc

    def derivative_low_to_high(self):
        lh = self.low_to_high()
        return [lh[k] * k for k in range(1, len(lh))]

    def to_json(self):
        return {"ring": {"p": self.ring.p, "M": self.ring.M, "minpoly": list(self.ring.minpoly)},
                "coeffs": [list(c.c) for c in self.coeffs]}


def berkowitz_det(A, one):
    """Division-free determinant (Berkowitz), valid over any commutative ring."""
    n = len(A)
    if n == 0:
        return one
    zero = one - one
    C = [one, -A[0][0]]
    for k in range(1, n):
        R = A[k][:k]
        S = [A[i][k] for i in range(k)]
        a = A[k][k]
        col = [one, -a]
        vec = S
        for _ in range(k):
            acc = zero
            for x, y in zip(R, vec):
                acc = acc + x * y
            col.append(-acc)
            vec = [sum((A[i][j] * vec[j] for j in range(k)), zero) for i in range(k)]
        # Toeplitz product: new C has length k+2
        newC = []
        for row in range(k + 2):
            acc = zero
            for t in range(min(row, k) + 1):
                idx = row - t
                if idx < len(col) and t < len(C):
                    acc = acc + col[idx] * C[t]
            newC.append(acc)
        C = newC
    det = C[n]
    return det if n % 2 == 0 else -det


def sylvester(f: Sequence, g: Sequence, zero):
    """Sylvester matrix of polynomials given high-to-low."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([zero] * i + list(f) + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(g) + [zero] * (size - n - 1 - i))
    return rows


def resultant(f: Sequence, g: Sequence, one):
    zero = one - one
    return berkowitz_det(sylvester(f, g, zero), one)


def poly_disc_element(F: EisPoly) -> EisElem:
    R = F.ring
    if F.d == 1:
        return R.one()
    f = [R.one()] + list(F.coeffs)
    df = list(reversed(F.derivative_low_to_high()))
    res = resultant(f, df, R.one())
    sign = -1 if (F.d * (F.d - 1) // 2) % 2 else 1
    return res * sign


def poly_disc(F: EisPoly) -> Fraction:
    """v_p of the discriminant of F, normalized by v(p) = 1."""
    D = poly_disc_element(F)
    v = D.valuation()
    if v == float("inf"):
        raise PrecisionExhausted("discriminant vanishes at working precision")
    return v
