"""Exact ultraspherical (Gegenbauer) and Chebyshev polynomials.

Coefficient vectors are exact rationals computed from the explicit sum

    C_k^lam(t) = sum_j (-1)^j  Gamma(k-j+lam) / (Gamma(lam) j! (k-2j)!) (2t)^(k-2j),

with every Gamma ratio reduced to a rising factorial.  The lam -> 0 limit
(Chebyshev T_k, up to the factor 2) is a separate constructor built on the
three-term recurrence, mirroring the fact that the zonal normalisation
(k+lam)/lam is singular at lam = 0.

The lift to two-variable kernels replaces t by w = <x,y>/(|x||y|) and
multiplies by (|x||y|)^k, which turns every term into a polynomial:
w^(k-2j) (|x||y|)^k = <x,y>^(k-2j) (Q_x Q_y)^j.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import radialexpr as rx
from .ratnum import factorial, pochhammer


@dataclass(frozen=True)
class GegenbauerPoly:
    """Exact coefficient vector of C_k^lam; coeffs[j] multiplies t^j."""

    degree: int
    order: Fraction
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        assert len(self.coeffs) == self.degree + 1

    def coefficient(self, j: int) -> Fraction:
        if 0 <= j <= self.degree:
            return self.coeffs[j]
        return Fraction(0)

    def derivative_coeffs(self) -> tuple[Fraction, ...]:
        if self.degree == 0:
            return (Fraction(0),)
        return tuple((j + 1) * self.coeffs[j + 1] for j in range(self.degree))

    def leading(self) -> Fraction:
        return self.coeffs[-1]


def gegenbauer(k: int, lam) -> GegenbauerPoly:
    """C_k^lam from the explicit sum; lam > -1/2 and lam != 0 (use chebyshev_T)."""
    lam = Fraction(lam)
    if k < 0:
        raise ValueError("degree must be nonnegative")
    if lam == 0:
        raise ValueError("order 0 is the Chebyshev limit; use chebyshev_T")
    if 2 * lam <= -1:
        raise ValueError(f"order must exceed -1/2, got {lam}")
    coeffs = [Fraction(0)] * (k + 1)
    for j in range(k // 2 + 1):
        # Gamma(k-j+lam)/Gamma(lam) = pochhammer(lam, k-j)
        c = pochhammer(lam, k - j) / (factorial(j) * factorial(k - 2 * j))
        coeffs[k - 2 * j] = (-1) ** j * c * Fraction(2) ** (k - 2 * j)
    return GegenbauerPoly(k, lam, tuple(coeffs))


def chebyshev_T(k: int) -> GegenbauerPoly:
    """First-kind Chebyshev T_k by the recurrence T_{k+1} = 2t T_k - T_{k-1}."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    prev = [Fraction(1)]
    if k == 0:
        return GegenbauerPoly(0, Fraction(0), tuple(prev))
    cur = [Fraction(0), Fraction(1)]
    for d in range(2, k + 1):
        nxt = [Fraction(0)] * (d + 1)
        for j, c in enumerate(cur):
            nxt[j + 1] += 2 * c
        for j, c in enumerate(prev):
            nxt[j] -= c
        prev, cur = cur, nxt
    return GegenbauerPoly(k, Fraction(0), tuple(cur))


def zero_poly(k: int, lam) -> GegenbauerPoly:
    """The zero polynomial padded to degree k; stands in for negative degrees."""
    return GegenbauerPoly(k, Fraction(lam), tuple(Fraction(0) for _ in range(k + 1)))


def eval_float(poly: GegenbauerPoly, t: float) -> float:
    """Float evaluation; three-term recurrence on [-1, 1], Horner outside.

    The recurrence k C_k = 2(k+lam-1) t C_{k-1} - (k+2lam-2) C_{k-2} is the
    numerically stable path for arguments in the orthogonality interval.
    """
    k = poly.degree
    if abs(t) <= 1.0:
        lam = float(poly.order)
        if poly.order == 0:
            prev, cur = 1.0, t
            if k == 0:
                return 1.0
            for _ in range(2, k + 1):
                prev, cur = cur, 2.0 * t * cur - prev
            return cur if k >= 1 else prev
        prev, cur = 1.0, 2.0 * lam * t
        if k == 0:
            return 1.0
        for d in range(2, k + 1):
            prev, cur = cur, (2.0 * (d + lam - 1.0) * t * cur - (d + 2.0 * lam - 2.0) * prev) / d
        return cur
    acc = 0.0
    for c in reversed(poly.coeffs):
        acc = acc * t + float(c)
    return acc


# -- lifts to two-variable expressions ---------------------------------------


def zonal_lift(poly: GegenbauerPoly, nvars: int) -> rx.RadialExpr:
    """C(w) (|x||y|)^k as a pure polynomial over nvars + nvars coordinates."""
    k = poly.degree
    a = rx.inner_xy(nvars)
    q = rx.quadratic_form("x", nvars, nvars) * rx.quadratic_form("y", nvars, nvars)
    out = rx.RadialExpr.zero(nvars, nvars)
    a_pow = rx.constant(1, nvars, nvars)
    a_powers = [a_pow]
    for _ in range(k):
        a_pow = a_pow * a
        a_powers.append(a_pow)
    q_pow = rx.constant(1, nvars, nvars)
    for j in range(k, -1, -1):
        c = poly.coefficient(j)
        if (k - j) % 2 == 0:
            if c:
                out = out + (a_powers[j] * q_pow).scale(c)
            if j >= 2:
                q_pow = q_pow * q
    return out


def radial_lift(poly: GegenbauerPoly, ell: int, nvars: int) -> rx.RadialExpr:
    """C(w) |x|^ell as an expression (introduces |y|^(-j) Laurent factors)."""
    a = rx.inner_xy(nvars)
    out = rx.RadialExpr.zero(nvars, nvars)
    a_pow = rx.constant(1, nvars, nvars)
    for j in range(poly.degree + 1):
        c = poly.coefficient(j)
        if c:
            out = out + (a_pow
                         * rx.norm_power("x", ell - j, nvars, nvars)
                         * rx.norm_power("y", -j, nvars, nvars)).scale(c)
        a_pow = a_pow * a
    return out


def zonal_direct(n: int, k: int) -> rx.RadialExpr:
    """The degree-k zonal harmonic kernel on R^(n+1), as an exact polynomial.

    For n >= 2 this is ((k+lam)/lam) C_k^lam(w) (|x||y|)^k with lam = (n-1)/2;
    the plane case n = 1 uses 2 T_k(w) (|x||y|)^k.
    """
    if n < 1:
        raise ValueError("ambient space must be at least R^2 (n >= 1)")
    if k < 0:
        raise ValueError("degree must be nonnegative")
    nvars = n + 1
    if k == 0:
        return rx.constant(1, nvars, nvars)
    if n == 1:
        return zonal_lift(chebyshev_T(k), 2).scale(2)
    lam = Fraction(n - 1, 2)
    return zonal_lift(gegenbauer(k, lam), nvars).scale((k + lam) / lam)


def telescoping_coefficients(m: int, lam, k: int) -> list[Fraction]:
    """Coefficients alpha_j writing C_{k+2m}^lam = sum_j alpha_j C_{k+2(m-j)}^(lam+m).

    Computed by m-fold application of the order-raising identity
    ((lam+d)/lam) C_d^lam = C_d^(lam+1) - C_{d-2}^(lam+1), i.e. the telescoping
    the closed form for alpha_m is extracted from.
    """
    lam = Fraction(lam)
    level: dict[int, Fraction] = {k + 2 * m: Fraction(1)}
    for i in range(m):
        mu = lam + i
        nxt: dict[int, Fraction] = {}
        for d, c in level.items():
            f = c * mu / (mu + d)
            nxt[d] = nxt.get(d, Fraction(0)) + f
            if d - 2 >= 0:
                nxt[d - 2] = nxt.get(d - 2, Fraction(0)) - f
        level = nxt
    return [level.get(k + 2 * (m - j), Fraction(0)) for j in range(m + 1)]
