from fractions import Fraction

import pytest

from zonalkit import radialexpr as rx
from zonalkit.gegenbauer import (
    chebyshev_T,
    eval_float,
    gegenbauer,
    telescoping_coefficients,
    radial_lift,
    zonal_direct,
    zonal_lift,
)
from zonalkit.ratnum import factorial, pochhammer
from zonalkit.zonalroutes import alpha_top

HALF = Fraction(1, 2)


def test_explicit_coefficients():
    assert gegenbauer(0, Fraction(2)).coeffs == (Fraction(1),)
    assert gegenbauer(1, Fraction(3, 2)).coeffs == (0, 3)  # 2*lam*t
    assert gegenbauer(2, HALF).coeffs == (Fraction(-1, 2), 0, Fraction(3, 2))  # Legendre P2


def test_order_constraints():
    with pytest.raises(ValueError):
        gegenbauer(2, 0)
    with pytest.raises(ValueError):
        gegenbauer(2, Fraction(-1, 2))
    with pytest.raises(ValueError):
        gegenbauer(-1, Fraction(1))


def test_parity_and_leading_coefficient():
    for k in range(9):
        for lam in (HALF, Fraction(1), Fraction(5, 2)):
            p = gegenbauer(k, lam)
            for j, c in enumerate(p.coeffs):
                if (k - j) % 2 == 1:
                    assert c == 0
            assert p.leading() == Fraction(2) ** k * pochhammer(lam, k) / factorial(k)


def test_chebyshev_values():
    assert chebyshev_T(0).coeffs == (1,)
    assert chebyshev_T(1).coeffs == (0, 1)
    assert chebyshev_T(2).coeffs == (-1, 0, 2)
    assert chebyshev_T(5).coeffs == (0, 5, 0, -20, 0, 16)


def test_chebyshev_from_order_one_difference():
    # 2 T_k = C_k^1 - C_{k-2}^1
    for k in range(2, 12):
        lhs = tuple(2 * c for c in chebyshev_T(k).coeffs)
        a = gegenbauer(k, Fraction(1)).coeffs
        b = gegenbauer(k - 2, Fraction(1)).coeffs
        rhs = tuple(x - (b[j] if j < len(b) else 0) for j, x in enumerate(a))
        assert lhs == rhs


def test_eval_float_at_one_and_zero():
    # C_k^lam(1) = poch(2 lam, k)/k!
    for k in (0, 1, 2, 5):
        for lam in (HALF, Fraction(1), Fraction(2)):
            want = float(pochhammer(2 * lam, k) / factorial(k))
            assert abs(eval_float(gegenbauer(k, lam), 1.0) - want) < 1e-12
    assert abs(eval_float(gegenbauer(2, Fraction(1)), 1.0) - 3.0) < 1e-14
    assert abs(eval_float(gegenbauer(2, HALF), 0.0) + 0.5) < 1e-14
    assert eval_float(chebyshev_T(7), 1.0) == pytest.approx(1.0, abs=1e-13)


def test_eval_float_outside_unit_interval():
    p = gegenbauer(4, Fraction(3, 2))
    t = 1.75
    direct = sum(float(c) * t ** j for j, c in enumerate(p.coeffs))
    assert abs(eval_float(p, t) - direct) < 1e-10


def test_zonal_direct_examples():
    assert zonal_direct(5, 0).equals(rx.constant(1, 6, 6))
    assert zonal_direct(3, 1).equals(rx.inner_xy(4).scale(4))
    # plane case: 2 T_2(w)(|x||y|)^2 = 4<x,y>^2 - 2 QxQy
    z = zonal_direct(1, 2)
    a = rx.inner_xy(2)
    q = rx.quadratic_form("x", 2, 2) * rx.quadratic_form("y", 2, 2)
    assert z.equals((a * a).scale(4) - q.scale(2))


def test_zonal_direct_is_polynomial_and_symmetric_degree():
    for n, k in ((1, 3), (2, 4), (4, 3)):
        z = zonal_direct(n, k)
        assert z.is_polynomial
        assert z.homogeneous_degree("x") == k
        assert z.homogeneous_degree("y") == k


def test_zonal_direct_harmonic_small():
    for n in (1, 2, 3, 4):
        for k in range(5):
            z = zonal_direct(n, k)
            assert z.laplacian("x").is_zero()
            assert z.laplacian("y").is_zero()


def test_radial_lift_carries_laurent_tail():
    f = radial_lift(gegenbauer(2, HALF), 2, 5)
    # w^2 term contributes |y|^-2
    assert any(py == -2 for _, _, _, py, _ in f.terms())
    # and multiplying by |y|^2 recovers the polynomial kernel lift
    g = f * rx.norm_power("y", 2, 5, 5)
    assert g.equals(zonal_lift(gegenbauer(2, HALF), 5))


def test_telescoping_expansion_and_closed_form():
    for lam in (HALF, Fraction(1), Fraction(2)):
        for m in (1, 2, 3):
            for k in (0, 1, 3):
                alphas = telescoping_coefficients(m, lam, k)
                assert alphas[m] == alpha_top(m, lam, k)
                assert alphas[0] != 0
