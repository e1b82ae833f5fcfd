import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from zonalkit import radialexpr as rx
from zonalkit.gegenbauer import zonal_direct

NX = NY = 3  # work in R^3 unless a case needs otherwise


def expr_strategy(nx=NX, ny=NY, max_terms=4, max_exp=2, rad_range=(-4, 2)):
    coeff = st.fractions(min_value=-40, max_value=40, max_denominator=6)
    term = st.tuples(
        st.tuples(*[st.integers(0, max_exp)] * nx),
        st.tuples(*[st.integers(0, max_exp)] * ny),
        st.integers(*rad_range),
        st.integers(*rad_range),
        coeff,
    )
    return st.lists(term, min_size=0, max_size=max_terms).map(
        lambda items: rx.from_terms(nx, ny, items)
    )


# -- construction and canonical form ------------------------------------------

def test_norm_square_absorbs_to_quadratic_form():
    n1 = rx.norm_power("x", 1, NX, NY)
    assert (n1 * n1).equals(rx.quadratic_form("x", NX, NY))


def test_quadratic_times_inverse_norm_is_one():
    q = rx.quadratic_form("x", NX, NY)
    assert (q * rx.norm_power("x", -2, NX, NY)).equals(rx.constant(1, NX, NY))


def test_add_cancellation():
    f = rx.inner_xy(NX) ** 2 + rx.quadratic_form("y", NX, NY).scale(Fraction(3, 7))
    assert (f - f).is_zero()


def test_canonical_form_unique_across_constructions():
    # Q_x Q_y |x|^-2 |y|^-2 built two ways
    q = rx.quadratic_form("x", NX, NY) * rx.quadratic_form("y", NX, NY)
    f = q * rx.norm_power("x", -2, NX, NY) * rx.norm_power("y", -2, NX, NY)
    assert f.equals(rx.constant(1, NX, NY))


@settings(max_examples=60, deadline=None)
@given(f=expr_strategy())
def test_canonicalisation_idempotent(f):
    rebuilt = rx.from_terms(NX, NY, list(f.terms()))
    assert rebuilt.equals(f)


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        rx.constant(1, 3, 3) + rx.constant(1, 4, 4)
    with pytest.raises(ValueError):
        rx.inner_xy(3) * rx.inner_xy(4)


# -- derivatives ---------------------------------------------------------------

def test_partial_radial_rule():
    # d/dx1 |x|^-1 = -x1 |x|^-3
    d = rx.norm_power("x", -1, NX, NY).partial("x", 1)
    want = rx.from_terms(NX, NY, [((0, 1, 0), (0, 0, 0), -3, 0, Fraction(-1))])
    assert d.equals(want)


def test_partial_of_angle_variable():
    # d/dx_i w with w = <x,y>/(|x||y|)
    w = rx.inner_xy(NX) * rx.norm_power("x", -1, NX, NY) * rx.norm_power("y", -1, NX, NY)
    got = w.partial("x", 1)
    y1 = rx.coordinate("y", 1, NX, NY)
    x1 = rx.coordinate("x", 1, NX, NY)
    want = y1 * rx.norm_power("x", -1, NX, NY) * rx.norm_power("y", -1, NX, NY) \
        - rx.inner_xy(NX) * x1 * rx.norm_power("x", -3, NX, NY) * rx.norm_power("y", -1, NX, NY)
    assert got.equals(want)


def test_partial_constant_is_zero():
    assert rx.constant(5, NX, NY).partial("x", 0).is_zero()


@settings(max_examples=50, deadline=None)
@given(f=expr_strategy(max_terms=3), g=expr_strategy(max_terms=3), i=st.integers(0, NX - 1))
def test_partial_is_a_derivation(f, g, i):
    lhs = (f * g).partial("x", i)
    rhs = f.partial("x", i) * g + f * g.partial("x", i)
    assert lhs.equals(rhs)


def test_partial_is_a_derivation_bulk():
    # 10^3 seeded random pairs, cheap two-term operands
    rng = random.Random(2024)

    def small():
        items = []
        for _ in range(2):
            xe = tuple(rng.randint(0, 2) for _ in range(NX))
            ye = tuple(rng.randint(0, 2) for _ in range(NY))
            items.append((xe, ye, rng.randint(-3, 2), rng.randint(-3, 2),
                          Fraction(rng.randint(-4, 4) or 1, rng.randint(1, 3))))
        return rx.from_terms(NX, NY, items)

    for _ in range(1000):
        f, g = small(), small()
        grp = "x" if rng.random() < 0.5 else "y"
        i = rng.randint(0, 2)
        lhs = (f * g).partial(grp, i)
        rhs = f.partial(grp, i) * g + f * g.partial(grp, i)
        assert lhs.equals(rhs)


def test_laplacian_examples():
    assert rx.inner_xy(NX).laplacian("x").is_zero()
    got = rx.quadratic_form("x", NX, NY).laplacian("x")
    assert got.equals(rx.constant(2 * NX, NX, NY))
    # |x|^p harmonic iff p = 0 or p = 2 - N
    assert rx.norm_power("x", 2 - NX, NX, NY).laplacian("x").is_zero()
    assert not rx.norm_power("x", -4, NX, NY).laplacian("x").is_zero()


@settings(max_examples=40, deadline=None)
@given(f=expr_strategy(max_terms=3), g=expr_strategy(max_terms=3),
       c=st.fractions(min_value=-20, max_value=20, max_denominator=5))
def test_laplacian_linear(f, g, c):
    lhs = (f + g.scale(c)).laplacian("x")
    rhs = f.laplacian("x") + g.laplacian("x").scale(c)
    assert lhs.equals(rhs)
    assert (f + g).laplacian("y").equals(f.laplacian("y") + g.laplacian("y"))


def test_dir_deriv_examples():
    a = rx.inner_xy(NX)
    assert a.dir_deriv().equals(rx.quadratic_form("y", NX, NY))
    assert rx.constant(1, NX, NY).dir_deriv().is_zero()
    n = NX - 1
    got = rx.norm_power("x", 1 - n, NX, NY).dir_deriv()
    want = (a * rx.norm_power("x", -1 - n, NX, NY)).scale(1 - n)
    assert got.equals(want)


# -- kelvin inversion -----------------------------------------------------------

def test_kelvin_of_one():
    n = NX - 1
    assert rx.constant(1, NX, NY).kelvin().equals(rx.norm_power("x", 1 - n, NX, NY))


def test_kelvin_homogeneous_image():
    # degree-k homogeneous polynomial maps to |x|^(2-(n+1)-2k) times itself
    n = NX - 1
    p = rx.inner_xy(NX) ** 2  # degree 2 in x
    got = p.kelvin()
    want = p * rx.norm_power("x", 2 - (n + 1) - 4, NX, NY)
    assert got.equals(want)


@settings(max_examples=50, deadline=None)
@given(f=expr_strategy(max_terms=3))
def test_kelvin_involution(f):
    assert f.kelvin().kelvin().equals(f)


@settings(max_examples=40, deadline=None)
@given(f=expr_strategy(max_terms=2))
def test_kelvin_homogeneity_shift(f):
    d = f.homogeneous_degree("x")
    if d is None:
        return
    n = NX - 1
    img = f.kelvin().homogeneous_degree("x")
    assert img == 1 - n - d


def test_kelvin_preserves_harmonicity_on_kernels():
    for n, k in ((2, 1), (2, 2), (3, 2), (3, 3)):
        z = zonal_direct(n, k)
        assert z.laplacian("x").is_zero()
        assert z.kelvin().laplacian("x").is_zero()


# -- structure -------------------------------------------------------------------

def test_homogeneous_degree():
    assert rx.inner_xy(NX).homogeneous_degree("x") == 1
    f = rx.coordinate("x", 1, NX, NY) * rx.norm_power("x", -3, NX, NY)
    assert f.homogeneous_degree("x") == -2
    mixed = rx.coordinate("x", 0, NX, NY) + rx.quadratic_form("x", NX, NY)
    assert mixed.homogeneous_degree("x") is None


def test_substitute_point_unit_sphere():
    f = rx.inner_xy(NX) * rx.norm_power("y", 1, NX, NY)
    got = f.substitute_point("y", (Fraction(3, 5), Fraction(4, 5), 0))
    want = rx.coordinate("x", 0, NX, NY).scale(Fraction(3, 5)) \
        + rx.coordinate("x", 1, NX, NY).scale(Fraction(4, 5))
    assert got.equals(want)


def test_substitute_point_rejects_irrational_norm():
    f = rx.norm_power("y", 1, NX, NY)
    with pytest.raises(rx.PoleError):
        f.substitute_point("y", (1, 1, 0))


# -- evaluation -------------------------------------------------------------------

def test_eval_exact_examples():
    ev = rx.norm_power("x", 1, NX, NY).eval_exact((3, 4, 0), (1, 0, 0))
    assert ev.as_tuple() == (Fraction(5), 0, 0, 0)
    assert rx.constant(1, NX, NY).eval_exact((1, 1, 1), (2, 2, 2)).as_tuple() == (1, 0, 0, 0)
    a2 = rx.inner_xy(2)
    assert a2.eval_exact((1, 2), (3, -1)).as_tuple() == (1, 0, 0, 0)


def test_eval_exact_irrational_radical():
    ev = rx.norm_power("x", 1, NX, NY).eval_exact((1, 1, 0), (1, 0, 0))
    assert ev.as_tuple() == (0, 1, 0, 0)
    assert ev.qx == 2


def test_eval_exact_pole():
    with pytest.raises(rx.PoleError):
        rx.norm_power("x", -2, NX, NY).eval_exact((0, 0, 0), (1, 0, 0))


@settings(max_examples=30, deadline=None)
@given(f=expr_strategy(max_terms=3))
def test_eval_exact_matches_eval_float(f):
    rng = random.Random(9)
    for _ in range(4):
        ptx = [Fraction(rng.randint(1, 5), rng.randint(1, 3)) for _ in range(NX)]
        pty = [Fraction(rng.randint(1, 5), rng.randint(1, 3)) for _ in range(NY)]
        exact = f.eval_exact(ptx, pty).to_float()
        approx = f.eval_float([float(v) for v in ptx], [float(v) for v in pty])
        if abs(exact) > 1e-12:
            assert abs(exact - approx) / abs(exact) < 1e-10
        else:
            assert abs(exact - approx) < 1e-9


def test_eval_float_batch_matches_pointwise():
    import numpy as np
    f = zonal_direct(2, 3)
    X = np.array([[0.3, -0.2, 0.5], [1.0, 0.0, 2.0]])
    Y = np.array([[0.1, 0.7, -0.4], [0.5, 0.5, 0.5]])
    batch = f.eval_float_batch(X, Y)
    for i in range(2):
        assert abs(batch[i] - f.eval_float(X[i], Y[i])) < 1e-12


# -- serialization -----------------------------------------------------------------

def test_json_roundtrip_and_term_order():
    f = rx.inner_xy(NX) ** 2 - rx.quadratic_form("x", NX, NY).scale(Fraction(1, 3)) \
        + rx.norm_power("y", -1, NX, NY)
    data = f.to_json_dict()
    keys = [(tuple(t["xexp"]), tuple(t["yexp"]), t["px"], t["py"]) for t in data["terms"]]
    assert keys == sorted(keys)
    back = rx.RadialExpr.from_json_dict(json.loads(json.dumps(data)))
    assert back.equals(f)
    assert back.digest() == f.digest()


def test_equals_distinguishes():
    a2 = rx.inner_xy(NX) ** 2
    qq = rx.quadratic_form("x", NX, NY) * rx.quadratic_form("y", NX, NY)
    assert not a2.equals(qq)


def test_degree_cap_guard():
    f = rx.inner_xy(2) ** 40
    with pytest.raises(rx.RadialOverflow):
        (f * f) * (f * f)
