import math
from fractions import Fraction

import pytest
from conftest import jets
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq
from scipy.special import lambertw

from lagjet import scalar as sc
from lagjet.errors import DivergenceError, InsufficientOrderError, RadiusError
from lagjet.expr import parse
from lagjet.jet import Jet, jet_powi
from lagjet.lagrange import (
    apply_poly,
    compositions,
    invert,
    lag_coeff,
    lag_compose_check,
    lag_series,
    lambert_w_coeffs,
    lambert_w_defect,
    newton_oracle,
    product_identity,
    ser_exp,
    ser_mul,
    ser_pow,
    tree_coeffs,
    tree_functional_defect,
    tree_value,
)

Q = Fraction
ZERO = Q(0)


def test_constant_u_is_a_taylor_shift():
    c = Q(3, 2)
    u = Jet.constant(c, 0, 5)
    g = Jet(0, (1, 2, 3, 4, 5, 6))
    for n in range(6):
        assert lag_coeff(u, g, n) == c**n * g[n] / math.factorial(n)


def test_identity_case_gives_ones():
    t = Jet.variable(1, 8)
    assert lag_series(t, t, 8).coeffs == (1,) * 9


def test_tree_coefficients():
    assert tree_coeffs(0) == []
    assert tree_coeffs(4) == [1, 1, Q(3, 2), Q(8, 3)]
    assert all(c == Q(n ** (n - 1), math.factorial(n)) for n, c in enumerate(tree_coeffs(20), start=1))


def test_tree_and_lambert_functional_equations():
    assert all(c == 0 for c in tree_functional_defect(20))
    assert all(c == 0 for c in lambert_w_defect(12))
    assert lambert_w_coeffs(3) == [1, -1, Q(3, 2)]


def test_tree_value_against_lambert_w():
    # a(x) = -W(-x)
    # truncation after 60 terms leaves about (e|x|)^61
    for x in (0.05, 0.15, -0.15):
        assert math.isclose(tree_value(x), -lambertw(-x).real, rel_tol=1e-12)


def test_zero_u():
    s = lag_series(Jet.constant(0, 0, 4), Jet(0, (7, 1, 1, 1, 1)), 4)
    assert s.coeffs == (7, 0, 0, 0, 0)


def test_orders_are_enforced():
    j = Jet(0, (1, 1, 1))
    with pytest.raises(InsufficientOrderError):
        lag_coeff(j, j, 3)
    with pytest.raises(InsufficientOrderError):
        lag_series(j, j, 3)


def test_compositions_count():
    for n in range(6):
        for p in range(1, 5):
            assert len(list(compositions(n, p))) == math.comb(n + p - 1, p - 1)


def test_product_small_cases():
    psi, f, g = Jet(0, (2, 1)), Jet(0, (3, -1)), Jet(0, (5, 4))
    assert product_identity(psi, [f, g], 0) == (15, 15)
    lhs, rhs = product_identity(psi, [f, g], 1)
    assert lhs == rhs == psi[0] * (f[0] * g[1] + g[0] * f[1])
    with pytest.raises(ValueError):
        product_identity(psi, [f], 1)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(0, 8), data=st.data())
def test_product_formula(n, data):
    psi, f, g = (data.draw(jets(order=n, base_point=ZERO)) for _ in range(3))
    lhs, rhs = product_identity(psi, [f, g], n)
    assert lhs == rhs


@settings(max_examples=25, deadline=None)
@given(n=st.integers(0, 6), p=st.integers(2, 4), data=st.data())
def test_multifactor_product_formula(n, p, data):
    psi, *fs = (data.draw(jets(order=n, base_point=ZERO)) for _ in range(p + 1))
    lhs, rhs = product_identity(psi, fs, n)
    assert lhs == rhs


@settings(max_examples=25, deadline=None)
@given(order=st.integers(0, 8), coeffs=st.lists(st.fractions(-3, 3, max_denominator=3), min_size=1, max_size=6),
       data=st.data())
def test_polynomial_of_lagrange_series(order, coeffs, data):
    psi, f = (data.draw(jets(order=order, base_point=ZERO)) for _ in range(2))
    left, right = apply_poly(coeffs, lag_series(psi, f, order), (psi, f))
    assert left == right


def test_square_with_tree_series():
    u = Jet(0, (1,) * 11)
    t = Jet.variable(0, 10)
    left, right = apply_poly([0, 0, 1], lag_series(u, t, 10), (u, t))
    assert left == right == ser_mul(list(lag_series(u, t, 10).coeffs), list(lag_series(u, t, 10).coeffs), 10)


@settings(max_examples=25, deadline=None)
@given(m=st.integers(0, 4), data=st.data())
def test_power_consistency(m, data):
    u = data.draw(jets(order=8, base_point=ZERO))
    power = list(lag_series(u, jet_powi(u, m), 8).coeffs)
    assert power == ser_pow(list(lag_series(u, u, 8).coeffs), m, 8)


def test_series_helpers():
    assert ser_exp([Q(0), Q(1)], 4) == [1, 1, Q(1, 2), Q(1, 6), Q(1, 24)]
    with pytest.raises(ValueError):
        ser_exp([Q(1)], 2)


def test_kepler_inversion():
    u = parse("sin(t)")
    res = invert(u, 1.0, 0.1, 25)
    exact = brentq(lambda x: x - 1 - 0.1 * math.sin(x), 0, 2, xtol=1e-15)
    assert res.error <= 1e-10 and res.residual <= 1e-10
    assert math.isclose(res.x_newton, exact, rel_tol=1e-14)


def test_constant_u_inverts_exactly():
    res = invert(parse("5/2"), Q(1), Q(1, 3), 1, sc.EXACT)
    assert res.x_series == Q(1) + Q(1, 3) * Q(5, 2)


def test_tree_function_inversion_exact():
    res = invert(parse("expc(1)"), Q(0), Q(1, 10), 12, sc.EXACT)
    assert res.x_series == sum(c * Q(1, 10) ** n for n, c in enumerate(tree_coeffs(12), start=1))
    # 12 terms at z = 1/10: remainder below (e/10)^13
    assert abs(float(res.x_series) - (-lambertw(-0.1).real)) < (math.e / 10) ** 13


def test_divergence_detected():
    with pytest.raises(DivergenceError):
        invert(parse("expc(1)"), 0.0, 1.0, 30)


def test_certified_radius_is_enforced():
    with pytest.raises(RadiusError):
        invert(parse("sin(t)"), 1.0, 0.1, 10, radius=0.05)


def test_newton_oracle():
    assert newton_oracle(parse("sin(t)"), 1.0, 0.0) == 1.0
    assert newton_oracle(parse("3"), 1.0, 0.5) == 2.5
    x = newton_oracle(parse("sin(t)"), 1.0, 0.5)
    assert abs(1.0 + 0.5 * math.sin(x) - x) <= 1e-14


def test_composition_law():
    assert lag_compose_check(parse("expc(1)"), parse("t"), 0, 0.1, 30) <= 1e-15
    assert lag_compose_check(parse("expc(1)"), parse("t^2"), 0, 0.1, 30) <= 1e-9
    assert lag_compose_check(parse("sin(t)"), parse("sin(t)"), 1, 0.1, 25) <= 1e-12


def test_residual_decreases_with_order():
    res = [invert(parse("expc(1)"), 0.0, 0.1, n).residual for n in (2, 4, 8, 16)]
    assert res == sorted(res, reverse=True)
