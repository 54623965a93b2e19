import math
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import lambertw

from lagjet.errors import PoleError, RadiusError
from lagjet.expr import parse
from lagjet.exptype import (
    ExpTypeFn,
    MultiPoly,
    abel_side,
    domain_A_radius,
    exp_type_deriv0,
    exp_type_series,
    exp_type_shift,
    in_domain_A,
)

Q = Fraction
X, Y, Z = sp.symbols("x y z")


def to_sympy(poly: MultiPoly):
    return sp.expand(sum(sp.Rational(c.numerator, c.denominator) * X**a * Y**b * Z**e
                         for (a, b, e), c in poly.terms.items()))


def test_multipoly_against_sympy():
    x, y, z = (MultiPoly.var(s) for s in "xyz")
    p = (x + Q(1, 2) * y - z) ** 3 * (y - 2 * x)
    assert to_sympy(p) == sp.expand((X + Y / 2 - Z) ** 3 * (Y - 2 * X))
    assert p(Q(1), Q(2), Q(3)) == (1 + 1 - 3) ** 3 * (2 - 2)


@pytest.mark.parametrize("lam", ["1/2", "1", "3", "-1/3"])
def test_abel_identity_is_a_polynomial_identity(lam):
    for n in range(0, 11):
        assert (abel_side(n, lam, "lhs") - abel_side(n, lam, "rhs")).is_zero()


def test_abel_small_case_matches_sympy_expansion():
    lam = sp.Rational(1, 2)
    n = 3
    lhs = sum(sp.binomial(n, p) / (p + lam) * (Z + (p + lam) * X) ** p * (Y - (p + lam) * X) ** (n - p)
              for p in range(n + 1))
    assert to_sympy(abel_side(n, "1/2", "lhs")) == sp.expand(lhs)


def test_abel_poles():
    with pytest.raises(PoleError):
        abel_side(3, -2, "lhs")
    abel_side(3, -4, "lhs")  # outside {0,...,-n}


def test_domain_radius_matches_lambert_w():
    # e K r e^{K r} = 1  <=>  K r = W(1/e)
    assert math.isclose(domain_A_radius(1.0), lambertw(1 / math.e).real, rel_tol=1e-13)
    assert math.isclose(domain_A_radius(2.0), lambertw(1 / math.e).real / 2, rel_tol=1e-13)
    assert in_domain_A(0.27, 1.0) and not in_domain_A(0.28, 1.0)


def test_shift_example_square():
    f = ExpTypeFn.polynomial([0, 0, 1])
    lam, x = Q(5, 3), Q(-2, 7)
    lhs, rhs = exp_type_shift(f, lam, x)
    assert lhs == rhs == lam**2 * x**2


def test_deriv0_example():
    f = ExpTypeFn.polynomial([1, 2, 3, 4])
    for m in (1, 2, 3):
        lhs, rhs = exp_type_deriv0(f, m, Q(3, 5))
        assert lhs == rhs == f.poly[m]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(-5, 5, max_denominator=4), min_size=1, max_size=9),
       st.fractions(-3, 3, max_denominator=5), st.fractions(-2, 2, max_denominator=5))
def test_shift_and_deriv0_exact_for_polynomials(coeffs, lam, x):
    f = ExpTypeFn.polynomial(coeffs)
    lhs, rhs = exp_type_shift(f, lam, x)
    assert lhs == rhs
    for m in range(1, 4):
        lhs, rhs = exp_type_deriv0(f, m, x)
        assert lhs == rhs


def test_expc_series_forms_within_A():
    f = ExpTypeFn.expc(1)
    for x in (-0.2, 0.05, 0.15, 0.25):
        assert abs(exp_type_shift(f, 0.7, x)[0] - exp_type_shift(f, 0.7, x)[1]) <= 1e-8
        lhs, rhs = exp_type_deriv0(f, 2, x)
        assert abs(lhs - rhs) <= 1e-8
        chk = exp_type_series(f, x, 0.4, -0.3, 0.5)
        assert chk.abs_err <= 1e-8
        assert chk.abs_err <= chk.tail_bound + 1e-14


def test_series_outside_A_is_refused():
    with pytest.raises(RadiusError):
        exp_type_series(ExpTypeFn.expc(1), 0.3, 0, 0, 1)


def test_series_pole():
    with pytest.raises(PoleError):
        exp_type_series(ExpTypeFn.expc(1), 0.1, 0, 0, -2)


def test_growth_constants_and_from_expr():
    f = ExpTypeFn.from_expr(parse("2*expc(3) - expc(-1)"))
    assert f.growth_constants() == (3.0, 3.0)
    p = ExpTypeFn.from_expr(parse("(t+1)^2"))
    assert p.poly == (1, 2, 1)
    with pytest.raises(ValueError):
        ExpTypeFn.from_expr(parse("sin(t)"))
