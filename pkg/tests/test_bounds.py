import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lagjet.bounds import (
    LevelEstimate,
    PowerSeries,
    Segment,
    certificate,
    commutation_check,
    corollary_coeff_bound,
    derivative_sup,
    inversion_certificate,
    lemma_derivative_bound,
    lemma_product_bound,
    level_exact,
    level_truncated,
    segment_level,
)
from lagjet.errors import RadiusError
from lagjet.expr import parse
from lagjet.exptype import ExpTypeFn

E1 = ExpTypeFn.expc(1)
UNIT = Segment(0, 1)


def test_segment_needs_two_points():
    with pytest.raises(ValueError):
        Segment(1, 1)


def test_level_examples():
    assert math.isclose(level_exact(E1, UNIT, 1).value, math.e)
    assert level_exact(ExpTypeFn.polynomial([-3]), UNIT, 0.1).value == 3
    assert level_exact(ExpTypeFn.polynomial([0, 1]), Segment(0, 2), 1).value == 2


def test_level_of_exponential_brute_force():
    # sup_p |c|^p e^{max(ca, cb)} / (p! R^p) by direct enumeration
    for c, R in ((3, 0.5), (-2, 1.0), (0.5, 0.1)):
        seg = Segment(-1, 0.5)
        brute = max(abs(c) ** p * math.exp(max(c * seg.a, c * seg.b)) / (math.factorial(p) * R**p)
                    for p in range(80))
        assert math.isclose(level_exact(ExpTypeFn.expc(c), seg, R).value, brute, rel_tol=1e-12)


def test_trig_level_matches_grid():
    seg = Segment(0, 2)
    exact = level_exact(parse("sin(t)"), seg, 0.5)
    approx = level_truncated(parse("sin(t)"), seg, 0.5, 12, 2001)
    assert math.isclose(exact.value, approx.value, rel_tol=1e-6)
    assert derivative_sup(parse("cos(t)"), 1, Segment(0, 1)) == pytest.approx(math.sin(1))


def test_truncated_estimates():
    g = parse("expc(1)")
    est = [level_truncated(g, UNIT, 0.7, p, 16).value for p in range(6)]
    assert est == sorted(est)
    assert level_truncated(g, UNIT, 0.7, 0, 16).value == pytest.approx(math.e)
    assert math.isclose(level_truncated(g, UNIT, 1, 10).value, level_exact(E1, UNIT, 1).value, rel_tol=1e-12)
    assert not level_truncated(g, UNIT, 1, 3).exact


def test_polynomial_sup_uses_interior_extrema():
    # (t - 1/2)^2 - 1 has |.| maximal at the interior point 1/2
    g = ExpTypeFn.polynomial([-0.75, -1, 1])
    assert derivative_sup(g, 0, UNIT) == pytest.approx(1.0)


def test_certificate_example():
    c = certificate(1, 1, 1, 1, 1)
    assert (c.S0, c.T0, c.r_product) == (2.0, 8.0, 1 / 32)


def test_olver_radius_when_R_equals_S():
    c = certificate(2, 2, 3, 3)
    assert c.T == 8
    # with g = u, T = 4R and r_product = 1/(16 N_R(u) R)
    assert math.isclose(c.r_product, c.r_olver)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.01, 10), st.floats(0.01, 10), st.floats(0.01, 10), st.floats(0.01, 10), st.floats(0.01, 10))
def test_certificate_invariants(R, S, Nu, Ng, rho):
    c = certificate(R, S, Nu, Ng, rho)
    assert c.T >= 2 * R and c.T >= 4 * S and c.T0 >= c.T
    assert min(c.r_product, c.r_olver, c.r_inversion) > 0
    half = certificate(R, S, 2 * Nu, Ng, rho)
    assert math.isclose(half.r_product, c.r_product / 2) and math.isclose(half.r_inversion, c.r_inversion / 2)
    no_rho = certificate(R, S, Nu, Ng)
    assert math.isclose(certificate(R, S, Nu, Ng, 1e15).r_product, no_rho.r_product, rel_tol=1e-9)
    assert no_rho.r_inversion <= no_rho.r_product


def test_segment_level():
    assert segment_level(1, 1, 1) == 2
    with pytest.raises(ValueError):
        segment_level(1, 1, 0.5, 0.5)


def test_lemmas_on_closed_forms():
    a = level_exact(E1, UNIT, 1)
    assert lemma_product_bound([a, a], level_exact(E1 * E1, UNIT, 2))
    assert lemma_product_bound([a], level_exact(E1, UNIT, 2))
    g = ExpTypeFn.expc(2)
    assert lemma_derivative_bound(level_exact(g, UNIT, 1), 3, level_exact(g.derivative(3), UNIT, 2))
    p = ExpTypeFn.polynomial([1, 2, 3])
    assert level_exact(p.derivative(3), UNIT, 2).value == 0


def test_randomised_lemmas():
    rnd = random.Random(7)
    for _ in range(50):
        c1, c2 = rnd.choice([-2, -1, 0.5, 1, 3]), rnd.choice([-1, 0.5, 2])
        seg, R = Segment(-1, rnd.choice([0.5, 1, 2])), rnd.choice([0.25, 0.5, 1, 2])
        f, g = ExpTypeFn.expc(c1, rnd.randint(1, 5)), ExpTypeFn.expc(c2)
        assert lemma_product_bound([level_exact(f, seg, R), level_exact(g, seg, R)],
                                   level_exact(f * g, seg, 2 * R))
        q = rnd.randint(0, 5)
        assert lemma_derivative_bound(level_exact(f, seg, R), q, level_exact(f.derivative(q), seg, 2 * R))


def test_lemmas_refuse_lower_bounds():
    lb = LevelEstimate(1.0, 1.0, False, 5)
    with pytest.raises(ValueError):
        lemma_product_bound([lb], LevelEstimate(2.0, 1.0, True))
    with pytest.raises(ValueError):
        lemma_derivative_bound(lb, 1, LevelEstimate(2.0, 1.0, True))


def test_corollary_bound():
    for n in (1, 2, 5):
        left, right = corollary_coeff_bound(E1, E1, UNIT, 1, 1, n)
        assert left <= right
        assert right <= level_exact(E1, UNIT, 1).value * math.factorial(n) * (4 * math.e * 4) ** n / 4
    left, _ = corollary_coeff_bound(ExpTypeFn.polynomial([0]), E1, UNIT, 1, 1, 2)
    assert left == 0


def test_inversion_certificate():
    c = inversion_certificate(parse("sin(t)"), Segment(0, 2), 1)
    assert c.T == 4 and c.r_inversion == 1 / 32


def _geometric_setup():
    u = parse("expc(1)")
    N = level_exact(u, UNIT, 1).value
    return u, certificate(1, 1, N, N, rho=1.0)


def test_commutation_geometric():
    u, cert = _geometric_setup()
    z = cert.r_product / 2
    res = commutation_check(u, u, PowerSeries.geometric(), 0, z, 30, cert)
    assert res.defect <= 1e-8
    assert res.within_tail


def test_commutation_tail_shrinks_with_order():
    u, cert = _geometric_setup()
    z = cert.r_product / 2
    tails = [commutation_check(u, u, PowerSeries.geometric(), 0, z, n, cert).tail_bound for n in (5, 10, 20, 30)]
    assert tails == sorted(tails, reverse=True)


def test_commutation_polynomial_is_exact():
    u = parse("expc(1)")
    res = commutation_check(u, parse("expc(1/2) - t"), PowerSeries.polynomial([1, -2, 0, 3]), 0, "1/3", 10)
    assert res.exact and res.defect == 0


def test_commutation_at_zero():
    res = commutation_check(parse("expc(1)"), parse("expc(1)"), PowerSeries.polynomial([5, 1]), 0, 0, 6)
    assert res.lhs == res.rhs == 5


def test_commutation_radius():
    u, cert = _geometric_setup()
    with pytest.raises(RadiusError):
        commutation_check(u, u, PowerSeries.geometric(), 0, cert.r_product * 1.01, 10, cert)
