import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nilfourier.hermite import (CoeffVector, QuadratureRule, gauss_hermite_rule, gauss_legendre_rule,
                                hermite_eval, hermite_table, ladder_apply, norm_bound,
                                rescaled_hermite_eval, trapezoid_rule, uniform_box_rule)

# mpmath, 30 digits: physicists' polynomial times e^{-x^2/2} over sqrt(2^n n! sqrt(pi))
FROZEN_H = [
    (0, 0.5, 0.662865966442479529),
    (3, 0.7, -0.47995350309611403362),
    (10, -1.3, -0.34999147167891238927),
    (25, 2.0, 0.3044439368629793374),
]


@pytest.mark.parametrize("n,x,expected", FROZEN_H)
def test_hermite_frozen_values(n, x, expected):
    assert hermite_eval(n, x) == pytest.approx(expected, abs=1e-14)


def test_hermite_ground_state():
    x = np.linspace(-3, 3, 7)
    assert np.allclose(hermite_eval(0, x), np.pi ** -0.25 * np.exp(-x * x / 2), atol=1e-15)


def test_table_matches_single_evaluations():
    x = np.linspace(-4, 4, 11)
    tab = hermite_table(12, x)
    for n in (0, 5, 12):
        assert np.allclose(tab[n], hermite_eval(n, x))


def test_orthonormality_gauss_legendre():
    rule = gauss_legendre_rule(40, -14.0, 14.0, panels=8)
    H = hermite_table(32, rule.nodes)
    G = (H * rule.weights) @ H.T
    assert np.max(np.abs(G - np.eye(33))) < 1e-10


def test_negative_degree_rejected():
    with pytest.raises(ValueError):
        hermite_eval(-1, 0.0)
    with pytest.raises(ValueError):
        hermite_table(-2, np.zeros(3))


def test_rescaled_is_normalized():
    rule = gauss_legendre_rule(32, -20.0, 20.0, panels=8)
    for eta in (0.3, 1.0, 2.5):
        v = rescaled_hermite_eval(4, eta, rule.nodes)
        assert rule.integrate(lambda x: v * v) == pytest.approx(1.0, abs=1e-12)


def test_create_and_annihilate_on_basis():
    e = CoeffVector.basis(3, 6)
    up = ladder_apply("create", e)
    down = ladder_apply("annihilate", e)
    assert up.coeffs[4] == pytest.approx(np.sqrt(8.0))
    assert down.coeffs[2] == pytest.approx(np.sqrt(6.0))
    assert np.count_nonzero(up.coeffs) == 1 and np.count_nonzero(down.coeffs) == 1


def test_number_identity():
    # (C A + Id) e_n = (2n + 1) e_n, up to the rounding of sqrt(2n)^2
    for n in range(33):
        e = CoeffVector.basis(n, 40)
        v = ladder_apply("create", ladder_apply("annihilate", e)).coeffs[:40] + e.coeffs
        target = (2 * n + 1) * e.coeffs
        assert np.max(np.abs(v - target)) <= 4 * np.finfo(float).eps * (2 * n + 1)


def test_multiply_matches_pointwise_product():
    x = np.linspace(-3, 3, 13)
    v = CoeffVector.basis(5, 8)
    assert np.allclose(ladder_apply("multiply", v).evaluate(x), x * hermite_eval(5, x), atol=1e-13)


def test_differentiate_matches_finite_difference():
    x = np.linspace(-2, 2, 9)
    h = 1e-5
    fd = (hermite_eval(4, x + h) - hermite_eval(4, x - h)) / (2 * h)
    v = ladder_apply("differentiate", CoeffVector.basis(4, 8))
    assert np.allclose(v.evaluate(x), fd, atol=1e-9)


def test_unknown_ladder_kind():
    with pytest.raises(ValueError):
        ladder_apply("rotate", CoeffVector.basis(0, 2))


@given(st.integers(0, 16), st.integers(0, 6), st.sampled_from(["multiply", "differentiate"]))
@settings(max_examples=60, deadline=None)
def test_norm_bounds(n, ell, kind):
    v = CoeffVector.basis(n, n + ell + 2)
    for _ in range(ell):
        v = ladder_apply(kind, v)
    assert v.norm() <= norm_bound(n, ell) + 1e-12


def test_coeff_vector_dot_is_linear_in_first_slot():
    u = CoeffVector(np.array([1.0, 2.0j]))
    w = CoeffVector(np.array([1.0, 1.0]))
    assert u.dot(w) == pytest.approx(1 + 2j)


def test_gauss_hermite_rule_plain_dx():
    rule = gauss_hermite_rule(40)
    assert rule.integrate(lambda x: np.exp(-x * x / 2)) == pytest.approx(np.sqrt(2 * np.pi), rel=1e-12)
    assert rule.integrate_weighted(lambda x: x ** 4) == pytest.approx(0.75 * np.sqrt(np.pi), rel=1e-13)


def test_trapezoid_rule_is_spectral_on_periodic():
    rule = trapezoid_rule(16)
    for k in range(-7, 8):
        expected = 2 * np.pi if k == 0 else 0.0
        assert abs(rule.integrate(lambda z: np.exp(1j * k * z)) - expected) < 1e-13


def test_box_rules():
    assert gauss_legendre_rule(8, 0.0, 2.0).integrate(lambda x: x ** 7) == pytest.approx(2 ** 8 / 8)
    assert uniform_box_rule(200, 0.0, 1.0).integrate(lambda x: x) == pytest.approx(0.5)


def test_rule_validation():
    with pytest.raises(ValueError):
        QuadratureRule(np.zeros(3), np.zeros(2), "gauss-legendre")
    with pytest.raises(ValueError):
        QuadratureRule(np.zeros(3), np.zeros(3), "simpson")
