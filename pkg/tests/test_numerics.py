import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hororadon.errors import PoleError, TailToleranceExceeded
from hororadon.numerics import (
    FourierPair,
    LineGrid,
    QuadratureSpec,
    complex_gamma,
    composite_nodes,
    gauss_legendre,
    integrate_1d,
)

finite = st.floats(-3.0, 3.0, allow_nan=False)


@given(st.integers(1, 20), st.lists(finite, min_size=1, max_size=40))
def test_gauss_legendre_exact_for_degree_2n_minus_1(n, coeffs):
    coeffs = coeffs[: 2 * n]
    x, w = gauss_legendre(n)
    poly = np.polynomial.Polynomial(coeffs)
    exact = poly.integ()(1.0) - poly.integ()(-1.0)
    assert abs(np.sum(w * poly(x)) - exact) < 1e-12 * max(1.0, np.sum(np.abs(coeffs)))


def test_composite_gauss_legendre_integrates_exponential():
    x, w = composite_nodes(-1.0, 2.0, QuadratureSpec("gauss-legendre", 64, 8))
    assert abs(np.sum(w * np.exp(x)) - (math.e ** 2 - math.exp(-1))) < 1e-14


def test_composite_trapezoid_error_matches_euler_maclaurin():
    spec = QuadratureSpec("trapezoid", 64, 8)
    x, w = composite_nodes(-1.0, 2.0, spec)
    h = 3.0 / (spec.panels * spec.points_per_panel)
    exact = math.e ** 2 - math.exp(-1)
    leading = h ** 2 / 12 * (math.e ** 2 - math.exp(-1))  # h^2/12 (f'(b) - f'(a))
    assert abs(np.sum(w * np.exp(x)) - exact - leading) < 1e-9


def test_composite_nodes_vectorized_over_intervals():
    spec = QuadratureSpec("gauss-legendre", 4, 6)
    lo = np.array([0.0, -1.0, 2.0])
    hi = np.array([1.0, 1.0, 5.0])
    x, w = composite_nodes(lo, hi, spec)
    assert x.shape == (3, 24)
    np.testing.assert_allclose(np.sum(w * x ** 2, axis=-1), (hi ** 3 - lo ** 3) / 3, rtol=1e-14)


def test_integrate_1d_gaussian_and_error_estimate():
    spec = QuadratureSpec("gauss-legendre", 32, 8, truncation=10.0)
    res = integrate_1d(lambda x: np.exp(-x ** 2), spec)
    assert abs(res.value - math.sqrt(math.pi)) < 1e-13
    assert res.error < 1e-10


def test_integrate_1d_rejects_heavy_tail():
    spec = QuadratureSpec("gauss-legendre", 16, 8, truncation=5.0, tail_tolerance=1e-10)
    with pytest.raises(TailToleranceExceeded):
        integrate_1d(lambda x: 1.0 / (1.0 + x ** 2), spec)


@pytest.mark.parametrize("bad", [dict(rule="simpson"), dict(panels=0), dict(points_per_panel=1), dict(truncation=0.0)])
def test_quadrature_spec_validation(bad):
    with pytest.raises(ValueError):
        QuadratureSpec(**bad)


def test_quadrature_refinement_levels():
    q = QuadratureSpec("gauss-legendre", 8, 24)
    assert q.refined().panels == 16
    assert q.coarsened().panels == 4
    assert QuadratureSpec("gauss-legendre", 1, 8).coarsened().points_per_panel == 4


@given(st.floats(-20, 20), st.floats(-20, 20))
def test_complex_gamma_matches_mpmath(x, y):
    z = complex(x, y)
    if abs(y) < 1e-6 and x <= 0 and abs(x - round(x)) < 1e-6:
        return
    ref = complex(mpmath.gamma(mpmath.mpc(x, y)))
    got = complex(complex_gamma(z))
    if ref == 0 or not np.isfinite(abs(ref)):
        return
    assert abs(got - ref) <= 1e-12 * abs(ref)


def test_complex_gamma_known_values():
    np.testing.assert_allclose(complex_gamma(np.array([1.0, 5.0, 0.5])), [1.0, 24.0, math.sqrt(math.pi)], rtol=1e-14)
    np.testing.assert_allclose(complex_gamma(-0.5), -2 * math.sqrt(math.pi), rtol=1e-13)


@pytest.mark.parametrize("z", [0.0, -1.0, -7.0])
def test_complex_gamma_poles(z):
    with pytest.raises(PoleError):
        complex_gamma(z)


def test_line_grid_weights_and_staggering():
    g = LineGrid(-2.0, 2.0, 9)
    assert abs(g.weights.sum() - 4.0) < 1e-15
    assert g.nodes[0] == -2.0 and g.nodes[-1] == 2.0
    s = LineGrid(-3.0, 3.0, 12, staggered=True)
    assert abs(s.weights.sum() - 6.0) < 1e-15
    assert np.min(np.abs(s.nodes)) > 0
    np.testing.assert_allclose(s.nodes, -s.nodes[::-1], atol=1e-15)
    assert s.doubled().step == pytest.approx(s.step / 2)
    assert g.doubled().step == pytest.approx(g.step / 2)
    with pytest.raises(ValueError):
        LineGrid(1.0, 0.0, 4)


def _pair(c_A=1.3):
    return FourierPair(LineGrid(-10, 10, 401), LineGrid(-20, 20, 512, staggered=True), c_A)


def test_fourier_of_gaussian_closed_form():
    p = _pair()
    t = p.tau.nodes
    lam = p.lam.nodes
    got = p.forward(np.exp(-t ** 2 / 2))
    np.testing.assert_allclose(got, 1.3 * math.sqrt(2 * math.pi) * np.exp(-lam ** 2 / 2), atol=1e-13)


@given(st.floats(-1.5, 1.5), st.floats(0.5, 1.0), st.floats(-3, 3))
def test_fourier_round_trip_and_parseval(mu, width, freq):
    # inputs are negligible (< 1e-15) at the ends of the tau window
    p = _pair()
    t = p.tau.nodes
    s = np.exp(-((t - mu) ** 2) / (2 * width ** 2)) * np.exp(1j * freq * t)
    F = p.forward(s)
    np.testing.assert_allclose(p.inverse(F), s, atol=1e-10)
    lhs = np.sum(np.abs(F) ** 2 * p.lambda_measure)
    rhs = np.sum(np.abs(s) ** 2 * p.tau_measure)
    assert abs(lhs - rhs) < 1e-10 * rhs


def test_fourier_is_linear_along_last_axis():
    p = _pair()
    rng = np.random.default_rng(4)
    t = p.tau.nodes
    A = np.exp(-t ** 2)[None, :] * rng.standard_normal((3, 1))
    F = p.forward(A)
    assert F.shape == (3, p.lam.n)
    np.testing.assert_allclose(F[1], p.forward(A[1]), atol=1e-15)


def test_fourier_round_trip_needs_support_inside_window():
    p = _pair()
    t = p.tau.nodes
    s = np.exp(-((t - 2.0) ** 2) / (2 * 1.5 ** 2))  # about 7e-7 at tau = 10
    err = np.max(np.abs(p.inverse(p.forward(s)) - s))
    assert err > 1e-8
