import math

import mpmath
import numpy as np
import pytest
import scipy.integrate
from hypothesis import given, settings
from hypothesis import strategies as st

from hororadon import disk
from hororadon import transforms as tr
from hororadon.errors import PoleAtZero, QuadratureUnderresolved
from hororadon.lie import a_elem, k_elem, n_elem
from hororadon.numerics import LineGrid


@pytest.fixture(scope="module")
def bump():
    return tr.gaussian_bump(0.15, -0.1, 0.35, 0.8 + 0.3j, 0.4, 1.1, "probe")


# -- measure constants --------------------------------------------------------


def test_c_N_closed_form():
    # int ds / (1 + 4 s^2) = pi / 2
    c_N, delta = tr.compute_c_N()
    assert abs(c_N - 2 / math.pi) < 1e-9
    assert delta < 1e-8


def test_c_A_closed_form():
    # B(H0, H0) = 8, so c_A = sqrt(8) / sqrt(2 pi)
    assert tr.compute_c_A() == pytest.approx(2 / math.sqrt(math.pi), rel=1e-14)


def test_nbar_density_closed_form():
    s = np.linspace(-5, 5, 41)
    np.testing.assert_allclose(tr.nbar_density(s), 1 / (1 + 4 * s ** 2), rtol=1e-13)


# -- c-function ----------------------------------------------------------------


def _c_mpmath(lam):
    z = 0.5j * lam
    return complex(mpmath.gamma(z) / (mpmath.sqrt(mpmath.pi) * mpmath.gamma(z + 0.5)))


@given(st.floats(0.05, 50.0))
def test_c_function_against_mpmath(lam):
    ref = _c_mpmath(lam)
    assert abs(tr.c_complex(lam) - ref) < 1e-11 * abs(ref)
    assert abs(tr.c_abs_sq_inv(lam) * abs(ref) ** 2 - 1) < 1e-11


def test_c_function_values():
    assert tr.c_abs_sq_inv(2.0) == pytest.approx(math.pi * math.tanh(math.pi), rel=1e-15)
    e = tr.c_function(1.5)
    assert abs(e.c_abs_sq_inv * abs(e.c_complex) ** 2 - 1) < 1e-12
    with pytest.raises(PoleAtZero):
        tr.c_function(0.0)
    lam = np.linspace(-10, 10, 101)
    np.testing.assert_allclose(tr.multiplier(lam) ** 2, tr.c_abs_sq_inv(lam) / 2, rtol=1e-14)
    np.testing.assert_array_equal(tr.plancherel_density(lam), tr.plancherel_density(-lam))


# -- test functions --------------------------------------------------------------


def test_gaussian_bump_support_and_truncation(bump):
    z = np.array([bump.center, disk.mobius(a_elem(bump.radius * 1.01), 0j)])
    assert abs(bump(z[:1])[0]) > 0.5
    far = tr.gaussian_bump(0.0, 0.0, 0.3)
    assert far(np.array([math.tanh(far.radius + 0.01)]))[0] == 0


def test_transport_scaling_and_sum(bump):
    g = n_elem(0.3) @ a_elem(-0.2)
    z = np.array([0.1 + 0.2j, -0.3j])
    gi = g.inverse()
    moved = np.array([disk.mobius(gi, complex(w)) for w in z])
    np.testing.assert_allclose(bump.transported(g)(z), bump(moved), atol=1e-15)
    other = tr.gaussian_bump(-0.2, 0.1, 0.3)
    np.testing.assert_allclose((bump + other.scaled(2j))(z), bump(z) + 2j * other(z), atol=1e-15)


def test_radon_rejects_understated_support():
    f = tr.gaussian_bump(0.0, 0.0, 0.35)
    lying = tr.TestFunction(f.evaluator, f.center, 0.3, "lying")
    with pytest.raises(QuadratureUnderresolved):
        tr.radon_values(lying, np.array([0.0]), np.array([0.0]), tr.MeasureNormalization(1, 1), tr.TransformGrid.horocycle_quad)


# -- Radon transform ---------------------------------------------------------------


def radon_oracle(f, beta, tau, c_N):
    """c_N int f(k_{beta/2} a_tau n_s [o]) ds by adaptive quadrature on group products."""
    g0 = k_elem(beta / 2) @ a_elem(tau)

    def point(s):
        return disk.mobius(g0 @ n_elem(s), 0j)

    def part(fn):
        return scipy.integrate.quad(lambda s: fn(f(np.array([point(s)]))[0]), -60, 60,
                                    limit=400, epsabs=1e-14, epsrel=1e-12, points=[0.0])[0]

    return c_N * complex(part(np.real), part(np.imag))


@pytest.mark.parametrize("beta,tau", [(0.0, 0.0), (1.3, -0.4), (4.0, 0.6), (2.2, 1.1)])
def test_radon_against_adaptive_quadrature(bump, norm, beta, tau):
    got = tr.radon_values(bump, np.array([beta]), np.array([tau]), norm, tr.TransformGrid.horocycle_quad)[0]
    ref = radon_oracle(bump, beta, tau, norm.c_N)
    assert abs(got - ref) < 1e-9 * max(1e-3, abs(ref))


def test_radon_zero_and_radial(norm, small_grid):
    z = tr.radon_grid(tr.zero_function(), norm, small_grid)
    assert np.all(z.samples == 0)
    R = tr.radon_grid(tr.gaussian_bump(0, 0, 0.4), norm, small_grid).samples
    assert np.max(np.abs(R - R[:1])) < 1e-10 * np.max(np.abs(R))


@settings(max_examples=15)
@given(st.integers(1, 7), st.floats(-1.0, 1.0))
def test_radon_rotation_equivariance(bump, norm, steps, tau):
    phi = steps * math.pi / 16
    beta = np.linspace(0, 2 * math.pi, 12, endpoint=False)
    lhs = tr.radon_values(bump.transported(k_elem(phi)), beta, np.full_like(beta, tau), norm,
                          tr.TransformGrid.horocycle_quad)
    rhs = tr.radon_values(bump, np.mod(beta - 2 * phi, 2 * math.pi), np.full_like(beta, tau), norm,
                          tr.TransformGrid.horocycle_quad)
    assert np.max(np.abs(lhs - rhs)) < 1e-10 * max(1e-3, np.max(np.abs(rhs)))


@settings(max_examples=10)
@given(st.floats(-0.8, 0.8), st.floats(0, 2 * math.pi), st.floats(-0.5, 0.5))
def test_radon_intertwines_with_horocycle_action(bump, norm, s, beta, tau):
    g = n_elem(s) @ a_elem(0.3 * s)
    b2, t2 = tr.hat_pi_nodes(g, np.array([beta]), np.array([tau]))
    quad = tr.TransformGrid.horocycle_quad
    lhs = tr.radon_values(bump.transported(g), np.array([beta]), np.array([tau]), norm, quad)[0]
    rhs = tr.radon_values(bump, b2, t2, norm, quad)[0]
    assert abs(lhs - rhs) < 1e-10 * max(1e-3, abs(rhs))


def test_radon_at_reference_and_abel(bump, norm):
    h = disk.HorocycleParam(disk.BoundaryPoint(0.0), 0.2)
    moved = disk.HorocycleParam(h.b, 0.65)
    assert tr.radon_at_reference(bump, h, math.tanh(0.45), norm) == pytest.approx(tr.radon(bump, moved, norm), abs=1e-14)
    assert tr.abel(bump, h, norm) == pytest.approx(math.exp(0.2) * tr.radon(bump, h, norm), abs=1e-15)


# -- Helgason-Fourier transform -------------------------------------------------------


def helgason_oracle(f, beta, lam, c_N, c_A, rmax):
    """Polar-coordinate quadrature with the Poisson kernel: e^{2 A_o(z, b)} = (1-|z|^2)/|z-b|^2."""
    b = np.exp(1j * beta)

    def integrand(r, th, part):
        z = r * np.exp(1j * th)
        A = 0.5 * np.log((1 - r * r) / abs(z - b) ** 2)
        v = f(np.array([z]))[0] * np.exp((1 - 1j * lam) * A) * r / (1 - r * r) ** 2
        return part(v)

    re = scipy.integrate.dblquad(lambda r, th: integrand(r, th, np.real), 0, 2 * math.pi, 0, rmax, epsabs=1e-12, epsrel=1e-10)[0]
    im = scipy.integrate.dblquad(lambda r, th: integrand(r, th, np.imag), 0, 2 * math.pi, 0, rmax, epsabs=1e-12, epsrel=1e-10)[0]
    return c_N * c_A * complex(re, im)


@pytest.mark.parametrize("beta,lam", [(0.0, 0.7), (2.5, -1.9)])
def test_helgason_against_polar_quadrature(norm, beta, lam):
    f = tr.gaussian_bump(0.05, 0.0, 0.3, 1.0, 0.3, 0.5)
    rmax = math.tanh(disk.hyperbolic_distance_to_origin(f.center) + f.radius)
    ref = helgason_oracle(f, beta, lam, norm.c_N, norm.c_A, rmax)
    got = tr.helgason_fourier(f, beta, lam, norm)
    assert abs(got - ref) < 1e-6 * abs(ref)


def test_helgason_grid_matches_pointwise(bump, norm, small_grid):
    H = tr.helgason_grid(bump, norm, small_grid)
    for i, j in [(0, 10), (3, 255), (7, 300)]:
        ref = tr.helgason_fourier(bump, H.beta[i], small_grid.lam.nodes[j], norm, small_grid)
        assert abs(H.samples[i, j] - ref) < 1e-12 * np.max(np.abs(H.samples))


def test_slice_theorem_on_small_grid(bump, norm, small_grid):
    H = tr.helgason_grid(bump, norm, small_grid)
    S = tr.phi_o(tr.radon_grid(bump, norm, small_grid, beta=small_grid.beta_spectral), norm, small_grid.lam)
    assert np.linalg.norm(H.samples - S.samples) / np.linalg.norm(S.samples) < 1e-3


# -- one-dimensional operators ------------------------------------------------------------


def test_phi_o_round_trip(bump, norm, small_grid):
    F = tr.radon_grid(bump, norm, small_grid)
    back = tr.phi_o_inverse(tr.phi_o(F, norm, small_grid.lam), norm, small_grid.tau)
    assert np.max(np.abs(back.samples - F.samples)) < 1e-10 * np.max(np.abs(F.samples))


def _lambda_error(grid, norm):
    tau = grid.tau.nodes
    prof = np.exp(-tau ** 2 / 2)  # Psi*_o F is a Gaussian; its transform is c_A sqrt(2 pi) e^{-lam^2/2}
    F = tr.HorocycleFunction(np.tile(prof * np.exp(-tau), (4, 1)).astype(complex), grid.beta, grid.tau)
    out = tr.lambda_operator(F, norm, grid.lam)
    err = 0.0
    for j in np.searchsorted(tau, [-1.0, 0.0, 0.5, 2.0]):
        t = tau[j]

        def integrand(lam):
            mult = math.sqrt(lam * math.pi / 2 * math.tanh(lam * math.pi / 2) / 2)
            return math.sqrt(2 * math.pi) * math.exp(-lam ** 2 / 2) * mult * math.cos(lam * t)

        ref = scipy.integrate.quad(integrand, 0, 40, epsabs=1e-14, limit=200)[0] / math.pi
        err = max(err, abs(out.samples[0, j] * math.exp(t) - ref))
    return err


def test_lambda_operator_against_direct_inverse_transform(norm):
    # the multiplier has a kink at lam = 0, so its inverse transform decays like
    # 1/tau^2 and the discrete lambda sum aliases at period 2 pi / dlam
    coarse = tr.TransformGrid(n_beta=4, n_beta_spectral=4)
    e1 = _lambda_error(coarse, norm)
    e2 = _lambda_error(coarse.refined(), norm)
    assert e1 < 1e-3
    assert e2 < e1 / 3


def test_unitarity_on_small_grid(bump, norm, small_grid):
    Q = tr.q_operator(bump, norm, small_grid)
    nf = math.sqrt(tr.inner_product(bump, bump, norm, small_grid).real)
    assert abs(tr.horocycle_norm(Q, norm) / nf - 1) < 1e-3


def test_q_operator_is_linear(norm, small_grid):
    f1 = tr.gaussian_bump(0.1, 0.0, 0.3)
    f2 = tr.gaussian_bump(-0.1, 0.2, 0.35)
    Q = tr.q_operator(f1.scaled(2.0) + f2.scaled(-1j), norm, small_grid).samples
    Q1 = tr.q_operator(f1, norm, small_grid).samples
    Q2 = tr.q_operator(f2, norm, small_grid).samples
    assert np.max(np.abs(Q - 2 * Q1 + 1j * Q2)) < 1e-12 * np.max(np.abs(Q))


def test_tau_extended_window():
    g = tr.TransformGrid()
    ext = g.tau_extended
    assert (ext.lo, ext.hi) == (-16.0, 16.0)
    assert ext.step == pytest.approx(g.tau.step)
    # a finer lambda step allows a wider window before aliasing sets in
    assert g.refined().tau_extended.hi >= ext.hi


def test_grid_refinements():
    g = tr.TransformGrid()
    d = g.doubled()
    assert d.n_beta == 512 and d.n_beta_spectral == 64
    assert d.lam.step == pytest.approx(g.lam.step / 2) and d.tau.step == pytest.approx(g.tau.step / 2)
    r = g.refined()
    assert r.tau == g.tau and r.lam.step == pytest.approx(g.lam.step / 2)
    assert r.horocycle_quad.panels == 2 * g.horocycle_quad.panels
    with pytest.raises(ValueError):
        tr.TransformGrid(n_beta=30, n_beta_spectral=8)


def test_container_validation():
    lam = LineGrid(-1, 1, 8, staggered=True)
    with pytest.raises(ValueError):
        tr.SpectralFunction(np.zeros((2, 7)), np.zeros(2), lam)
    with pytest.raises(ValueError):
        tr.SpectralFunction(np.zeros((2, 8)), np.zeros(2), LineGrid(-1, 2, 8, staggered=True))
    with pytest.raises(ValueError):
        tr.HorocycleFunction(np.zeros((3, 4)), np.zeros(2), LineGrid(0, 1, 4))


# -- group action on sampled functions ------------------------------------------------------


def test_hat_pi_rotation_by_grid_step_is_a_roll(bump, norm, small_grid):
    R = tr.radon_grid(bump, norm, small_grid)
    phi = math.pi / small_grid.n_beta  # moves beta by one grid step
    moved = tr.hat_pi_sampled(k_elem(phi), R)
    np.testing.assert_allclose(moved.samples, np.roll(R.samples, 1, axis=0), atol=1e-13)


@given(st.floats(-0.5, 0.5), st.floats(-0.5, 0.5), st.floats(0, 2 * math.pi), st.floats(-1, 1))
def test_hat_pi_nodes_compose(s, t, beta, tau):
    g, h = n_elem(s), a_elem(t) @ k_elem(0.3)
    b1, t1 = tr.hat_pi_nodes(h, *tr.hat_pi_nodes(g, np.array([beta]), np.array([tau])))
    b2, t2 = tr.hat_pi_nodes(g @ h, np.array([beta]), np.array([tau]))
    assert abs(np.exp(1j * b1[0]) - np.exp(1j * b2[0])) < 1e-12
    assert abs(t1[0] - t2[0]) < 1e-12


# -- range properties ----------------------------------------------------------------------------


def test_range_properties_on_small_grid(bump, norm, small_grid):
    probes = [0j, 0.2 + 0.1j, -0.3j]
    H = tr.helgason_grid(bump, norm, small_grid)
    assert tr.property_sharp_defect(H, probes, norm) < 1e-3
    R = tr.radon_grid(bump, norm, small_grid)
    assert tr.property_flat_defect(R, probes, norm, small_grid.lam) < 1e-3


def test_range_properties_detect_odd_profiles(norm, small_grid):
    probes = [0j, 0.2 + 0.1j]
    lam = small_grid.lam
    odd = lam.nodes * np.exp(-lam.nodes ** 2 / 8)
    S = tr.SpectralFunction(np.tile(odd, (8, 1)).astype(complex), small_grid.beta_spectral, lam)
    assert tr.property_sharp_defect(S, probes, norm) > 0.1
    tau = small_grid.tau.nodes
    F = tr.HorocycleFunction(np.tile(tau * np.exp(-tau ** 2) * np.exp(-tau), (32, 1)).astype(complex),
                             small_grid.beta, small_grid.tau)
    assert tr.property_flat_defect(F, probes, norm, lam) > 0.1
    zero = tr.SpectralFunction(np.zeros_like(S.samples), S.beta, lam)
    assert tr.property_sharp_defect(zero, probes, norm) == 0.0


def test_kappa_near_one_on_reference(norm):
    kappa = tr.measure_kappa(tr.reference_bump(), norm, tr.TransformGrid())
    assert abs(kappa - 1) < 1e-6
