"""Horocyclic Radon transform, Abel and Helgason-Fourier transforms, the
c-function, the Fourier multiplier and the unitarized Radon operator on the disk.

Sampling conventions
--------------------
Functions on the horocycle space are sampled on a (beta, tau) grid in the
Psi_o parametrization, spectral functions on a (beta, lambda) grid.  Measures:

* dx = c_N c_A e^{-2t} ds dt in coordinates x = n_s a_t[o];
* L^2(Xi):  |F|^2 e^{2 tau} d nu^o c_A dtau;
* spectral side:  d nu^o dlam / (2 pi c_A), the measure making the Fourier
  transform on A unitary; the Plancherel density is 1 / (w |c(lam)|^2), w = 2.

Every grid sum is an ``np.sum`` (pairwise) or a fixed BLAS product, so the
summation order per node set is fixed.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
import scipy.ndimage

from . import disk
from .errors import PoleAtZero, QuadratureUnderresolved
from .lie import TWO_PI, H0, SU11Element, killing_form_su11, kan_coeffs, na_coeffs
from .numerics import FourierPair, LineGrid, QuadratureSpec, complex_gamma, composite_nodes, integrate_1d

W_ORDER = 2  # |W| for the disk
TRUNCATION_LEVEL = 1e-14

# --------------------------------------------------------------------------
# containers


@dataclass(frozen=True)
class MeasureNormalization:
    c_N: float
    c_A: float
    kappa: float = 1.0


@dataclass(frozen=True)
class SpectralFunction:
    samples: np.ndarray
    beta: np.ndarray
    lam: LineGrid

    def __post_init__(self):
        if self.samples.shape != (len(self.beta), self.lam.n):
            raise ValueError("sample shape does not match the grids")
        nodes = self.lam.nodes
        if not np.allclose(nodes, -nodes[::-1], atol=1e-12):
            raise ValueError("lambda grid must be symmetric")


@dataclass(frozen=True)
class HorocycleFunction:
    samples: np.ndarray
    beta: np.ndarray
    tau: LineGrid

    def __post_init__(self):
        if self.samples.shape != (len(self.beta), self.tau.n):
            raise ValueError("sample shape does not match the grids")


@dataclass(frozen=True)
class CFunctionEval:
    lam: float
    c_abs_sq_inv: float
    c_complex: complex


@dataclass(frozen=True)
class TransformGrid:
    """All discretization parameters of the transform stack.

    ``horocycle_quad`` integrates along one horocycle (after the sinh map of
    the arclength, see ``radon_values``), ``row_quad`` integrates across
    horocycles in the two-dimensional Helgason-Fourier quadrature.
    ``n_beta_spectral`` angles (a uniform subgrid of the beta grid) carry the
    direct Helgason-Fourier quadrature.  ``doubled`` halves every step and
    doubles both quadratures; the spectral angle count stays fixed because
    each direction is computed independently of the others.
    """

    n_beta: int = 256
    tau: LineGrid = LineGrid(-8.0, 8.0, 512)
    lam: LineGrid = LineGrid(-24.0, 24.0, 512, staggered=True)
    horocycle_quad: QuadratureSpec = QuadratureSpec("gauss-legendre", 8, 24, tail_tolerance=1e-12)
    row_quad: QuadratureSpec = QuadratureSpec("gauss-legendre", 8, 24, tail_tolerance=1e-12)
    n_beta_spectral: int = 64

    def __post_init__(self):
        if self.n_beta % self.n_beta_spectral:
            raise ValueError("n_beta_spectral must divide n_beta")

    @property
    def beta(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n_beta) / self.n_beta

    @property
    def beta_spectral(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n_beta_spectral) / self.n_beta_spectral

    def doubled(self) -> "TransformGrid":
        return replace(
            self,
            n_beta=2 * self.n_beta,
            tau=self.tau.doubled(),
            lam=self.lam.doubled(),
            horocycle_quad=self.horocycle_quad.refined(),
            row_quad=self.row_quad.refined(),
        )

    def refined(self) -> "TransformGrid":
        """Halve the lambda step and double both quadratures; sampling grids stay."""
        return replace(
            self,
            lam=self.lam.doubled(),
            horocycle_quad=self.horocycle_quad.refined(),
            row_quad=self.row_quad.refined(),
        )

    @property
    def tau_extended(self) -> LineGrid:
        """Wider tau grid (same step) carrying outputs of the Fourier multiplier.

        Lambda R f decays only like 1/tau^2, so it is resampled on an integer
        multiple of the tau window that stays within a third of the alias
        period 2 pi / dlam of the lambda grid.
        """
        period = TWO_PI / self.lam.step
        factor = max(1, int(period / 3.0 // max(abs(self.tau.lo), abs(self.tau.hi))))
        return LineGrid(factor * self.tau.lo, factor * self.tau.hi,
                        factor * (self.tau.n - 1) + 1, self.tau.staggered)

    def fourier_pair(self, norm: MeasureNormalization) -> FourierPair:
        return _pair(self.tau, self.lam, norm.c_A)


_PAIRS: dict = {}


def _pair(tau, lam, c_A):
    key = (tau, lam, c_A)
    if key not in _PAIRS:
        if len(_PAIRS) > 8:
            _PAIRS.clear()
        _PAIRS[key] = FourierPair(tau, lam, c_A)
    return _PAIRS[key]


# --------------------------------------------------------------------------
# test functions


@dataclass(frozen=True)
class TestFunction:
    """A function on the disk, negligible (< 1e-14) outside a hyperbolic ball.

    ``evaluator`` maps complex arrays to complex arrays.  The ball is given
    by its ``center`` and hyperbolic ``radius``; ``support_na`` converts it to
    the bounding box (S_max, T_max) in coordinates x = n_s a_t[o].
    """

    __test__ = False  # not a pytest class

    evaluator: Callable[[np.ndarray], np.ndarray]
    center: complex
    radius: float
    label: str = "f"

    def __call__(self, z):
        return self.evaluator(np.asarray(z, dtype=complex))

    @property
    def support_na(self) -> tuple[float, float]:
        wc, rw = disk.ball_in_w_plane(self.center, self.radius)
        _, t_c = disk.na_coordinates(self.center)
        s_max = 0.5 * (abs(wc.imag) + rw)
        return float(s_max), float(abs(t_c) + self.radius)

    def transported(self, g: SU11Element, label: str | None = None) -> "TestFunction":
        """pi(g) f = f(g^{-1} .)"""
        gi = g.inverse()
        f = self.evaluator
        return TestFunction(
            lambda z: f(disk.mobius_coeffs(gi.a, gi.b, z)),
            complex(disk.mobius_coeffs(g.a, g.b, self.center)),
            self.radius,
            label or f"pi(g){self.label}",
        )

    def scaled(self, c: complex, label: str | None = None) -> "TestFunction":
        f = self.evaluator
        return TestFunction(lambda z: c * f(z), self.center, self.radius, label or self.label)

    def __add__(self, other: "TestFunction") -> "TestFunction":
        f, g = self.evaluator, other.evaluator
        center, radius = _covering_ball(self, other)
        return TestFunction(lambda z: f(z) + g(z), center, radius, f"{self.label}+{other.label}")


def _covering_ball(f1: TestFunction, f2: TestFunction):
    d = disk._distance_array(f1.center, f2.center)
    return f1.center, float(max(f1.radius, d + f2.radius))


def zero_function() -> TestFunction:
    return TestFunction(lambda z: np.zeros(np.shape(z), dtype=complex), 0j, 0.5, "zero")


def gaussian_bump(s0: float = 0.0, t0: float = 0.0, sigma: float = 0.35,
                  amplitude: complex = 1.0, dipole: float = 0.0, direction: float = 0.0,
                  label: str = "bump") -> TestFunction:
    """Gaussian in the hyperbolic distance to the point n_{s0} a_{t0}[o].

    The optional dipole factor 1 + dipole * Re(e^{-i direction} u), with u the
    disk coordinate recentred at the bump, breaks rotational symmetry.  Values
    below 1e-14 are cut to zero.
    """
    c = complex(disk.na_point(s0, t0))
    peak = abs(amplitude) * (1.0 + abs(dipole))
    radius = sigma * np.sqrt(2.0 * np.log(peak / TRUNCATION_LEVEL))
    amplitude = complex(amplitude)

    def f(z):
        z = np.asarray(z, dtype=complex)
        d = disk._distance_array(c, z)
        env = np.exp(-0.5 * (d / sigma) ** 2)
        out = amplitude * env
        if dipole:
            u = (z - c) / (1.0 - np.conj(c) * z)
            out = out * (1.0 + dipole * np.real(np.exp(-1j * direction) * u))
        return np.where(d < radius, out, 0.0)

    return TestFunction(f, c, float(radius), label)


def reference_bump() -> TestFunction:
    return gaussian_bump(0.1, -0.05, 0.35, 1.0, 0.0, 0.0, "reference")


def seeded_bumps(rng: np.random.Generator, count: int = 5) -> list[TestFunction]:
    """Complex, non-radial bumps with random centers, widths and dipoles."""
    out = []
    for i in range(count):
        s0, t0 = rng.uniform(-0.3, 0.3, 2)
        sigma = rng.uniform(0.3, 0.4)
        amp = rng.uniform(0.5, 1.5) * np.exp(1j * rng.uniform(0, TWO_PI))
        dipole = rng.uniform(0.1, 0.5)
        direction = rng.uniform(0, TWO_PI)
        out.append(gaussian_bump(s0, t0, sigma, amp, dipole, direction, f"bump{i}"))
    return out


# --------------------------------------------------------------------------
# measure normalization


def cartan_involution_coeffs(a, b):
    """Theta(g) = (g^*)^{-1} in (a, b) coordinates."""
    return a, -b


def nbar_density(s):
    """e^{-2 rho(H(Theta n_s))}, from the KAN factorization of Theta(n_s)."""
    s = np.asarray(s, dtype=float)
    a, b = cartan_involution_coeffs(1 + 1j * s, -1j * s)
    return np.exp(-2.0 * kan_coeffs(a, b)[1])


DEFAULT_NBAR_QUAD = QuadratureSpec("gauss-legendre", 64, 10, truncation=40.0, tail_tolerance=1e-10)


def nbar_integral(quad: QuadratureSpec = DEFAULT_NBAR_QUAD):
    """int e^{-2 rho(H(nbar_s))} ds with s = sinh(y), y in [-truncation, truncation]."""
    return integrate_1d(lambda y: nbar_density(np.sinh(y)) * np.cosh(y), quad)


def compute_c_N(quad: QuadratureSpec = DEFAULT_NBAR_QUAD, rtol: float = 1e-8) -> tuple[float, float]:
    """c_N and the two-resolution discrepancy of the normalizing integral.

    Raises TailToleranceExceeded when the truncation is too short and
    QuadratureUnderresolved when the two resolutions disagree beyond rtol.
    """
    coarse = nbar_integral(quad)
    fine = nbar_integral(quad.refined())
    delta = abs(fine.value - coarse.value) / abs(fine.value)
    if delta > rtol:
        raise QuadratureUnderresolved(f"N-bar integral not converged ({delta:.2e})")
    return 1.0 / float(np.real(fine.value)), float(delta)


def compute_c_A() -> float:
    """Killing norm of H0 times (2 pi)^{-1/2}."""
    return float(np.sqrt(killing_form_su11(H0, H0)) / np.sqrt(TWO_PI))


def calibrate_measures(quad: QuadratureSpec = DEFAULT_NBAR_QUAD, grid: TransformGrid | None = None,
                       reference: TestFunction | None = None) -> MeasureNormalization:
    """c_N, c_A, then kappa from the Plancherel identity on the reference bump."""
    c_N, _ = compute_c_N(quad)
    c_A = compute_c_A()
    base = MeasureNormalization(c_N, c_A, 1.0)
    kappa = measure_kappa(reference or reference_bump(), base, grid or TransformGrid())
    return replace(base, kappa=kappa)


def measure_kappa(f: TestFunction, norm: MeasureNormalization, grid: TransformGrid) -> float:
    """Plancherel ratio (spectral side without kappa) / (int |f|^2 dx)."""
    lhs, rhs = plancherel_pair(f, f, replace(norm, kappa=1.0), grid)
    return float(np.real(rhs) / np.real(lhs))


# --------------------------------------------------------------------------
# c-function


def c_abs_sq_inv(lam):
    """|c(lam)|^{-2} = (pi lam / 2) tanh(pi lam / 2); even, 0 at lam = 0."""
    x = 0.5 * np.pi * np.asarray(lam, dtype=float)
    return x * np.tanh(x)


def c_complex(lam):
    """c(lam) = pi^{-1/2} Gamma(i lam / 2) / Gamma((i lam + 1) / 2)."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam == 0):
        raise PoleAtZero("c(lam) has a pole at lam = 0")
    z = 0.5j * lam
    return complex_gamma(z) / (np.sqrt(np.pi) * complex_gamma(z + 0.5))


def c_function(lam: float) -> CFunctionEval:
    return CFunctionEval(float(lam), float(c_abs_sq_inv(lam)), complex(c_complex(lam)))


def plancherel_density(lam):
    """1 / (w |c(lam)|^2)."""
    return c_abs_sq_inv(lam) / W_ORDER


def multiplier(lam):
    """1 / (sqrt(w) |c(lam)|)."""
    return np.sqrt(plancherel_density(lam))


# --------------------------------------------------------------------------
# Radon transform


def _horocycle_points(beta, tau, s):
    # k_{beta/2} a_tau n_s[o]
    w = np.exp(2.0 * tau) * (1.0 - 2j * s)
    return np.exp(1j * beta) * (w - 1.0) / (w + 1.0)


def radon_values(f: TestFunction, beta, tau, norm: MeasureNormalization,
                 quad: QuadratureSpec, chunk: int = 4096) -> np.ndarray:
    """c_N int f(k_{beta/2} a_tau n_s[o]) ds at arrays of (beta, tau).

    s is arclength on the horocycle.  The integral runs over the chord cut
    out by the support ball, written as s = mid + sinh(v) so that the
    Gaussian decay along the horocycle becomes Gaussian in v.
    """
    beta, tau = np.broadcast_arrays(np.asarray(beta, dtype=float), np.asarray(tau, dtype=float))
    shape = beta.shape
    beta, tau = beta.ravel(), tau.ravel()
    out = np.zeros(beta.shape, dtype=complex)
    # ball seen from the rotated frame
    centers = np.exp(-1j * beta) * f.center
    mid, half = disk.horocycle_chord(centers, f.radius, tau)
    active = np.flatnonzero(half > 0)
    for start in range(0, active.size, chunk):
        idx = active[start:start + chunk]
        v_hi = np.arcsinh(half[idx])
        v, wv = composite_nodes(-v_hi, v_hi, quad)
        s = mid[idx, None] + np.sinh(v)
        z = _horocycle_points(beta[idx, None], tau[idx, None], s)
        vals = f(z)
        ends = f(_horocycle_points(beta[idx, None], tau[idx, None],
                                   mid[idx, None] + half[idx, None] * np.array([-1.0, 1.0])))
        if np.max(np.abs(ends), initial=0.0) > quad.tail_tolerance:
            raise QuadratureUnderresolved("test function not negligible at the end of its support chord")
        out[idx] = norm.c_N * np.sum(vals * np.cosh(v) * wv, axis=-1)
    return out.reshape(shape)


def radon(f: TestFunction, h: disk.HorocycleParam, norm: MeasureNormalization,
          quad: QuadratureSpec = TransformGrid.horocycle_quad) -> complex:
    """R f at the horocycle Psi_o(b, a_tau)."""
    return complex(radon_values(f, h.b.beta, h.tau, norm, quad))


def radon_at_reference(f: TestFunction, h: disk.HorocycleParam, x, norm: MeasureNormalization,
                       quad: QuadratureSpec = TransformGrid.horocycle_quad) -> complex:
    """R f at Psi_x(b, a_tau) = Psi_o(b, a_tau exp(A_o(x, b)))."""
    shift = disk.composite_distance(disk.ORIGIN, x, h.b)
    return radon(f, disk.HorocycleParam(h.b, h.tau + shift), norm, quad)


def abel(f: TestFunction, h: disk.HorocycleParam, norm: MeasureNormalization,
         quad: QuadratureSpec = TransformGrid.horocycle_quad) -> complex:
    return np.exp(h.tau) * radon(f, h, norm, quad)


def radon_grid(f: TestFunction, norm: MeasureNormalization, grid: TransformGrid,
               beta: np.ndarray | None = None) -> HorocycleFunction:
    beta = grid.beta if beta is None else np.asarray(beta)
    B, T = np.meshgrid(beta, grid.tau.nodes, indexing="ij")
    return HorocycleFunction(radon_values(f, B, T, norm, grid.horocycle_quad), beta, grid.tau)


def abel_grid(f: TestFunction, norm: MeasureNormalization, grid: TransformGrid,
              beta: np.ndarray | None = None) -> HorocycleFunction:
    F = radon_grid(f, norm, grid, beta)
    return HorocycleFunction(F.samples * np.exp(F.tau.nodes)[None, :], F.beta, F.tau)


# --------------------------------------------------------------------------
# Fourier transform on A and Phi_o


def fourier_A(samples, lam, tau: LineGrid, norm: MeasureNormalization) -> np.ndarray:
    """c_A sum_tau w_tau s(tau) e^{-i lam tau}, along the last axis of samples."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    kernel = np.exp(-1j * np.outer(lam, tau.nodes)) * (norm.c_A * tau.weights)[None, :]
    out = np.asarray(samples) @ kernel.T
    return out


def phi_o(F: HorocycleFunction, norm: MeasureNormalization, lam: LineGrid) -> SpectralFunction:
    """(I x F) Psi*_o: weight by e^{tau}, then Fourier in tau."""
    pair = _pair(F.tau, lam, norm.c_A)
    return SpectralFunction(pair.forward(F.samples * np.exp(F.tau.nodes)[None, :]), F.beta, lam)


def phi_o_inverse(S: SpectralFunction, norm: MeasureNormalization, tau: LineGrid) -> HorocycleFunction:
    pair = _pair(tau, S.lam, norm.c_A)
    return HorocycleFunction(pair.inverse(S.samples) * np.exp(-tau.nodes)[None, :], S.beta, tau)


def lambda_multiplier(S: SpectralFunction) -> SpectralFunction:
    return SpectralFunction(S.samples * multiplier(S.lam.nodes)[None, :], S.beta, S.lam)


def lambda_operator(F: HorocycleFunction, norm: MeasureNormalization, lam: LineGrid,
                    tau_out: LineGrid | None = None) -> HorocycleFunction:
    """Lambda = (Psi*_o)^{-1} J_o Psi*_o on sampled horocycle functions.

    The result is sampled on ``tau_out`` (default: the input tau grid).
    """
    return phi_o_inverse(lambda_multiplier(phi_o(F, norm, lam)), norm, tau_out or F.tau)


def q_operator(f: TestFunction, norm: MeasureNormalization, grid: TransformGrid,
               beta: np.ndarray | None = None) -> HorocycleFunction:
    """Q f = Lambda R f, sampled on the extended tau grid of ``grid``."""
    return lambda_operator(radon_grid(f, norm, grid, beta), norm, grid.lam, grid.tau_extended)


def horocycle_norm(F: HorocycleFunction, norm: MeasureNormalization) -> float:
    """L^2(Xi) norm: |F|^2 e^{2 tau} d nu^o c_A dtau."""
    w = norm.c_A * F.tau.weights * np.exp(2.0 * F.tau.nodes)
    return float(np.sqrt(np.sum(np.abs(F.samples) ** 2 * w[None, :]) / len(F.beta)))


def spectral_norm(S: SpectralFunction, norm: MeasureNormalization, plancherel: bool = False) -> float:
    """L^2(nu^o x dlam/(2 pi c_A)) norm, optionally with the density 1/(w|c|^2)."""
    w = S.lam.weights / (TWO_PI * norm.c_A)
    if plancherel:
        w = w * plancherel_density(S.lam.nodes)
    return float(np.sqrt(np.sum(np.abs(S.samples) ** 2 * w[None, :]) / len(S.beta)))


# --------------------------------------------------------------------------
# Helgason-Fourier transform


def disk_nodes(center: complex, radius: float, row_quad: QuadratureSpec, horocycle_quad: QuadratureSpec):
    """Quadrature nodes (s, t) and weights for int g(x) dx / (c_N c_A) over a ball.

    Rows are the horocycles n_s a_t[o] of fixed t; on each row the
    arclength l = e^{-2t} s is mapped as l = mid + sinh(v) over the chord
    inside the ball.  The density e^{-2t} ds dt equals dl dt = cosh(v) dv dt.
    """
    _, t_c = disk.na_coordinates(center)
    t, wt = composite_nodes(float(t_c) - radius, float(t_c) + radius, row_quad)
    mid, half = disk.horocycle_chord(np.full(t.shape, center), radius, t)
    keep = half > 0
    t, wt, mid, half = t[keep], wt[keep], mid[keep], half[keep]
    v_hi = np.arcsinh(half)
    v, wv = composite_nodes(-v_hi, v_hi, horocycle_quad)
    arc = mid[:, None] + np.sinh(v)
    s = np.exp(2.0 * t)[:, None] * arc
    weights = wt[:, None] * wv * np.cosh(v)
    tt = np.broadcast_to(t[:, None], s.shape)
    return s.ravel(), tt.ravel(), weights.ravel()


def _function_nodes(f: TestFunction, grid: TransformGrid):
    s, t, w = disk_nodes(f.center, f.radius, grid.row_quad, grid.horocycle_quad)
    return s, t, w


def disk_integral(g: Callable, center: complex, radius: float, norm: MeasureNormalization,
                  grid: TransformGrid) -> complex:
    """int g dx over the ball B(center, radius)."""
    s, t, w = disk_nodes(center, radius, grid.row_quad, grid.horocycle_quad)
    return complex(norm.c_N * norm.c_A * np.sum(w * g(disk.na_point(s, t))))


def inner_product(f1: TestFunction, f2: TestFunction, norm: MeasureNormalization,
                  grid: TransformGrid) -> complex:
    """int f1 conj(f2) dx."""
    center, radius = _covering_ball(f1, f2)
    return disk_integral(lambda z: f1(z) * np.conj(f2(z)), center, radius, norm, grid)


def _powers(base: np.ndarray, count: int) -> np.ndarray:
    """Rows base**0, ..., base**(count-1), one repeated multiplication per row."""
    out = np.empty((count,) + base.shape, dtype=complex)
    out[0] = 1.0
    for k in range(1, count):
        np.multiply(out[k - 1], base, out=out[k])
    return out


def _uniform_exp_sum(coef: np.ndarray, A: np.ndarray, lam: LineGrid) -> np.ndarray:
    """sum_j coef[..., j] exp(-i lam_m A[..., j]) for all nodes lam_m of a uniform grid.

    Writes lam_m = lam_0 + (B p + q) dlam and factors the exponential, so the
    sum becomes one fixed-order matrix product per leading index.  The
    factors are unit-modulus powers built by repeated multiplication, which
    keeps the rounding growth linear in the block length.
    """
    lm = lam.nodes
    n = lm.size
    dl = lam.step
    block = int(np.ceil(np.sqrt(n)))
    nblk = -(-n // block)
    out = np.empty(A.shape[:-1] + (n,), dtype=complex)
    for idx in np.ndindex(A.shape[:-1]):
        a = A[idx]
        right = _powers(np.exp(-1j * dl * a), block)
        left = _powers(np.exp(-1j * block * dl * a), nblk)
        left *= (coef[idx] * np.exp(-1j * lm[0] * a))[None, :]
        out[idx] = (left @ right.T).ravel()[:n]
    return out


def helgason_grid(f: TestFunction, norm: MeasureNormalization, grid: TransformGrid,
                  beta: np.ndarray | None = None, lam: LineGrid | None = None) -> SpectralFunction:
    """H f(b, lam) = int f(x) e^{(1 - i lam) A_o(x, b)} dx by direct quadrature.

    A_o(x, b) comes from the Iwasawa factorization of k_b^{-1} s_o(x) at each
    quadrature node; defaults to the spectral beta subgrid.
    """
    beta = grid.beta_spectral if beta is None else np.asarray(beta, dtype=float)
    lam = grid.lam if lam is None else lam
    s, t, w = _function_nodes(f, grid)
    vals = f(disk.na_point(s, t))
    nz = vals != 0
    s, t, w, vals = s[nz], t[nz], w[nz], vals[nz]
    a, b = na_coeffs(s, t)
    A = disk.composite_distance_origin(a[None, :], b[None, :], beta[:, None])
    coef = norm.c_N * norm.c_A * w[None, :] * vals[None, :] * np.exp(A)
    return SpectralFunction(_uniform_exp_sum(coef, A, lam), beta, lam)


def helgason_fourier(f: TestFunction, b, lam: float, norm: MeasureNormalization,
                     grid: TransformGrid = TransformGrid()) -> complex:
    """H f at a single (b, lam)."""
    b = b if isinstance(b, disk.BoundaryPoint) else disk.BoundaryPoint(b)
    s, t, w = _function_nodes(f, grid)
    vals = f(disk.na_point(s, t))
    a, bb = na_coeffs(s, t)
    A = disk.composite_distance_origin(a, bb, b.beta)
    return complex(norm.c_N * norm.c_A * np.sum(w * vals * np.exp((1.0 - 1j * lam) * A)))


# --------------------------------------------------------------------------
# Plancherel


def plancherel_rhs(S1: SpectralFunction, S2: SpectralFunction, norm: MeasureNormalization) -> complex:
    """int int S1 conj(S2) d nu^o dlam / (w |c|^2), divided by kappa."""
    w = S1.lam.weights / (TWO_PI * norm.c_A) * plancherel_density(S1.lam.nodes)
    val = np.sum(S1.samples * np.conj(S2.samples) * w[None, :]) / len(S1.beta)
    return complex(val / norm.kappa)


def plancherel_pair(f1: TestFunction, f2: TestFunction, norm: MeasureNormalization,
                    grid: TransformGrid) -> tuple[complex, complex]:
    lhs = inner_product(f1, f2, norm, grid)
    H1 = helgason_grid(f1, norm, grid)
    H2 = H1 if f2 is f1 else helgason_grid(f2, norm, grid)
    return lhs, plancherel_rhs(H1, H2, norm)


# --------------------------------------------------------------------------
# range properties


def _as_points(probes):
    return [complex(p.z) if isinstance(p, disk.DiskPoint) else complex(p) for p in probes]


def _evenness_defect(I: np.ndarray) -> float:
    # I[probe, lam] on a symmetric grid: compare lam with -lam
    scale = np.max(np.abs(I))
    if scale == 0:
        return 0.0
    return float(np.max(np.abs(I - I[:, ::-1])) / scale)


def property_sharp_defect(S: SpectralFunction, probe_points, norm: MeasureNormalization | None = None) -> float:
    """Max over probes x and lam of |I(x, lam) - I(x, -lam)| / max |I|, with
    I(x, lam) = int e^{(1 + i lam) A_o(x, b)} S(b, lam) d nu^o(b)."""
    lm = S.lam.nodes
    I = []
    for z in _as_points(probe_points):
        A = disk.composite_distance_origin_z(z, S.beta)
        kern = np.exp((1.0 + 1j * lm[None, :]) * A[:, None])
        I.append(np.sum(kern * S.samples, axis=0) / len(S.beta))
    return _evenness_defect(np.array(I))


def shifted_abel(F: HorocycleFunction, z: complex) -> np.ndarray:
    """Psi*_x F on the grid: e^{tau} F(Psi_x(b, tau)) = e^{-A} Psi*_o F(b, tau + A), A = A_o(x, b).

    The shifted samples come from quintic spline interpolation in tau; values
    beyond the tau window are taken as zero.
    """
    G = F.samples * np.exp(F.tau.nodes)[None, :]
    A = disk.composite_distance_origin_z(z, F.beta)
    rows = np.broadcast_to(np.arange(len(F.beta))[:, None], G.shape)
    cols = (F.tau.nodes[None, :] + A[:, None] - F.tau.lo) / F.tau.step
    coords = np.array([rows, cols])
    re = scipy.ndimage.map_coordinates(G.real, coords, order=5, mode="constant", cval=0.0)
    im = scipy.ndimage.map_coordinates(G.imag, coords, order=5, mode="constant", cval=0.0)
    return (re + 1j * im) * np.exp(-A)[:, None]


def property_flat_defect(F: HorocycleFunction, probe_points, norm: MeasureNormalization,
                         lam: LineGrid = TransformGrid.lam) -> float:
    """Evenness defect of lam -> int (I x F) Psi*_x F (b, lam) d nu^x(b).

    Psi*_x F is built directly in the Psi_x parametrization by shifting tau
    by A_o(x, b), and nu^x carries the density e^{2 A_o(x, b)}.
    """
    pair = _pair(F.tau, lam, norm.c_A)
    I = []
    for z in _as_points(probe_points):
        spec = pair.forward(shifted_abel(F, z))
        dens = disk.boundary_density_array(z, F.beta)
        I.append(np.sum(spec * dens[:, None], axis=0) / len(F.beta))
    return _evenness_defect(np.array(I))


# --------------------------------------------------------------------------
# group actions on sampled functions


def hat_pi_nodes(g: SU11Element, beta, tau):
    """Nodes (beta', tau') with (pi^(g) F)(Psi_o(beta, tau)) = F(Psi_o(beta', tau')).

    pi^(g) F = F o g^{-1} on horocycles; g^{-1}.Psi_o(b, a) =
    Psi_{g^{-1}[o]}(g^{-1}<b>, a), re-referenced to o.
    """
    gi = g.inverse()
    beta, tau = np.broadcast_arrays(np.asarray(beta, dtype=float), np.asarray(tau, dtype=float))
    b2 = disk.boundary_action_array(gi, beta)
    y = complex(disk.mobius_coeffs(gi.a, gi.b, 0j))
    return b2, tau + disk.composite_distance_origin_z(y, b2)


def hat_pi_valid(g: SU11Element, F: HorocycleFunction) -> np.ndarray:
    """Mask of grid nodes whose pre-image under pi^(g) lies inside the tau window."""
    B, T = np.meshgrid(F.beta, F.tau.nodes, indexing="ij")
    _, t2 = hat_pi_nodes(g, B, T)
    return (t2 >= F.tau.lo) & (t2 <= F.tau.hi)


def hat_pi_sampled(g: SU11Element, F: HorocycleFunction) -> HorocycleFunction:
    """pi^(g) F for sampled F by quintic spline interpolation, periodic in beta.

    Interpolation acts on Psi*_o F, which is smooth and bounded; outside the
    tau window the samples are taken as zero.
    """
    B, T = np.meshgrid(F.beta, F.tau.nodes, indexing="ij")
    b2, t2 = hat_pi_nodes(g, B, T)
    G = F.samples * np.exp(F.tau.nodes)[None, :]
    nb = len(F.beta)
    coords = np.array([b2 * nb / TWO_PI, (t2 - F.tau.lo) / F.tau.step])
    outside = (coords[1] < 0) | (coords[1] > F.tau.n - 1)

    def interp(X):
        # pad periodically in beta so that 'nearest' never reaches the padding edge
        pad = 32
        Xp = np.concatenate([X[-pad:], X, X[:pad]], axis=0)
        c = coords.copy()
        c[0] = c[0] + pad
        return scipy.ndimage.map_coordinates(Xp, c, order=5, mode="nearest")

    vals = interp(G.real) + 1j * interp(G.imag)
    vals[outside] = 0.0
    return HorocycleFunction(vals * np.exp(-t2), F.beta, F.tau)


def relative_l2(F1: HorocycleFunction, F2: HorocycleFunction, norm: MeasureNormalization,
                mask: np.ndarray | None = None) -> float:
    """||F1 - F2|| / ||F2|| in L^2(Xi); the difference is restricted to ``mask`` if given."""
    d = F1.samples - F2.samples
    if mask is not None:
        d = np.where(mask, d, 0.0)
    diff = HorocycleFunction(d, F1.beta, F1.tau)
    return horocycle_norm(diff, norm) / horocycle_norm(F2, norm)
