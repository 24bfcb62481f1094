"""Quadrature rules, a Lanczos complex Gamma, and a matched Fourier pair on a line."""
from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import PoleError, TailToleranceExceeded

__all__ = [
    "QuadratureSpec",
    "LineGrid",
    "Integral",
    "gauss_legendre",
    "composite_nodes",
    "integrate_1d",
    "complex_gamma",
    "FourierPair",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite rule on [-truncation, truncation] (or on a mapped interval).

    rule is ``"gauss-legendre"`` or ``"trapezoid"``; for the trapezoid rule the
    node count is ``panels * points_per_panel``.
    """

    rule: str = "gauss-legendre"
    panels: int = 16
    points_per_panel: int = 8
    truncation: float = 8.0
    tail_tolerance: float = 1e-10

    def __post_init__(self):
        if self.rule not in ("gauss-legendre", "trapezoid"):
            raise ValueError(f"unknown rule {self.rule!r}")
        if self.panels < 1 or self.points_per_panel < 2 or not self.truncation > 0:
            raise ValueError("invalid quadrature spec")

    def refined(self, factor: int = 2) -> "QuadratureSpec":
        return replace(self, panels=self.panels * factor)

    def coarsened(self) -> "QuadratureSpec":
        # half resolution, used for the attached error estimate
        if self.panels >= 2:
            return replace(self, panels=self.panels // 2)
        return replace(self, points_per_panel=max(2, self.points_per_panel // 2))


@dataclass(frozen=True)
class LineGrid:
    """Uniform grid on [lo, hi].

    Non-staggered grids include both endpoints (trapezoid weights);
    staggered grids use cell midpoints (midpoint weights), so a symmetric
    staggered grid never contains 0.
    """

    lo: float
    hi: float
    n: int
    staggered: bool = False

    def __post_init__(self):
        if not self.lo < self.hi or self.n < 2:
            raise ValueError("invalid grid")

    @property
    def step(self) -> float:
        if self.staggered:
            return (self.hi - self.lo) / self.n
        return (self.hi - self.lo) / (self.n - 1)

    @property
    def nodes(self) -> np.ndarray:
        if self.staggered:
            return self.lo + (np.arange(self.n) + 0.5) * self.step
        return np.linspace(self.lo, self.hi, self.n)

    @property
    def weights(self) -> np.ndarray:
        w = np.full(self.n, self.step)
        if not self.staggered:
            w[0] *= 0.5
            w[-1] *= 0.5
        return w

    def doubled(self) -> "LineGrid":
        return replace(self, n=2 * self.n if self.staggered else 2 * self.n - 1)


@dataclass(frozen=True)
class Integral:
    value: complex
    error: float

    def __complex__(self):
        return complex(self.value)


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_nodes(lo, hi, spec: QuadratureSpec):
    """Nodes and weights of the composite rule on [lo, hi].

    ``lo`` and ``hi`` may be arrays of equal shape; the nodes are then laid out
    along a trailing axis, one row of nodes per interval.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if spec.rule == "trapezoid":
        m = spec.panels * spec.points_per_panel
        u = np.linspace(0.0, 1.0, m + 1)
        wu = np.full(m + 1, 1.0 / m)
        wu[0] = wu[-1] = 0.5 / m
    else:
        xg, wg = gauss_legendre(spec.points_per_panel)
        p = spec.panels
        left = np.arange(p)[:, None] / p
        u = (left + (xg[None, :] + 1.0) / (2 * p)).ravel()
        wu = np.tile(wg / (2 * p), p)
    span = (hi - lo)[..., None]
    return lo[..., None] + span * u, span * wu


def _apply_rule(f, lo, hi, spec):
    x, w = composite_nodes(lo, hi, spec)
    return np.sum(w * f(x))


def integrate_1d(f: Callable, spec: QuadratureSpec, lo: float | None = None,
                 hi: float | None = None) -> Integral:
    """Composite quadrature of ``f`` over [-truncation, truncation].

    The error estimate is the difference to the half-resolution rule.
    Raises TailToleranceExceeded when |f| at either end of the interval is
    above ``spec.tail_tolerance``.
    """
    lo = -spec.truncation if lo is None else lo
    hi = spec.truncation if hi is None else hi
    ends = np.abs(np.asarray(f(np.array([lo, hi]))))
    if np.max(ends) > spec.tail_tolerance:
        raise TailToleranceExceeded(
            f"|f| = {np.max(ends):.3e} at truncation (tolerance {spec.tail_tolerance:.1e})")
    full = _apply_rule(f, lo, hi, spec)
    half = _apply_rule(f, lo, hi, spec.coarsened())
    return Integral(complex(full) if np.iscomplexobj(full) else float(full),
                    float(abs(full - half)))


# Lanczos approximation, g = 7, nine coefficients
_LANCZOS_G = 7.0
_LANCZOS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])


def _gamma_right(z):
    # valid for Re z >= 1/2
    z = z - 1.0
    x = np.full_like(z, _LANCZOS[0])
    for i in range(1, len(_LANCZOS)):
        x = x + _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return np.sqrt(2 * np.pi) * np.exp((z + 0.5) * np.log(t) - t) * x


def complex_gamma(z):
    """Gamma function for complex (array) arguments.

    Lanczos series on Re z >= 1/2 and the reflection formula
    Gamma(z) Gamma(1-z) = pi / sin(pi z) elsewhere.
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any((z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))):
        raise PoleError("Gamma has poles at nonpositive integers")
    out = np.empty_like(z)
    right = z.real >= 0.5
    out[right] = _gamma_right(z[right])
    zl = z[~right]
    out[~right] = np.pi / (np.sin(np.pi * zl) * _gamma_right(1.0 - zl))
    return out[0] if scalar else out


class FourierPair:
    """Fourier transform on A sampled on a tau grid and a lambda grid.

    forward:  Fs(lam) = c_A * sum_tau w_tau s(tau) exp(-i lam tau)
    inverse:  s(tau) = sum_lam G(lam) exp(i lam tau) dlam / (2 pi c_A)

    The lambda measure dlam / (2 pi c_A) is the one making the transform
    unitary from L^2(c_A dtau) to L^2(dlam / (2 pi c_A)).  Round trip is the
    identity for inputs supported inside the tau window whose transform is
    negligible outside the lambda window, provided the lambda step satisfies
    2 pi / dlam > twice the tau window (no aliasing).
    """

    def __init__(self, tau: LineGrid, lam: LineGrid, c_A: float = 1.0):
        self.tau = tau
        self.lam = lam
        self.c_A = float(c_A)
        t = tau.nodes
        lm = lam.nodes
        phase = np.exp(-1j * np.outer(lm, t))
        self._fwd = self.c_A * phase * tau.weights[None, :]
        self._inv = (phase.conj().T * lam.weights[None, :]) / (2 * np.pi * self.c_A)

    @property
    def lambda_measure(self) -> np.ndarray:
        """Weights of dlam / (2 pi c_A) on the lambda grid."""
        return self.lam.weights / (2 * np.pi * self.c_A)

    @property
    def tau_measure(self) -> np.ndarray:
        return self.c_A * self.tau.weights

    def forward(self, samples: np.ndarray) -> np.ndarray:
        """Transform along the last axis."""
        return np.asarray(samples) @ self._fwd.T

    def inverse(self, spectrum: np.ndarray) -> np.ndarray:
        return np.asarray(spectrum) @ self._inv.T
