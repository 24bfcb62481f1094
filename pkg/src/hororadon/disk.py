"""Geometry of the hyperbolic disk as SU(1,1)/K.

Points are complex numbers in the open unit disk with base point o = 0 and
metric |dz|^2 / (1 - |z|^2)^2.  Boundary points are angles beta with
b = e^{i beta}; the rotation k_phi acts on the boundary by beta -> beta + 2 phi,
so the boundary coset of k_phi is represented by beta = 2 phi.

The Cartan subspace is identified with R through a_t = exp(t H0), with
rho(H0) = 1, so every e^{2 rho(log a)} reads e^{2 t}.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.optimize

from .errors import DomainViolation
from .lie import (
    TWO_PI,
    SU11Element,
    a_elem,
    k_elem,
    kan_coeffs,
    n_elem,
    na_coeffs,
    nak_coeffs,
)

EDGE = 1e-12


@dataclass(frozen=True)
class DiskPoint:
    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if not abs(z) < 1.0 - EDGE:
            raise DomainViolation(f"|z| = {abs(z)!r} is not inside the disk")
        object.__setattr__(self, "z", z)


ORIGIN = DiskPoint(0j)


@dataclass(frozen=True)
class BoundaryPoint:
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "beta", float(np.mod(self.beta, TWO_PI)))

    @property
    def z(self) -> complex:
        return complex(np.exp(1j * self.beta))

    @property
    def rotation(self) -> SU11Element:
        """k_{beta/2}, a K-representative of this boundary point."""
        return k_elem(self.beta / 2.0)


@dataclass(frozen=True)
class HorocycleParam:
    b: BoundaryPoint
    tau: float


@dataclass(frozen=True)
class EuclideanCircle:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if abs(abs(self.center) + self.radius - 1.0) > 1e-10:
            raise ValueError("circle is not internally tangent to the unit circle")

    def distance(self, z) -> np.ndarray:
        """Signed distance |z - center| - radius."""
        return np.abs(np.asarray(z) - self.center) - self.radius


def _z(x) -> complex:
    return x.z if isinstance(x, (DiskPoint, BoundaryPoint)) else complex(x)


def _boundary(b) -> BoundaryPoint:
    return b if isinstance(b, BoundaryPoint) else BoundaryPoint(b)


# --------------------------------------------------------------------------
# action

def mobius_coeffs(a, b, z):
    """(a z + b) / (conj(b) z + conj(a)), elementwise."""
    return (a * z + b) / (np.conj(b) * z + np.conj(a))


def mobius(g: SU11Element, z):
    """Moebius action of g on a disk point, a boundary point or raw complex input."""
    w = mobius_coeffs(g.a, g.b, _z(z))
    if isinstance(z, DiskPoint):
        return DiskPoint(w)
    if isinstance(z, BoundaryPoint):
        return BoundaryPoint(np.angle(w))
    return w


def hyperbolic_distance_to_origin(x) -> float:
    r = abs(_z(x))
    return 0.5 * np.log((1 + r) / (1 - r))


def hyperbolic_distance(x, y) -> float:
    """d(x, y) = d(o, s_o(x)^{-1}[y])."""
    return hyperbolic_distance_to_origin(mobius(borel_section(x).inverse(), _z(y)))


def _distance_array(c, z):
    # d(c, z) for arrays, by transporting c to the origin
    r = np.abs(z - c) / np.abs(1.0 - np.conj(c) * z)
    return np.arctanh(np.minimum(r, 1.0))


# --------------------------------------------------------------------------
# Borel section and Iwasawa projections

def na_coordinates(z):
    """(s, t) with n_s a_t[o] = z, elementwise.

    In w = (1 + z)/(1 - z) the point n_s a_t[o] is e^{2t} - 2 i s, which
    gives the two real equations in closed form.
    """
    z = np.asarray(z, dtype=complex)
    w = (1 + z) / (1 - z)
    return -0.5 * w.imag, 0.5 * np.log(w.real)


def na_point(s, t):
    """n_s a_t[o], elementwise."""
    w = np.exp(2 * np.asarray(t, dtype=float)) - 2j * np.asarray(s, dtype=float)
    return (w - 1) / (w + 1)


def _refine_na(z, s, t):
    def resid(p):
        w = na_point(p[0], p[1]) - z
        return [w.real, w.imag]
    sol = scipy.optimize.root(resid, [s, t], tol=1e-15)
    return float(sol.x[0]), float(sol.x[1])


def borel_section(x) -> SU11Element:
    """The element s_o(x) = n_s a_t of NA with s_o(x)[o] = x."""
    z = _z(x)
    if not abs(z) < 1.0:
        raise DomainViolation(f"|z| = {abs(z)!r} is not inside the disk")
    s, t = na_coordinates(z)
    s, t = float(s), float(t)
    if abs(na_point(s, t) - z) > 1e-13:
        # loss of accuracy close to the boundary
        s, t = _refine_na(z, s, t)
    a, b = na_coeffs(s, t)
    return SU11Element(complex(a), complex(b))


def kappa_o(g: SU11Element) -> SU11Element:
    """K-part of g in the KAN order."""
    theta, _, _ = kan_coeffs(g.a, g.b)
    return k_elem(float(theta))


def h_o(g: SU11Element) -> float:
    """A-parameter of g in the KAN order (H_o(g) under the identification)."""
    return float(kan_coeffs(g.a, g.b)[1])


def a_o(g: SU11Element) -> float:
    """A-parameter of g in the NAK order."""
    return float(nak_coeffs(g.a, g.b)[1])


def kappa_x(x, g: SU11Element) -> SU11Element:
    """The element of K_x = s K s^{-1} (s = s_o(x)) with g in kappa_x(g) A N."""
    sec = borel_section(x)
    return sec @ kappa_o(sec.inverse() @ g) @ sec.inverse()


def a_x(x, g: SU11Element) -> float:
    """A-parameter of g in the N A K_x order."""
    sec = borel_section(x)
    return a_o(g @ sec) - a_o(sec)


# --------------------------------------------------------------------------
# composite distance and boundary

def composite_distance(x, y, b) -> float:
    """A_x(y, b): A-part of kappa_x(k_b)^{-1} s_x(y) in the N A K_x order."""
    b = _boundary(b)
    sec_x = borel_section(x)
    s_xy = borel_section(y) @ sec_x.inverse()
    kx = kappa_x(x, b.rotation)
    return a_x(x, kx.inverse() @ s_xy)


def composite_distance_origin(sec_a, sec_b, beta):
    """A_o(y, e^{i beta}) for arrays, from the Borel section (a, b) of y.

    This is the NAK A-part of k_{beta/2}^{-1} s_o(y); for g = (a, b) that
    part equals -log|conj(a) - b|.
    """
    ph = np.exp(-1j * np.asarray(beta, dtype=float))
    return -np.log(np.abs(np.conj(sec_a) - ph * sec_b))


def composite_distance_origin_z(z, beta):
    s, t = na_coordinates(z)
    a, b = na_coeffs(s, t)
    return composite_distance_origin(a, b, beta)


def poisson_diagnostic(x, b) -> float:
    """|e^{2 A_o(x,b)} - (1 - |x|^2)/|x - b|^2|, reported, never asserted."""
    z = _z(x)
    bz = _boundary(b).z
    return abs(np.exp(2 * composite_distance(ORIGIN, z, b)) - (1 - abs(z) ** 2) / abs(z - bz) ** 2)


def boundary_action(g: SU11Element, b) -> BoundaryPoint:
    """g<kM> = kappa_o(g k) M."""
    b = _boundary(b)
    theta = kan_coeffs(*_prod(g, b.rotation))[0]
    return BoundaryPoint(2.0 * float(theta))


def boundary_action_array(g: SU11Element, beta):
    """Vectorized boundary action on angles."""
    ph = np.exp(0.5j * np.asarray(beta, dtype=float))
    theta = kan_coeffs(g.a * ph, g.b / ph)[0]
    return np.mod(2.0 * theta, TWO_PI)


def _prod(g, h):
    return g.a * h.a + g.b * np.conj(h.b), g.a * h.b + g.b * np.conj(h.a)


def h_o_of_gk(g: SU11Element, beta):
    """H_o(g k_{beta/2}), vectorized over beta."""
    ph = np.exp(0.5j * np.asarray(beta, dtype=float))
    return kan_coeffs(g.a * ph, g.b / ph)[1]


def boundary_density(x, b) -> float:
    """d nu^x / d nu^o at b, i.e. e^{2 A_o(x, b)}."""
    return float(np.exp(2.0 * composite_distance(ORIGIN, x, b)))


def boundary_density_array(x, beta):
    return np.exp(2.0 * composite_distance_origin_z(_z(x), beta))


def boundary_integral(F, n: int = 256, x=None) -> complex:
    """int_B F d nu^x by the periodic trapezoid rule on n angles (nu^o if x is None)."""
    beta = TWO_PI * np.arange(n) / n
    vals = np.asarray(F(beta))
    if x is not None:
        vals = vals * boundary_density_array(x, beta)
    return complex(np.mean(vals))


# --------------------------------------------------------------------------
# horocycles

def horocycle_point(h: HorocycleParam, x, s) -> complex:
    """kappa_x(k_b) a_tau n_s[x], a point of Psi_x(b, a_tau)."""
    x = _z(x)
    kx = kappa_x(x, h.b.rotation)
    g = kx @ a_elem(h.tau) @ n_elem(s)
    return mobius(g, x)


def horocycle_params_to_circle(h: HorocycleParam, x=ORIGIN) -> EuclideanCircle:
    """Euclidean circle carrying the horocycle Psi_x(b, a_tau).

    It is tangent to the unit circle at e^{i beta} and passes through
    kappa_x(k_b) a_tau[x]; the center lies on the segment from 0 to e^{i beta}.
    """
    bz = h.b.z
    p = horocycle_point(h, x, 0.0)
    lam = (1 - abs(p) ** 2) / (2 * (1 - (np.conj(bz) * p).real))
    return EuclideanCircle(lam * bz, 1 - lam)


def horocycle_membership(z, h: HorocycleParam, x=ORIGIN, tol: float = 1e-9) -> bool:
    return abs(composite_distance(x, z, h.b) - h.tau) < tol


class ReferencedHorocycle(NamedTuple):
    param: HorocycleParam
    reference: DiskPoint


def horocycle_group_action(g: SU11Element, h: HorocycleParam, x=ORIGIN) -> ReferencedHorocycle:
    """g.Psi_x(b, a) = Psi_{g[x]}(g<b>, a)."""
    gx = mobius(g, DiskPoint(_z(x)))
    return ReferencedHorocycle(HorocycleParam(boundary_action(g, h.b), h.tau), gx)


def rereference_horocycle(h: HorocycleParam, from_x, to_y) -> HorocycleParam:
    """Same horocycle, parametrized from to_y: tau picks up A_y(x, b)."""
    return HorocycleParam(h.b, h.tau + composite_distance(to_y, from_x, h.b))


# --------------------------------------------------------------------------
# hyperbolic balls in the right half-plane model

def ball_in_w_plane(center, radius):
    """Euclidean center and radius of the ball B(center, radius) in w = (1+z)/(1-z).

    The metric there is |dw|^2 / (4 (Re w)^2), twice the usual distance
    scale, so the standard half-plane formulas apply to 2 * radius.
    """
    c = np.asarray(center, dtype=complex)
    w = (1 + c) / (1 - c)
    D = 2.0 * radius
    return w.real * np.cosh(D) + 1j * w.imag, w.real * np.sinh(D)


def horocycle_chord(center, radius, tau):
    """Arclength chord of the horocycle a_tau N[o] inside a ball.

    The horocycle is {n_{e^{2 tau} s} a_tau[o]} = {a_tau n_s[o]}, with s its
    arclength.  Returns (midpoint, half_length), half_length < 0 when the
    horocycle misses the ball; center may be an array (one per horocycle).
    """
    wc, rw = ball_in_w_plane(center, radius)
    X = np.exp(2.0 * np.asarray(tau, dtype=float))
    h2 = rw ** 2 - (X - wc.real) ** 2
    half = np.where(h2 > 0, np.sqrt(np.abs(h2)), -1.0)
    # Im w = -2 X s on this horocycle
    return -wc.imag / (2 * X), np.where(half > 0, half / (2 * X), -1.0)
