"""Iwasawa factorizations, restricted roots, rho, Weyl chambers and modular
functions for SL(d, R) and SU(1, 1).

SU(1,1) conventions::

    k_theta = diag(e^{i theta}, e^{-i theta})
    a_t     = [[cosh t, sinh t], [sinh t, cosh t]]
    n_s     = [[1 + i s, -i s], [i s, 1 - i s]]

An element [[a, b], [conj(b), conj(a)]] is stored by the pair (a, b).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import DomainViolation, NonUnimodular, TraceNotZero

TWO_PI = 2.0 * np.pi
DET_TOL = 1e-9


# --------------------------------------------------------------------------
# SL(d, R)

@dataclass(frozen=True, eq=False)
class SLMatrix:
    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2:
            raise ValueError("expected a square matrix of size >= 2")
        det = np.linalg.det(m)
        if abs(det - 1.0) > DET_TOL:
            raise NonUnimodular(f"det = {det!r}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def renormalized(cls, m) -> "SLMatrix":
        """Scale a matrix with positive determinant onto det = 1."""
        m = np.asarray(m, dtype=float)
        det = np.linalg.det(m)
        if det <= 0:
            raise NonUnimodular("renormalization needs det > 0")
        return cls(m / det ** (1.0 / m.shape[0]))


class SLIwasawaKAN(NamedTuple):
    k: np.ndarray
    a_log: np.ndarray
    n: np.ndarray


class SLIwasawaNAK(NamedTuple):
    n: np.ndarray
    a_log: np.ndarray
    k: np.ndarray


def _as_sl(g) -> np.ndarray:
    if isinstance(g, SLMatrix):
        return g.entries
    return SLMatrix(g).entries


def _unit_upper(r: np.ndarray) -> np.ndarray:
    n = np.triu(r)
    np.fill_diagonal(n, 1.0)
    return n


def iwasawa_kan_sl(g) -> SLIwasawaKAN:
    """g = k diag(exp(a_log)) n with k in SO(d), n unit upper triangular."""
    m = _as_sl(g)
    q, r = np.linalg.qr(m)
    sgn = np.sign(np.diag(r))
    q = q * sgn[None, :]
    r = sgn[:, None] * r
    a = np.diag(r).copy()
    n = _unit_upper(r / a[:, None])
    return SLIwasawaKAN(q, np.log(a), n)


def iwasawa_nak_sl(g) -> SLIwasawaNAK:
    """g = n diag(exp(a_log)) k, via an RQ factorization."""
    m = _as_sl(g)
    r, q = scipy.linalg.rq(m)
    sgn = np.sign(np.diag(r))
    r = r * sgn[None, :]
    q = sgn[:, None] * q
    a = np.diag(r).copy()
    n = _unit_upper(r / a[None, :])
    return SLIwasawaNAK(n, np.log(a), q)


@dataclass(frozen=True)
class RestrictedRoot:
    """alpha_ij = e_i - e_j on the diagonal Cartan subspace (1-based)."""
    i: int
    j: int
    multiplicity: int = 1

    def __post_init__(self):
        if self.i == self.j or min(self.i, self.j) < 1:
            raise ValueError("need distinct positive indices")

    @property
    def positive(self) -> bool:
        return self.i < self.j

    def __call__(self, H) -> float:
        H = np.asarray(H)
        return H[..., self.i - 1] - H[..., self.j - 1]

    def root_vector(self, d: int) -> np.ndarray:
        """The matrix unit E_ij spanning the root space."""
        E = np.zeros((d, d))
        E[self.i - 1, self.j - 1] = 1.0
        return E


def restricted_roots_sl(d: int) -> list[RestrictedRoot]:
    if d < 2:
        raise ValueError("d >= 2")
    return [RestrictedRoot(i, j) for i in range(1, d + 1)
            for j in range(1, d + 1) if i != j]


def positive_roots_sl(d: int) -> list[RestrictedRoot]:
    return [r for r in restricted_roots_sl(d) if r.positive]


def simple_roots_sl(d: int) -> list[RestrictedRoot]:
    """Positive roots that are not sums of two positive roots."""
    pos = positive_roots_sl(d)
    sums = {(a.i, b.j) for a in pos for b in pos if a.j == b.i}
    return [r for r in pos if (r.i, r.j) not in sums]


def _check_traceless(H, tol=1e-12):
    H = np.asarray(H, dtype=float)
    if abs(H.sum()) > tol * max(1.0, np.abs(H).max(initial=0.0)):
        raise TraceNotZero(f"sum(H) = {H.sum()!r}")
    return H


def rho_sl(d: int, H) -> float:
    """rho(H) = sum_j ((d + 1)/2 - j) H_j."""
    H = _check_traceless(H)
    if H.shape != (d,):
        raise ValueError("H must have length d")
    j = np.arange(1, d + 1)
    return float(np.dot((d + 1) / 2.0 - j, H))


def rho_from_roots(d: int, H) -> float:
    """Half the multiplicity-weighted sum of positive roots at H."""
    H = _check_traceless(H)
    return 0.5 * float(sum(r.multiplicity * r(H) for r in positive_roots_sl(d)))


def modular_AN_sl(a_log, d: int | None = None) -> float:
    """Modular function of AN at a = exp(a_log): exp(-2 rho(a_log))."""
    a_log = np.asarray(a_log, dtype=float)
    d = a_log.shape[0] if d is None else d
    return float(np.exp(-2.0 * rho_sl(d, a_log)))


def weyl_permute(H, perm) -> np.ndarray:
    """Action of a permutation (Weyl group element) on a diagonal H."""
    H = np.asarray(H)
    out = np.empty_like(H)
    out[..., list(perm)] = H
    return out


def chamber_signature(H) -> tuple[int, ...]:
    """Signs of all positive roots at H; identifies the Weyl chamber."""
    H = np.asarray(H)
    d = H.shape[-1]
    return tuple(int(np.sign(H[i] - H[j])) for i, j in itertools.combinations(range(d), 2))


def count_weyl_chambers(d: int, rng: np.random.Generator, samples: int = 4000) -> int:
    """Distinct chamber signatures met by random regular traceless H."""
    seen = set()
    for _ in range(samples):
        H = rng.standard_normal(d)
        seen.add(chamber_signature(H - H.mean()))
    return len(seen)


# --------------------------------------------------------------------------
# SU(1, 1)

@dataclass(frozen=True)
class SU11Element:
    a: complex
    b: complex

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        det = abs(a) ** 2 - abs(b) ** 2
        if abs(det - 1.0) > 1e-12 * max(1.0, abs(a) ** 2):
            raise NonUnimodular(f"|a|^2 - |b|^2 = {det!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def matrix(self) -> np.ndarray:
        a, b = self.a, self.b
        return np.array([[a, b], [b.conjugate(), a.conjugate()]])

    @classmethod
    def from_matrix(cls, m) -> "SU11Element":
        m = np.asarray(m, dtype=complex)
        if abs(m[1, 0] - np.conj(m[0, 1])) > 1e-10 or abs(m[1, 1] - np.conj(m[0, 0])) > 1e-10:
            raise DomainViolation("matrix is not of SU(1,1) form")
        return cls(m[0, 0], m[0, 1])

    def __matmul__(self, other: "SU11Element") -> "SU11Element":
        a, b = su11_mul(self.a, self.b, other.a, other.b)
        return SU11Element(a, b)

    def inverse(self) -> "SU11Element":
        return SU11Element(self.a.conjugate(), -self.b)

    @classmethod
    def identity(cls) -> "SU11Element":
        return cls(1.0, 0.0)


def k_elem(theta: float) -> SU11Element:
    return SU11Element(np.exp(1j * theta), 0.0)


def a_elem(t: float) -> SU11Element:
    return SU11Element(np.cosh(t), np.sinh(t))


def n_elem(s: float) -> SU11Element:
    return SU11Element(1 + 1j * s, -1j * s)


def su11_mul(a1, b1, a2, b2):
    """(a, b) coordinates of a product; works elementwise on arrays."""
    return a1 * a2 + b1 * np.conj(b2), a1 * b2 + b1 * np.conj(a2)


def na_coeffs(s, t):
    """(a, b) of n_s a_t, elementwise."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    e = np.exp(-t)
    return np.cosh(t) + 1j * s * e, np.sinh(t) - 1j * s * e


def kan_coeffs(a, b):
    """(theta, t, s) with [[a, b], ...] = k_theta a_t n_s, elementwise.

    AN fixes the vector (1, 1) up to the factor e^t, so g (1, 1) =
    e^t (e^{i theta}, e^{-i theta}) reads off theta and t; s is the
    imaginary part of the (1,1) entry of a_{-t} k_{-theta} g.
    """
    v = a + b
    t = np.log(np.abs(v))
    theta = np.mod(np.angle(v), TWO_PI)
    ph = np.exp(1j * theta)
    n11 = np.cosh(t) * a / ph - np.sinh(t) * ph * np.conj(b)
    return theta, t, np.imag(n11)


def nak_coeffs(a, b):
    """(s, t, theta) with [[a, b], ...] = n_s a_t k_theta, elementwise."""
    th, t, s = kan_coeffs(np.conj(a), -b)
    return -s, -t, np.mod(-th, TWO_PI)


class SU11Iwasawa(NamedTuple):
    theta: float
    t: float
    s: float


class SU11IwasawaNAK(NamedTuple):
    s: float
    t: float
    theta: float


def iwasawa_su11(g: SU11Element) -> SU11Iwasawa:
    th, t, s = kan_coeffs(g.a, g.b)
    return SU11Iwasawa(float(th), float(t), float(s))


def iwasawa_nak_su11(g: SU11Element) -> SU11IwasawaNAK:
    s, t, th = nak_coeffs(g.a, g.b)
    return SU11IwasawaNAK(float(s), float(t), float(th))


def kan_product(theta, t, s) -> SU11Element:
    return k_elem(theta) @ a_elem(t) @ n_elem(s)


def nak_product(s, t, theta) -> SU11Element:
    return n_elem(s) @ a_elem(t) @ k_elem(theta)


# Lie algebra su(1,1): real span of these three matrices
SU11_BASIS = (
    np.array([[1j, 0], [0, -1j]]),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, 1j], [-1j, 0]]),
)
H0 = SU11_BASIS[1]  # a_t = exp(t H0)


def _su11_coords(X) -> np.ndarray:
    basis = np.array([np.concatenate([B.real.ravel(), B.imag.ravel()]) for B in SU11_BASIS]).T
    rhs = np.concatenate([np.real(X).ravel(), np.imag(X).ravel()])
    c, *_ = np.linalg.lstsq(basis, rhs, rcond=None)
    return c


def ad_matrix_su11(X) -> np.ndarray:
    """Matrix of ad X in the basis SU11_BASIS."""
    return np.column_stack([_su11_coords(X @ B - B @ X) for B in SU11_BASIS])


def killing_form_su11(X, Y) -> float:
    """B(X, Y) = tr(ad X ad Y)."""
    return float(np.trace(ad_matrix_su11(X) @ ad_matrix_su11(Y)))


# --------------------------------------------------------------------------
# Cayley transform

def cayley(z, direction: str = "disk-to-halfplane"):
    """Biholomorphism between the unit disk and the upper half-plane.

    disk-to-halfplane:  w = i (1 + z) / (1 - z)
    halfplane-to-disk:  z = (w - i) / (w + i)

    It sends 0 to i and 1 to infinity, so a_t[0] = tanh t goes to i e^{2t}
    and the disk subgroups A, N correspond to the diagonal and upper
    unipotent subgroups of SL(2, R).
    """
    z = np.asarray(z, dtype=complex)
    if direction == "disk-to-halfplane":
        if np.any(np.abs(z) >= 1.0):
            raise DomainViolation("point outside the open disk")
        out = 1j * (1 + z) / (1 - z)
    elif direction == "halfplane-to-disk":
        if np.any(z.imag <= 0.0):
            raise DomainViolation("point outside the open upper half-plane")
        out = (z - 1j) / (z + 1j)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return out[()] if out.ndim == 0 else out


# conjugating matrix: C g C^{-1} is real for g in SU(1,1)
CAYLEY_MATRIX = np.array([[1j, 1j], [-1, 1]]) / np.sqrt(2j)


def su11_to_sl2r(g: SU11Element) -> np.ndarray:
    C = CAYLEY_MATRIX
    return C @ g.matrix @ np.linalg.inv(C)
