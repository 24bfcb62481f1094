"""Unimodular symmetric positive definite matrices SP(d, R).

SL(d, R) acts by congruence g[p] = g p g^T, the trace metric is invariant
under that action, and horocycles are the N-orbits k a N[I].  A matrix
p = U D U^T (U unit upper triangular) lies on the horocycle k a N[I] exactly
when k^T p k has D = a^2, so horocycle membership reduces to one
triangular factorization.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonSymmetricTangent, NotPositiveDefinite
from .lie import SLMatrix

__all__ = [
    "SPDPoint",
    "UDUFactors",
    "congruence_action",
    "spectral_sqrt",
    "trace_metric",
    "geodesic_symmetry",
    "geodesic_symmetry_differential",
    "udu_decompose",
    "ldl_decompose",
    "horocycle_membership_spd",
    "n_orbit_point",
    "n_orbit_contains",
    "nbar_orbit_contains",
    "diagonal_representative",
    "random_spd",
    "random_sl",
    "random_rotation",
]

SYM_TOL = 1e-12
DET_TOL = 1e-10
EIG_RATIO = 1e-10


def _symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


def _check_positive(m: np.ndarray) -> None:
    ev = np.linalg.eigvalsh(m)
    if not ev[0] > EIG_RATIO * ev[-1]:
        raise NotPositiveDefinite(f"eigenvalues in [{ev[0]:.3e}, {ev[-1]:.3e}]")


@dataclass(frozen=True)
class SPDPoint:
    """A symmetric positive definite matrix with determinant one."""

    p: np.ndarray

    def __post_init__(self):
        m = np.array(self.p, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("expected a square matrix")
        scale = max(1.0, float(np.max(np.abs(m))))
        if np.max(np.abs(m - m.T)) > SYM_TOL * scale:
            raise ValueError("matrix is not symmetric")
        _check_positive(m)
        det = np.linalg.det(m)
        if abs(det - 1.0) > DET_TOL:
            raise ValueError(f"det = {det!r}, expected 1")
        m.setflags(write=False)
        object.__setattr__(self, "p", m)

    @property
    def d(self) -> int:
        return self.p.shape[0]

    @classmethod
    def identity(cls, d: int) -> "SPDPoint":
        return cls(np.eye(d))

    @classmethod
    def normalized(cls, m) -> "SPDPoint":
        """Symmetrize and scale a positive definite matrix onto det = 1."""
        m = _symmetrize(np.asarray(m, dtype=float))
        _check_positive(m)
        sign, logdet = np.linalg.slogdet(m)
        return cls(m * np.exp(-logdet / m.shape[0]))


@dataclass(frozen=True)
class UDUFactors:
    """p = u diag(diag) u^T with u unit upper triangular."""

    u: np.ndarray
    diag: np.ndarray

    def reassemble(self) -> np.ndarray:
        return (self.u * self.diag[None, :]) @ self.u.T


def _matrix(g) -> np.ndarray:
    return g.entries if isinstance(g, SLMatrix) else np.asarray(g, dtype=float)


def congruence_action(g, p: SPDPoint) -> SPDPoint:
    """g[p] = g p g^T."""
    m = _matrix(g)
    return SPDPoint(_symmetrize(m @ p.p @ m.T))


def spectral_sqrt(p: SPDPoint) -> SLMatrix:
    """The symmetric square root g = p^{1/2}; it satisfies g[I] = p."""
    w, v = np.linalg.eigh(p.p)
    return SLMatrix((v * np.sqrt(w)[None, :]) @ v.T)


def _check_tangent(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    scale = max(1.0, float(np.max(np.abs(X))))
    if np.max(np.abs(X - X.T)) > SYM_TOL * scale:
        raise NonSymmetricTangent("tangent vectors at p are symmetric matrices")
    return X


def trace_metric(p: SPDPoint, X, Y) -> float:
    """<X, Y>_p = tr(p^{-1} X p^{-1} Y)."""
    X = _check_tangent(X)
    Y = _check_tangent(Y)
    pinv_x = np.linalg.solve(p.p, X)
    pinv_y = np.linalg.solve(p.p, Y)
    return float(np.trace(pinv_x @ pinv_y))


def geodesic_symmetry(p: SPDPoint, q: SPDPoint) -> SPDPoint:
    """sigma_p(q) = p q^{-1} p, the involutive isometry fixing p."""
    return SPDPoint(_symmetrize(p.p @ np.linalg.solve(q.p, p.p)))


def geodesic_symmetry_differential(p: SPDPoint, q: SPDPoint, X) -> np.ndarray:
    """Differential of sigma_p at q applied to the tangent vector X."""
    X = _check_tangent(X)
    qinv = np.linalg.inv(q.p)
    return -_symmetrize(p.p @ qinv @ X @ qinv @ p.p)


def _lower_cholesky(m: np.ndarray) -> np.ndarray:
    _check_positive(m)
    try:
        return np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - caught by the eigenvalue test
        raise NotPositiveDefinite(str(exc)) from exc


def udu_decompose(p) -> UDUFactors:
    """p = U D U^T with U unit upper triangular.

    Runs a lower Cholesky factorization on the reversal J p J and flips the
    factor back: J L J is upper triangular with (J L J)(J L J)^T = p.
    """
    m = p.p if isinstance(p, SPDPoint) else _symmetrize(np.asarray(p, dtype=float))
    low = _lower_cholesky(m[::-1, ::-1])
    up = low[::-1, ::-1]
    root = np.diag(up).copy()
    u = up / root[None, :]
    u[np.tril_indices_from(u, -1)] = 0.0
    np.fill_diagonal(u, 1.0)
    return UDUFactors(u, root ** 2)


def ldl_decompose(p) -> UDUFactors:
    """p = L D L^T with L unit lower triangular (returned in the ``u`` slot)."""
    m = p.p if isinstance(p, SPDPoint) else _symmetrize(np.asarray(p, dtype=float))
    low = _lower_cholesky(m)
    root = np.diag(low).copy()
    lo = low / root[None, :]
    lo[np.triu_indices_from(lo, 1)] = 0.0
    np.fill_diagonal(lo, 1.0)
    return UDUFactors(lo, root ** 2)


def horocycle_membership_spd(p: SPDPoint, k, a_log, tol: float = 1e-8) -> bool:
    """Does p lie on the horocycle k a N[I]?

    True when the diagonal of the U D U^T factorization of k^T p k matches
    exp(2 a_log) entrywise to relative tolerance ``tol``.
    """
    k = np.asarray(k, dtype=float)
    a_log = np.asarray(a_log, dtype=float)
    if abs(a_log.sum()) > 1e-10:
        raise ValueError("a_log must sum to zero")
    if np.max(np.abs(k.T @ k - np.eye(k.shape[0]))) > 1e-10 or np.linalg.det(k) < 0:
        raise ValueError("k must be a rotation")
    diag = udu_decompose(_symmetrize(k.T @ p.p @ k)).diag
    target = np.exp(2.0 * a_log)
    return bool(np.all(np.abs(diag / target - 1.0) <= tol))


def _unit_upper(n_params, d: int) -> np.ndarray:
    n = np.eye(d)
    n[np.triu_indices(d, 1)] = np.asarray(n_params, dtype=float)
    return n


def n_orbit_point(a_log, n_params) -> SPDPoint:
    """Entries e^{a_i + a_j} sum_{k >= max(i, j)} n_ik n_jk, i.e. (a n)(a n)^T.

    ``n_params`` lists the strictly upper entries of n row by row.
    """
    a_log = np.asarray(a_log, dtype=float)
    d = a_log.size
    n = _unit_upper(n_params, d)
    out = np.empty((d, d))
    for i in range(d):
        for j in range(d):
            k0 = max(i, j)
            out[i, j] = np.exp(a_log[i] + a_log[j]) * np.dot(n[i, k0:], n[j, k0:])
    return SPDPoint(out)


def n_orbit_contains(p: SPDPoint, q: SPDPoint, tol: float = 1e-8) -> bool:
    """Is q in N[p]?  Both must share the D of their U D U^T factorizations."""
    dp, dq = udu_decompose(p).diag, udu_decompose(q).diag
    return bool(np.all(np.abs(dq / dp - 1.0) <= tol))


def nbar_orbit_contains(p: SPDPoint, q: SPDPoint, tol: float = 1e-8) -> bool:
    """Is q in Nbar[p] (unit lower triangular congruences)?"""
    dp, dq = ldl_decompose(p).diag, ldl_decompose(q).diag
    return bool(np.all(np.abs(dq / dp - 1.0) <= tol))


def diagonal_representative(p: SPDPoint) -> tuple[np.ndarray, np.ndarray]:
    """(k, eigenvalues sorted decreasingly) with k^T p k diagonal and det k = 1.

    The diagonal matrix is the point of A_+[I] in the K-orbit of p.
    """
    w, v = np.linalg.eigh(p.p)
    order = np.argsort(w)[::-1]
    w, v = w[order], v[:, order]
    if np.linalg.det(v) < 0:
        v[:, -1] = -v[:, -1]
    return v, w


def random_rotation(rng: np.random.Generator, d: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    q = q * np.sign(np.diag(r))[None, :]
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_sl(rng: np.random.Generator, d: int, scale: float = 0.5) -> SLMatrix:
    m = np.eye(d) + scale * rng.standard_normal((d, d))
    if np.linalg.det(m) < 0:
        m[:, 0] = -m[:, 0]
    return SLMatrix.renormalized(m)


def random_spd(rng: np.random.Generator, d: int, spread: float = 0.5) -> SPDPoint:
    k = random_rotation(rng, d)
    a = spread * rng.standard_normal(d)
    a -= a.mean()
    return SPDPoint.normalized((k * np.exp(a)[None, :]) @ k.T)
