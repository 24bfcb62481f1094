"""Verification suites: every computable identity as a residual check.

Each suite returns a list of ``CheckRecord``.  A record carries the name of
the identity, an anchor key naming the identity in the source literature
(LaTeX labels where available, short topic keys otherwise), both sides, the
residual, the tolerance and the verdict ``residual <= tolerance``.

Random objects come from ``numpy.random.Generator(PCG64)`` seeded with
``(seed, suite index)``, so suites are independent of each other and of the
order in which they run.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import disk, spd
from . import transforms as tr
from .errors import PoleAtZero
from .lie import (
    TWO_PI,
    H0,
    SLMatrix,
    SU11Element,
    a_elem,
    cayley,
    count_weyl_chambers,
    iwasawa_kan_sl,
    iwasawa_nak_sl,
    iwasawa_nak_su11,
    iwasawa_su11,
    k_elem,
    kan_coeffs,
    kan_product,
    killing_form_su11,
    modular_AN_sl,
    n_elem,
    nak_product,
    positive_roots_sl,
    restricted_roots_sl,
    rho_from_roots,
    rho_sl,
    simple_roots_sl,
    su11_to_sl2r,
    weyl_permute,
    chamber_signature,
)
from .numerics import LineGrid, QuadratureSpec, composite_nodes, gauss_legendre

SUITES = ("structure", "geometry", "slice", "plancherel", "unitarity", "intertwine", "properties", "spd")

DEFAULT_TOLERANCES = {
    "slice": 1e-3,
    "slice-doubled": 1e-4,
    "plancherel": 1e-3,
    "unitarity": 1e-3,
    "intertwine": 1e-3,
    "properties": 1e-3,
}

PRNG_NAME = "numpy.random.Generator(PCG64)"

# Anchors are LaTeX labels of the identities where the literature labels them,
# and short topic keys where it does not.
LABEL_ANCHORS = frozenset({
    "CD", "GonB", "ID", "IWAx", "Kone", "Psix", "RiemPnr", "WonSigma", "actionPnr", "charcxi",
    "cocycl", "cor:lambda", "cor:radonbemolle", "eq:actiongxiparametrized", "eq:fondAH",
    "eq:foundamentalrelation", "eq:fst", "eq:philambda", "eq:plancherelformula", "eq:radonik",
    "eq:radonwrtx", "extH", "fouriertransformabeliangroup", "fst", "ginv", "ginvA", "haars",
    "horo", "interhat", "interradon", "intertw", "kappas", "modAN", "modular", "moebius", "nuinv",
    "prop:fundamentaloperator", "thm:unitarizationtheorem", "xirefere",
})
TOPIC_ANCHORS = frozenset({
    "borel-section", "c-function", "cayley", "geodesic-symmetry", "hyperbolic-distance",
    "property-sharp", "radon-definition", "restricted-roots", "rho", "spd-horocycle",
    "udu-decomposition",
})
ANCHORS = LABEL_ANCHORS | TOPIC_ANCHORS


# --------------------------------------------------------------------------
# records and run context


@dataclass(frozen=True)
class CheckRecord:
    name: str
    anchor: str
    lhs: object
    rhs: object
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)


def _num(v):
    """JSON-friendly scalar: floats stay floats, complex becomes [re, im]."""
    if v is None or isinstance(v, (bool, str)):
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = complex(v)
    if v.imag == 0.0:
        return float(v.real)
    return [float(v.real), float(v.imag)]


def record(name: str, anchor: str, lhs, rhs, residual, tolerance: float) -> CheckRecord:
    res = float(residual)
    if not np.isfinite(res):
        res = float("inf")
    return CheckRecord(name, anchor, _num(lhs), _num(rhs), res, float(tolerance))


@dataclass
class RunConfig:
    """Everything that determines a run; equal configs give equal reports."""

    seed: int = 20240611
    grid_beta: int = 256
    grid_tau: int = 512
    grid_lambda: int = 512
    tau_max: float = 8.0
    lambda_max: float = 24.0
    quad_panels: int = 8
    quad_points: int = 24
    nbar_truncation: float = 40.0
    bumps: int = 5
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    def grid(self) -> tr.TransformGrid:
        quad = QuadratureSpec("gauss-legendre", self.quad_panels, self.quad_points, tail_tolerance=1e-12)
        n_spec = math.gcd(self.grid_beta, 64)
        return tr.TransformGrid(
            n_beta=self.grid_beta,
            tau=LineGrid(-self.tau_max, self.tau_max, self.grid_tau),
            lam=LineGrid(-self.lambda_max, self.lambda_max, self.grid_lambda, staggered=True),
            horocycle_quad=quad,
            row_quad=quad,
            n_beta_spectral=n_spec,
        )

    def nbar_quad(self) -> QuadratureSpec:
        return replace(tr.DEFAULT_NBAR_QUAD, truncation=self.nbar_truncation)

    def tol(self, key: str) -> float:
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key]))

    def environment(self) -> dict:
        g = self.grid()
        return {
            "bumps": self.bumps,
            "grid_beta": self.grid_beta,
            "grid_beta_spectral": g.n_beta_spectral,
            "grid_lambda": self.grid_lambda,
            "grid_tau": self.grid_tau,
            "lambda_max": self.lambda_max,
            "nbar_truncation": self.nbar_truncation,
            "prng": PRNG_NAME,
            "quad_panels": self.quad_panels,
            "quad_points": self.quad_points,
            "seed": self.seed,
            "tau_max": self.tau_max,
            "tolerances": {k: self.tol(k) for k in sorted(DEFAULT_TOLERANCES)},
        }


@dataclass
class Calibration:
    norm: tr.MeasureNormalization
    c_N_delta: float
    c_A_delta: float
    kappa_delta: float

    def constants(self) -> dict:
        return {"c_A": self.norm.c_A, "c_N": self.norm.c_N, "kappa": self.norm.kappa}


def calibrate(config: RunConfig, with_refinement: bool = True) -> Calibration:
    """c_N, c_A and kappa, each with a two-resolution delta."""
    c_N, c_N_delta = tr.compute_c_N(config.nbar_quad())
    c_A = tr.compute_c_A()
    # independent evaluation of B(H0, H0) by the trace form 4 tr(XY) of sl(2)
    c_A_trace = math.sqrt(4.0 * float(np.real(np.trace(H0 @ H0)))) / math.sqrt(TWO_PI)
    base = tr.MeasureNormalization(c_N, c_A, 1.0)
    grid = config.grid()
    ref = tr.reference_bump()
    kappa = tr.measure_kappa(ref, base, grid)
    kappa_delta = 0.0
    if with_refinement:
        kappa_fine = tr.measure_kappa(ref, base, grid.doubled())
        kappa_delta = abs(kappa_fine - kappa) / kappa_fine
    return Calibration(replace(base, kappa=kappa), c_N_delta, abs(c_A - c_A_trace) / c_A, kappa_delta)


class Context:
    """Config plus lazily computed calibration, shared by the suites of one run."""

    def __init__(self, config: RunConfig, calibration: Calibration | None = None):
        self.config = config
        self.grid = config.grid()
        self._calibration = calibration
        self.diagnostics: dict = {}

    @property
    def calibration(self) -> Calibration:
        if self._calibration is None:
            self._calibration = calibrate(self.config, with_refinement=False)
        return self._calibration

    @property
    def norm(self) -> tr.MeasureNormalization:
        return self.calibration.norm

    def rng(self, suite: str) -> np.random.Generator:
        return np.random.default_rng([self.config.seed, SUITES.index(suite)])

    def bumps(self, suite: str) -> list[tr.TestFunction]:
        return tr.seeded_bumps(self.rng(suite), self.config.bumps)


def _maxabs(x) -> float:
    return float(np.max(np.abs(x), initial=0.0))


# --------------------------------------------------------------------------
# structure


MAX_CONDITION = 1e3


def _random_sl_matrix(rng, d) -> np.ndarray:
    """Uniform entries, renormalized to det 1; near-singular draws are redrawn.

    Renormalizing a draw with condition number c leaves det g - 1 of order
    c * eps, which would be read as a factorization error.
    """
    while True:
        m = rng.uniform(-1.0, 1.0, (d, d)) + 0.5 * np.eye(d)
        if np.linalg.cond(m) > MAX_CONDITION:
            continue
        if np.linalg.det(m) < 0:
            m[0] = -m[0]
        return m / np.linalg.det(m) ** (1.0 / d)


def suite_structure(ctx: Context) -> list[CheckRecord]:
    rng = ctx.rng("structure")
    out = []
    count = 1000
    for d in (2, 3, 4, 6):
        kan_res = nak_res = inv_res = uniq = fond = 0.0
        for _ in range(count):
            g = SLMatrix(_random_sl_matrix(rng, d))
            k, a_log, n = iwasawa_kan_sl(g)
            kan_res = max(kan_res, _maxabs(k @ np.diag(np.exp(a_log)) @ n - g.entries))
            inv_res = max(inv_res, _maxabs(k.T @ k - np.eye(d)), abs(np.linalg.det(k) - 1),
                          abs(a_log.sum()), _maxabs(np.tril(n, -1)), _maxabs(np.diag(n) - 1))
            n2, a2, k2 = iwasawa_nak_sl(g)
            nak_res = max(nak_res, _maxabs(n2 @ np.diag(np.exp(a2)) @ k2 - g.entries))
            inv_res = max(inv_res, _maxabs(k2 @ k2.T - np.eye(d)), _maxabs(np.tril(n2, -1)))
            again = iwasawa_kan_sl(SLMatrix.renormalized(k @ np.diag(np.exp(a_log)) @ n))
            uniq = max(uniq, _maxabs(again.k - k), _maxabs(again.a_log - a_log), _maxabs(again.n - n))
            gi = SLMatrix(np.linalg.inv(g.entries))
            fond = max(fond, _maxabs(iwasawa_nak_sl(gi).a_log + a_log))
        out += [
            record(f"sl{d}_kan_reassembly", "ID", 0.0, 0.0, kan_res, 1e-12),
            record(f"sl{d}_nak_reassembly", "IWAx", 0.0, 0.0, nak_res, 1e-12),
            record(f"sl{d}_factor_invariants", "ID", 0.0, 0.0, inv_res, 1e-12),
            record(f"sl{d}_factor_uniqueness", "ID", 0.0, 0.0, uniq, 1e-10),
            record(f"sl{d}_nak_of_inverse_is_minus_kan", "eq:fondAH", 0.0, 0.0, fond, 1e-10),
        ]
    # SU(1,1)
    th = rng.uniform(0, TWO_PI, count)
    t = rng.uniform(-1, 1, count)
    s = rng.uniform(-1, 1, count)
    kan_res = nak_res = recov = fond = 0.0
    for i in range(count):
        g = kan_product(th[i], t[i], s[i])
        dec = iwasawa_su11(g)
        kan_res = max(kan_res, _maxabs(kan_product(*dec).matrix - g.matrix))
        recov = max(recov, abs(np.angle(np.exp(1j * (dec.theta - th[i])))), abs(dec.t - t[i]), abs(dec.s - s[i]))
        nd = iwasawa_nak_su11(g)
        nak_res = max(nak_res, _maxabs(nak_product(*nd).matrix - g.matrix))
        fond = max(fond, abs(iwasawa_nak_su11(g.inverse()).t + dec.t))
    out += [
        record("su11_kan_reassembly", "ID", 0.0, 0.0, kan_res, 1e-12),
        record("su11_kan_recovers_parameters", "ID", 0.0, 0.0, recov, 1e-10),
        record("su11_nak_reassembly", "IWAx", 0.0, 0.0, nak_res, 1e-12),
        record("su11_nak_of_inverse_is_minus_kan", "eq:fondAH", 0.0, 0.0, fond, 1e-10),
    ]
    dec = iwasawa_su11(a_elem(1.0))
    out.append(record("su11_kan_of_a1", "ID", dec.t, 1.0, max(abs(dec.t - 1), abs(dec.s), abs(np.sin(dec.theta))), 1e-12))
    nd = iwasawa_nak_su11(n_elem(2.0) @ a_elem(0.5))
    out.append(record("su11_nak_of_n2_a05", "IWAx", nd.s, 2.0,
                      max(abs(nd.s - 2), abs(nd.t - 0.5), abs(np.sin(nd.theta))), 1e-12))
    # rho, roots, Weyl data
    rho_res = 0.0
    for d in range(2, 7):
        for _ in range(50):
            H = rng.standard_normal(d)
            H -= H.mean()
            rho_res = max(rho_res, abs(rho_sl(d, H) - rho_from_roots(d, H)))
    out.append(record("rho_closed_form_vs_root_half_sum", "rho", 0.0, 0.0, rho_res, 1e-12))
    v = rho_sl(3, np.array([1.0, 0.0, -1.0]))
    out.append(record("rho_d3_example", "rho", v, 2.0, abs(v - 2.0), 1e-12))
    br = 0.0
    for d in range(2, 7):
        H = np.diag(rng.standard_normal(d))
        for r in restricted_roots_sl(d):
            E = r.root_vector(d)
            br = max(br, _maxabs(H @ E - E @ H - r(np.diag(H)) * E))
    out.append(record("root_space_bracket", "restricted-roots", 0.0, 0.0, br, 1e-14))
    counts = [(len(restricted_roots_sl(d)), d * (d - 1)) for d in range(2, 7)]
    out.append(record("root_count", "restricted-roots", sum(c for c, _ in counts), sum(e for _, e in counts),
                      sum(abs(c - e) for c, e in counts), 0.0))
    simple = sorted((r.i, r.j) for r in simple_roots_sl(4))
    out.append(record("simple_roots_d4", "restricted-roots", len(simple), 3,
                      0.0 if simple == [(1, 2), (2, 3), (3, 4)] else 1.0, 0.0))
    ad = 0.0
    for d in range(2, 7):
        a_log = rng.standard_normal(d)
        a_log -= a_log.mean()
        A = np.diag(np.exp(a_log))
        Ai = np.diag(np.exp(-a_log))
        for r in restricted_roots_sl(d):
            X = rng.standard_normal() * r.root_vector(d)
            ad = max(ad, _maxabs(A @ X @ Ai - np.exp(r(a_log)) * X) / max(1.0, _maxabs(X)))
    out.append(record("ad_a_preserves_root_spaces", "restricted-roots", 0.0, 0.0, ad, 1e-12))
    for d in (2, 3, 4):
        n_ch = count_weyl_chambers(d, rng, 400 * math.factorial(d))
        out.append(record(f"weyl_chambers_d{d}", "WonSigma", n_ch, math.factorial(d),
                          abs(n_ch - math.factorial(d)), 0.0))
        H = np.arange(d, 0, -1, dtype=float)
        H -= H.mean()
        images = {chamber_signature(weyl_permute(H, p)) for p in itertools.permutations(range(d))}
        regular = all(0 not in sig for sig in images)
        out.append(record(f"weyl_group_permutes_chambers_d{d}", "WonSigma", len(images), math.factorial(d),
                          abs(len(images) - math.factorial(d)) + (0 if regular else 1), 0.0))
    hom = addet = 0.0
    for d in (2, 3, 4, 6):
        for _ in range(50):
            a1, a2 = rng.standard_normal(d), rng.standard_normal(d)
            a1 -= a1.mean()
            a2 -= a2.mean()
            m12 = modular_AN_sl(a1 + a2, d)
            hom = max(hom, abs(m12 - modular_AN_sl(a1, d) * modular_AN_sl(a2, d)) / m12)
            # determinant of Ad(a) on the strictly upper triangular matrices
            pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
            A = np.diag(np.exp(a1))
            Ai = np.diag(np.exp(-a1))
            M = np.empty((len(pairs), len(pairs)))
            for c, (i, j) in enumerate(pairs):
                E = np.zeros((d, d))
                E[i, j] = 1.0
                img = A @ E @ Ai
                M[:, c] = [img[p, q] for p, q in pairs]
            m1 = modular_AN_sl(a1, d)
            addet = max(addet, abs(m1 - 1.0 / np.linalg.det(M)) / m1)
    out.append(record("modular_function_homomorphism", "modular", 0.0, 0.0, hom, 1e-10))
    out.append(record("modular_function_vs_ad_determinant", "modAN", 0.0, 0.0, addet, 1e-10))
    m = modular_AN_sl(np.array([0.7, -0.7]), 2)
    out.append(record("modular_function_d2", "modAN", m, math.exp(-1.4), abs(m - math.exp(-1.4)), 1e-14))
    # Cayley transform
    c0 = complex(cayley(0.0))
    out.append(record("cayley_origin_in_upper_half_plane", "cayley", c0, 1j,
                      0.0 if c0.imag > 0 else 1.0, 0.0))
    zs = 0.95 * np.sqrt(rng.uniform(0, 1, 100)) * np.exp(1j * rng.uniform(0, TWO_PI, 100))
    rt = _maxabs(cayley(cayley(zs), "halfplane-to-disk") - zs)
    out.append(record("cayley_round_trip", "cayley", 0.0, 0.0, rt, 1e-14))
    real = 0.0
    for _ in range(20):
        g = kan_product(*rng.uniform(-1, 1, 3))
        m = su11_to_sl2r(g)
        real = max(real, _maxabs(m.imag), abs(np.linalg.det(m) - 1))
    out.append(record("cayley_conjugates_into_sl2r", "cayley", 0.0, 0.0, real, 1e-12))
    killing = killing_form_su11(H0, H0)
    out.append(record("killing_norm_of_H0", "haars", killing, 8.0, abs(killing - 8.0), 1e-12))
    return out


# --------------------------------------------------------------------------
# geometry


def _random_points(rng, n, rmax=0.8):
    return np.sqrt(rng.uniform(0, 1, n)) * rmax * np.exp(1j * rng.uniform(0, TWO_PI, n))


def _random_su11(rng, spread=1.0) -> SU11Element:
    return kan_product(rng.uniform(0, TWO_PI), spread * rng.standard_normal(), spread * rng.standard_normal())


def suite_geometry(ctx: Context) -> list[CheckRecord]:
    rng = ctx.rng("geometry")
    out = []
    t = 0.8
    v = complex(disk.mobius(a_elem(t), 0j))
    out.append(record("mobius_a_t_origin", "moebius", v, math.tanh(t), abs(v - math.tanh(t)), 1e-15))
    v = complex(disk.mobius(n_elem(1.0), 0j))
    out.append(record("mobius_n_1_origin", "moebius", v, 0.5 - 0.5j, abs(v - (0.5 - 0.5j)), 1e-15))
    gl = 0.0
    for _ in range(100):
        g, h = _random_su11(rng), _random_su11(rng)
        z = complex(_random_points(rng, 1)[0])
        gl = max(gl, abs(disk.mobius(g, disk.mobius(h, z)) - disk.mobius(g @ h, z)))
    out.append(record("mobius_group_law", "moebius", 0.0, 0.0, gl, 1e-12))
    d1 = disk.hyperbolic_distance_to_origin(math.tanh(1.0))
    d2 = disk.hyperbolic_distance_to_origin(0.5)
    out.append(record("distance_tanh1", "hyperbolic-distance", d1, 1.0, abs(d1 - 1.0), 1e-14))
    out.append(record("distance_half", "hyperbolic-distance", d2, 0.5 * math.log(3.0), abs(d2 - 0.5 * math.log(3.0)), 1e-15))
    iso = 0.0
    for _ in range(100):
        g = _random_su11(rng)
        z1, z2 = _random_points(rng, 2, 0.7)
        d = disk.hyperbolic_distance(z1, z2)
        iso = max(iso, abs(disk.hyperbolic_distance(disk.mobius(g, z1), disk.mobius(g, z2)) - d))
    out.append(record("mobius_isometry", "moebius", 0.0, 0.0, iso, 1e-10))
    # Borel sections
    sec = disk.borel_section(disk.ORIGIN)
    out.append(record("borel_section_origin", "borel-section", 0.0, 0.0, _maxabs(sec.matrix - np.eye(2)), 1e-15))
    sec = disk.borel_section(math.tanh(0.7))
    out.append(record("borel_section_a07", "borel-section", 0.0, 0.0, _maxabs(sec.matrix - a_elem(0.7).matrix), 1e-12))
    z = complex(disk.mobius(n_elem(2.0) @ a_elem(-0.3), 0j))
    s_, t_ = disk.na_coordinates(z)
    out.append(record("borel_section_n2_a-03", "borel-section", float(s_), 2.0,
                      max(abs(s_ - 2.0), abs(t_ + 0.3)), 1e-12))
    bs = 0.0
    for z in _random_points(rng, 200, 0.95):
        g = disk.borel_section(z)
        bs = max(bs, abs(np.sin(iwasawa_su11(g).theta)), abs(disk.mobius(g, z * 0) - z))
    out.append(record("borel_section_in_NA_and_hits_point", "borel-section", 0.0, 0.0, bs, 1e-12))
    # composite distance
    betas = rng.uniform(0, TWO_PI, 20)
    v = max(abs(disk.composite_distance(0j, 0j, b)) for b in betas)
    out.append(record("composite_distance_origin_origin", "CD", v, 0.0, v, 1e-15))
    v = max(abs(disk.composite_distance(0j, math.tanh(t), 0.0) - t) for t in (-1.0, 0.3, 2.0))
    out.append(record("composite_distance_a_t", "CD", v, 0.0, v, 1e-12))
    coc = anti = inv = 0.0
    for _ in range(50):
        x, y, z = _random_points(rng, 3)
        b = rng.uniform(0, TWO_PI)
        coc = max(coc, abs(disk.composite_distance(x, y, b)
                           - disk.composite_distance(x, z, b) - disk.composite_distance(z, y, b)))
        anti = max(anti, abs(disk.composite_distance(x, y, b) + disk.composite_distance(y, x, b)))
        g = _random_su11(rng, 0.7)
        gb = disk.boundary_action(g, b)
        inv = max(inv, abs(disk.composite_distance(x, y, b) - disk.composite_distance(
            disk.mobius(g, x), disk.mobius(g, y), gb)))
    out.append(record("cocycle", "cocycl", 0.0, 0.0, coc, 1e-10))
    out.append(record("composite_distance_antisymmetry", "cocycl", 0.0, 0.0, anti, 1e-10))
    out.append(record("composite_distance_g_invariance", "ginvA", 0.0, 0.0, inv, 1e-10))
    poisson = max(disk.poisson_diagnostic(z, b) for z, b in zip(_random_points(rng, 20), rng.uniform(0, TWO_PI, 20)))
    ctx.diagnostics["poisson_kernel_discrepancy"] = float(poisson)
    # boundary action
    ba = bl = 0.0
    for _ in range(50):
        g, h = _random_su11(rng), _random_su11(rng)
        b = rng.uniform(0, TWO_PI)
        w = disk.mobius(g, np.exp(1j * b))
        ba = max(ba, abs(np.exp(1j * disk.boundary_action(g, b).beta) - w))
        lhs = disk.boundary_action(g, disk.boundary_action(h, b)).beta
        rhs = disk.boundary_action(g @ h, b).beta
        bl = max(bl, abs(np.exp(1j * lhs) - np.exp(1j * rhs)))
    out.append(record("boundary_action_is_mobius", "GonB", 0.0, 0.0, ba, 1e-12))
    out.append(record("boundary_action_group_law", "GonB", 0.0, 0.0, bl, 1e-12))
    fix = max(abs(np.sin(disk.boundary_action(g, 0.0).beta / 2)) for g in (a_elem(0.9), n_elem(-1.3), a_elem(-2) @ n_elem(0.4)))
    out.append(record("AN_fixes_base_boundary_point", "GonB", fix, 0.0, fix, 1e-12))
    phi = 0.37
    v = disk.boundary_action(k_elem(phi), 0.0).beta
    out.append(record("rotation_moves_boundary_by_twice_angle", "Kone", v, 2 * phi, abs(v - 2 * phi), 1e-14))
    kr = 0.0
    for _ in range(20):
        x = complex(_random_points(rng, 1)[0])
        k = k_elem(rng.uniform(0, TWO_PI))
        kx = disk.kappa_x(x, k)
        back = disk.kappa_o(kx @ disk.borel_section(x))  # kappa_o restricted to K_x
        b = rng.uniform(0, TWO_PI)
        kr = max(kr, abs(np.exp(1j * disk.boundary_action(back, b).beta) - np.exp(1j * disk.boundary_action(k, b).beta)))
        kr = max(kr, abs(disk.mobius(kx, x) - x))
    out.append(record("kappa_round_trip", "kappas", 0.0, 0.0, kr, 1e-10))
    # horocycles as circles
    s = np.linspace(-20, 20, 401)
    orbit = disk.mobius_coeffs(1 + 1j * s, -1j * s, 0j)
    v = _maxabs(np.abs(orbit - 0.5) ** 2 - 0.25)
    out.append(record("n_orbit_of_origin_circle", "horo", 0.25, 0.25, v, 1e-10))
    c = disk.horocycle_params_to_circle(disk.HorocycleParam(disk.BoundaryPoint(0.0), 0.0))
    out.append(record("basic_horocycle_circle", "horo", c.center, 0.5,
                      max(abs(c.center - 0.5), abs(c.radius - 0.5)), 1e-12))
    c = disk.horocycle_params_to_circle(disk.HorocycleParam(disk.BoundaryPoint(math.pi), 0.0))
    out.append(record("basic_horocycle_rotated_circle", "horo", c.center, -0.5,
                      max(abs(c.center + 0.5), abs(c.radius - 0.5)), 1e-12))
    thr = 0.0
    for t in (-1.0, 0.0, 1.0):
        c = disk.horocycle_params_to_circle(disk.HorocycleParam(disk.BoundaryPoint(0.0), t))
        thr = max(thr, abs(c.distance(math.tanh(t))), abs(c.distance(1.0)))
    out.append(record("horocycle_circle_through_a_t_tangent_at_1", "horo", 0.0, 0.0, thr, 1e-12))
    # membership against the circle test on 1000 points
    disagree = 0
    on_circle = 0.0
    for _ in range(100):
        x = complex(_random_points(rng, 1, 0.6)[0])
        h = disk.HorocycleParam(disk.BoundaryPoint(rng.uniform(0, TWO_PI)), rng.uniform(-1.5, 1.5))
        circ = disk.horocycle_params_to_circle(h, x)
        for s in rng.uniform(-2, 2, 5):
            z = disk.horocycle_point(h, x, s)
            if abs(z) > 1 - 1e-6:
                continue
            on_circle = max(on_circle, abs(circ.distance(z)))
            disagree += disk.horocycle_membership(z, h, x) != (abs(circ.distance(z)) < 1e-9)
            zoff = z * (1 - 1e-3 * rng.uniform(0.5, 1.0))
            disagree += disk.horocycle_membership(zoff, h, x) != (abs(circ.distance(zoff)) < 1e-9)
    out.append(record("membership_agrees_with_circle_test", "charcxi", disagree, 0, disagree, 0.0))
    out.append(record("n_orbit_samples_on_circle", "Psix", 0.0, 0.0, on_circle, 1e-9))
    # group action and change of reference point
    ga = rr = 0.0
    for _ in range(30):
        x, y = _random_points(rng, 2, 0.6)
        h = disk.HorocycleParam(disk.BoundaryPoint(rng.uniform(0, TWO_PI)), rng.uniform(-1, 1))
        g = _random_su11(rng, 0.5)
        moved = disk.horocycle_group_action(g, h, x)
        h_y = disk.rereference_horocycle(h, x, y)
        back = disk.rereference_horocycle(h_y, y, x)
        rr = max(rr, abs(back.tau - h.tau))
        for s in np.linspace(-1.5, 1.5, 20):
            z = disk.horocycle_point(h, x, s)
            gz = disk.mobius(g, z)
            ga = max(ga, abs(disk.composite_distance(moved.reference, gz, moved.param.b) - moved.param.tau))
            rr = max(rr, abs(disk.composite_distance(y, z, h_y.b) - h_y.tau))
    out.append(record("group_action_on_horocycles", "eq:actiongxiparametrized", 0.0, 0.0, ga, 1e-9))
    out.append(record("rereference_horocycle", "xirefere", 0.0, 0.0, rr, 1e-9))
    ra = disk.horocycle_group_action(a_elem(0.4), disk.HorocycleParam(disk.BoundaryPoint(0.0), 0.3))
    h_o = disk.rereference_horocycle(ra.param, ra.reference, disk.ORIGIN)
    v = abs(disk.composite_distance(0j, math.tanh(0.7), h_o.b) - h_o.tau)
    out.append(record("a_u_moves_horocycle_through_a_t_plus_u", "xirefere", 0.0, 0.0, v, 1e-12))
    # boundary measures
    mass = qi = gv = 0.0
    for _ in range(10):
        x = complex(_random_points(rng, 1, 0.7)[0])
        mass = max(mass, abs(disk.boundary_integral(lambda b: np.ones_like(b), 512, x) - 1))
        cf = rng.standard_normal(7) + 1j * rng.standard_normal(7)
        F = lambda b, cf=cf: sum(cf[m + 3] * np.exp(1j * m * b) for m in range(-3, 4))
        g = _random_su11(rng, 0.6)
        gi = g.inverse()
        lhs = disk.boundary_integral(lambda b: F(disk.boundary_action_array(gi, b)), 512)
        rhs = disk.boundary_integral(lambda b: F(b) * np.exp(-2 * disk.h_o_of_gk(g, b)), 512)
        qi = max(qi, abs(lhs - rhs))
        lhs = disk.boundary_integral(lambda b: F(disk.boundary_action_array(gi, b)), 512, x)
        rhs = disk.boundary_integral(F, 512, disk.mobius(gi, x))
        gv = max(gv, abs(lhs - rhs))
    out.append(record("boundary_measure_total_mass", "eq:radonik", 1.0, 1.0, mass, 1e-8))
    out.append(record("boundary_measure_quasi_invariance", "nuinv", 0.0, 0.0, qi, 1e-8))
    out.append(record("boundary_measure_dual_relation", "ginv", 0.0, 0.0, gv, 1e-8))
    return out


# --------------------------------------------------------------------------
# transforms: slice theorem and the one-dimensional pieces


def slice_error(f, norm, grid) -> float:
    H = tr.helgason_grid(f, norm, grid)
    S = tr.phi_o(tr.radon_grid(f, norm, grid, beta=grid.beta_spectral), norm, grid.lam)
    return float(np.linalg.norm(H.samples - S.samples) / np.linalg.norm(S.samples))


def radon_direct_at_reference(f, h: disk.HorocycleParam, x, norm, quad: QuadratureSpec, span: float = 40.0) -> complex:
    """R f on Psi_x(b, a_tau) by integrating along u -> kappa_x(k_b) a_tau n_u[x].

    n_u[x] = s_o(x) n_{e^{-2 t_x} u}[o] for x = n_s a_{t_x}[o], so the N-measure
    is c_N e^{-2 t_x} du in this parametrization.
    """
    x = complex(x)
    _, t_x = disk.na_coordinates(x)
    g = disk.kappa_x(x, h.b.rotation) @ a_elem(h.tau)
    v, w = composite_nodes(-np.arcsinh(span * np.exp(2 * t_x)), np.arcsinh(span * np.exp(2 * t_x)), quad)
    u = np.sinh(v)
    pts = disk.mobius_coeffs(g.a, g.b, disk.mobius_coeffs(1 + 1j * u, -1j * u, x))
    return complex(norm.c_N * np.exp(-2 * t_x) * np.sum(f(pts) * np.cosh(v) * w))


def suite_slice(ctx: Context) -> list[CheckRecord]:
    cfg, grid, norm = ctx.config, ctx.grid, ctx.norm
    out = []
    bumps = ctx.bumps("slice")
    fine = grid.doubled()
    for f in bumps:
        e0 = slice_error(f, norm, grid)
        e1 = slice_error(f, norm, fine)
        out.append(record(f"slice_default_{f.label}", "eq:fst", e0, 0.0, e0, cfg.tol("slice")))
        out.append(record(f"slice_doubled_{f.label}", "eq:fst", e1, 0.0, e1, cfg.tol("slice-doubled")))
        out.append(record(f"slice_converges_{f.label}", "eq:fst", e1, e0, 0.0 if e1 < e0 else 1.0, 0.0))
    ref = tr.reference_bump()
    e = slice_error(ref, norm, grid)
    out.append(record("phi_o_of_radon_is_helgason_reference", "cor:radonbemolle", e, 0.0, e, cfg.tol("slice")))
    # Abel transform: integrability, stable under refinement
    f = bumps[0]
    beta = grid.beta[:: max(1, grid.n_beta // 16)]
    l1 = []
    for quad in (grid.horocycle_quad, grid.horocycle_quad.refined()):
        g2 = replace(grid, horocycle_quad=quad)
        A = tr.abel_grid(f, norm, g2, beta=beta)
        l1.append(np.sum(np.abs(A.samples) * (norm.c_A * grid.tau.weights)[None, :], axis=1))
    rel = _maxabs((l1[1] - l1[0]) / l1[1])
    out.append(record("abel_l1_norm_stable", "fst", float(np.max(l1[1])), float(np.max(l1[0])), rel, 1e-6))
    tail = _maxabs(tr.abel_grid(f, norm, grid, beta=beta).samples[:, [0, -1]])
    out.append(record("abel_vanishes_at_tau_window_edge", "fst", tail, 0.0, tail, 1e-12))
    # radon examples
    z = tr.zero_function()
    v = _maxabs(tr.radon_values(z, np.array([0.0, 1.0]), np.array([0.0, 0.5]), norm, grid.horocycle_quad))
    out.append(record("radon_of_zero", "radon-definition", v, 0.0, v, 0.0))
    radial = tr.gaussian_bump(0.0, 0.0, 0.35, label="radial")
    R = tr.radon_grid(radial, norm, grid, beta=grid.beta[::32])
    v = _maxabs(R.samples - R.samples[:1]) / _maxabs(R.samples)
    out.append(record("radon_of_radial_bump_independent_of_beta", "radon-definition", v, 0.0, v, 1e-8))
    phi = TWO_PI / grid.n_beta * 3  # 2 phi is a multiple of the beta step
    fr = f.transported(k_elem(phi))
    beta = grid.beta[::8]
    B, T = np.meshgrid(beta, grid.tau.nodes[::8], indexing="ij")
    lhs = tr.radon_values(fr, B, T, norm, grid.horocycle_quad)
    rhs = tr.radon_values(f, np.mod(B - 2 * phi, TWO_PI), T, norm, grid.horocycle_quad)
    out.append(record("radon_rotation_equivariance", "interradon", 0.0, 0.0, _maxabs(lhs - rhs) / _maxabs(rhs), 1e-8))
    # reference point change
    h = disk.HorocycleParam(disk.BoundaryPoint(0.0), 0.2)
    u = 0.45
    v = abs(tr.radon_at_reference(f, h, math.tanh(u), norm) - tr.radon(f, disk.HorocycleParam(h.b, h.tau + u), norm))
    out.append(record("radon_at_reference_a_u_shift", "eq:radonwrtx", 0.0, 0.0, v, 1e-14))
    rng = ctx.rng("slice")
    worst = 0.0
    for _ in range(6):
        x = complex(_random_points(rng, 1, 0.5)[0])
        hh = disk.HorocycleParam(disk.BoundaryPoint(rng.uniform(0, TWO_PI)), rng.uniform(-0.8, 0.8))
        a = tr.radon_at_reference(f, hh, x, norm)
        b = radon_direct_at_reference(f, hh, x, norm, QuadratureSpec("gauss-legendre", 96, 16))
        worst = max(worst, abs(a - b) / max(abs(b), 1e-3))
    out.append(record("radon_at_reference_vs_direct_integral", "eq:radonwrtx", 0.0, 0.0, worst, 1e-8))
    # Fourier transform on A
    pair = grid.fourier_pair(norm)
    tau = grid.tau.nodes
    s = np.exp(-((tau - 0.3) ** 2) / (2 * 0.7 ** 2)) * (1 + 0.3j * tau)
    Fs = pair.forward(s)
    lhs = float(np.sum(np.abs(Fs) ** 2 * pair.lambda_measure))
    rhs = float(np.sum(np.abs(s) ** 2 * pair.tau_measure))
    out.append(record("fourier_plancherel_on_A", "fouriertransformabeliangroup", lhs, rhs, abs(lhs - rhs) / rhs, 1e-6))
    v = abs(complex(tr.fourier_A(s, 0.0, grid.tau, norm)[0]) - norm.c_A * np.sum(s * grid.tau.weights))
    out.append(record("fourier_at_zero_is_integral", "fouriertransformabeliangroup", 0.0, 0.0, v, 1e-12))
    F = tr.radon_grid(f, norm, grid, beta=grid.beta[::16])
    back = tr.phi_o_inverse(tr.phi_o(F, norm, grid.lam), norm, grid.tau)
    v = _maxabs(back.samples - F.samples) / _maxabs(F.samples)
    out.append(record("fourier_round_trip_identity", "prop:fundamentaloperator", 0.0, 0.0, v, 1e-10))
    # Phi_o isometry on a beta-dependent Gaussian profile; exact norm in closed form
    b = grid.beta
    mu = 0.5 * np.cos(b)
    wd = 0.6 + 0.2 * np.sin(2 * b)
    G = np.exp(-((tau[None, :] - mu[:, None]) ** 2) / (2 * wd[:, None] ** 2))
    Fp = tr.HorocycleFunction(G * np.exp(-tau)[None, :], b, grid.tau)
    exact = math.sqrt(float(np.mean(norm.c_A * wd * math.sqrt(math.pi))))
    num = tr.spectral_norm(tr.phi_o(Fp, norm, grid.lam), norm)
    out.append(record("phi_o_isometry_gaussian_profile", "prop:fundamentaloperator", num, exact, abs(num - exact) / exact, 1e-4))
    hn = tr.horocycle_norm(Fp, norm)
    out.append(record("horocycle_norm_gaussian_profile", "Psix", hn, exact, abs(hn - exact) / exact, 1e-10))
    # linearity
    f1, f2 = bumps[1], bumps[2]
    c1, c2 = 0.7 - 0.2j, -1.1 + 0.4j
    comb = f1.scaled(c1) + f2.scaled(c2)
    bsub = grid.beta[::32]
    R12 = tr.radon_grid(comb, norm, grid, beta=bsub).samples
    R1 = tr.radon_grid(f1, norm, grid, beta=bsub).samples
    R2 = tr.radon_grid(f2, norm, grid, beta=bsub).samples
    v = _maxabs(R12 - c1 * R1 - c2 * R2) / _maxabs(R12)
    out.append(record("radon_linearity", "radon-definition", 0.0, 0.0, v, 1e-12))
    return out


# --------------------------------------------------------------------------
# c-function and Plancherel


def suite_plancherel(ctx: Context) -> list[CheckRecord]:
    cfg, grid, norm = ctx.config, ctx.grid, ctx.norm
    out = []
    lam = np.linspace(0.05, 50.0, 2000)
    closed = tr.c_abs_sq_inv(lam)
    gamma = 1.0 / np.abs(tr.c_complex(lam)) ** 2
    v = _maxabs((gamma - closed) / closed)
    out.append(record("c_function_gamma_vs_closed_form", "c-function", 0.0, 0.0, v, 1e-9))
    v = max(abs(e.c_abs_sq_inv * abs(e.c_complex) ** 2 - 1) for e in map(tr.c_function, (0.1, 1.0, 5.0, 20.0)))
    out.append(record("c_function_eval_consistency", "c-function", 0.0, 0.0, v, 1e-9))
    v = float(tr.c_abs_sq_inv(2.0))
    out.append(record("c_function_at_2", "c-function", v, math.pi * math.tanh(math.pi),
                      abs(v - math.pi * math.tanh(math.pi)) / v, 1e-15))
    small = 1e-4
    v = float(tr.c_abs_sq_inv(small))
    out.append(record("c_function_small_lambda", "c-function", v, math.pi ** 2 * small ** 2 / 4,
                      abs(v / (math.pi ** 2 * small ** 2 / 4) - 1), 1e-7))
    try:
        tr.c_function(0.0)
        pole = 1.0
    except PoleAtZero:
        pole = 0.0
    out.append(record("c_function_pole_at_zero", "c-function", pole, 0.0, pole, 0.0))
    ln = grid.lam.nodes
    v = _maxabs(tr.multiplier(ln) - tr.multiplier(-ln)) + _maxabs(tr.plancherel_density(ln) - tr.plancherel_density(-ln))
    out.append(record("multiplier_even_in_lambda", "eq:philambda", 0.0, 0.0, v, 0.0))
    # kappa frozen on the reference bump, then checked on independent bumps
    kappa = norm.kappa
    out.append(record("kappa_reference", "eq:plancherelformula", kappa, 1.0, abs(kappa - 1.0), cfg.tol("plancherel")))
    spread = 0.0
    for f in ctx.bumps("plancherel"):
        lhs, rhs = tr.plancherel_pair(f, f, norm, grid)
        e = abs(rhs - lhs) / abs(lhs)
        spread = max(spread, e)
        out.append(record(f"plancherel_{f.label}", "eq:plancherelformula", lhs, rhs, e, cfg.tol("plancherel")))
        chain = tr.spectral_norm(tr.lambda_multiplier(
            tr.phi_o(tr.radon_grid(f, norm, grid, beta=grid.beta_spectral), norm, grid.lam)), norm)
        target = math.sqrt(lhs.real * kappa)
        out.append(record(f"unitarity_chain_{f.label}", "eq:philambda", chain, target,
                          abs(chain - target) / target, cfg.tol("plancherel")))
    out.append(record("kappa_spread", "eq:plancherelformula", spread, 0.0, spread, cfg.tol("plancherel")))
    # polarization
    f1, f2 = ctx.bumps("plancherel")[:2]
    lhs12, rhs12 = tr.plancherel_pair(f1, f2, norm, grid)
    pol_l = pol_r = 0.0
    for k in range(4):
        c = 1j ** k
        l, r = tr.plancherel_pair(f1 + f2.scaled(c), f1 + f2.scaled(c), norm, grid)
        pol_l += c * l / 4  # the pairing is linear in its first slot
        pol_r += c * r / 4
    scale = math.sqrt(abs(tr.inner_product(f1, f1, norm, grid)) * abs(tr.inner_product(f2, f2, norm, grid)))
    v = max(abs(pol_r - rhs12), abs(pol_l - lhs12)) / scale
    out.append(record("plancherel_polarization", "eq:plancherelformula", pol_r, rhs12, v, cfg.tol("plancherel")))
    e = abs(rhs12 - lhs12) / scale
    out.append(record("plancherel_cross_term", "eq:plancherelformula", lhs12, rhs12, e, cfg.tol("plancherel")))
    # disjoint supports
    g1 = tr.gaussian_bump(0.0, 0.0, 0.2, label="left").transported(a_elem(-1.0))
    g2 = tr.gaussian_bump(0.0, 0.0, 0.2, label="right").transported(a_elem(1.0))
    lhs, rhs = tr.plancherel_pair(g1, g2, norm, grid)
    n12 = math.sqrt(tr.inner_product(g1, g1, norm, grid).real * tr.inner_product(g2, g2, norm, grid).real)
    out.append(record("plancherel_disjoint_supports", "eq:plancherelformula", lhs, rhs,
                      max(abs(lhs), abs(rhs)) / n12, 1e-6))
    z = tr.helgason_grid(tr.zero_function(), norm, grid, beta=grid.beta_spectral[:4])
    out.append(record("helgason_of_zero", "extH", 0.0, 0.0, _maxabs(z.samples), 0.0))
    return out


# --------------------------------------------------------------------------
# unitarity


def unitarity_defect(f, norm, grid) -> float:
    Q = tr.q_operator(f, norm, grid)
    nf = math.sqrt(tr.inner_product(f, f, norm, grid).real)
    return abs(tr.horocycle_norm(Q, norm) / nf - 1.0)


def suite_unitarity(ctx: Context) -> list[CheckRecord]:
    cfg, grid, norm = ctx.config, ctx.grid, ctx.norm
    out = []
    fine = grid.refined()
    for f in ctx.bumps("unitarity"):
        d0 = unitarity_defect(f, norm, grid)
        d1 = unitarity_defect(f, norm, fine)
        out.append(record(f"unitarity_{f.label}", "thm:unitarizationtheorem", d0, 0.0, d0, cfg.tol("unitarity")))
        out.append(record(f"unitarity_refined_{f.label}", "thm:unitarizationtheorem", d1, 0.0, d1, cfg.tol("unitarity")))
        out.append(record(f"unitarity_defect_decreases_{f.label}", "thm:unitarizationtheorem", d1, d0,
                          0.0 if d1 < d0 else 1.0, 0.0))
    Q0 = tr.q_operator(tr.zero_function(), norm, grid, beta=grid.beta[:4])
    out.append(record("q_of_zero", "thm:unitarizationtheorem", 0.0, 0.0, _maxabs(Q0.samples), 0.0))
    return out


# --------------------------------------------------------------------------
# intertwining


def _generators(grid) -> list[tuple[str, SU11Element]]:
    phi = TWO_PI / grid.n_beta * 5
    return [("k", k_elem(phi)), ("a", a_elem(0.3)), ("n", n_elem(0.4))]


def suite_intertwine(ctx: Context) -> list[CheckRecord]:
    cfg, grid, norm = ctx.config, ctx.grid, ctx.norm
    out = []
    f = ctx.bumps("intertwine")[0]
    R = tr.radon_grid(f, norm, grid)
    LR = tr.lambda_operator(R, norm, grid.lam, grid.tau_extended)
    B, T = np.meshgrid(grid.beta, grid.tau.nodes, indexing="ij")
    for name, g in _generators(grid):
        fg = f.transported(g)
        Rg = tr.radon_grid(fg, norm, grid)
        b2, t2 = tr.hat_pi_nodes(g, B, T)
        direct = tr.radon_values(f, b2, t2, norm, grid.horocycle_quad)
        v = _maxabs(Rg.samples - direct) / _maxabs(R.samples)
        out.append(record(f"radon_intertwining_{name}", "interradon", 0.0, 0.0, v, 1e-6))
        v = tr.relative_l2(Rg, tr.HorocycleFunction(direct, grid.beta, grid.tau), norm)
        out.append(record(f"radon_intertwining_l2_{name}", "interradon", 0.0, 0.0, v, cfg.tol("intertwine")))
        Qg = tr.q_operator(fg, norm, grid)
        mask = tr.hat_pi_valid(g, LR)
        v = tr.relative_l2(Qg, tr.hat_pi_sampled(g, LR), norm, mask)
        out.append(record(f"q_intertwining_{name}", "intertw", 0.0, 0.0, v, cfg.tol("intertwine")))
        # Lambda commutes with pi^(g), here applied to sampled F = R f
        lhs = tr.lambda_operator(tr.hat_pi_sampled(g, R), norm, grid.lam, grid.tau_extended)
        v = tr.relative_l2(lhs, tr.hat_pi_sampled(g, LR), norm, mask)
        out.append(record(f"lambda_intertwining_{name}", "interhat", 0.0, 0.0, v, cfg.tol("intertwine")))
    # rotation equivariance of the Helgason-Fourier transform; both sides carry
    # independent disk-quadrature error, so the residual must shrink on refinement
    n_spec = grid.n_beta_spectral
    phi = TWO_PI / n_spec  # shifts the spectral grid by two nodes
    beta = grid.beta_spectral[::4]
    errs = []
    for g_ in (grid, grid.doubled()):
        H = tr.helgason_grid(f, norm, g_, beta=np.mod(beta - 2 * phi, TWO_PI))
        Hk = tr.helgason_grid(f.transported(k_elem(phi)), norm, g_, beta=beta)
        errs.append(_maxabs(Hk.samples - H.samples) / _maxabs(H.samples))
    out.append(record("helgason_rotation_equivariance", "extH", errs[0], 0.0, errs[0], cfg.tol("slice-doubled")))
    out.append(record("helgason_rotation_equivariance_converges", "extH", errs[1], errs[0],
                      0.0 if errs[1] < errs[0] else 1.0, 0.0))
    return out


# --------------------------------------------------------------------------
# range properties


def _probes(rng) -> list[complex]:
    return [0j] + list(_random_points(rng, 4, 0.6))


def odd_profile_spectral(grid) -> tr.SpectralFunction:
    lam = grid.lam
    ln = lam.nodes
    prof = ln * np.exp(-ln ** 2 / 8.0)
    return tr.SpectralFunction(np.tile(prof, (grid.n_beta_spectral, 1)).astype(complex), grid.beta_spectral, lam)


def odd_profile_horocycle(grid) -> tr.HorocycleFunction:
    tau = grid.tau.nodes
    prof = tau * np.exp(-tau ** 2)  # Psi*_o F, odd in tau, so its Fourier transform is odd in lambda
    return tr.HorocycleFunction(np.tile(prof * np.exp(-tau), (grid.n_beta, 1)).astype(complex), grid.beta, grid.tau)


def suite_properties(ctx: Context) -> list[CheckRecord]:
    cfg, grid, norm = ctx.config, ctx.grid, ctx.norm
    rng = ctx.rng("properties")
    probes = _probes(rng)
    f = ctx.bumps("properties")[0]
    out = []
    H = tr.helgason_grid(f, norm, grid)
    v = tr.property_sharp_defect(H, probes, norm)
    out.append(record("sharp_helgason", "property-sharp", v, 0.0, v, cfg.tol("properties")))
    v = tr.property_sharp_defect(odd_profile_spectral(grid), probes, norm)
    out.append(record("sharp_positive_control", "property-sharp", v, 0.1, 0.0 if v > 0.1 else 1.0, 0.0))
    zero_s = tr.SpectralFunction(np.zeros((grid.n_beta_spectral, grid.lam.n), complex), grid.beta_spectral, grid.lam)
    v = tr.property_sharp_defect(zero_s, probes, norm)
    out.append(record("sharp_zero", "property-sharp", v, 0.0, v, 0.0))
    R = tr.radon_grid(f, norm, grid)
    v = tr.property_flat_defect(R, probes, norm, grid.lam)
    out.append(record("flat_radon", "cor:radonbemolle", v, 0.0, v, cfg.tol("properties")))
    Q = tr.q_operator(f, norm, grid)
    v = tr.property_flat_defect(Q, probes, norm, grid.lam)
    out.append(record("flat_q", "cor:lambda", v, 0.0, v, cfg.tol("properties")))
    v = tr.property_flat_defect(odd_profile_horocycle(grid), probes, norm, grid.lam)
    out.append(record("flat_positive_control", "eq:foundamentalrelation", v, 0.1, 0.0 if v > 0.1 else 1.0, 0.0))
    zero_h = tr.HorocycleFunction(np.zeros((grid.n_beta, grid.tau.n), complex), grid.beta, grid.tau)
    v = tr.property_flat_defect(zero_h, probes, norm, grid.lam)
    out.append(record("flat_zero", "eq:foundamentalrelation", v, 0.0, v, 0.0))
    return out


# --------------------------------------------------------------------------
# SP(d, R)


def suite_spd(ctx: Context) -> list[CheckRecord]:
    rng = ctx.rng("spd")
    out = []
    for d in (2, 3, 5):
        member = 0
        perturbed = 0
        udu = 0.0
        iso = 0.0
        total = 1000
        for _ in range(total):
            k = spd.random_rotation(rng, d)
            a_log = rng.uniform(-1, 1, d)
            a_log -= a_log.mean()
            n_par = rng.uniform(-1, 1, d * (d - 1) // 2)
            base = spd.n_orbit_point(a_log, n_par)
            p = spd.congruence_action(k, base)
            member += spd.horocycle_membership_spd(p, k, a_log)
            m = p.p.copy()
            i = rng.integers(d)
            m[i, i] *= 1 + 1e-3
            perturbed += spd.horocycle_membership_spd(spd.SPDPoint.normalized(m), k, a_log)
            fac = spd.udu_decompose(p)
            udu = max(udu, _maxabs(fac.reassemble() - p.p) / _maxabs(p.p))
            k2 = spd.random_rotation(rng, d)
            ev = np.linalg.eigvalsh(p.p)
            iso = max(iso, _maxabs(np.linalg.eigvalsh(spd.congruence_action(k2, p).p) - ev) / ev[-1])
        out += [
            record(f"spd{d}_membership_forward_points", "spd-horocycle", member, total, total - member, 0.0),
            record(f"spd{d}_membership_rejects_perturbed", "spd-horocycle", perturbed, 0, perturbed, 0.0),
            record(f"spd{d}_udu_reassembly", "udu-decomposition", 0.0, 0.0, udu, 1e-10),
            record(f"spd{d}_k_orbit_isospectral", "spd-horocycle", 0.0, 0.0, iso, 1e-10),
        ]
    # exact a^2 diagonal from (a n)(a n)^T
    worst = prod = 0.0
    for d in range(2, 7):
        a_log = rng.uniform(-1, 1, d)
        a_log -= a_log.mean()
        n_par = rng.uniform(-1, 1, d * (d - 1) // 2)
        p = spd.n_orbit_point(a_log, n_par)
        worst = max(worst, _maxabs(spd.udu_decompose(p).diag / np.exp(2 * a_log) - 1))
        n = np.eye(d)
        n[np.triu_indices(d, 1)] = n_par
        an = np.diag(np.exp(a_log)) @ n
        prod = max(prod, _maxabs(p.p - an @ an.T))
    out.append(record("udu_diagonal_is_a_squared", "udu-decomposition", 0.0, 0.0, worst, 1e-10))
    out.append(record("n_orbit_point_matches_product", "spd-horocycle", 0.0, 0.0, prod, 1e-12))
    # congruence action, metric, geodesic symmetry
    law = det = wit = inv = pos = sym = fix = 0.0
    for _ in range(100):
        d = int(rng.integers(2, 6))
        g, h = spd.random_sl(rng, d), spd.random_sl(rng, d)
        p, q = spd.random_spd(rng, d), spd.random_spd(rng, d)
        lhs = spd.congruence_action(g, spd.congruence_action(h, p)).p
        law = max(law, _maxabs(lhs - spd.congruence_action(g.entries @ h.entries, p).p) / _maxabs(lhs))
        det = max(det, abs(np.linalg.det(spd.congruence_action(g, p).p) - 1))
        wit = max(wit, _maxabs(spd.congruence_action(spd.spectral_sqrt(p), spd.SPDPoint.identity(d)).p - p.p))
        X = rng.standard_normal((d, d))
        X = X + X.T
        Y = rng.standard_normal((d, d))
        Y = Y + Y.T
        ip = spd.trace_metric(p, X, Y)
        gm = g.entries
        inv = max(inv, abs(spd.trace_metric(spd.congruence_action(g, p), gm @ X @ gm.T, gm @ Y @ gm.T) - ip)
                  / max(1.0, abs(ip)))
        pos = max(pos, 0.0 if spd.trace_metric(p, X, X) > 0 else 1.0)
        sym = max(sym, _maxabs(spd.geodesic_symmetry(p, spd.geodesic_symmetry(p, q)).p - q.p) / _maxabs(q.p))
        fix = max(fix, _maxabs(spd.geodesic_symmetry(p, p).p - p.p))
    out += [
        record("congruence_group_law", "actionPnr", 0.0, 0.0, law, 1e-10),
        record("congruence_preserves_det", "actionPnr", 0.0, 0.0, det, 1e-10),
        record("congruence_transitivity_witness", "actionPnr", 0.0, 0.0, wit, 1e-10),
        record("trace_metric_invariance", "RiemPnr", 0.0, 0.0, inv, 1e-10),
        record("trace_metric_positive", "RiemPnr", 0.0, 0.0, pos, 0.0),
        record("geodesic_symmetry_involution", "geodesic-symmetry", 0.0, 0.0, sym, 1e-10),
        record("geodesic_symmetry_fixes_p", "geodesic-symmetry", 0.0, 0.0, fix, 1e-10),
    ]
    # sigma_p is an isometry: compare metric at q with metric at sigma_p(q) via finite differences
    iso_fd = 0.0
    for _ in range(10):
        d = int(rng.integers(2, 5))
        p, q = spd.random_spd(rng, d), spd.random_spd(rng, d)
        X = rng.standard_normal((d, d))
        X = X + X.T
        X -= np.trace(np.linalg.solve(q.p, X)) / d * q.p  # tangent to the det-1 leaf
        eps = 1e-5

        def curve(e):
            w, v = np.linalg.eigh(q.p)
            root = (v * np.sqrt(w)) @ v.T
            m = root @ _expm_sym(e * np.linalg.solve(root, np.linalg.solve(root, X).T).T) @ root
            return spd.SPDPoint.normalized(m)

        dfd = (spd.geodesic_symmetry(p, curve(eps)).p - spd.geodesic_symmetry(p, curve(-eps)).p) / (2 * eps)
        dfd = 0.5 * (dfd + dfd.T)
        exact = spd.geodesic_symmetry_differential(p, q, X)
        sq = spd.geodesic_symmetry(p, q)
        lhs = spd.trace_metric(sq, dfd, dfd)
        rhs = spd.trace_metric(q, X, X)
        iso_fd = max(iso_fd, abs(lhs - rhs) / rhs, _maxabs(dfd - exact) / _maxabs(exact))
    out.append(record("geodesic_symmetry_isometry_fd", "geodesic-symmetry", 0.0, 0.0, iso_fd, 1e-6))
    # every K-orbit meets A_+[I]
    diag = 0.0
    for _ in range(50):
        d = int(rng.integers(2, 7))
        p = spd.random_spd(rng, d)
        k, w = spd.diagonal_representative(p)
        dm = k.T @ p.p @ k
        diag = max(diag, _maxabs(dm - np.diag(w)), 0.0 if np.all(np.diff(w) <= 0) else 1.0,
                   abs(np.linalg.det(k) - 1))
    out.append(record("k_orbit_meets_diagonal_chamber", "spd-horocycle", 0.0, 0.0, diag, 1e-10))
    # N-orbit and Nbar-orbit of a point meet only at the point (d = 2)
    worst = 0.0
    for _ in range(20):
        p = spd.random_spd(rng, 2)
        # q = n_x p n_x^T lies in N[p]; it lies in Nbar[p] only for x = 0
        xs = np.linspace(-2, 2, 81)
        hits = [x for x in xs if spd.nbar_orbit_contains(p, spd.congruence_action(np.array([[1, x], [0, 1]]), p), 1e-9)]
        worst = max(worst, max((abs(x) for x in hits), default=1.0))
    out.append(record("n_and_nbar_orbits_meet_at_point", "spd-horocycle", worst, 0.0, worst, 1e-12))
    return out


def _expm_sym(m):
    m = 0.5 * (m + m.T)
    w, v = np.linalg.eigh(m)
    return (v * np.exp(w)) @ v.T


SUITE_FUNCTIONS: dict[str, Callable[[Context], list[CheckRecord]]] = {
    "structure": suite_structure,
    "geometry": suite_geometry,
    "slice": suite_slice,
    "plancherel": suite_plancherel,
    "unitarity": suite_unitarity,
    "intertwine": suite_intertwine,
    "properties": suite_properties,
    "spd": suite_spd,
}


def run_suite(name: str, ctx: Context) -> list[CheckRecord]:
    if name not in SUITE_FUNCTIONS:
        raise KeyError(f"unknown suite {name!r}")
    return sorted(SUITE_FUNCTIONS[name](ctx), key=lambda r: r.name)
