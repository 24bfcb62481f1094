"""Acceptance battery: one test per criterion, each printing a PASS/FAIL line.

Thresholds are written out here from the criteria themselves rather than read
from the record tolerances, so loosening a suite default cannot turn a
criterion green.  Run with ``pytest tests/test_acceptance.py -s`` or directly
with ``python3 tests/test_acceptance.py``.
"""
import math
import subprocess
import sys
import time
from dataclasses import dataclass

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from hororadon import suites
from hororadon import transforms as tr


@dataclass
class Check:
    what: str
    value: float
    bound: float
    above: bool = False  # True for lower bounds (value must exceed bound)

    @property
    def ok(self) -> bool:
        if not math.isfinite(self.value):
            return False
        return self.value > self.bound if self.above else self.value < self.bound

    def __str__(self):
        op = ">" if self.above else "<"
        return f"{self.what}={self.value:.3g} {op} {self.bound:g}"


def tightness(c: Check) -> float:
    """Fraction of the allowed margin used; 1 means at the bound."""
    if c.above:
        return c.bound / max(c.value, 1e-300)
    return c.value / c.bound


def conclude(number: int, title: str, checks: list[Check]):
    bad = [c for c in checks if not c.ok]
    shown = bad if bad else sorted(checks, key=tightness, reverse=True)[:3]
    verdict = "PASS" if not bad else "FAIL"
    line = f"{verdict} criterion {number:2d} ({title}): " + "; ".join(map(str, shown))
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not bad, line


@pytest.fixture(scope="module")
def ctx():
    config = suites.RunConfig()
    return suites.Context(config, suites.calibrate(config, with_refinement=False))


_cache: dict = {}


def run(ctx, name):
    if name not in _cache:
        t0 = time.perf_counter()
        recs = suites.run_suite(name, ctx)
        _cache[name] = ({r.name: r for r in recs}, time.perf_counter() - t0)
    return _cache[name]


def residuals(recs, names, bound):
    return [Check(n, float(recs[n].residual), bound) for n in names]


def test_criterion_01_structure(ctx):
    recs, dt = run(ctx, "structure")
    names = [f"sl{d}_{kind}_reassembly" for d in (2, 3, 4, 6) for kind in ("kan", "nak")]
    names += ["su11_kan_reassembly", "su11_nak_reassembly"]
    checks = residuals(recs, names, 1e-12)
    checks += residuals(recs, ["rho_closed_form_vs_root_half_sum"], 1e-12)
    checks += residuals(recs, ["modular_function_homomorphism", "modular_function_vs_ad_determinant"], 1e-10)
    checks.append(Check("runtime_s", dt, 10.0))
    conclude(1, "structure", checks)


def test_criterion_02_geometry(ctx):
    recs, dt = run(ctx, "geometry")
    checks = residuals(recs, ["cocycle", "composite_distance_g_invariance", "n_orbit_of_origin_circle"], 1e-10)
    checks += residuals(recs, ["boundary_measure_total_mass", "boundary_measure_quasi_invariance",
                               "boundary_measure_dual_relation"], 1e-8)
    checks.append(Check("runtime_s", dt, 30.0))
    conclude(2, "geometry", checks)


def test_criterion_03_fourier_slice(ctx):
    recs, dt = run(ctx, "slice")
    default = sorted(n for n in recs if n.startswith("slice_default_bump"))
    doubled = sorted(n for n in recs if n.startswith("slice_doubled_bump"))
    checks = [Check("bumps_default", len(default), 4.5, above=True), Check("bumps_doubled", len(doubled), 4.5, above=True)]
    checks += residuals(recs, default, 1e-3) + residuals(recs, doubled, 1e-4)
    checks.append(Check("runtime_s", dt, 120.0))
    conclude(3, "Fourier slice", checks)


def test_criterion_04_c_function():
    t0 = time.perf_counter()
    lam = np.geomspace(0.05, 50.0, 4000)
    gamma_based = 1.0 / np.abs(tr.c_complex(lam)) ** 2
    closed = (np.pi * lam / 2) * np.tanh(np.pi * lam / 2)
    err = float(np.max(np.abs(gamma_based - closed) / closed))
    dt = time.perf_counter() - t0
    conclude(4, "c-function", [Check("max_rel_err", err, 1e-9), Check("runtime_s", dt, 1.0)])


def test_criterion_05_plancherel(ctx):
    recs, _ = run(ctx, "plancherel")
    bumps = sorted(n for n in recs if n.startswith("plancherel_bump"))
    checks = [Check("bumps", len(bumps), 4.5, above=True)]
    checks += residuals(recs, bumps, 1e-3)
    checks += residuals(recs, ["kappa_spread"], 1e-3)
    conclude(5, "Plancherel", checks)


def test_criterion_06_unitarity(ctx):
    recs, _ = run(ctx, "unitarity")
    checks = []
    for i in range(5):
        default, refined = recs[f"unitarity_bump{i}"].residual, recs[f"unitarity_refined_bump{i}"].residual
        checks.append(Check(f"defect_bump{i}", default, 1e-3))
        checks.append(Check(f"refined_over_default_bump{i}", refined / default, 1.0))
    conclude(6, "unitarity", checks)


def test_criterion_07_intertwining(ctx):
    recs, _ = run(ctx, "intertwine")
    names = [f"{op}_intertwining{sep}{g}" for op, sep in (("radon", "_l2_"), ("q", "_")) for g in "kan"]
    conclude(7, "intertwining", residuals(recs, names, 1e-3))


def test_criterion_08_properties(ctx):
    recs, _ = run(ctx, "properties")
    checks = residuals(recs, ["sharp_helgason", "flat_radon", "flat_q"], 1e-3)
    for n in ("sharp_positive_control", "flat_positive_control"):
        checks.append(Check(n, float(recs[n].lhs), 0.1, above=True))
    conclude(8, "properties", checks)


def test_criterion_09_spd(ctx):
    recs, dt = run(ctx, "spd")
    checks = []
    for d in (2, 3, 5):
        fwd = recs[f"spd{d}_membership_forward_points"]
        checks.append(Check(f"spd{d}_forward_points", float(fwd.lhs), 999.5, above=True))
        checks.append(Check(f"spd{d}_forward_misses", float(fwd.residual), 0.5))
        checks.append(Check(f"spd{d}_perturbed_accepted", float(recs[f"spd{d}_membership_rejects_perturbed"].lhs), 0.5))
        checks += residuals(recs, [f"spd{d}_udu_reassembly", f"spd{d}_k_orbit_isospectral"], 1e-10)
    checks.append(Check("runtime_s", dt, 20.0))
    conclude(9, "SPD", checks)


def test_criterion_10_full_battery_deterministic(tmp_path):
    outputs, times, codes = [], [], []
    for i in range(2):
        out = tmp_path / f"run{i}.json"
        t0 = time.perf_counter()
        proc = subprocess.run([sys.executable, "-m", "hororadon.cli", "verify", "all", "--out", str(out)],
                              capture_output=True, text=True)
        times.append(time.perf_counter() - t0)
        codes.append(proc.returncode)
        outputs.append(out.read_bytes() if out.exists() else b"")
    checks = [Check(f"runtime_s_run{i}", t, 300.0) for i, t in enumerate(times)]
    checks += [Check(f"exit_code_run{i}", c, 0.5) for i, c in enumerate(codes)]
    checks.append(Check("report_bytes_differ", float(outputs[0] != outputs[1] or not outputs[0]), 0.5))
    conclude(10, "full battery", checks)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
