"""Acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line; ``conftest.py`` prints them in the
terminal summary, and ``python3 tests/test_acceptance.py`` prints them directly.
"""

import math
import time

import numpy as np
import pytest

from steklovlab.density import BoundaryDensity, catenoid_density
from steklovlab.geometry import RadialCurve, build_annular_domain, mesh_domain
from steklovlab.lab import ExperimentConfig, bound_verdict, run_experiment
from steklovlab.oracle import annulus_spectrum, catenoid_annulus, cylinder_spectrum, solve_t1
from steklovlab.steklov_fem import assemble, dtn_matrix, full_pencil_spectrum, mesh_spectrum, solve_pencil

RESULTS: dict[int, str] = {}
TEETH = [8, 16, 32, 64, 128]


def record(number, ok, text):
    RESULTS[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {text}"
    print(RESULTS[number])
    return ok


def timed(cfg):
    t0 = time.perf_counter()
    report = run_experiment(cfg)
    return report, time.perf_counter() - t0


@pytest.fixture(scope="module")
def disk_run():
    return timed(ExperimentConfig(experiment="disk-validate", n_theta=512, n_radial=64, levels=3))


@pytest.fixture(scope="module")
def annulus_run():
    return timed(ExperimentConfig(experiment="annulus-validate", n_theta=512, n_radial=64, levels=3))


@pytest.fixture(scope="module")
def catenoid_run():
    return timed(ExperimentConfig(experiment="catenoid-weighted", n_theta=512, n_radial=64, levels=3))


@pytest.fixture(scope="module")
def homogenise_run():
    return timed(ExperimentConfig(experiment="homogenise-converge", teeth=TEETH))


@pytest.fixture(scope="module")
def pairing_run():
    return timed(ExperimentConfig(experiment="pairing-decay", teeth=TEETH))


def finest(report, k):
    n = max(r.n_theta for r in report.rows)
    return [r for r in report.rows if r.n_theta == n and r.k == k][0]


def test_criterion_1_disk(disk_run):
    report, wall = disk_run
    errs = [finest(report, k).rel_err for k in range(1, 7)]
    s1 = finest(report, 1).sigma_bar
    ok = max(errs) < 1e-3 and abs(s1 - 2 * math.pi) < 1e-3 * 2 * math.pi and wall < 60.0
    record(1, ok, f"max rel err {max(errs):.3e} < 1e-3, |sigma_bar_1 - 2pi| = {abs(s1 - 2 * math.pi):.3e}, {wall:.1f}s < 60s")
    assert ok


def test_criterion_2_annulus(annulus_run):
    report, _ = annulus_run
    levels = report.extras["max_rel_err_per_level"]
    decreasing = all(b < a for a, b in zip(levels, levels[1:]))
    ok = levels[-1] < 1e-3 and decreasing and len(levels) >= 3
    record(2, ok, f"per-level max rel err {[f'{e:.2e}' for e in levels]} (finest < 1e-3, decreasing)")
    assert ok


def test_criterion_3_catenoid_target(catenoid_run):
    report, _ = catenoid_run
    c = solve_t1()
    err = abs(finest(report, 1).sigma_bar - c.target) / c.target
    r, R = catenoid_annulus()
    ann = annulus_spectrum(r, R, R / r, 1.0, 8) * (2 * math.pi * R + 2 * math.pi * r * (R / r))
    cyl = cylinder_spectrum(c.t1, 8) * 4 * math.pi
    conformal = float(np.max(np.abs(ann - cyl) / np.maximum(cyl, 1.0)))
    coarse = f"{4 * math.pi / 1.2:.3g}" == f"{c.target:.3g}"
    ok = err < 1e-3 and conformal <= 1e-10 and coarse
    record(3, ok, f"sigma_bar_1 rel err {err:.3e} < 1e-3, annulus/cylinder gap {conformal:.1e} <= 1e-10, "
                  f"4pi/1.2={4 * math.pi / 1.2:.4f} vs {c.target:.4f} (3 s.f.)")
    assert ok


def test_criterion_4_homogenisation(homogenise_run):
    report, wall = homogenise_run
    target = solve_t1().target
    values = report.extras["sigma_bar_1"]
    errs = [abs(v - target) for v in values]
    decreasing = all(b < a for a, b in zip(errs, errs[1:]))
    final = errs[-1] / target
    below = all(v <= target + 1e-3 for v in values)
    ok = decreasing and final < 0.05 and below and wall < 900.0
    record(4, ok, f"sigma_bar_1 {[round(v, 4) for v in values]}; strictly decreasing error={decreasing}; "
                  f"rel err at n=128 {final:.4f} (< 0.05); all <= target+1e-3={below}; {wall:.0f}s < 900s")
    assert ok


def test_criterion_5_hausdorff_and_volume(homogenise_run):
    report, _ = homogenise_run
    haus = [v for v in report.verdicts if v.name.startswith("hausdorff")]
    area = report.verdict("area loss <= C eps")
    topo = [v for v in report.verdicts if v.name.startswith("mesh topology")]
    ok = len(haus) == len(TEETH) and all(v.passed for v in haus + topo) and area.passed
    worst = max(v.value / v.tolerance for v in haus)
    record(5, ok, f"max Hausdorff/(2 eps max alpha) = {worst:.3f} <= 1; area loss <= C eps with C = {area.value:.4f}")
    assert ok


def test_criterion_6_pairing_decay(pairing_run):
    report, _ = pairing_run
    slopes = {f: report.extras[f"slope_{f}"] for f in ("one", "x", "y")}
    ok = all(s >= 0.9 for s in slopes.values())
    record(6, ok, "fitted slopes " + ", ".join(f"{f}={s:.3f}" for f, s in slopes.items()) + " (>= 0.9)")
    assert ok


def test_criterion_7_universal_bound(disk_run, annulus_run, catenoid_run, homogenise_run):
    rows = [r for run in (disk_run, annulus_run, catenoid_run, homogenise_run) for r in run[0].rows]
    v = bound_verdict(rows, 1e-6)
    record(7, v.passed, f"max(sigma_bar_k - 8 pi k) = {v.value:.3e} over {len(rows)} rows (<= 1e-6)")
    assert v.passed


def test_criterion_8_exact_invariants(disk_run, annulus_run, catenoid_run, homogenise_run):
    r, R = catenoid_annulus()
    d = build_annular_domain(RadialCurve.constant(R, 64), RadialCurve.constant(r, 64))
    mesh = mesh_domain(d, 64, 8)
    beta = catenoid_density(r, R)
    base = mesh_spectrum(mesh, beta, 6)
    scale_gap = 0.0
    for c in (1.5, 7.0, 40.0):
        s = mesh_spectrum(mesh, beta.scaled(c), 6)
        scale_gap = max(scale_gap, float(np.max(np.abs(s.raw[1:] * c - base.raw[1:]) / base.raw[1:])))
    dil_gap = 0.0
    for c in (0.01, 3.0, 250.0):
        s = mesh_spectrum(mesh.scaled(c), beta, 6)
        dil_gap = max(dil_gap, float(np.max(np.abs(s.normalised[1:] - base.normalised[1:]) / base.normalised[1:])))
    rows = [row for run in (disk_run, annulus_run, catenoid_run, homogenise_run) for row in run[0].rows]
    kernel = max(abs(row.sigma) for row in rows if row.k == 0)
    disk = mesh_domain(build_annular_domain(RadialCurve.constant(1.0, 32)), 32, 6)
    system = assemble(disk, BoundaryDensity())
    reduced = solve_pencil(dtn_matrix(system), system.boundary_mass, 8).values
    full = full_pencil_spectrum(system, 8)
    schur_gap = float(np.max(np.abs(full[1:] - reduced[1:]) / reduced[1:]))
    ok = scale_gap <= 1e-10 and dil_gap <= 1e-10 and kernel <= 1e-8 and schur_gap <= 1e-10
    record(8, ok, f"density scaling {scale_gap:.1e}, dilation {dil_gap:.1e}, max sigma_0 {kernel:.1e}, "
                  f"Schur vs full pencil {schur_gap:.1e}")
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
