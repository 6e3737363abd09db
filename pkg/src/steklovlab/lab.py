"""Experiment driver and command-line front end.

Each experiment produces a :class:`RunReport`: spectral rows in the CSV
schema below plus boolean verdicts that carry the tolerance they were checked
against. ``steklovlab <experiment>`` exits with status 0 iff every verdict
passes.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .density import BoundaryDensity, catenoid_density, weighted_boundary_length
from .errors import ConfigInvalid, IOFailure, SteklovLabError
from .geometry import (
    RadialCurve,
    build_annular_domain,
    dump_mesh,
    hausdorff_distance,
    mesh_domain,
    validate_mesh,
)
from .homogenise import HomogenisationSpec, fit_loglog_slope, homogenise_with_details, pairing_defect
from .oracle import annulus_spectrum, catenoid_annulus, cylinder_spectrum, disk_spectrum, solve_t1
from .steklov_fem import mesh_spectrum, steklov_spectrum

EXPERIMENTS = (
    "disk-validate",
    "annulus-validate",
    "catenoid-weighted",
    "homogenise-converge",
    "pairing-decay",
    "bound-check",
)
CSV_HEADER = "experiment,eps,teeth,n_theta,n_radial,k,sigma,sigma_bar,target,rel_err,residual,wall_ms"
PAIRING_FUNCTIONS = ("one", "x", "y")


@dataclass
class ExperimentConfig:
    experiment: str
    r: float | None = None
    R: float | None = None
    density: object = None
    teeth: list[int] = field(default_factory=lambda: [8, 16, 32, 64, 128])
    n_theta: int | None = None
    n_radial: int | None = None
    levels: int | None = None
    grading: float | None = None
    k_max: int = 6
    samples_per_tooth: int = 8
    csv: str | None = None
    svg: str | None = None
    dump_mesh: str | None = None
    rel_tol: float = 1e-3
    homogenise_rel_tol: float = 0.05
    target_slack: float = 1e-3
    bound_slack: float = 1e-6
    kernel_tol: float = 1e-8
    conformal_tol: float = 1e-10
    slope_min: float = 0.9

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigInvalid(f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        self.teeth = [int(t) for t in self.teeth]
        if not self.teeth or any(t < 4 for t in self.teeth):
            raise ConfigInvalid("teeth counts must be integers >= 4")
        if any(b <= a for a, b in zip(self.teeth, self.teeth[1:])):
            raise ConfigInvalid(f"teeth list must be strictly ascending, got {self.teeth}")
        for name in ("n_theta", "n_radial", "levels", "k_max", "samples_per_tooth"):
            v = getattr(self, name)
            if v is not None and (int(v) != v or v < 1):
                raise ConfigInvalid(f"{name} must be a positive integer, got {v!r}")
        for name in ("r", "R", "grading"):
            v = getattr(self, name)
            if v is not None and not v > 0.0:
                raise ConfigInvalid(f"{name} must be positive, got {v!r}")
        if self.r is not None and self.R is not None and self.r >= self.R:
            raise ConfigInvalid(f"need r < R, got r={self.r}, R={self.R}")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigInvalid(f"unknown config key(s): {', '.join(sorted(unknown))}")
        if "experiment" not in data:
            raise ConfigInvalid("config lacks the 'experiment' key")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigInvalid(str(exc)) from exc

    @classmethod
    def load(cls, path, **overrides) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text())
        except OSError as exc:
            raise IOFailure(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigInvalid("config must be a JSON object")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_dict(data)


@dataclass
class Row:
    experiment: str
    eps: float | None
    teeth: int | None
    n_theta: int
    n_radial: int
    k: int | None
    sigma: float | None
    sigma_bar: float | None
    target: float | None
    rel_err: float | None
    residual: float | None
    wall_ms: float | None


ROW_TYPES = {
    "experiment": str,
    "eps": float,
    "teeth": int,
    "n_theta": int,
    "n_radial": int,
    "k": int,
    "sigma": float,
    "sigma_bar": float,
    "target": float,
    "rel_err": float,
    "residual": float,
    "wall_ms": float,
}


@dataclass
class Verdict:
    name: str
    passed: bool
    value: float | None
    tolerance: float | None
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: value={self.value!r} tol={self.tolerance!r} {self.detail}".rstrip()


@dataclass
class RunReport:
    config: ExperimentConfig
    rows: list[Row] = field(default_factory=list)
    verdicts: list[Verdict] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def verdict(self, name: str) -> Verdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)


def _rel(value, target):
    return None if target == 0.0 else abs(value - target) / abs(target)


def _level_sizes(cfg: ExperimentConfig, n_theta: int, n_radial: int, levels: int) -> list[tuple[int, int]]:
    n_theta = cfg.n_theta or n_theta
    n_radial = cfg.n_radial or n_radial
    levels = cfg.levels or levels
    sizes = [(n_theta >> (levels - 1 - i), n_radial >> (levels - 1 - i)) for i in range(levels)]
    if sizes[0][0] < 8 or sizes[0][1] < 2:
        raise ConfigInvalid(f"{levels} levels are too many for n_theta={n_theta}, n_radial={n_radial}")
    return sizes


def _spectral_rows(name, spec, targets, n_theta, n_radial, teeth=None, eps=None, normalised_targets=False):
    rows = []
    res = spec.metadata["residuals"]
    for k in range(spec.k_max + 1):
        target = None if targets is None else float(targets[k])
        value = float(spec.normalised[k] if normalised_targets else spec.raw[k])
        rows.append(
            Row(
                experiment=name,
                eps=eps,
                teeth=teeth,
                n_theta=n_theta,
                n_radial=n_radial,
                k=k,
                sigma=float(spec.raw[k]),
                sigma_bar=float(spec.normalised[k]),
                target=target,
                rel_err=None if target is None else _rel(value, target),
                residual=float(res[k]),
                wall_ms=float(spec.metadata["wall_ms"]),
            )
        )
    return rows


def _kernel_verdict(report: RunReport):
    worst = max(abs(r.sigma) for r in report.rows if r.k == 0 and r.sigma is not None)
    report.verdicts.append(Verdict("kernel sigma_0", worst <= report.config.kernel_tol, worst, report.config.kernel_tol))


def _level_study(report: RunReport, build, beta, exact, normalised: bool, sizes):
    """Run one spectrum per refinement level and check the finest level plus monotone decay."""
    cfg = report.config
    worst = []
    for n_theta, n_radial in sizes:
        spec = steklov_spectrum(build(n_theta), beta, n_theta, n_radial, cfg.k_max, cfg.grading or 1.0)
        rows = _spectral_rows(cfg.experiment, spec, exact, n_theta, n_radial, normalised_targets=normalised)
        report.rows += rows
        worst.append(max(r.rel_err for r in rows if r.rel_err is not None))
    report.extras["max_rel_err_per_level"] = worst
    report.verdicts.append(Verdict("finest level relative error", worst[-1] < cfg.rel_tol, worst[-1], cfg.rel_tol, f"k <= {cfg.k_max}"))
    decreasing = all(b < a for a, b in zip(worst, worst[1:]))
    report.verdicts.append(Verdict("errors decrease per level", decreasing, float(len(worst)), None, f"levels={len(worst)}"))
    _kernel_verdict(report)


def _disk_validate(report: RunReport):
    cfg = report.config
    radius = cfg.R or 1.0
    sizes = _level_sizes(cfg, 512, 64, 3)
    exact = disk_spectrum(cfg.k_max) / radius
    _level_study(report, lambda n: build_annular_domain(RadialCurve.constant(radius, n)), BoundaryDensity(outer=1.0, inner=None), exact, False, sizes)
    finest = [r for r in report.rows if r.n_theta == sizes[-1][0] and r.k == 1][0]
    err = abs(finest.sigma_bar - 2.0 * math.pi)
    tol = cfg.rel_tol * 2.0 * math.pi
    report.verdicts.append(Verdict("normalised sigma_1 vs 2 pi", err < tol, err, tol))


def _radii(cfg: ExperimentConfig) -> tuple[float, float]:
    r, R = catenoid_annulus(cfg.r or 1.0)
    return r, (cfg.R or R)


def _annulus(r, R):
    return lambda n: build_annular_domain(RadialCurve.constant(R, n), RadialCurve.constant(r, n))


def _constant_weights(beta: BoundaryDensity) -> tuple[float, float] | None:
    if isinstance(beta.inner, float) and isinstance(beta.outer, float):
        return beta.inner, beta.outer
    return None


def _annulus_validate(report: RunReport):
    cfg = report.config
    r, R = _radii(cfg)
    beta = BoundaryDensity.from_literal(cfg.density)
    weights = _constant_weights(beta)
    if weights is None:
        raise ConfigInvalid("annulus-validate needs a constant weight per circle")
    exact = annulus_spectrum(r, R, weights[0], weights[1], cfg.k_max)
    _level_study(report, _annulus(r, R), beta, exact, False, _level_sizes(cfg, 512, 64, 3))


def _weighted_targets(r, R, beta_in, beta_out, k_max) -> np.ndarray:
    length = 2.0 * math.pi * (R * beta_out + r * beta_in)
    return annulus_spectrum(r, R, beta_in, beta_out, k_max) * length


def _catenoid_weighted(report: RunReport):
    cfg = report.config
    r, R = _radii(cfg)
    consts = solve_t1()
    beta = catenoid_density(r, R) if cfg.density is None else BoundaryDensity.from_literal(cfg.density)
    weights = _constant_weights(beta)
    if weights is None:
        raise ConfigInvalid("catenoid-weighted needs a constant weight per circle")
    targets = _weighted_targets(r, R, weights[0], weights[1], cfg.k_max)
    sizes = _level_sizes(cfg, 512, 64, 3)
    for n_theta, n_radial in sizes:
        spec = steklov_spectrum(_annulus(r, R)(n_theta), beta, n_theta, n_radial, cfg.k_max, cfg.grading or 1.0)
        report.rows += _spectral_rows(cfg.experiment, spec, targets, n_theta, n_radial, normalised_targets=True)
    finest = [row for row in report.rows if row.n_theta == sizes[-1][0] and row.k == 1][0]
    err = _rel(finest.sigma_bar, consts.target)
    report.verdicts.append(Verdict("normalised sigma_1 vs 4 pi / t1", err < cfg.rel_tol, err, cfg.rel_tol, f"target={consts.target!r}"))
    # conformal cross-check of the two closed forms at the same modulus
    T = 0.5 * math.log(R / r)
    ann = annulus_spectrum(r, R, R / r, 1.0, cfg.k_max) * (4.0 * math.pi * R)
    cyl = cylinder_spectrum(T, cfg.k_max) * 4.0 * math.pi
    gap = float(np.max(np.abs(ann - cyl) / np.maximum(np.abs(cyl), 1.0)))
    report.verdicts.append(Verdict("annulus vs cylinder oracle", gap <= cfg.conformal_tol, gap, cfg.conformal_tol))
    report.extras["coarse_target_4pi_over_1_2"] = 4.0 * math.pi / 1.2
    _kernel_verdict(report)


def _homogenise_base(cfg: ExperimentConfig, n_samples: int):
    r, R = _radii(cfg)
    base = _annulus(r, R)(n_samples)
    beta = catenoid_density(r, R) if cfg.density is None else BoundaryDensity.from_literal(cfg.density)
    return base, beta, r, R


def _homogenise_converge(report: RunReport):
    cfg = report.config
    n_theta = cfg.n_theta or 1024
    n_radial = cfg.n_radial or 64
    grading = cfg.grading or 2.0
    base, beta, r, R = _homogenise_base(cfg, n_theta)
    weights = _constant_weights(beta)
    if weights is not None:
        targets = _weighted_targets(r, R, weights[0], weights[1], cfg.k_max)
    else:
        targets = steklov_spectrum(base, beta, n_theta, n_radial, cfg.k_max, grading).normalised
    base_area = base.polygon_area()
    errs, values, ratios = [], [], []
    for n in cfg.teeth:
        t0 = time.perf_counter()
        dom, details = homogenise_with_details(base, beta, HomogenisationSpec(n, samples_per_tooth=cfg.samples_per_tooth))
        mesh = mesh_domain(dom, n_theta, n_radial, grading)
        rep = validate_mesh(mesh, expected_components=2)
        spec = mesh_spectrum(mesh, BoundaryDensity(), cfg.k_max)
        spec.normalised = spec.raw * weighted_boundary_length(dom, BoundaryDensity())
        spec.metadata["wall_ms"] = 1e3 * (time.perf_counter() - t0)
        eps = max(p.eps for p in details.values())
        report.rows += _spectral_rows(cfg.experiment, spec, targets, n_theta, n_radial, teeth=n, eps=eps, normalised_targets=True)
        values.append(float(spec.normalised[1]))
        errs.append(abs(values[-1] - targets[1]))
        report.verdicts.append(Verdict(f"mesh topology n={n}", rep.ok, float(rep.euler_characteristic), None, "; ".join(rep.failures)))
        for comp, pert in details.items():
            h = hausdorff_distance(base.curve(comp), dom.curve(comp))
            bound = 2.0 * pert.eps * pert.max_alpha
            report.verdicts.append(Verdict(f"hausdorff {comp} n={n}", h <= bound, h, bound))
        ratios.append((base_area - dom.polygon_area()) / eps)
        if cfg.dump_mesh and n == cfg.teeth[-1]:
            dump_mesh(mesh, cfg.dump_mesh)
    report.extras.update(sigma_bar_1=values, abs_err=errs, area_loss_over_eps=ratios, target=float(targets[1]))
    decreasing = all(b < a for a, b in zip(errs, errs[1:]))
    report.verdicts.append(Verdict("|sigma_bar_1 - target| strictly decreasing", decreasing, errs[-1], None))
    final = errs[-1] / targets[1]
    report.verdicts.append(
        Verdict(f"relative error at n={cfg.teeth[-1]}", final < cfg.homogenise_rel_tol, final, cfg.homogenise_rel_tol)
    )
    worst = max(values) - targets[1]
    report.verdicts.append(Verdict("sigma_bar_1 <= target + slack", worst <= cfg.target_slack, worst, cfg.target_slack))
    # a single constant C = loss/eps at the coarsest comb must bound every finer one
    C = ratios[0]
    excess = max(ratio - C for ratio in ratios)
    report.verdicts.append(Verdict("area loss <= C eps", excess <= 1e-12 * abs(C), C, None, f"C={C!r}"))
    _kernel_verdict(report)


def default_pairing_density(r: float, R: float, n: int) -> BoundaryDensity:
    """Catenoid weight on the outer circle and a non-symmetric multiple of it
    inside, so that no first moment cancels by symmetry."""
    theta = 2.0 * math.pi * np.arange(n) / n
    inner = (R / r) * (1.0 + 0.3 * np.cos(theta) + 0.2 * np.sin(theta))
    return BoundaryDensity(outer=1.0, inner=inner)


def _pairing_decay(report: RunReport):
    cfg = report.config
    n_samples = cfg.n_theta or 1024
    r, R = _radii(cfg)
    base = _annulus(r, R)(n_samples)
    beta = default_pairing_density(r, R, n_samples) if cfg.density is None else BoundaryDensity.from_literal(cfg.density)
    defects = {f: [] for f in PAIRING_FUNCTIONS}
    eps_list = []
    for n in cfg.teeth:
        t0 = time.perf_counter()
        dom, details = homogenise_with_details(base, beta, HomogenisationSpec(n, samples_per_tooth=cfg.samples_per_tooth))
        eps = max(p.eps for p in details.values())
        eps_list.append(eps)
        for f in PAIRING_FUNCTIONS:
            d = pairing_defect(base, dom, beta, f)
            defects[f].append(d)
            report.rows.append(
                Row(f"pairing-decay:{f}", eps, n, n_samples, 0, None, d, None, 0.0, None, None, 1e3 * (time.perf_counter() - t0))
            )
    report.extras["defects"] = defects
    report.extras["eps"] = eps_list
    for f in PAIRING_FUNCTIONS:
        slope = fit_loglog_slope(eps_list, defects[f])
        report.extras[f"slope_{f}"] = slope
        report.verdicts.append(Verdict(f"pairing slope {f}", slope >= cfg.slope_min, slope, cfg.slope_min))


def bound_verdict(rows: list[Row], slack: float) -> Verdict:
    worst = -math.inf
    for row in rows:
        if row.k is None or row.sigma_bar is None:
            continue
        worst = max(worst, row.sigma_bar - 8.0 * math.pi * row.k)
    return Verdict("sigma_bar_k <= 8 pi k", worst <= slack, worst, slack, f"rows={len(rows)}")


DEFAULT_SUITE = ("disk-validate", "annulus-validate", "catenoid-weighted", "homogenise-converge")


def _bound_check(report: RunReport):
    cfg = report.config
    for name in DEFAULT_SUITE:
        sub = run_experiment(replace(cfg, experiment=name, csv=None, svg=None, dump_mesh=None))
        report.rows += sub.rows
    report.verdicts.append(bound_verdict(report.rows, cfg.bound_slack))
    _kernel_verdict(report)


RUNNERS = {
    "disk-validate": _disk_validate,
    "annulus-validate": _annulus_validate,
    "catenoid-weighted": _catenoid_weighted,
    "homogenise-converge": _homogenise_converge,
    "pairing-decay": _pairing_decay,
    "bound-check": _bound_check,
}


def run_experiment(config: ExperimentConfig) -> RunReport:
    report = RunReport(config)
    RUNNERS[config.experiment](report)
    if config.experiment != "bound-check" and any(r.k is not None for r in report.rows):
        report.verdicts.append(bound_verdict(report.rows, config.bound_slack))
    if config.csv or config.svg:
        emit_outputs(report, config.csv, config.svg)
    return report


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(rows: list[Row], path) -> None:
    try:
        with open(path, "w", newline="") as fh:
            fh.write(CSV_HEADER + "\n")
            w = csv.writer(fh, lineterminator="\n")
            for row in rows:
                w.writerow([_fmt(v) for v in asdict(row).values()])
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc


def read_csv(path) -> list[Row]:
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if ",".join(header) != CSV_HEADER:
                raise ConfigInvalid(f"unexpected CSV header in {path}")
            out = []
            for rec in reader:
                vals = {k: (None if s == "" else ROW_TYPES[k](s)) for k, s in zip(ROW_TYPES, rec)}
                out.append(Row(**vals))
            return out
    except OSError as exc:
        raise IOFailure(f"cannot read {path}: {exc}") from exc


def render_svg(report: RunReport, width: int = 640, height: int = 400) -> str:
    """Static plot of sigma_bar_1 against teeth count (log x), or against
    n_theta for refinement studies, with the target as one horizontal line."""
    pts = [r for r in report.rows if r.k == 1 and r.sigma_bar is not None]
    use_teeth = any(r.teeth is not None for r in pts)
    xs = np.array([float(r.teeth if use_teeth else r.n_theta) for r in pts])
    ys = np.array([r.sigma_bar for r in pts])
    targets = [r.target for r in pts if r.target is not None]
    target = targets[0] if targets else None
    left, right, top, bottom = 70, 20, 20, 50
    pw, ph = width - left - right, height - top - bottom
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<path class="axes" d="M{left},{top} V{top + ph} H{left + pw}" stroke="black" fill="none"/>',
        f'<text x="{left + pw / 2}" y="{height - 12}" text-anchor="middle" font-size="13">'
        f'{"teeth n (log scale)" if use_teeth else "n_theta (log scale)"}</text>',
        f'<text x="16" y="{top + ph / 2}" font-size="13" transform="rotate(-90 16 {top + ph / 2})" text-anchor="middle">sigma_bar_1</text>',
    ]
    if xs.size:
        lx = np.log(xs)
        x0, x1 = lx.min(), lx.max()
        if x1 == x0:
            x0, x1 = x0 - 1.0, x1 + 1.0
        yv = list(ys) + ([target] if target is not None else [])
        y0, y1 = min(yv), max(yv)
        pad = 0.1 * (y1 - y0) if y1 > y0 else 1.0
        y0, y1 = y0 - pad, y1 + pad

        def X(v):
            return left + pw * (math.log(v) - x0) / (x1 - x0)

        def Y(v):
            return top + ph * (1.0 - (v - y0) / (y1 - y0))

        for v in sorted(set(xs)):
            parts.append(f'<text x="{X(v):.2f}" y="{top + ph + 18}" text-anchor="middle" font-size="11">{v:g}</text>')
        for v in np.linspace(y0, y1, 5):
            parts.append(f'<text x="{left - 6}" y="{Y(v) + 4:.2f}" text-anchor="end" font-size="11">{v:.3f}</text>')
        if target is not None:
            parts.append(
                f'<line class="target" x1="{left}" y1="{Y(target):.2f}" x2="{left + pw}" y2="{Y(target):.2f}" '
                'stroke="red" stroke-dasharray="6,4"/>'
            )
        order = np.argsort(xs, kind="stable")
        path = " ".join(f"{X(xs[i]):.2f},{Y(ys[i]):.2f}" for i in order)
        parts.append(f'<polyline class="data" points="{path}" stroke="steelblue" fill="none"/>')
        for i in order:
            parts.append(f'<circle class="point" cx="{X(xs[i]):.2f}" cy="{Y(ys[i]):.2f}" r="4" fill="steelblue"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_outputs(report: RunReport, csv_path, svg_path=None) -> None:
    if csv_path:
        write_csv(report.rows, csv_path)
    if svg_path:
        try:
            Path(svg_path).write_text(render_svg(report))
        except OSError as exc:
            raise IOFailure(f"cannot write {svg_path}: {exc}") from exc


def _teeth_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"teeth must be comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="steklovlab", description="Weighted Steklov eigenvalue experiments.")
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--config", help="JSON file with flat ExperimentConfig keys")
    p.add_argument("--r", type=float, help="inner radius")
    p.add_argument("--R", dest="R", type=float, help="outer radius")
    p.add_argument("--teeth", type=_teeth_list, help="comma-separated teeth counts, e.g. 8,16,32")
    p.add_argument("--n-theta", type=int)
    p.add_argument("--n-radial", type=int)
    p.add_argument("--levels", type=int)
    p.add_argument("--k-max", type=int)
    p.add_argument("--csv")
    p.add_argument("--svg")
    p.add_argument("--dump-mesh")
    return p


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    overrides = {
        "experiment": args.experiment,
        "r": args.r,
        "R": args.R,
        "teeth": args.teeth,
        "n_theta": args.n_theta,
        "n_radial": args.n_radial,
        "levels": args.levels,
        "k_max": args.k_max,
        "csv": args.csv,
        "svg": args.svg,
        "dump_mesh": args.dump_mesh,
    }
    if args.config:
        return ExperimentConfig.load(args.config, **overrides)
    return ExperimentConfig.from_dict({k: v for k, v in overrides.items() if v is not None})


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        report = run_experiment(cfg)
    except SteklovLabError as exc:
        print(f"steklovlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if cfg.dump_mesh and cfg.experiment != "homogenise-converge":
        print("note: --dump-mesh is only written by homogenise-converge", file=sys.stderr)
    for v in report.verdicts:
        print(v.line())
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
