"""Boundary homogenisation by sawtooth perturbations of the boundary curves.

A perturbed component is split into equal arc-length cells around
equally spaced centres. Over each cell a tent of height ``eps`` is scaled by
an amplitude ``alpha`` and the curve is pushed into the domain by
``alpha * tent``. The amplitude is tuned so that the perturbed length element
is ``beta`` times the base one, hence the boundary measure of the perturbed
domain tends to ``beta`` times the base boundary measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .density import BoundaryDensity, eval_density
from .errors import (
    BetaBelowOne,
    CurveIntersection,
    EpsilonTooLarge,
    GeometryError,
    NonPositiveRadius,
    SelfIntersection,
    UnknownTestFunction,
)
from .geometry import TWO_PI, AnnularDomain, RadialCurve, boundary_curve_length, build_annular_domain


@dataclass(frozen=True)
class HomogenisationSpec:
    teeth: int
    components_to_perturb: tuple[str, ...] | None = None
    samples_per_tooth: int = 8

    def __post_init__(self):
        if self.teeth < 4:
            raise ValueError(f"need at least 4 teeth, got {self.teeth}")
        if self.samples_per_tooth < 8:
            raise ValueError(f"need at least 8 samples per tooth, got {self.samples_per_tooth}")
        if self.components_to_perturb is not None:
            object.__setattr__(self, "components_to_perturb", tuple(self.components_to_perturb))


@dataclass(frozen=True, eq=False)
class ToothLayout:
    """Centres and Voronoi cells of an equally spaced point set on a closed curve.

    Positions are arc lengths in ``[0, length)``. Cell ``j`` is
    ``[boundaries[j], boundaries[j + 1]]`` with ``boundaries[-1] == length``.
    """

    centers: np.ndarray
    boundaries: np.ndarray
    half_widths: np.ndarray
    length: float

    @property
    def n(self) -> int:
        return self.centers.size

    @property
    def spacing(self) -> np.ndarray:
        return np.diff(self.boundaries)

    def cell_of(self, s) -> np.ndarray:
        s = np.mod(np.asarray(s, dtype=float), self.length)
        j = np.searchsorted(self.boundaries, s, side="right") - 1
        return np.clip(j, 0, self.n - 1)


def sample_separated_points(curve: RadialCurve, eps: float) -> ToothLayout:
    """Maximal ``eps``-separated set realised as ``floor(L / eps)`` equally
    spaced points, so that the spacing lies in ``[eps, 2 eps)``."""
    length = boundary_curve_length(curve)
    # inclusive at L/4 so that the smallest admissible comb (4 teeth) is buildable
    if not (0.0 < eps <= length / 4.0 * (1.0 + 1e-12)):
        raise EpsilonTooLarge(f"eps={eps:g} must lie in (0, L/4] with L={length:g}")
    # tolerate eps = L/n computed in floating point
    n = int(math.floor(length / eps * (1.0 + 1e-12)))
    spacing = length / n
    boundaries = spacing * np.arange(n + 1)
    boundaries[-1] = length
    centers = 0.5 * (boundaries[:-1] + boundaries[1:])
    return ToothLayout(centers=centers, boundaries=boundaries, half_widths=0.5 * np.diff(boundaries), length=length)


def tent_profile(layout: ToothLayout, eps: float, s) -> np.ndarray:
    """Height ``eps`` at each centre, zero at cell boundaries, linear in between."""
    s = np.mod(np.asarray(s, dtype=float), layout.length)
    j = layout.cell_of(s)
    w = eps * (1.0 - np.abs(s - layout.centers[j]) / layout.half_widths[j])
    return np.maximum(w, 0.0)


def tent_slope(layout: ToothLayout, eps: float, s) -> np.ndarray:
    """Magnitude of the tent derivative with respect to arc length."""
    j = layout.cell_of(s)
    return eps / layout.half_widths[j]


def amplitude(beta_value, tent_slope_value):
    """``alpha`` with ``sqrt(1 + alpha^2 |w'|^2) == beta``."""
    beta = np.asarray(beta_value, dtype=float)
    slope = np.asarray(tent_slope_value, dtype=float)
    if np.any(beta < 1.0):
        raise BetaBelowOne(f"weight {beta.min():g} is below 1")
    if np.any(slope <= 0.0):
        raise ValueError("tent slope must be positive")
    alpha = np.sqrt(beta * beta - 1.0) / slope
    return float(alpha) if alpha.ndim == 0 else alpha


def arc_length_at(curve: RadialCurve, theta) -> np.ndarray:
    """Arc length along the chord polyline from ``theta = 0`` to the point on
    the ray of angle ``theta``."""
    pts = curve.points()
    seg = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    th = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    i = np.minimum(np.floor(th * (curve.n / TWO_PI)).astype(int), curve.n - 1)
    r = curve.radius_at(th)
    p = np.stack((r * np.cos(th), r * np.sin(th)), axis=-1)
    return cum[i] + np.linalg.norm(p - pts[i], axis=-1)


@dataclass(frozen=True, eq=False)
class Perturbation:
    curve: RadialCurve
    eps: float
    layout: ToothLayout
    alpha: np.ndarray
    offset: np.ndarray

    @property
    def max_alpha(self) -> float:
        return float(self.alpha.max())

    @property
    def max_offset(self) -> float:
        return float(self.offset.max())


def perturb_curve(
    curve: RadialCurve,
    weight: Callable[[np.ndarray], np.ndarray],
    teeth: int,
    samples_per_tooth: int,
    inward_sign: float,
) -> Perturbation:
    """Sawtooth offset of one curve; ``inward_sign`` is +1 for an inner curve
    (radius grows) and -1 for an outer curve."""
    length = boundary_curve_length(curve)
    eps = length / teeth
    layout = sample_separated_points(curve, eps)
    theta = TWO_PI * np.arange(teeth * samples_per_tooth) / (teeth * samples_per_tooth)
    s = arc_length_at(curve, theta)
    w = tent_profile(layout, eps, s)
    alpha = np.atleast_1d(amplitude(weight(theta), tent_slope(layout, eps, s)))
    offset = alpha * w
    rho = curve.radius_at(theta) + inward_sign * offset
    if np.any(rho <= 0.0):
        raise SelfIntersection("sawtooth amplitude exceeds the radius of the outer curve")
    return Perturbation(RadialCurve(rho), eps, layout, alpha, offset)


def homogenise_domain(
    domain: AnnularDomain, beta: BoundaryDensity, spec: HomogenisationSpec
) -> AnnularDomain:
    return homogenise_with_details(domain, beta, spec)[0]


def homogenise_with_details(
    domain: AnnularDomain, beta: BoundaryDensity, spec: HomogenisationSpec
) -> tuple[AnnularDomain, dict[str, Perturbation]]:
    """Perturbed domain plus the per-component construction data.

    With ``components_to_perturb=None`` every component whose weight is not
    identically one is perturbed.
    """
    comps = spec.components_to_perturb
    if comps is None:
        comps = tuple(c for c in domain.components if not beta.is_unit(c))
    curves = {c: domain.curve(c) for c in domain.components}
    details = {}
    for comp in comps:
        base = domain.curve(comp)
        sign = 1.0 if comp == "inner" else -1.0
        pert = perturb_curve(
            base,
            lambda th, comp=comp: np.asarray(eval_density(beta, comp, th), dtype=float),
            spec.teeth,
            spec.samples_per_tooth,
            sign,
        )
        curves[comp] = pert.curve
        details[comp] = pert
    try:
        out = build_annular_domain(curves["outer"], curves.get("inner"))
    except (CurveIntersection, NonPositiveRadius) as exc:
        raise SelfIntersection(f"perturbed boundary curves cross: {exc}") from exc
    return out, details


TEST_FUNCTIONS: dict[str, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    "one": lambda x, y: np.ones_like(x),
    "x": lambda x, y: x,
    "y": lambda x, y: y,
    "x2": lambda x, y: x * x,
    "radial": lambda x, y: np.hypot(x, y),
}


def _boundary_integral(curve: RadialCurve, f, weight: np.ndarray | float = 1.0) -> float:
    pts = curve.points()
    nxt = np.roll(pts, -1, axis=0)
    seg = np.linalg.norm(nxt - pts, axis=1)
    g = f(pts[:, 0], pts[:, 1]) * weight
    return float(np.sum(seg * 0.5 * (g + np.roll(g, -1))))


def pairing_defect(
    base: AnnularDomain, perturbed: AnnularDomain, beta: BoundaryDensity, f: str
) -> float:
    """``int f d(perturbed length) - int f beta d(base length)`` by trapezoid rule."""
    try:
        fn = TEST_FUNCTIONS[f]
    except KeyError:
        raise UnknownTestFunction(f"unknown test function {f!r}; choose from {sorted(TEST_FUNCTIONS)}") from None
    if base.b != perturbed.b:
        raise GeometryError("base and perturbed domains have different numbers of boundary components")
    total = 0.0
    for comp in base.components:
        curve = base.curve(comp)
        total += _boundary_integral(perturbed.curve(comp), fn)
        total -= _boundary_integral(curve, fn, np.asarray(eval_density(beta, comp, curve.angles), dtype=float))
    return total


def fit_loglog_slope(x: Sequence[float], y: Sequence[float]) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.abs(np.asarray(y, float))), 1)[0])
