"""Boundary weights for the weighted Steklov problem.

Each boundary component carries either a constant weight or samples at
uniform angles, interpolated linearly and periodically in ``theta``. Weights
below one are rejected outright instead of being rescaled.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import BadRadii, BetaBelowOne, ComponentMismatch, DensityError, UnknownComponent
from .geometry import COMPONENTS, TWO_PI, AnnularDomain

Weight = Union[float, np.ndarray]


def _check_weight(value, name: str) -> Weight | None:
    if value is None:
        return None
    if np.ndim(value) == 0:
        v = float(value)
        if not np.isfinite(v):
            raise DensityError(f"{name} weight must be finite")
        if v < 1.0:
            raise BetaBelowOne(f"{name} weight {v:g} is below 1")
        return v
    arr = np.array(value, dtype=float).ravel()
    if arr.size == 0:
        raise DensityError(f"{name} weight has no samples")
    if not np.all(np.isfinite(arr)):
        raise DensityError(f"{name} weight samples must be finite")
    if np.any(arr < 1.0):
        raise BetaBelowOne(f"{name} weight has samples below 1 (min {arr.min():g})")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class BoundaryDensity:
    outer: Weight | None = 1.0
    inner: Weight | None = 1.0

    def __post_init__(self):
        object.__setattr__(self, "outer", _check_weight(self.outer, "outer"))
        object.__setattr__(self, "inner", _check_weight(self.inner, "inner"))

    @classmethod
    def uniform(cls, value: float = 1.0) -> "BoundaryDensity":
        return cls(outer=value, inner=value)

    @classmethod
    def from_literal(cls, literal) -> "BoundaryDensity":
        """Parse the config form: a number, or ``{"inner": ..., "outer": ...}``
        where each entry is a number or ``{"samples": [...]}``."""
        if literal is None:
            return cls.uniform(1.0)
        if isinstance(literal, (int, float)):
            return cls.uniform(float(literal))
        if not isinstance(literal, dict):
            raise DensityError(f"cannot interpret density literal {literal!r}")
        unknown = set(literal) - set(COMPONENTS)
        if unknown:
            raise UnknownComponent(f"unknown boundary component(s) {sorted(unknown)}")

        def one(v):
            if isinstance(v, dict):
                if "samples" not in v:
                    raise DensityError(f"density entry {v!r} lacks 'samples'")
                return np.asarray(v["samples"], dtype=float)
            return v

        return cls(outer=one(literal.get("outer", 1.0)), inner=one(literal.get("inner", 1.0)))

    def to_literal(self) -> dict:
        out = {}
        for comp in COMPONENTS:
            w = getattr(self, comp)
            if w is None:
                continue
            out[comp] = w if isinstance(w, float) else {"samples": w.tolist()}
        return out

    def weight(self, component: str) -> Weight:
        if component not in COMPONENTS:
            raise UnknownComponent(f"unknown boundary component {component!r}")
        w = getattr(self, component)
        if w is None:
            raise ComponentMismatch(f"density has no weight for the {component} component")
        return w

    def is_unit(self, component: str) -> bool:
        w = self.weight(component)
        return bool(np.all(np.asarray(w) == 1.0))

    def max_value(self, component: str) -> float:
        return float(np.max(self.weight(component)))

    def scaled(self, c: float) -> "BoundaryDensity":
        def sc(w):
            return None if w is None else c * w

        return BoundaryDensity(outer=sc(self.outer), inner=sc(self.inner))


def eval_density(beta: BoundaryDensity, component: str, theta) -> np.ndarray | float:
    w = beta.weight(component)
    if isinstance(w, float):
        return w if np.ndim(theta) == 0 else np.full(np.shape(theta), w)
    n = w.size
    t = np.mod(np.asarray(theta, dtype=float), TWO_PI) * (n / TWO_PI)
    i = np.floor(t).astype(int)
    frac = t - i
    i %= n
    val = (1.0 - frac) * w[i] + frac * w[(i + 1) % n]
    return float(val) if np.ndim(val) == 0 else val


def component_weighted_length(domain: AnnularDomain, beta: BoundaryDensity, component: str) -> float:
    curve = domain.curve(component)
    pts = curve.points()
    seg = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
    b = np.asarray(eval_density(beta, component, curve.angles), dtype=float)
    return float(np.sum(seg * 0.5 * (b + np.roll(b, -1))))


def weighted_boundary_length(domain: AnnularDomain, beta: BoundaryDensity) -> float:
    """Trapezoidal integral of the weight over the boundary chord polylines."""
    for comp in domain.components:
        if getattr(beta, comp) is None:
            raise ComponentMismatch(f"density has no weight for the {comp} component")
    return sum(component_weighted_length(domain, beta, comp) for comp in domain.components)


def catenoid_density(r: float, R: float) -> BoundaryDensity:
    """Weights making the annulus ``r < |z| < R`` conformally match a flat cylinder.

    The outer weight is fixed to one, so the inner weight is ``R / r`` and both
    circles have the same weighted length.
    """
    if not (0.0 < r < R):
        raise BadRadii(f"need 0 < r < R, got r={r!r}, R={R!r}")
    return BoundaryDensity(outer=1.0, inner=R / r)
