"""Closed-form reference spectra and critical catenoid constants."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BadRadii


@dataclass(frozen=True)
class CatenoidConstants:
    t1: float
    target: float
    radius_ratio: float


@lru_cache(maxsize=None)
def solve_t1(tol: float = 1e-13) -> CatenoidConstants:
    """Bisection for the positive root of ``coth t = t`` on ``[1, 2]``."""

    def h(t):
        return 1.0 / math.tanh(t) - t

    lo, hi = 1.0, 2.0
    h_lo = h(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        h_mid = h(mid)
        if h_mid == 0.0:
            lo = hi = mid
            break
        if (h_mid > 0.0) == (h_lo > 0.0):
            lo, h_lo = mid, h_mid
        else:
            hi = mid
    t1 = 0.5 * (lo + hi)
    return CatenoidConstants(t1=t1, target=4.0 * math.pi / t1, radius_ratio=math.exp(2.0 * t1))


def disk_spectrum(k_max: int) -> np.ndarray:
    """Unit disk: ``sigma_k = ceil(k / 2)``."""
    k = np.arange(k_max + 1)
    return np.ceil(k / 2.0)


def _annulus_mode_roots(k: int, r: float, R: float, beta_in: float, beta_out: float) -> tuple[float, float]:
    A = beta_out * R
    B = beta_in * r
    if k == 0:
        return 0.0, (1.0 / A + 1.0 / B) / math.log(R / r)
    # u = a' (rho/R)^k + b' (r/rho)^k; q couples the two circles
    q2 = (r / R) ** (2 * k)
    a = A * B * (1.0 - q2)
    b = -k * (A + B) * (1.0 + q2)
    c = k * k * (1.0 - q2)
    # b^2 - 4ac rewritten as a sum of non-negative terms (no cancellation)
    disc = k * k * ((A - B) ** 2 * (1.0 + q2) ** 2 + 16.0 * A * B * q2)
    big = (-b + math.sqrt(disc)) / (2.0 * a)
    small = c / (a * big)
    return small, big


def annulus_spectrum(r: float, R: float, beta_in: float, beta_out: float, k_max: int) -> np.ndarray:
    """Steklov spectrum of ``r < |z| < R`` with constant weight per circle.

    Separation of variables: mode ``k >= 1`` uses ``a rho^k + b rho^-k``, whose
    two boundary conditions give a quadratic in ``sigma``; both roots enter
    twice (cos and sin). Mode 0 uses ``a + b log rho``.
    """
    if not (0.0 < r < R):
        raise BadRadii(f"need 0 < r < R, got r={r!r}, R={R!r}")
    if beta_in <= 0.0 or beta_out <= 0.0:
        raise BadRadii("circle weights must be positive")
    values = list(_annulus_mode_roots(0, r, R, beta_in, beta_out))
    k = 1
    while True:
        small, big = _annulus_mode_roots(k, r, R, beta_in, beta_out)
        values.sort()
        if len(values) >= k_max + 1 and small > values[k_max]:
            break
        values += [small, small, big, big]
        k += 1
    return np.array(sorted(values)[: k_max + 1])


def cylinder_spectrum(T: float, k_max: int) -> np.ndarray:
    """Flat cylinder ``[-T, T] x S^1``: ``{0, 1/T}`` and ``k tanh kT``, ``k coth kT`` twice each."""
    if T <= 0.0:
        raise BadRadii(f"half-length must be positive, got {T!r}")
    values = [0.0, 1.0 / T]
    k = 1
    while True:
        lo = k * math.tanh(k * T)
        values.sort()
        if len(values) >= k_max + 1 and lo > values[k_max]:
            break
        hi = k / math.tanh(k * T)
        values += [lo, lo, hi, hi]
        k += 1
    return np.array(sorted(values)[: k_max + 1])


def catenoid_annulus(scale: float = 1.0) -> tuple[float, float]:
    """Radii ``(r, R)`` with ``log(R / r) = 2 t1``, inner radius ``scale``."""
    return scale, scale * solve_t1().radius_ratio
