"""Phase-space area of sublevel sets, level counting function and WKB levels.

The action S(k) is the area of {(mu, phi) : K(mu, phi) <= k} in the
(mu, phi) rectangle [-1, 1] x [-pi, pi); total area 4 pi.  Boundary cells
are handled by linear interpolation of K (each grid cell split into two
triangles), which makes S(k) continuous and monotone in k and second-order
accurate in the grid spacing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .classical import k_energy_grid, k_range, separatrix_energy, stationary_points
from .model import ModelParams

FULL_AREA = 4 * math.pi

_GRID_CACHE: dict[tuple[float, int], np.ndarray] = {}
_GRID_CACHE_MAX = 8


class SeparatrixProximityError(ValueError):
    """period() called too close to a stationary K value for finite differences."""


class BracketFailureError(RuntimeError):
    """WKB quantization target exceeds the available phase-space area."""


@dataclass(frozen=True)
class ActionTable:
    lam: float
    samples: np.ndarray  # columns (K, S, T); T is nan where undefined
    resolution: int
    quadrature_tol: float


def _node_values(lam: float, resolution: int) -> np.ndarray:
    """K on the (resolution+1)^2 node grid, cached per (lam, resolution)."""
    key = (float(lam), int(resolution))
    if key not in _GRID_CACHE:
        if len(_GRID_CACHE) >= _GRID_CACHE_MAX:
            _GRID_CACHE.pop(next(iter(_GRID_CACHE)))
        n = resolution
        mu = np.linspace(-1.0, 1.0, n + 1)
        phi = np.linspace(-math.pi, math.pi, n + 1)
        _GRID_CACHE[key] = k_energy_grid(mu[:, None], phi[None, :], lam)
    return _GRID_CACHE[key]


def _triangle_fraction(v0, v1, v2, out):
    """Fraction of a triangle where the linear interpolant of (v0, v1, v2) is <= 0."""
    lo = np.minimum(np.minimum(v0, v1), v2)
    hi = np.maximum(np.maximum(v0, v1), v2)
    mid = v0 + v1 + v2 - lo - hi
    out.fill(0.0)
    out[hi <= 0] = 1.0
    one_below = (lo < 0) & (mid >= 0)
    if np.any(one_below):
        l, m, h = lo[one_below], mid[one_below], hi[one_below]
        out[one_below] = l * l / ((m - l) * (h - l))
    two_below = (mid < 0) & (hi > 0)
    if np.any(two_below):
        l, m, h = lo[two_below], mid[two_below], hi[two_below]
        out[two_below] = 1.0 - h * h / ((h - l) * (h - m))
    return out


def area_below(k: float, lam: float, resolution: int = 256) -> float:
    """Area of the sublevel set {K <= k}; monotone non-decreasing in k."""
    if resolution < 64:
        raise ValueError("resolution must be >= 64")
    values = _node_values(lam, resolution)
    n = resolution
    cell = (2.0 / n) * (2 * math.pi / n)
    total = 0.0
    # row-chunked so the temporaries stay small at high resolution
    chunk = max(1, (1 << 22) // (n + 1))
    buf = None
    for i0 in range(0, n, chunk):
        i1 = min(n, i0 + chunk)
        f = values[i0 : i1 + 1] - k
        a = f[:-1, :-1]
        b = f[:-1, 1:]
        c = f[1:, 1:]
        d = f[1:, :-1]
        if buf is None or buf.shape != a.shape:
            buf = np.empty_like(a)
        total += float(_triangle_fraction(a, b, c, buf).sum())
        total += float(_triangle_fraction(a, c, d, buf).sum())
    return total * cell / 2


def counting_function(k: float, params: ModelParams, resolution: int = 256) -> float:
    """Smoothed number of levels below scaled energy k: S(k) / (2 pi hbar_eff)."""
    return area_below(k, params.coupling, resolution) / (2 * math.pi * params.hbar_eff)


def period(k: float, lam: float, resolution: int = 256) -> float:
    """Orbital period T(k) = dS/dk by symmetric differencing of the area.

    Refuses points within 1e-6 of a stationary K value, where the finite
    difference is meaningless against the logarithmic divergence.
    """
    critical = [sp.k_value for sp in stationary_points(lam)]
    dist = min(abs(k - kc) for kc in critical)
    # tiny slack so k = k_c +/- 1e-6 itself, rounded in binary, stays admissible
    if dist < 1e-6 * (1 - 1e-9):
        raise SeparatrixProximityError(
            f"k = {k} is within 1e-6 of a stationary K value; use the asymptotic form"
        )
    h = min(1e-4, dist / 10)
    t = (area_below(k + h, lam, resolution) - area_below(k - h, lam, resolution)) / (2 * h)
    return t


@dataclass(frozen=True)
class WkbLevel:
    k_index: int
    k_value: float  # scaled energy K
    energy: float  # E = (N/2) K
    doublet: bool = False


def _solve_area(target: float, lam: float, resolution: int, lo: float, hi: float) -> float:
    f = lambda k: area_below(k, lam, resolution) - target
    flo, fhi = f(lo), f(hi)
    if flo > 0 or fhi < 0:
        raise BracketFailureError(
            f"action target {target:.6g} not bracketed in K range [{lo}, {hi}]"
        )
    return float(scipy.optimize.brentq(f, lo, hi, xtol=1e-12, rtol=1e-14))


def wkb_levels(params: ModelParams, count: int, resolution: int = 256) -> list[WkbLevel]:
    """Semiclassical levels from S(K_k) = 2 pi hbar_eff (k + 1/2).

    Below the separatrix (lam > 1) the per-well action, half the total area,
    is quantized and each solution is emitted twice as a degenerate doublet.
    """
    n = params.n_particles
    lam = params.coupling
    if count > n:
        raise ValueError(f"count {count} exceeds particle number {n}")
    hbar = params.hbar_eff
    k_lo, k_hi = k_range(lam)
    pad = 1e-9 * max(1.0, abs(k_lo), abs(k_hi))
    k_lo -= pad
    k_hi += pad
    quantum = 2 * math.pi * hbar
    levels: list[WkbLevel] = []
    k_c = separatrix_energy(lam)
    if k_c is not None:
        area_c = area_below(k_c, lam, resolution)
        well = 0
        while len(levels) < count and quantum * (2 * well + 1) < area_c:
            # per-well action (total/2) at the (2 well + 1)/2 quantum
            kk = _solve_area(quantum * (2 * well + 1), lam, resolution, k_lo, k_c)
            for _ in range(2):
                if len(levels) < count:
                    levels.append(
                        WkbLevel(len(levels), kk, n / 2 * kk, doublet=True)
                    )
            well += 1
        start = len(levels)
    else:
        start = 0
    for idx in range(start, count):
        target = quantum * (idx + 0.5)
        kk = _solve_area(target, lam, resolution, k_lo, k_hi)
        levels.append(WkbLevel(idx, kk, n / 2 * kk))
    return levels


def action_table(lam: float, n_samples: int = 200, resolution: int = 256) -> ActionTable:
    """Tabulated (K, S, T) over the classical energy range."""
    k_lo, k_hi = k_range(lam)
    critical = [sp.k_value for sp in stationary_points(lam)]
    ks = np.linspace(k_lo, k_hi, n_samples)
    rows = []
    for k in ks:
        s = area_below(float(k), lam, resolution)
        try:
            t = period(float(k), lam, resolution)
        except SeparatrixProximityError:
            t = math.nan
        if min(abs(k - kc) for kc in critical) < 1e-5:
            t = math.nan
        rows.append((float(k), s, t))
    tol = (2.0 / resolution) ** 2
    return ActionTable(lam=lam, samples=np.array(rows), resolution=resolution, quadrature_tol=tol)
