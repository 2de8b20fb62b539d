"""Classical limit on the sphere: K(mu, phi), stationary points and closed-form laws.

K = 2H/N = -sqrt(1-mu^2) cos(phi) - (lam/2) (mu^2 - (1-mu^2) sin^2(phi))
with canonical pair (mu, phi) and effective Planck constant 2/N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.optimize


class PoleSingularityError(ValueError):
    """Gradient requested at |mu| = 1 where the (mu, phi) chart is singular."""


class CriticalKind(Enum):
    MINIMUM = "minimum"
    MAXIMUM = "maximum"
    SADDLE = "saddle"


@dataclass(frozen=True)
class ClassicalPoint:
    mu: float
    phi: float

    def __post_init__(self):
        if not -1 <= self.mu <= 1:
            raise ValueError(f"mu must lie in [-1, 1], got {self.mu}")
        # normalize phi into [-pi, pi)
        phi = (self.phi + math.pi) % (2 * math.pi) - math.pi
        object.__setattr__(self, "phi", phi)


@dataclass(frozen=True)
class StationaryPoint:
    point: ClassicalPoint
    k_value: float
    kind: CriticalKind
    quartic: bool = False  # degenerate (quartic) minimum at lam = 1


def k_energy(p: ClassicalPoint, lam: float) -> float:
    """Scaled classical energy K at a phase-space point."""
    mu, phi = p.mu, p.phi
    s = math.sqrt(max(0.0, 1 - mu * mu))
    return -s * math.cos(phi) - lam / 2 * (mu * mu - (1 - mu * mu) * math.sin(phi) ** 2)


def k_energy_grid(mu, phi, lam):
    """Vectorized K on numpy arrays (broadcasting mu against phi)."""
    s = np.sqrt(np.clip(1 - mu * mu, 0.0, None))
    return -s * np.cos(phi) - lam / 2 * (mu * mu - (1 - mu * mu) * np.sin(phi) ** 2)


def grad_k(p: ClassicalPoint, lam: float) -> tuple[float, float]:
    """Analytic (dK/dmu, dK/dphi); raises at the chart poles |mu| = 1."""
    mu, phi = p.mu, p.phi
    if abs(mu) >= 1:
        raise PoleSingularityError("gradient undefined at |mu| = 1")
    s = math.sqrt(1 - mu * mu)
    d_mu = mu * math.cos(phi) / s - lam * mu * (1 + math.sin(phi) ** 2)
    d_phi = s * math.sin(phi) + lam * (1 - mu * mu) * math.sin(phi) * math.cos(phi)
    return d_mu, d_phi


def hessian_k(p: ClassicalPoint, lam: float) -> np.ndarray:
    """Analytic 2x2 Hessian of K in the (mu, phi) chart."""
    mu, phi = p.mu, p.phi
    if abs(mu) >= 1:
        raise PoleSingularityError("Hessian undefined at |mu| = 1")
    s2 = 1 - mu * mu
    k_mm = math.cos(phi) / s2 ** 1.5 - lam * (1 + math.sin(phi) ** 2)
    k_mp = -mu * math.sin(phi) / math.sqrt(s2) - 2 * lam * mu * math.sin(phi) * math.cos(phi)
    k_pp = math.sqrt(s2) * math.cos(phi) + lam * s2 * math.cos(2 * phi)
    return np.array([[k_mm, k_mp], [k_mp, k_pp]])


def _polish(mu0: float, phi0: float, lam: float) -> ClassicalPoint:
    """Refine an analytic seed by root-finding on the gradient."""
    def fun(x):
        return grad_k(ClassicalPoint(float(np.clip(x[0], -0.999999, 0.999999)), float(x[1])), lam)

    sol = scipy.optimize.root(fun, [mu0, phi0], tol=1e-14)
    mu, phi = sol.x
    if not sol.success or abs(mu - mu0) > 1e-6 or _angle_dist(phi, phi0) > 1e-6:
        # seed is already exact analytically; keep it
        mu, phi = mu0, phi0
    return ClassicalPoint(float(mu), float(phi))


def _angle_dist(a: float, b: float) -> float:
    return abs((a - b + math.pi) % (2 * math.pi) - math.pi)


def _classify(p: ClassicalPoint, lam: float) -> CriticalKind:
    h = hessian_k(p, lam)
    det = float(np.linalg.det(h))
    if abs(det) < 1e-12:
        raise RuntimeError(f"degenerate Hessian away from lam=1 at {p}")
    if det < 0:
        return CriticalKind.SADDLE
    return CriticalKind.MINIMUM if h[0, 0] > 0 else CriticalKind.MAXIMUM


def stationary_points(lam: float) -> list[StationaryPoint]:
    """All stationary points of K on the sphere, classified by the Hessian.

    lam < 1: minimum at (0, 0), maximum at (0, pi).
    lam > 1: minima at (+/-sqrt(1 - lam^-2), 0), saddles at (0, 0) and (0, pi),
             maxima at (0, +/-phi*) with cos(phi*) = -1/lam.
    lam = 1: degenerate quartic minimum at (0, 0).
    """
    if lam < 0:
        raise ValueError("lam must be >= 0")
    pts: list[StationaryPoint] = []
    if abs(lam - 1) < 1e-12:
        origin = ClassicalPoint(0.0, 0.0)
        pts.append(StationaryPoint(origin, k_energy(origin, lam), CriticalKind.MINIMUM, quartic=True))
        top = ClassicalPoint(0.0, math.pi)
        # the upper saddle and the two maxima coalesce at lam = 1, so the
        # Hessian is degenerate there too; tag the merged point a maximum
        pts.append(StationaryPoint(top, k_energy(top, lam), CriticalKind.MAXIMUM, quartic=True))
        return pts
    if lam < 1:
        seeds = [(0.0, 0.0), (0.0, math.pi)]
    else:
        mu0 = math.sqrt(1 - lam ** -2)
        phi_star = math.acos(-1 / lam)
        seeds = [
            (mu0, 0.0),
            (-mu0, 0.0),
            (0.0, 0.0),
            (0.0, math.pi),
            (0.0, phi_star),
            (0.0, -phi_star),
        ]
    for mu0, phi0 in seeds:
        p = _polish(mu0, phi0, lam)
        pts.append(StationaryPoint(p, k_energy(p, lam), _classify(p, lam)))
    pts.sort(key=lambda sp: (sp.k_value, sp.point.mu, sp.point.phi))
    return pts


def k_range(lam: float) -> tuple[float, float]:
    """(K_min, K_max) of the classical energy surface."""
    pts = stationary_points(lam)
    values = [sp.k_value for sp in pts]
    return min(values), max(values)


def separatrix_energy(lam: float) -> float | None:
    """Scaled separatrix energy K_c = -1 for lam > 1, absent otherwise."""
    if lam < 0:
        raise ValueError("lam must be >= 0")
    return -1.0 if lam > 1 else None


def critical_excitation(lam: float) -> float:
    """Excitation of the separatrix above the ground state, (lam + 1/lam - 2)/2, in K units."""
    if lam < 1:
        raise ValueError("critical excitation defined for lam >= 1 only")
    return (lam + 1 / lam - 2) / 2


def phi_branches(mu: float, k: float, lam: float) -> list[float]:
    """Angles phi in [0, pi] on the contour K = k at fixed mu.

    Solves the quadratic in x = cos(phi):
    -(lam/2)(1-mu^2) x^2 - sqrt(1-mu^2) x + (lam/2)(1-mu^2) - (lam/2)mu^2 - k = 0.
    Empty list means mu lies outside the orbit.
    """
    if abs(mu) >= 1:
        raise ValueError("phi_branches requires |mu| < 1")
    s2 = 1 - mu * mu
    a = -lam / 2 * s2
    b = -math.sqrt(s2)
    c = lam / 2 * s2 - lam / 2 * mu * mu - k
    if abs(a) < 1e-14:
        roots = [] if abs(b) < 1e-300 else [-c / b]
    else:
        disc = b * b - 4 * a * c
        if disc < 0:
            roots = []
        else:
            sq = math.sqrt(disc)
            roots = [(-b - sq) / (2 * a), (-b + sq) / (2 * a)]
    out = sorted(math.acos(x) for x in roots if -1 <= x <= 1)
    return out


def harmonic_frequency(lam: float) -> float:
    """Small-oscillation frequency about the minimum: sqrt(1-lam^2) below the
    transition, sqrt(2(lam^2-1)) above; undefined at lam = 1 (quartic point)."""
    if lam < 0:
        raise ValueError("lam must be >= 0")
    if lam == 1:
        raise ValueError("frequency undefined at lam = 1; use quartic_spacing")
    if lam < 1:
        return math.sqrt(1 - lam * lam)
    return math.sqrt(2 * (lam * lam - 1))


def predicted_spacing_separatrix(lam: float, n: int) -> float:
    """Same-parity level spacing at the separatrix: 2 pi sqrt(lam^2-1) / ln N."""
    if lam <= 1:
        raise ValueError("separatrix spacing defined for lam > 1 only")
    if n < 3:
        raise ValueError("n must be >= 3")
    return 2 * math.pi * math.sqrt(lam * lam - 1) / math.log(n)


def quartic_spacing(excitation_energy: float, n: int) -> float:
    """Level-spacing shape (E/N)^(1/4) at the critical coupling, up to a constant."""
    if excitation_energy < 0:
        raise ValueError("excitation must be >= 0")
    return (excitation_energy / n) ** 0.25
