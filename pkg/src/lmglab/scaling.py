"""Scaling-law measurements on exact spectra and cross-checks against semiclassics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .action import counting_function
from .classical import separatrix_energy
from .model import ModelParams, Parity, build_sector
from .spectrum import (
    Eigenpair,
    Level,
    Spectrum,
    doublet_splittings,
    eigen_k,
    merged_spectrum,
)


@dataclass(frozen=True)
class FitResult:
    slope: float
    amplitude: float
    r_squared: float
    n_points: int
    residual_max: float


@dataclass(frozen=True)
class LocalizationReport:
    level: Level
    fraction: float
    n_components: int
    neighbor_fractions: list[float] = field(default_factory=list)


@dataclass(frozen=True)
class Histogram:
    bin_edges: np.ndarray
    counts: np.ndarray
    density: bool = False


@dataclass(frozen=True)
class SeparatrixSpacing:
    spacing: float
    at_level: Level
    window_minimum: float
    warning: bool  # primary spacing and window minimum disagree by > 2x


def _check_positive(name: str, xs: np.ndarray):
    if len(xs) < 3:
        raise ValueError(f"{name}: need at least 3 points, got {len(xs)}")
    if not np.all(np.isfinite(xs)) or np.any(xs <= 0):
        raise ValueError(f"{name}: inputs must be finite and > 0")


def fit_power_law(xs, ys) -> FitResult:
    """Least-squares line through (ln x, ln y): y = amplitude * x^slope."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    _check_positive("fit_power_law xs", xs)
    _check_positive("fit_power_law ys", ys)
    lx, ly = np.log(xs), np.log(ys)
    slope, intercept = np.polyfit(lx, ly, 1)
    pred = slope * lx + intercept
    ss_res = float(np.sum((ly - pred) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1 - ss_res / ss_tot
    return FitResult(
        slope=float(slope),
        amplitude=float(math.exp(intercept)),
        r_squared=r2,
        n_points=len(xs),
        residual_max=float(np.max(np.abs(ly - pred))),
    )


def fit_inverse_log(ns, spacings) -> FitResult:
    """Through-origin fit of spacing = f / ln N; amplitude holds f."""
    ns = np.asarray(ns, dtype=float)
    spacings = np.asarray(spacings, dtype=float)
    _check_positive("fit_inverse_log spacings", spacings)
    if len(ns) != len(spacings):
        raise ValueError("ns and spacings must have equal length")
    if len(ns) < 3 or np.any(ns < 3):
        raise ValueError("need at least 3 points with N >= 3")
    x = 1 / np.log(ns)
    f = float(np.sum(spacings * x) / np.sum(x * x))
    pred = f * x
    ss_res = float(np.sum((spacings - pred) ** 2))
    ss_tot = float(np.sum((spacings - spacings.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1 - ss_res / ss_tot
    return FitResult(
        slope=-1.0,
        amplitude=f,
        r_squared=r2,
        n_points=len(ns),
        residual_max=float(np.max(np.abs(spacings - pred))),
    )


def _same_parity_neighbor_spacing(levels: list[Level], i: int) -> float:
    """Distance from level i to its nearest same-parity neighbor."""
    parity = levels[i].parity
    best = math.inf
    for step in (1, -1):
        jdx = i + step
        while 0 <= jdx < len(levels):
            if levels[jdx].parity is parity:
                best = min(best, abs(levels[jdx].energy - levels[i].energy))
                break
            jdx += step
    return best


def _adjacent_same_parity_spacings(levels: list[Level], i: int) -> list[float]:
    parity = levels[i].parity
    out = []
    for step in (1, -1):
        jdx = i + step
        while 0 <= jdx < len(levels):
            if levels[jdx].parity is parity:
                out.append(abs(levels[jdx].energy - levels[i].energy))
                break
            jdx += step
    return out


def measure_separatrix_spacing(spectrum: Spectrum, lam: float) -> SeparatrixSpacing:
    """Same-parity spacing at the level closest to K = -1.

    The spacing is the mean of the two adjacent same-parity gaps at that
    level (robust against landing on the bottom of the spacing dip).  The
    minimum same-parity spacing over |K + 1| <= 0.1 is reported as a
    cross-check; the warning flag is set when the two disagree by more than
    a factor 2.
    """
    if lam <= 1:
        raise ValueError("separatrix spacing defined for lam > 1 only")
    levels = spectrum.levels
    ks = spectrum.scaled_energies
    i0 = int(np.argmin(np.abs(ks + 1)))
    adj = _adjacent_same_parity_spacings(levels, i0)
    if not adj:
        raise RuntimeError("no same-parity neighbor found at the separatrix level")
    spacing = sum(adj) / len(adj)
    window = [i for i in range(len(levels)) if abs(ks[i] + 1) <= 0.1]
    if not window:
        raise RuntimeError("no levels found in the window |K + 1| <= 0.1")
    window_min = min(_same_parity_neighbor_spacing(levels, i) for i in window)
    warn = spacing > 2 * window_min or window_min > 2 * spacing
    return SeparatrixSpacing(
        spacing=spacing, at_level=levels[i0], window_minimum=window_min, warning=warn
    )


def minimal_gap_pair(spectrum: Spectrum, lam: float) -> tuple[Level, Level] | None:
    """Two consecutive same-parity levels sharing the minimal gap in the lower half."""
    if lam <= 1:
        return None
    levels = spectrum.levels
    n_half = len(levels) / 2
    best = None
    for parity in (Parity.EVEN, Parity.ODD):
        tower = [lv for lv in levels if lv.parity is parity and lv.global_index < n_half]
        for a, b in zip(tower, tower[1:]):
            gap_ab = b.energy - a.energy
            if best is None or gap_ab < best[0]:
                best = (gap_ab, a, b)
    return None if best is None else (best[1], best[2])


def minimal_gap_level(spectrum: Spectrum, lam: float) -> Level | None:
    """Level at the minimal same-parity gap in the lower half; lam > 1 only.

    The minimal gap is shared by two consecutive same-parity levels; the one
    whose scaled energy is closer to the separatrix K = -1 is returned.
    """
    pair = minimal_gap_pair(spectrum, lam)
    if pair is None:
        return None
    a, b = pair
    return a if abs(a.scaled_energy + 1) <= abs(b.scaled_energy + 1) else b


def scar_report(
    spectrum: Spectrum, params: ModelParams, n_components: int = 20
) -> LocalizationReport | None:
    """Localization of the more scarred member of the minimal-gap pair."""
    pair = minimal_gap_pair(spectrum, params.coupling)
    if pair is None:
        return None
    reports = [localization_report(params, lv, n_components) for lv in pair]
    return max(reports, key=lambda r: r.fraction)


def localization_fraction(pair: Eigenpair, n_components: int = 20) -> float:
    """Squared norm carried by the n lowest-m components of a sector eigenvector."""
    if n_components > len(pair.components):
        raise IndexError(
            f"n_components {n_components} exceeds vector dimension {len(pair.components)}"
        )
    return float(np.sum(pair.components[:n_components] ** 2))


def localization_report(
    params: ModelParams,
    level: Level,
    n_components: int = 20,
    neighbor_range: int = 3,
) -> LocalizationReport:
    """Localization of the eigenvector at `level` plus its same-parity neighbors."""
    sector = build_sector(params, level.parity)
    pair = eigen_k(sector, level.sector_index)
    fraction = localization_fraction(pair, n_components)
    neighbors = []
    for off in range(-neighbor_range, neighbor_range + 1):
        if off == 0:
            continue
        idx = level.sector_index + off
        if 0 <= idx < sector.dim:
            neighbors.append(localization_fraction(eigen_k(sector, idx), n_components))
    return LocalizationReport(
        level=level,
        fraction=fraction,
        n_components=n_components,
        neighbor_fractions=neighbors,
    )


def dos_histogram(spectrum: Spectrum, bins: int, density: bool = False) -> Histogram:
    """Equal-width energy histogram of the spectrum over [E_min, E_max]."""
    if bins < 8:
        raise ValueError("bins must be >= 8")
    energies = spectrum.energies
    counts, edges = np.histogram(
        energies, bins=bins, range=(energies[0], energies[-1]), density=density
    )
    return Histogram(bin_edges=edges, counts=counts, density=density)


def doublet_decay_fit(lam: float, ns) -> FitResult:
    """Line through (N, ln splitting) of the ground doublet across a sweep in N."""
    if lam <= 1:
        raise ValueError("doublet decay defined for lam > 1 only")
    points = []
    for n in ns:
        params = ModelParams(coupling=lam, n_particles=int(n))
        spec = merged_spectrum(params)
        pairs = doublet_splittings(spec, lam)
        if pairs and not pairs[0].below_resolution and pairs[0].splitting > 0:
            points.append((n, math.log(pairs[0].splitting)))
    if len(points) < 3:
        raise RuntimeError(
            f"only {len(points)} resolvable ground-doublet splittings; need >= 3"
        )
    x = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points])
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1 - ss_res / ss_tot
    return FitResult(
        slope=float(slope),
        amplitude=float(math.exp(intercept)),
        r_squared=r2,
        n_points=len(points),
        residual_max=float(np.max(np.abs(y - pred))),
    )


def staircase_deviation(
    spectrum: Spectrum, params: ModelParams, resolution: int = 256, n_samples: int = 201
) -> float:
    """Max |exact staircase - WKB counting function| after one global integer offset.

    Windows within 0.05 of the separatrix K and the outer 2% of the scaled
    energy range are excluded.
    """
    ks = spectrum.scaled_energies
    k_lo, k_hi = float(ks[0]), float(ks[-1])
    span = k_hi - k_lo
    sample = np.linspace(k_lo + 0.02 * span, k_hi - 0.02 * span, n_samples)
    k_c = separatrix_energy(params.coupling)
    if k_c is not None:
        sample = sample[np.abs(sample - k_c) >= 0.05]
    exact = np.searchsorted(ks, sample, side="right").astype(float)
    pred = np.array([counting_function(float(k), params, resolution) for k in sample])
    diff = exact - pred
    base = int(round(float(np.median(diff))))
    best = math.inf
    for offset in range(base - 2, base + 3):
        best = min(best, float(np.max(np.abs(diff - offset))))
    return best
