"""Deterministic eigensolution of the sector matrices and merged-spectrum utilities."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .model import ModelParams, Parity, TridiagonalSector, build_sector

# Splittings below this fraction of the spectral radius are double-precision
# noise (exp(-c N) underflows well before N ~ 300 for lam well above 1).
RESOLUTION_FRACTION = 1e-13


class PairingError(RuntimeError):
    """Parity tags below the separatrix failed to alternate."""


@dataclass(frozen=True)
class Level:
    energy: float
    scaled_energy: float  # K = 2 E / N
    parity: Parity
    sector_index: int
    global_index: int = -1


@dataclass(frozen=True)
class Eigenpair:
    level: Level
    components: np.ndarray  # amplitudes ordered by increasing m within the sector


@dataclass(frozen=True)
class Spectrum:
    params: ModelParams
    levels: list[Level] = field(default_factory=list)

    @property
    def energies(self) -> np.ndarray:
        return np.array([lv.energy for lv in self.levels])

    @property
    def scaled_energies(self) -> np.ndarray:
        return np.array([lv.scaled_energy for lv in self.levels])


@dataclass(frozen=True)
class DoubletSplitting:
    pair_index: int
    mean_energy: float
    splitting: float
    below_resolution: bool


def eigen_all(sector: TridiagonalSector) -> np.ndarray:
    """All eigenvalues of one sector, ascending, via LAPACK bisection (stebz)."""
    if sector.dim == 1:
        return sector.diag.copy()
    return scipy.linalg.eigh_tridiagonal(
        sector.diag, sector.offdiag, eigvals_only=True, lapack_driver="stebz"
    )


def eigen_k(sector: TridiagonalSector, k: int) -> Eigenpair:
    """k-th ascending eigenpair of one sector (inverse iteration for the vector).

    Sign convention: the first component with |c| > 1e-8 is positive.
    """
    if not 0 <= k < sector.dim:
        raise IndexError(f"eigenpair index {k} out of range for dim {sector.dim}")
    if sector.dim == 1:
        w = sector.diag.copy()
        v = np.ones((1, 1))
    else:
        w, v = scipy.linalg.eigh_tridiagonal(
            sector.diag,
            sector.offdiag,
            select="i",
            select_range=(k, k),
            lapack_driver="stebz",
        )
    vec = v[:, 0]
    significant = np.flatnonzero(np.abs(vec) > 1e-8)
    if significant.size and vec[significant[0]] < 0:
        vec = -vec
    level = Level(
        energy=float(w[0]),
        scaled_energy=2 * float(w[0]) / sector.basis.n_particles,
        parity=sector.basis.parity,
        sector_index=k,
    )
    return Eigenpair(level=level, components=vec)


def residual_norm(sector: TridiagonalSector, pair: Eigenpair) -> float:
    """|| H v - E v || for an eigenpair of the given sector."""
    v = pair.components
    hv = sector.diag * v
    if sector.dim > 1:
        hv[:-1] += sector.offdiag * v[1:]
        hv[1:] += sector.offdiag * v[:-1]
    return float(np.linalg.norm(hv - pair.level.energy * v))


def merged_spectrum(params: ModelParams) -> Spectrum:
    """Both parity sectors diagonalized and merged into one sorted spectrum.

    Ties are broken even-before-odd, then by sector index, for determinism.
    """
    records = []
    for parity in (Parity.EVEN, Parity.ODD):
        sector = build_sector(params, parity)
        if sector.dim == 0:
            continue
        for i, e in enumerate(eigen_all(sector)):
            records.append((float(e), 0 if parity is Parity.EVEN else 1, i, parity))
    records.sort(key=lambda r: (r[0], r[1], r[2]))
    n = params.n_particles
    levels = [
        Level(
            energy=e,
            scaled_energy=2 * e / n,
            parity=parity,
            sector_index=i,
            global_index=g,
        )
        for g, (e, _, i, parity) in enumerate(records)
    ]
    return Spectrum(params=params, levels=levels)


def gap(params: ModelParams) -> float:
    """E_1 - E_0 of the merged spectrum (partial solves, lowest two per sector)."""
    lowest = []
    for parity in (Parity.EVEN, Parity.ODD):
        sector = build_sector(params, parity)
        if sector.dim == 0:
            continue
        if sector.dim == 1:
            lowest.extend(sector.diag.tolist())
        else:
            hi = min(1, sector.dim - 1)
            w = scipy.linalg.eigh_tridiagonal(
                sector.diag,
                sector.offdiag,
                eigvals_only=True,
                select="i",
                select_range=(0, hi),
                lapack_driver="stebz",
            )
            lowest.extend(w.tolist())
    lowest.sort()
    if len(lowest) < 2:
        return 0.0
    return lowest[1] - lowest[0]


def doublet_splittings(spectrum: Spectrum, lam: float) -> list[DoubletSplitting]:
    """Even/odd doublet splittings below the separatrix (mean K < -1) for lam > 1.

    Splittings smaller than RESOLUTION_FRACTION times the spectral radius are
    flagged as below resolution; fits must use only unflagged pairs.
    """
    if lam <= 1:
        return []
    levels = spectrum.levels
    radius = max(abs(lv.energy) for lv in levels)
    out = []
    i = 0
    pair_index = 0
    while i + 1 < len(levels):
        a, b = levels[i], levels[i + 1]
        mean_k = (a.scaled_energy + b.scaled_energy) / 2
        if mean_k >= -1:
            break
        if a.parity is b.parity:
            raise PairingError(
                f"levels {i} and {i + 1} below the separatrix share parity {a.parity.value}"
            )
        splitting = abs(a.energy - b.energy)
        out.append(
            DoubletSplitting(
                pair_index=pair_index,
                mean_energy=(a.energy + b.energy) / 2,
                splitting=splitting,
                below_resolution=splitting < RESOLUTION_FRACTION * radius,
            )
        )
        pair_index += 1
        i += 2
    return out
