"""Collective-spin Hamiltonian H = J_z + (lam/N)(Jx^2 - Jy^2) in parity-resolved J_z bases.

The interaction couples m only to m +/- 2, so each parity sector of the
J_z basis carries a real symmetric tridiagonal matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class Parity(Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class ModelParams:
    """Coupling strength and particle number; spin j = N/2, hbar_eff = 2/N."""

    coupling: float
    n_particles: int

    def __post_init__(self):
        if self.n_particles < 1:
            raise ValueError(f"n_particles must be >= 1, got {self.n_particles}")
        if not math.isfinite(self.coupling) or self.coupling < 0:
            raise ValueError(f"coupling must be finite and >= 0, got {self.coupling}")

    @property
    def j(self) -> float:
        return self.n_particles / 2

    @property
    def hbar_eff(self) -> float:
        return 2 / self.n_particles


def j_plus_sq_element(j: float, m: float) -> float:
    """Matrix element <j, m+2| J_+^2 |j, m> = sqrt((j-m)(j+m+1)(j-m-1)(j+m+2)).

    Returns 0 when the target state is truncated away (m + 2 > j), i.e. when
    any factor under the root is negative.
    """
    factors = (j - m, j + m + 1, j - m - 1, j + m + 2)
    if min(factors) < 0:
        return 0.0
    return math.sqrt(factors[0] * factors[1] * factors[2] * factors[3])


@dataclass(frozen=True)
class SectorBasis:
    """Ordered J_z eigenvalues of one parity sector (parity of m + j)."""

    parity: Parity
    n_particles: int
    m_values: np.ndarray

    @classmethod
    def build(cls, params: ModelParams, parity: Parity) -> "SectorBasis":
        j = params.j
        start = -j if parity is Parity.EVEN else -j + 1
        m = np.arange(start, j + 1e-9, 2.0)
        return cls(parity=parity, n_particles=params.n_particles, m_values=m)

    @property
    def dim(self) -> int:
        return len(self.m_values)


@dataclass(frozen=True)
class TridiagonalSector:
    """Symmetric tridiagonal matrix of H restricted to one parity sector."""

    basis: SectorBasis
    diag: np.ndarray
    offdiag: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.diag)

    def dense(self) -> np.ndarray:
        h = np.diag(self.diag)
        idx = np.arange(self.dim - 1)
        h[idx, idx + 1] = self.offdiag
        h[idx + 1, idx] = self.offdiag
        return h


def build_sector(params: ModelParams, parity: Parity) -> TridiagonalSector:
    """Tridiagonal sector matrix: diagonal J_z, off-diagonal (lam/2N) J_+^2 couplings."""
    basis = SectorBasis.build(params, parity)
    j = params.j
    lam = params.coupling
    n = params.n_particles
    diag = basis.m_values.copy()
    offdiag = np.array(
        [lam / (2 * n) * j_plus_sq_element(j, m) for m in basis.m_values[:-1]]
    )
    return TridiagonalSector(basis=basis, diag=diag, offdiag=offdiag)
