"""Exact and semiclassical numerics for the collective-spin (LMG) Hamiltonian."""

from .model import ModelParams, Parity, SectorBasis, TridiagonalSector, build_sector
from .spectrum import (
    DoubletSplitting,
    Eigenpair,
    Level,
    Spectrum,
    doublet_splittings,
    eigen_all,
    eigen_k,
    gap,
    merged_spectrum,
)
from .classical import (
    ClassicalPoint,
    CriticalKind,
    StationaryPoint,
    critical_excitation,
    grad_k,
    harmonic_frequency,
    k_energy,
    phi_branches,
    predicted_spacing_separatrix,
    quartic_spacing,
    separatrix_energy,
    stationary_points,
)
from .action import (
    ActionTable,
    WkbLevel,
    action_table,
    area_below,
    counting_function,
    period,
    wkb_levels,
)
from .scaling import (
    FitResult,
    Histogram,
    LocalizationReport,
    SeparatrixSpacing,
    doublet_decay_fit,
    dos_histogram,
    fit_inverse_log,
    fit_power_law,
    localization_fraction,
    localization_report,
    measure_separatrix_spacing,
    minimal_gap_level,
    minimal_gap_pair,
    scar_report,
    staircase_deviation,
)
from .io import ConfigError, OutputTable, RunConfig, write_table
from .spectrum import PairingError, residual_norm
from .action import BracketFailureError, SeparatrixProximityError
from .classical import PoleSingularityError, hessian_k, k_energy_grid, k_range

__version__ = "0.1.0"
