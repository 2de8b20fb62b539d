import math

import numpy as np
import pytest

from lmglab import (
    ModelParams,
    Parity,
    build_sector,
    doublet_splittings,
    eigen_all,
    eigen_k,
    gap,
    merged_spectrum,
    residual_norm,
)


def test_two_particle_closed_form():
    # N=2 coupled sector spans m in {-1, 1}: matrix [[-1, lam/2], [lam/2, 1]],
    # eigenvalues -/+ sqrt(1 + lam^2/4); the other sector is the single state m=0.
    lam = 1.0
    spec = merged_spectrum(ModelParams(coupling=lam, n_particles=2))
    root = math.sqrt(1 + lam * lam / 4)  # 1.1180339887498949
    assert spec.energies == pytest.approx([-root, 0.0, root], abs=1e-14)
    assert spec.energies[0] == pytest.approx(-1.1180339887498949, abs=1e-15)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
@pytest.mark.parametrize("lam", [0.5, 1.0, 2.5])
def test_small_sectors_match_dense_solver(lam, n):
    params = ModelParams(coupling=lam, n_particles=n)
    for parity in Parity:
        sector = build_sector(params, parity)
        if sector.dim == 0:
            continue
        dense_eigs = np.linalg.eigvalsh(sector.dense())
        assert np.allclose(eigen_all(sector), dense_eigs, atol=1e-12)


@pytest.mark.parametrize("n", [2, 10, 100])
def test_free_spin_ladder(n):
    spec = merged_spectrum(ModelParams(coupling=0.0, n_particles=n))
    expected = np.arange(n + 1) - n / 2
    assert np.max(np.abs(spec.energies - expected)) < 1e-12


def test_merged_trace_is_zero():
    spec = merged_spectrum(ModelParams(coupling=1.8, n_particles=60))
    assert abs(spec.energies.sum()) < 1e-10


def test_spectral_mirror():
    # the spectrum is symmetric under E -> -E
    spec = merged_spectrum(ModelParams(coupling=1.3, n_particles=40))
    e = spec.energies
    assert np.max(np.abs(e + e[::-1])) < 1e-10


def test_coupling_sign_theorem():
    # H(lam) and H(-lam) are unitarily equivalent; flipping the offdiagonal
    # sign leaves every eigenvalue unchanged.
    params = ModelParams(coupling=1.4, n_particles=30)
    for parity in Parity:
        sector = build_sector(params, parity)
        flipped = np.linalg.eigvalsh(
            np.diag(sector.diag)
            - np.diag(sector.offdiag, 1)
            - np.diag(sector.offdiag, -1)
        )
        assert np.allclose(eigen_all(sector), flipped, atol=1e-11)


def test_scaled_energy_range_bound():
    for lam in (0.5, 1.0, 2.0):
        n = 200
        spec = merged_spectrum(ModelParams(coupling=lam, n_particles=n))
        bound = (lam + 1 / lam) / 2 if lam >= 1 else 1 + lam / 2
        assert np.max(np.abs(spec.scaled_energies)) <= bound + 4 / n


def test_eigen_k_normalized_residual_and_sign():
    params = ModelParams(coupling=1.5, n_particles=80)
    sector = build_sector(params, Parity.EVEN)
    for k in (0, 3, sector.dim - 1):
        pair = eigen_k(sector, k)
        assert abs(np.sum(pair.components**2) - 1) < 1e-10
        assert residual_norm(sector, pair) <= 1e-9 * max(1.0, abs(pair.level.energy))
        first = pair.components[np.abs(pair.components) > 1e-8][0]
        assert first > 0


def test_eigen_k_out_of_range():
    sector = build_sector(ModelParams(1.0, 10), Parity.EVEN)
    with pytest.raises(IndexError):
        eigen_k(sector, sector.dim)


def test_determinism_repeat_runs():
    params = ModelParams(coupling=1.9, n_particles=150)
    a = merged_spectrum(params)
    b = merged_spectrum(params)
    assert np.array_equal(a.energies, b.energies)
    sector = build_sector(params, Parity.ODD)
    va = eigen_k(sector, 5).components
    vb = eigen_k(sector, 5).components
    assert np.array_equal(va, vb)


def test_gap_matches_full_diagonalization():
    params = ModelParams(coupling=1.0, n_particles=300)
    spec = merged_spectrum(params)
    assert gap(params) == pytest.approx(
        spec.energies[1] - spec.energies[0], rel=1e-12
    )


def test_doublets_alternate_parity_below_separatrix():
    spec = merged_spectrum(ModelParams(coupling=1.6, n_particles=100))
    pairs = doublet_splittings(spec, 1.6)
    assert len(pairs) > 3
    assert all(p.splitting >= 0 for p in pairs)
    assert all(p.mean_energy < -50 for p in pairs)  # K < -1 means E < -N/2


def test_doublets_empty_in_symmetric_phase():
    spec = merged_spectrum(ModelParams(coupling=0.5, n_particles=50))
    assert doublet_splittings(spec, 0.5) == []


def test_tiny_splittings_flagged():
    # deep in the deformed phase the ground splitting underflows double precision
    spec = merged_spectrum(ModelParams(coupling=3.0, n_particles=400))
    pairs = doublet_splittings(spec, 3.0)
    assert pairs[0].below_resolution
