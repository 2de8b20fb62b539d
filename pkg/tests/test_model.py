import numpy as np
import pytest

from lmglab import ModelParams, Parity, build_sector
from lmglab.model import j_plus_sq_element


def test_params_basic():
    p = ModelParams(coupling=1.5, n_particles=10)
    assert p.j == 5.0
    assert p.hbar_eff * p.j == 1.0


def test_params_rejects_bad_inputs():
    with pytest.raises(ValueError):
        ModelParams(coupling=-0.5, n_particles=10)
    with pytest.raises(ValueError):
        ModelParams(coupling=1.0, n_particles=0)


def test_matrix_element_soft_zero_at_edge():
    # raising past the top of the ladder annihilates the state
    assert j_plus_sq_element(3.0, 2.0) == 0.0
    assert j_plus_sq_element(3.0, 3.0) == 0.0
    assert j_plus_sq_element(2.0, -1.0) > 0.0


def test_matrix_element_value():
    # <j, m+2| J+^2 |j, m> = sqrt((j-m)(j+m+1)(j-m-1)(j+m+2)) for j=2, m=-2
    expected = np.sqrt(4 * 1 * 3 * 2)
    assert j_plus_sq_element(2.0, -2.0) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("n", [2, 3, 7, 10, 101])
def test_sectors_partition_basis(n):
    p = ModelParams(coupling=0.7, n_particles=n)
    even = build_sector(p, Parity.EVEN)
    odd = build_sector(p, Parity.ODD)
    ms = np.sort(np.concatenate([even.basis.m_values, odd.basis.m_values]))
    assert len(ms) == n + 1
    assert np.allclose(ms, np.arange(n + 1) - p.j)


@pytest.mark.parametrize("parity", [Parity.EVEN, Parity.ODD])
def test_m_values_stride_and_bounds(parity):
    p = ModelParams(coupling=2.0, n_particles=12)
    basis = build_sector(p, parity).basis
    diffs = np.diff(basis.m_values)
    assert np.allclose(diffs, 2.0)
    assert np.all(np.abs(basis.m_values) <= p.j)
    # integer j: each sector's m-set is symmetric under m -> -m
    assert np.allclose(np.sort(-basis.m_values), basis.m_values)


def test_sector_zero_trace():
    p = ModelParams(coupling=1.3, n_particles=16)
    for parity in Parity:
        sector = build_sector(p, parity)
        assert abs(sector.diag.sum()) < 1e-12


def test_diag_equals_m_values():
    p = ModelParams(coupling=0.9, n_particles=9)
    sector = build_sector(p, Parity.ODD)
    assert np.array_equal(sector.diag, sector.basis.m_values)
    assert len(sector.offdiag) == sector.dim - 1


def test_offdiag_vanishes_at_zero_coupling():
    p = ModelParams(coupling=0.0, n_particles=8)
    sector = build_sector(p, Parity.EVEN)
    assert np.all(sector.offdiag == 0.0)


def test_dense_matches_tridiagonal():
    p = ModelParams(coupling=1.7, n_particles=11)
    sector = build_sector(p, Parity.EVEN)
    dense = sector.dense()
    assert np.allclose(dense, dense.T)
    assert np.allclose(np.diag(dense), sector.diag)
    assert np.allclose(np.diag(dense, 1), sector.offdiag)
