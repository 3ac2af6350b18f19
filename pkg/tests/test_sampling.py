"""Seeded SPD and density sampling."""

import numpy as np
import pytest

from meanineq import (
    DomainError,
    UsageError,
    check_density,
    min_eigenvalue,
    sample_density,
    sample_spd,
    split_rng,
)


def test_spd_floor_guarantee():
    for k in range(20):
        a = sample_spd(4, split_rng(1, k), spread=1.0, floor=1e-3)
        assert min_eigenvalue(a) >= 1e-3 - 1e-12


def test_spd_determinism():
    a = sample_spd(5, split_rng(9, 2, 3))
    b = sample_spd(5, split_rng(9, 2, 3))
    assert np.array_equal(a, b)
    c = sample_spd(5, split_rng(9, 2, 4))
    assert not np.array_equal(a, c)


def test_spd_degenerate_zero_spread():
    a = sample_spd(1, split_rng(0, 0), spread=0.0, floor=0.5)
    assert np.array_equal(a, np.array([[0.5]]))


def test_spd_rejects_bad_params():
    rng = split_rng(0, 0)
    with pytest.raises(UsageError):
        sample_spd(0, rng)
    with pytest.raises(UsageError):
        sample_spd(2, rng, spread=-1.0)
    with pytest.raises(UsageError):
        sample_spd(2, rng, floor=0.0)


def test_density_n1_is_unit():
    rho = sample_density(1, split_rng(3, 0))
    assert rho == pytest.approx(np.array([[1.0]]))


def test_density_invariants_on_ensemble():
    for k in range(50):
        rng = split_rng(4, k)
        n = int(rng.integers(1, 7))
        rho = sample_density(n, rng)
        assert abs(np.trace(rho) - 1.0) <= 1e-12
        lam = np.linalg.eigvalsh(rho)
        assert lam[0] >= -1e-12
        assert lam[-1] <= 1.0 + 1e-12


def test_density_reproducible():
    a = sample_density(3, split_rng(77, 1))
    b = sample_density(3, split_rng(77, 1))
    assert np.array_equal(a, b)


def test_check_density_rejects():
    with pytest.raises(DomainError):
        check_density(np.eye(2))  # trace 2
    with pytest.raises(DomainError):
        check_density(np.diag([1.5, -0.5]))  # negative eigenvalue


def test_split_paths_are_independent():
    x = split_rng(5, 0, 0).normal(size=8)
    y = split_rng(5, 0, 1).normal(size=8)
    z = split_rng(5, 1, 0).normal(size=8)
    assert not np.allclose(x, y)
    assert not np.allclose(x, z)
