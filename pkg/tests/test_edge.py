import numpy as np
import pytest

from vecirs.optimizer.edge import allocate_edge_cpu, allocate_edge_cpu_sum


def _finish_times(cycles, fixed, rho):
    rho = np.asarray(rho)
    out = np.asarray(fixed, dtype=float).copy()
    mask = np.asarray(cycles) > 0
    out[mask] += np.asarray(cycles)[mask] / rho[mask]
    return out


def test_single_vehicle_gets_everything():
    rho = allocate_edge_cpu([2e10], [0.0], 25e9)
    assert rho[0] == pytest.approx(25e9, rel=1e-9)
    assert _finish_times([2e10], [0.0], rho)[0] == pytest.approx(0.8, rel=1e-9)


def test_two_vehicle_equalization():
    rho = allocate_edge_cpu([2e10, 1e10], [0.0, 0.0], 25e9)
    t = _finish_times([2e10, 1e10], [0.0, 0.0], rho)
    assert t[0] == pytest.approx(1.2, rel=1e-9)
    assert t[1] == pytest.approx(1.2, rel=1e-9)
    assert rho[0] == pytest.approx(2e10 / 1.2, rel=1e-6)
    assert rho[1] == pytest.approx(1e10 / 1.2, rel=1e-6)


def test_symmetric_vehicles_share_equally():
    rho = allocate_edge_cpu([5e9] * 4, [0.1] * 4, 25e9)
    assert np.allclose(rho, 25e9 / 4, rtol=1e-9)


def test_zero_cycles_get_zero():
    rho = allocate_edge_cpu([0.0, 1e10, 0.0], [9.0, 0.0, 3.0], 25e9)
    assert rho[0] == 0.0 and rho[2] == 0.0
    assert rho[1] == pytest.approx(25e9, rel=1e-9)


def test_all_zero_cycles():
    assert np.all(allocate_edge_cpu([0.0, 0.0], [1.0, 2.0], 25e9) == 0.0)


def test_pool_fully_used_and_minmax_optimal():
    rng = np.random.default_rng(13)
    for _ in range(40):
        n = int(rng.integers(2, 7))
        cycles = rng.uniform(1e9, 5e10, n)
        fixed = rng.uniform(0, 2, n)
        rho = allocate_edge_cpu(cycles, fixed, 25e9)
        assert np.sum(rho) == pytest.approx(25e9, rel=1e-9)
        t = _finish_times(cycles, fixed, rho)
        # all active finish times equalize at the optimum
        assert np.max(t) - np.min(t) <= 1e-6 * np.max(t)
        # random perturbations never beat it
        for _ in range(20):
            w = rng.uniform(0.5, 1.5, n)
            alt = rho * w
            alt *= 25e9 / np.sum(alt)
            assert np.max(_finish_times(cycles, fixed, alt)) >= np.max(t) * (1 - 1e-9)


def test_sum_mode_beats_or_matches_grid():
    rng = np.random.default_rng(14)
    for _ in range(25):
        cycles = rng.uniform(1e9, 5e10, 2)
        fixed = rng.uniform(0, 1, 2)
        floors = rng.uniform(0, 10, 2)
        rho = allocate_edge_cpu_sum(cycles, fixed, floors, 25e9)
        assert np.sum(rho) <= 25e9 * (1 + 1e-9)
        t = np.maximum(floors, _finish_times(cycles, fixed, rho))
        best = np.sum(t)
        shares = np.linspace(1e-4, 1 - 1e-4, 2001)
        for w in shares[:: 50]:
            alt = np.array([w, 1 - w]) * 25e9
            t_alt = np.maximum(floors, _finish_times(cycles, fixed, alt))
            assert best <= np.sum(t_alt) + 1e-6 * best
