import numpy as np
import pytest

from vecirs.optimizer.splits import (
    EnergyInfeasible,
    SplitInfeasible,
    compute_min_split_for_energy,
    energy_split_interval,
    optimal_split,
)
from vecirs.scenario import TaskSpec


def test_boundary_when_offload_instant():
    assert optimal_split(10.0, 0.0) == 0.0
    assert optimal_split(10.0, 0.0, min_split=0.3) == 0.3


def test_equalizer_interior():
    phi = optimal_split(10.0, 30.0)
    assert phi == pytest.approx(0.75, rel=1e-12)
    assert phi * 10.0 == pytest.approx((1 - phi) * 30.0, rel=1e-12)


def test_energy_clamp_dominates():
    assert optimal_split(10.0, 30.0, min_split=0.9) == 0.9


def test_max_clamp():
    assert optimal_split(10.0, 30.0, max_split=0.5) == 0.5


def test_empty_interval_rejected():
    with pytest.raises(SplitInfeasible):
        optimal_split(10.0, 30.0, min_split=1.2)
    with pytest.raises(SplitInfeasible):
        optimal_split(10.0, 30.0, min_split=0.7, max_split=0.4)


def test_equalizer_matches_grid_scan():
    rng = np.random.default_rng(11)
    grid = np.linspace(0, 1, 100_001)
    for _ in range(200):
        a = rng.uniform(0.1, 100)
        b = rng.uniform(0.1, 100)
        lo = rng.uniform(0, 0.5)
        hi = rng.uniform(lo, 1.0)
        phi = optimal_split(a, b, lo, hi)
        mask = (grid >= lo) & (grid <= hi)
        vals = np.maximum(grid[mask] * a, (1 - grid[mask]) * b)
        best = np.min(vals)
        got = max(phi * a, (1 - phi) * b)
        assert got <= best + 1e-6 * max(1.0, best)


def test_unconstrained_budget():
    assert energy_split_interval(0.5, 0.7, 1e6) == (0.0, 1.0)


def test_min_split_transmit_heavy():
    task = TaskSpec(data_size=1e8, cycle_density=1.0)
    # 0.1 W at 1e7 bits/s = 1e-8 J per bit, full transmit costs 1 J
    phi = compute_min_split_for_energy(task, 1.0, 0.1, 1e7, 1e-40, 0.5)
    assert phi == pytest.approx(0.5, abs=1e-9)


def test_infeasible_budget_detected():
    with pytest.raises(EnergyInfeasible, match="minimum achievable energy"):
        energy_split_interval(2.0, 3.0, 1.0)


def test_zero_rate_forces_full_local():
    assert energy_split_interval(0.7, np.inf, 1.0) == (1.0, 1.0)
    with pytest.raises(EnergyInfeasible):
        energy_split_interval(1.5, np.inf, 1.0)


def test_compute_heavy_upper_clamp():
    lo, hi = energy_split_interval(4.0, 0.4, 1.0)
    assert lo == 0.0
    # energy at hi is exactly the budget: hi*4 + (1-hi)*0.4 = 1
    assert hi * 4.0 + (1 - hi) * 0.4 == pytest.approx(1.0, rel=1e-12)


def test_interval_is_exact_feasible_set():
    rng = np.random.default_rng(12)
    grid = np.linspace(0, 1, 10_001)
    for _ in range(300):
        e_loc = rng.uniform(0, 3)
        e_tx = rng.uniform(0, 3)
        w = rng.uniform(0.2, 2.0)
        energies = grid * e_loc + (1 - grid) * e_tx
        feasible = grid[energies <= w]
        try:
            lo, hi = energy_split_interval(e_loc, e_tx, w)
        except EnergyInfeasible:
            assert feasible.size == 0 or np.min(energies) > w * (1 - 1e-12)
            continue
        assert feasible.size > 0
        assert lo == pytest.approx(np.min(feasible), abs=2e-4)
        assert hi == pytest.approx(np.max(feasible), abs=2e-4)
