import numpy as np
import pytest

from vecirs.channel import achievable_rate, sample_realization, vehicle_gains
from vecirs.offload import evaluate_scheme, objective_value
from vecirs.optimizer.oracle import (
    OracleGrid,
    OracleSizeError,
    brute_force_oracle,
    pareto_keep_mask,
    simplex_grid,
)
from vecirs.optimizer.splits import energy_split_interval, optimal_split
from vecirs.scenario import SystemConfig, TaskSpec, Vehicle, Scenario, generate_scenario

SMALL = OracleGrid(phi_step=1e-2, drone_grid=12, share_step=0.1)


def _instance(seed, n=2, k=4):
    cfg = SystemConfig(n_vehicles=n, n_irs_elements=k, local_cpu_max=1e9,
                       kappa=1e-30, energy_budget=1.0, tx_power=1.0, seed=seed)
    scen = generate_scenario(cfg)
    real = sample_realization(scen, np.random.default_rng(seed + 5))
    return cfg, scen, real


def test_refuses_large_instances():
    cfg, scen, real = _instance(1, n=4)
    with pytest.raises(OracleSizeError, match="at most 3"):
        brute_force_oracle(scen, real)


def test_simplex_grid_shapes():
    assert simplex_grid(1, 0.02).shape == (1, 1)
    g2 = simplex_grid(2, 0.02)
    assert g2.shape == (51, 2)
    assert np.allclose(g2.sum(axis=1), 1.0)
    g3 = simplex_grid(3, 0.1)
    assert g3.shape == (66, 3)
    assert np.allclose(g3.sum(axis=1), 1.0)


def test_pareto_mask():
    pts = np.array([[1.0, 1.0], [2.0, 2.0], [0.5, 3.0], [2.0, 2.0], [1.5, 0.5]])
    keep = pareto_keep_mask(pts)
    # (1,1) and (1.5,0.5) dominated by (2,2); duplicates both kept
    assert list(keep) == [False, True, True, True, False]


def test_oracle_decision_is_feasible_and_consistent():
    cfg, scen, real = _instance(2)
    dec, obj = brute_force_oracle(scen, real, SMALL)
    recs = evaluate_scheme(scen, real, dec, "vha_irs")
    assert objective_value(recs) == pytest.approx(obj, rel=1e-9)


def test_single_vehicle_split_matches_closed_form():
    for seed in range(5):
        cfg, scen, real = _instance(30 + seed, n=1)
        dec, obj = brute_force_oracle(scen, real)
        veh = scen.vehicles[0]
        gains = vehicle_gains(scen, real, dec.drone_xy, dec.phases)
        rate = achievable_rate(cfg.bandwidth_total, cfg.tx_power, gains[0], cfg.noise_density)
        a = veh.task.cycles / veh.local_cpu
        b = veh.task.data_size / rate + veh.task.cycles / cfg.edge_cpu_total
        e_loc = cfg.kappa * veh.local_cpu ** 2 * veh.task.cycles
        e_tx = cfg.tx_power * veh.task.data_size / rate
        lo, hi = energy_split_interval(e_loc, e_tx, cfg.energy_budget)
        phi_star = optimal_split(a, b, lo, hi)
        assert dec.split[0] == pytest.approx(phi_star, abs=1e-3)


def test_symmetric_vehicles_get_symmetric_shares():
    cfg = SystemConfig(n_vehicles=2, n_irs_elements=4, local_cpu_max=1e9,
                       kappa=1e-30, energy_budget=1.0, tx_power=1.0, seed=3)
    task = TaskSpec(data_size=4e7, cycle_density=5e3)
    vehicles = tuple(
        Vehicle(id=i, position=(200.0, 240.0), local_cpu=4e8, task=task) for i in range(2)
    )
    scen = Scenario(config=cfg, vehicles=vehicles, ap_position=cfg.ap_position)
    rng = np.random.default_rng(4)
    base = sample_realization(scen, rng)
    # identical small-scale channels for both vehicles
    real = type(base)(
        direct=np.array([base.direct[0], base.direct[0]]),
        to_irs=np.array([base.to_irs[0], base.to_irs[0]]),
        irs_to_ap=base.irs_to_ap,
    )
    dec, _ = brute_force_oracle(scen, real, OracleGrid(phi_step=1e-2, drone_grid=11, share_step=0.05))
    assert abs(dec.bandwidth[0] - dec.bandwidth[1]) <= 0.05 * cfg.bandwidth_total + 1e-9
    assert abs(dec.edge_cpu[0] - dec.edge_cpu[1]) <= 0.05 * cfg.edge_cpu_total + 1e-9
    assert abs(dec.split[0] - dec.split[1]) <= 1e-2 + 1e-12


def test_oracle_beats_feasible_heuristics():
    cfg, scen, real = _instance(6)
    dec, obj = brute_force_oracle(scen, real, SMALL)
    # a gridded heuristic decision can never undercut the exhaustive minimum
    from vecirs.offload import AllocationDecision, scheme_phase_matrix

    grid_vals = np.linspace(0, 1, 101)
    rng = np.random.default_rng(7)
    for _ in range(20):
        splits = rng.choice(grid_vals, 2)
        w = rng.choice(np.linspace(0, 1, 11))
        e = rng.choice(np.linspace(0, 1, 11))
        cand = AllocationDecision(
            split=splits,
            edge_cpu=np.array([e, 1 - e]) * cfg.edge_cpu_total,
            bandwidth=np.array([w, 1 - w]) * cfg.bandwidth_total,
            phases=scheme_phase_matrix(scen, real, "vha_irs"),
            drone_xy=dec.drone_xy,
        )
        try:
            recs = evaluate_scheme(scen, real, cand, "vha_irs")
        except Exception:
            continue
        assert objective_value(recs) >= obj * (1 - 1e-9)


def test_oracle_determinism():
    cfg, scen, real = _instance(8)
    a = brute_force_oracle(scen, real, SMALL)
    b = brute_force_oracle(scen, real, SMALL)
    assert a[1] == b[1]
    assert np.array_equal(a[0].split, b[0].split)
    assert a[0].drone_xy == b[0].drone_xy
