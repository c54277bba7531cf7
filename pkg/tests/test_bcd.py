import numpy as np
import pytest

from vecirs.channel import achievable_rate, sample_realization, vehicle_gains
from vecirs.offload import evaluate_scheme, objective_value
from vecirs.optimizer.bcd import SolveOptions, SolveTrace, OptimizerInternalError, bcd_optimize
from vecirs.optimizer.splits import EnergyInfeasible, energy_split_interval
from vecirs.scenario import SystemConfig, generate_scenario

LAT = dict(local_cpu_max=1e9, kappa=1e-30, energy_budget=1e3, tx_power=0.1)
ENG = dict(local_cpu_max=1e9, kappa=1e-30, energy_budget=1.0, tx_power=4.0)


def _instance(seed, n=6, k=8, profile=LAT):
    cfg = SystemConfig(n_vehicles=n, n_irs_elements=k, seed=seed, **profile)
    scen = generate_scenario(cfg)
    real = sample_realization(scen, np.random.default_rng(seed + 17))
    return cfg, scen, real


def test_degenerate_tolerance_returns_initial():
    cfg, scen, real = _instance(1)
    dec, trace = bcd_optimize(scen, real, SolveOptions(rel_tol=1.0), scheme="vha_irs")
    assert trace.termination == "immediate"
    assert len(trace.objectives) == 1
    evaluate_scheme(scen, real, dec, "vha_irs")  # still a feasible decision


def test_vec_objective_matches_evaluation_exactly():
    cfg, scen, real = _instance(2)
    dec, trace = bcd_optimize(scen, real, SolveOptions(), scheme="vec_irs")
    recs = evaluate_scheme(scen, real, dec, "vec_irs")
    assert trace.objectives[-1] == objective_value(recs)


def test_traces_are_nonincreasing():
    for seed in range(6):
        for profile in (LAT, ENG):
            cfg, scen, real = _instance(seed, profile=profile)
            for scheme in ("vha_irs", "vec_irs", "vha_no_irs"):
                try:
                    _, trace = bcd_optimize(scen, real, SolveOptions(), scheme=scheme)
                except EnergyInfeasible:
                    assert profile is ENG and scheme == "vec_irs"
                    continue
                objs = trace.objectives
                assert all(b <= a + 1e-9 for a, b in zip(objs, objs[1:])), (scheme, objs)


def test_returned_decision_is_feasible():
    for seed in range(4):
        cfg, scen, real = _instance(seed, profile=ENG)
        dec, trace = bcd_optimize(scen, real, SolveOptions(), scheme="vha_irs")
        recs = evaluate_scheme(scen, real, dec, "vha_irs")
        assert np.sum(dec.edge_cpu) <= cfg.edge_cpu_total * (1 + 1e-9)
        assert np.sum(dec.bandwidth) <= cfg.bandwidth_total * (1 + 1e-9)
        assert np.all((dec.split >= 0) & (dec.split <= 1))
        assert trace.objectives[-1] == pytest.approx(objective_value(recs), rel=1e-12)


def test_determinism():
    cfg, scen, real = _instance(3, profile=ENG)
    d1, t1 = bcd_optimize(scen, real, SolveOptions(), scheme="vha_irs")
    d2, t2 = bcd_optimize(scen, real, SolveOptions(), scheme="vha_irs")
    assert np.array_equal(d1.split, d2.split)
    assert np.array_equal(d1.bandwidth, d2.bandwidth)
    assert np.array_equal(d1.edge_cpu, d2.edge_cpu)
    assert d1.drone_xy == d2.drone_xy
    assert t1.objectives == t2.objectives


def test_hybrid_never_loses_to_benchmarks():
    for seed in range(6):
        cfg, scen, real = _instance(seed + 40)
        _, t_vha = bcd_optimize(scen, real, SolveOptions(), scheme="vha_irs")
        _, t_vec = bcd_optimize(scen, real, SolveOptions(), scheme="vec_irs")
        _, t_out = bcd_optimize(scen, real, SolveOptions(), scheme="vha_no_irs")
        assert t_vha.objectives[-1] <= t_vec.objectives[-1] + 1e-9
        assert t_vha.objectives[-1] <= t_out.objectives[-1] + 1e-9


def test_split_optimality_conditions():
    # every vehicle either equalizes branches or sits at a declared boundary
    for seed in range(5):
        cfg, scen, real = _instance(seed + 60, profile=ENG)
        dec, _ = bcd_optimize(scen, real, SolveOptions(), scheme="vha_irs")
        gains = vehicle_gains(scen, real, dec.drone_xy, dec.phases)
        for i, veh in enumerate(scen.vehicles):
            rate = achievable_rate(dec.bandwidth[i], cfg.tx_power, gains[i], cfg.noise_density)
            e_loc = cfg.kappa * veh.local_cpu ** 2 * veh.task.cycles
            e_tx = cfg.tx_power * veh.task.data_size / rate if rate > 0 else np.inf
            lo, hi = energy_split_interval(e_loc, e_tx, cfg.energy_budget)
            t_loc = dec.split[i] * veh.task.cycles / veh.local_cpu
            rest = 1 - dec.split[i]
            t_off = rest * veh.task.data_size / rate + rest * veh.task.cycles / dec.edge_cpu[i] \
                if dec.edge_cpu[i] > 0 else (0.0 if rest == 0 else np.inf)
            equalized = abs(t_loc - t_off) <= 1e-6 * max(t_loc, t_off, 1e-12)
            at_boundary = (
                min(abs(dec.split[i] - b) for b in (0.0, 1.0, lo, hi)) <= 1e-9
            )
            assert equalized or at_boundary, (seed, i, dec.split[i], lo, hi, t_loc, t_off)


def test_vec_infeasible_energy_names_vehicle():
    cfg = SystemConfig(n_vehicles=3, n_irs_elements=8, local_cpu_max=1e9,
                       kappa=1e-30, energy_budget=0.05, tx_power=4.0, seed=8)
    scen = generate_scenario(cfg)
    real = sample_realization(scen, np.random.default_rng(9))
    with pytest.raises(EnergyInfeasible, match="vehicle"):
        bcd_optimize(scen, real, SolveOptions(), scheme="vec_irs")


def test_trace_guard_rejects_increases():
    trace = SolveTrace()
    trace.append(10.0, "init")
    trace.append(9.5, "splits")
    with pytest.raises(OptimizerInternalError):
        trace.append(9.6, "edge_cpu")


def test_quantized_phases_flow_through():
    cfg = SystemConfig(n_vehicles=4, n_irs_elements=16, phase_bits=2,
                       seed=11, **{k: v for k, v in LAT.items()})
    scen = generate_scenario(cfg)
    real = sample_realization(scen, np.random.default_rng(12))
    dec, _ = bcd_optimize(scen, real, SolveOptions(), scheme="vha_irs")
    levels = {0.0, np.pi / 2, np.pi, 3 * np.pi / 2}
    assert set(np.unique(dec.phases)).issubset(levels)


def test_max_completion_objective():
    cfg, scen, real = _instance(13)
    opts = SolveOptions(objective="max_completion")
    dec, trace = bcd_optimize(scen, real, opts, scheme="vha_irs")
    recs = evaluate_scheme(scen, real, dec, "vha_irs")
    assert trace.objectives[-1] == pytest.approx(
        max(r.t_completion for r in recs), rel=1e-12
    )
