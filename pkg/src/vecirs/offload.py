"""Latency and energy bookkeeping for partial offloading.

A task splits into a local fraction phi and an offloaded remainder that runs
in parallel, so the completion time is the max of the two branch times. The
offload branch is transmission followed by edge execution; result return is
neglected. Vehicle energy is local CPU energy kappa*f^2*cycles plus transmit
energy P * airtime.
"""

from dataclasses import dataclass

import numpy as np

from .channel import achievable_rate, aligned_phase_matrix, vehicle_gains

SCHEMES = ("vha_irs", "vec_irs", "vha_no_irs")


class InfeasibleDecision(ValueError):
    """An allocation violates a hard constraint; names the constraint."""

    def __init__(self, constraint, detail):
        self.constraint = constraint
        self.detail = detail
        super().__init__(f"infeasible decision: {constraint}: {detail}")


@dataclass(frozen=True)
class AllocationDecision:
    split: np.ndarray        # (N,) local fraction phi in [0, 1]
    edge_cpu: np.ndarray     # (N,) cycles/s, sum <= edge_cpu_total
    bandwidth: np.ndarray    # (N,) Hz, sum <= bandwidth_total
    phases: np.ndarray       # (N, K) per-vehicle element phases
    drone_xy: tuple          # (x, y) m


@dataclass(frozen=True)
class ResultRecord:
    vehicle_id: int
    scheme: str
    rate: float          # bits/s
    t_local: float       # s
    t_offload: float     # s
    t_completion: float  # s
    energy: float        # J
    split: float


def local_time(split, task, local_cpu):
    """Local branch time phi * s * c / rho_local."""
    if local_cpu <= 0:
        raise ValueError("local_cpu must be > 0")
    return split * task.data_size * task.cycle_density / local_cpu


def offload_time(split, task, rate, edge_cpu):
    """Offload branch time: transmission plus edge execution of (1-phi).

    Returns inf when anything is offloaded without rate or edge cycles.
    """
    if split >= 1.0:
        return 0.0
    rest = 1.0 - split
    if rate <= 0 or edge_cpu <= 0:
        return float("inf")
    return rest * task.data_size / rate + rest * task.data_size * task.cycle_density / edge_cpu


def completion_time(t_local, t_offload):
    """Parallel branches finish when the slower one does."""
    if t_local < 0 or t_offload < 0:
        raise ValueError("branch times must be >= 0")
    return max(t_local, t_offload)


def vehicle_energy(split, task, local_cpu, tx_power, rate, kappa):
    """kappa * rho_l^2 * phi * s * c + P * (1-phi) * s / rate."""
    compute = kappa * local_cpu ** 2 * split * task.data_size * task.cycle_density
    if split >= 1.0:
        return compute
    if rate <= 0:
        return float("inf")
    return compute + tx_power * (1.0 - split) * task.data_size / rate


def check_decision(scenario, decision, scheme="vha_irs", rel_tol=1e-9):
    """Raise InfeasibleDecision on the first violated allocation constraint."""
    cfg = scenario.config
    n = cfg.n_vehicles
    d = decision
    if len(d.split) != n or len(d.edge_cpu) != n or len(d.bandwidth) != n:
        raise InfeasibleDecision("dimensions", f"expected {n} vehicles")
    if np.any(d.split < 0) or np.any(d.split > 1):
        bad = int(np.argmax((d.split < 0) | (d.split > 1)))
        raise InfeasibleDecision("split_range", f"vehicle {bad} split {d.split[bad]}")
    if np.any(d.edge_cpu < 0):
        raise InfeasibleDecision("edge_cpu_sign", "negative edge allocation")
    if np.any(d.bandwidth < 0):
        raise InfeasibleDecision("bandwidth_sign", "negative bandwidth allocation")
    if np.sum(d.edge_cpu) > cfg.edge_cpu_total * (1.0 + rel_tol):
        raise InfeasibleDecision(
            "edge_cpu_total", f"sum {np.sum(d.edge_cpu):.6e} > {cfg.edge_cpu_total:.6e}"
        )
    if np.sum(d.bandwidth) > cfg.bandwidth_total * (1.0 + rel_tol):
        raise InfeasibleDecision(
            "bandwidth_total", f"sum {np.sum(d.bandwidth):.6e} > {cfg.bandwidth_total:.6e}"
        )
    if scheme == "vec_irs" and np.any(d.split != 0):
        raise InfeasibleDecision("vec_split", "full-offload scheme requires split = 0")


def evaluate_scheme(scenario, realization, decision, scheme="vha_irs"):
    """Per-vehicle outcome records for one allocation under one fading block.

    vec_irs requires all-zero splits; vha_no_irs drops the cascaded link from
    the effective gain. Energy above the per-vehicle budget is an
    infeasibility, reported with the vehicle id.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    check_decision(scenario, decision, scheme)
    cfg = scenario.config
    gains = vehicle_gains(
        scenario, realization, decision.drone_xy, decision.phases,
        include_irs=scheme != "vha_no_irs",
    )
    records = []
    for i, veh in enumerate(scenario.vehicles):
        rate = achievable_rate(decision.bandwidth[i], cfg.tx_power, gains[i], cfg.noise_density)
        t_loc = local_time(decision.split[i], veh.task, veh.local_cpu)
        t_off = offload_time(decision.split[i], veh.task, rate, decision.edge_cpu[i])
        energy = vehicle_energy(
            decision.split[i], veh.task, veh.local_cpu, cfg.tx_power, rate, cfg.kappa
        )
        if not np.isfinite(t_off):
            raise InfeasibleDecision(
                "offload_resources",
                f"vehicle {veh.id} offloads with rate {rate:.3e} and edge {decision.edge_cpu[i]:.3e}",
            )
        if energy > cfg.energy_budget * (1.0 + 1e-9):
            raise InfeasibleDecision(
                "energy_budget", f"vehicle {veh.id} energy {energy:.6e} J > {cfg.energy_budget:.6e} J"
            )
        records.append(
            ResultRecord(
                vehicle_id=veh.id,
                scheme=scheme,
                rate=float(rate),
                t_local=float(t_loc),
                t_offload=float(t_off),
                t_completion=float(completion_time(t_loc, t_off)),
                energy=float(energy),
                split=float(decision.split[i]),
            )
        )
    return records


def objective_value(records, objective="sum_completion"):
    times = [r.t_completion for r in records]
    if objective == "sum_completion":
        return float(np.sum(times))
    if objective == "max_completion":
        return float(np.max(times))
    raise ValueError(f"unknown objective {objective!r}")


def scheme_phase_matrix(scenario, realization, scheme):
    """Phase matrix used by a scheme: aligned (and quantized) or zeros."""
    cfg = scenario.config
    if scheme == "vha_no_irs":
        return np.zeros((cfg.n_vehicles, cfg.n_irs_elements))
    return aligned_phase_matrix(realization, quantize_bits=cfg.phase_bits)
