"""Exhaustive small-instance oracle for validating the descent solver.

Grids every decision block: drone position (square lattice), bandwidth and
edge shares (simplex lattices), and the split of each vehicle (fine grid),
with exact per-vehicle phase alignment. Positions whose gain vector is
strictly dominated by another lattice point are pruned; the objective is
monotone in every vehicle's gain, so the pruned search returns the same
minimum. Tie-breaks are canonical: lattice scan order and lowest split.
"""

from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..channel import (
    achievable_rate,
    cascaded_channel,
    direct_path_gain,
    path_loss,
)
from ..offload import AllocationDecision, scheme_phase_matrix


class OracleSizeError(ValueError):
    pass


@dataclass(frozen=True)
class OracleGrid:
    phi_step: float = 1e-3
    drone_grid: int = 100
    share_step: float = 0.02


def simplex_grid(n, step):
    """All nonnegative n-vectors on the step lattice summing to 1."""
    m = int(round(1.0 / step))
    if n == 1:
        return np.array([[1.0]])
    combos = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            combos.append(prefix + [remaining])
            return
        for k in range(remaining + 1):
            rec(prefix + [k], remaining - k, slots - 1)

    rec([], m, n)
    return np.array(combos, dtype=float) / m


def pareto_keep_mask(points):
    """Mask of rows not strictly dominated (>= everywhere, > somewhere).

    A dominator has a strictly larger coordinate sum, so scanning in
    decreasing-sum order only ever needs comparisons against points kept so
    far (transitivity covers pruned dominators).
    """
    pts = np.asarray(points, dtype=float)
    m, d = pts.shape
    order = np.argsort(-pts.sum(axis=1), kind="stable")
    keep = np.zeros(m, dtype=bool)
    kept = np.empty((m, d))
    n_kept = 0
    for idx in order:
        p = pts[idx]
        if n_kept:
            sub = kept[:n_kept]
            ge = sub >= p
            dominated = np.any(np.all(ge, axis=1) & np.any(sub > p, axis=1))
            if dominated:
                continue
        kept[n_kept] = p
        n_kept += 1
        keep[idx] = True
    return keep


def _split_bounds(e_loc_full, e_tx_full, budget):
    """Vectorized energy-feasible split interval; lo > hi marks infeasible."""
    lo = np.zeros_like(e_tx_full)
    hi = np.ones_like(e_tx_full)
    inf_tx = ~np.isfinite(e_tx_full)
    tx_over = np.isfinite(e_tx_full) & (e_tx_full > budget)
    loc_over = e_loc_full > budget
    # zero rate: only full-local can fit
    lo = np.where(inf_tx & ~loc_over, 1.0, lo)
    hi = np.where(inf_tx & loc_over, -1.0, hi)
    # transmit-heavy: a minimum share must run locally
    denom = np.where(tx_over & ~loc_over, e_tx_full - e_loc_full, 1.0)
    lo = np.where(tx_over & ~loc_over, np.minimum((e_tx_full - budget) / denom, 1.0), lo)
    # compute-heavy: a maximum share may run locally
    denom = np.where(loc_over & ~tx_over & ~inf_tx, e_loc_full - e_tx_full, 1.0)
    hi = np.where(loc_over & ~tx_over & ~inf_tx,
                  np.minimum((budget - e_tx_full) / denom, 1.0), hi)
    # both over budget: infeasible
    both = tx_over & loc_over
    lo = np.where(both, 1.0, lo)
    hi = np.where(both, -1.0, hi)
    return lo, hi


def brute_force_oracle(scenario, realization, grid=None, objective="sum_completion",
                       scheme="vha_irs"):
    """Best gridded decision and its objective, for instances with N <= 3."""
    cfg = scenario.config
    n = cfg.n_vehicles
    if n > 3:
        raise OracleSizeError(
            f"oracle accepts at most 3 vehicles, got {n}; the gridded decision "
            f"space is astronomically large beyond that"
        )
    grid = grid or OracleGrid()
    use_max = objective == "max_completion"

    s = scenario.data_sizes()
    c = scenario.cycle_densities()
    rho_l = scenario.local_cpus()
    local_full = s * c / rho_l
    e_loc_full = cfg.kappa * rho_l ** 2 * s * c

    phases = scheme_phase_matrix(scenario, realization, scheme)
    include_irs = scheme != "vha_no_irs"
    pl_d = direct_path_gain(scenario)
    d_amp = np.sqrt(pl_d) * realization.direct            # complex direct term
    if include_irs:
        casc = np.array([
            cascaded_channel(realization.to_irs[i], realization.irs_to_ap, phases[i])
            for i in range(n)
        ])
    else:
        casc = np.zeros(n, dtype=complex)

    axis = np.linspace(0.0, cfg.area_side, int(grid.drone_grid))
    gx, gy = np.meshgrid(axis, axis, indexing="ij")
    positions = np.column_stack([gx.ravel(), gy.ravel()])  # canonical (x, y) order

    # per-position effective gains through the two 3D legs
    h2 = cfg.drone_height ** 2
    dv = positions[:, None, :] - scenario.positions()[None, :, :]
    d_veh = np.sqrt(dv[:, :, 0] ** 2 + dv[:, :, 1] ** 2 + h2)
    da = positions - np.asarray(scenario.ap_position)
    d_ap = np.sqrt(da[:, 0] ** 2 + da[:, 1] ** 2 + h2)
    pl_c = (path_loss(d_veh, cfg.pathloss_exp_los, cfg.ref_gain_1m)
            * path_loss(d_ap, cfg.pathloss_exp_los, cfg.ref_gain_1m)[:, None])
    amp = d_amp[None, :] + np.sqrt(pl_c) * casc[None, :]
    gains = np.abs(amp) ** 2                               # (positions, N)

    if include_irs:
        keep = pareto_keep_mask(gains)
    else:
        keep = np.zeros(len(positions), dtype=bool)
        keep[0] = True                                     # gain has no position term
    kept_idx = np.where(keep)[0]

    bshares = simplex_grid(n, grid.share_step)
    eshares = simplex_grid(n, grid.share_step)
    bw = bshares * cfg.bandwidth_total                     # (Mb, N)
    edge = eshares * cfg.edge_cpu_total                    # (Me, N)
    with np.errstate(divide="ignore"):
        edge_full = np.where(edge > 0, (s * c)[None, :] / edge, np.inf)
    n_phi = int(round(1.0 / grid.phi_step))
    phi_grid = np.linspace(0.0, 1.0, n_phi + 1)
    if scheme == "vec_irs":
        phi_grid = np.array([0.0])

    best = (np.inf, -1, -1, -1, None)
    for pos_i in kept_idx:
        rates = achievable_rate(bw, cfg.tx_power, gains[pos_i][None, :], cfg.noise_density)
        with np.errstate(divide="ignore"):
            tx_full = np.where(rates > 0, s[None, :] / rates, np.inf)
            e_tx_full = np.where(rates > 0, cfg.tx_power * s[None, :] / rates, np.inf)
        lo, hi = _split_bounds(np.broadcast_to(e_loc_full, e_tx_full.shape), e_tx_full,
                               cfg.energy_budget)
        obj, ib, ie, phi = kernels.best_allocation_scan(
            local_full, tx_full, edge_full, lo, hi, phi_grid, use_max_objective=use_max
        )
        if obj < best[0]:
            best = (obj, int(pos_i), ib, ie, phi)
    obj, pos_i, ib, ie, phi = best
    if pos_i < 0:
        raise ValueError("oracle found no feasible gridded decision")
    decision = AllocationDecision(
        split=np.asarray(phi, dtype=float),
        edge_cpu=edge[ie].copy(),
        bandwidth=bw[ib].copy(),
        phases=phases,
        drone_xy=(float(positions[pos_i, 0]), float(positions[pos_i, 1])),
    )
    return decision, float(obj)
