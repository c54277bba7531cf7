"""Pure numpy implementation of the oracle's allocation scan."""

import numpy as np


def best_allocation_scan(local_full, tx_full, edge_full, phi_lo, phi_hi, phi_grid,
                         use_max_objective=False):
    """Exhaustive scan over (bandwidth combo, edge combo, split grid).

    local_full: (N,) local branch time at phi = 1.
    tx_full:    (Mb, N) transmit time at phi = 0 per bandwidth combo (inf ok).
    edge_full:  (Me, N) edge time at phi = 0 per edge combo (inf ok).
    phi_lo/hi:  (Mb, N) feasible split interval per bandwidth combo; lo > hi
                marks an energy-infeasible vehicle for that combo.
    phi_grid:   (P,) increasing grid over [0, 1].

    Returns (best_obj, best_ib, best_ie, best_phi (N,)). Ties resolve to the
    lowest (ib, ie) in scan order and the lowest feasible phi per vehicle.
    """
    local_full = np.asarray(local_full, dtype=float)
    tx_full = np.asarray(tx_full, dtype=float)
    edge_full = np.asarray(edge_full, dtype=float)
    phi = np.asarray(phi_grid, dtype=float)
    mb, n = tx_full.shape
    rest = 1.0 - phi
    t_loc = phi[None, :] * local_full[:, None]          # (N, P)
    best = (np.inf, -1, -1, None)
    for ib in range(mb):
        feas = phi[None, :] >= phi_lo[ib][:, None] - 1e-15
        feas &= phi[None, :] <= phi_hi[ib][:, None] + 1e-15
        feas &= (phi_lo[ib] <= phi_hi[ib])[:, None]
        b_full = tx_full[ib][None, :] + edge_full       # (Me, N)
        with np.errstate(invalid="ignore"):
            t_off = np.where(rest[None, None, :] > 0.0,
                             rest[None, None, :] * b_full[:, :, None], 0.0)
        t = np.maximum(t_loc[None, :, :], t_off)        # (Me, N, P)
        t = np.where(feas[None, :, :], t, np.inf)
        t_star = np.min(t, axis=2)                      # (Me, N)
        phi_idx = np.argmin(t, axis=2)
        obj = np.max(t_star, axis=1) if use_max_objective else np.sum(t_star, axis=1)
        ie = int(np.argmin(obj))
        if obj[ie] < best[0]:
            best = (float(obj[ie]), ib, ie, phi[phi_idx[ie]].copy())
    return best
