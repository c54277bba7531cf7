"""Edge CPU sharing among offloading vehicles.

allocate_edge_cpu equalizes finish times: bisect on a common deadline T with
per-vehicle demand cycles/(T - fixed) until the pool is exactly used. The
sum-objective variant waters cycles by root-demand sqrt(cycles/lambda),
capping vehicles whose offload branch already beats their local branch.
"""

import numpy as np


def allocate_edge_cpu(offloaded_cycles, fixed_times, total, rel_tol=1e-9, max_iters=200):
    """Min-max allocation of a shared CPU pool.

    Minimizes max_n (fixed_n + cycles_n / rho_n) subject to sum rho <= total.
    Vehicles with zero offloaded cycles get zero. When any cycles are positive
    the whole pool is used and active finish times equalize.
    """
    cyc = np.asarray(offloaded_cycles, dtype=float)
    fixed = np.asarray(fixed_times, dtype=float)
    if total <= 0:
        raise ValueError("total edge CPU must be > 0")
    if np.any(cyc < 0) or np.any(fixed < 0):
        raise ValueError("cycles and fixed times must be >= 0")
    rho = np.zeros_like(cyc)
    active = cyc > 0
    if not np.any(active):
        return rho
    f_a, c_a = fixed[active], cyc[active]
    lo = float(np.max(f_a))
    hi = lo + float(np.sum(c_a)) / total  # demand at hi is <= total
    for _ in range(max_iters):
        if hi - lo <= rel_tol * hi:
            break
        mid = 0.5 * (lo + hi)
        if np.sum(c_a / (mid - f_a)) > total:
            lo = mid
        else:
            hi = mid
    rho_a = c_a / (hi - f_a)
    rho_a *= total / np.sum(rho_a)  # remove bisection drift, use the pool fully
    rho[active] = rho_a
    return rho


def allocate_edge_cpu_sum(offloaded_cycles, fixed_times, local_floors, total,
                          rel_tol=1e-12, max_iters=100):
    """Sum-of-completions allocation of a shared CPU pool.

    Minimizes sum_n max(local_n, fixed_n + cycles_n / rho_n) over the simplex.
    A vehicle stops benefiting once its offload branch drops to its local
    branch, so its share is capped at cycles/(local - fixed); the remaining
    demand is watered with rho = sqrt(cycles/lambda).
    """
    cyc = np.asarray(offloaded_cycles, dtype=float)
    fixed = np.asarray(fixed_times, dtype=float)
    floors = np.asarray(local_floors, dtype=float)
    if total <= 0:
        raise ValueError("total edge CPU must be > 0")
    rho = np.zeros_like(cyc)
    active = cyc > 0
    if not np.any(active):
        return rho
    c_a, f_a, l_a = cyc[active], fixed[active], floors[active]
    slack = l_a - f_a
    with np.errstate(over="ignore"):
        cap = np.where(slack > 0, c_a / np.maximum(slack, 1e-300), np.inf)
    if np.sum(cap) <= total:
        # every offload branch can reach its local floor; spread the leftover
        rho_a = cap.copy()
        leftover = total - np.sum(rho_a)
        rho_a += leftover / rho_a.size
        rho[active] = rho_a
        return rho
    # bisect the marginal value lambda; sum of min(cap, sqrt(c/lambda)) hits
    # total somewhere between lam_lo (sum = sum(cap) > total) and lam_hi
    lam_lo, lam_hi = 1e-300, 1.0
    while np.sum(np.minimum(cap, np.sqrt(c_a / lam_hi))) > total:
        lam_hi *= 16.0
    for _ in range(max_iters):
        if lam_hi - lam_lo <= rel_tol * lam_hi:
            break
        lam = 0.5 * (lam_lo + lam_hi)
        if np.sum(np.minimum(cap, np.sqrt(c_a / lam))) > total:
            lam_lo = lam
        else:
            lam_hi = lam
    rho_a = np.minimum(cap, np.sqrt(c_a / lam_hi))
    rho_a = np.minimum(cap, rho_a * (total / np.sum(rho_a)))
    shortfall = total - np.sum(rho_a)
    if shortfall > 0:
        rho_a += shortfall / rho_a.size  # spare capacity is free to park anywhere
    rho[active] = rho_a
    return rho
