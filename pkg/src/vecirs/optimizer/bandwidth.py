"""Orthogonal bandwidth sharing.

Per-vehicle rate is b*log2(1 + q/b) with q = P*gain/N0, increasing and
concave in b with the wideband ceiling q/ln2. The central object is the
best-completion map T_n(b): the completion time vehicle n can reach with
dedicated bandwidth b once its split re-equalizes inside the energy-feasible
interval. T_n is nonincreasing in b (a higher rate shortens the offload
branch and relaxes the transmit-energy clamp).

Modes:
- equal_split: b = B/N (the default contract).
- min_max: bisect a common deadline T against the monotone map
  T -> minimum bandwidth, exact up to the bisection tolerance.
- min_sum: exact convex allocation of the sum of completions at the current
  splits, equalizing the marginal time saving per Hz.

The descent loop evaluates min_sum (smooth-regime polisher), a table-driven
min_max (clamp escape), and equal_split, keeping whichever wins; the public
optimized modes are safeguarded to never do worse than equal_split.
"""

from dataclasses import dataclass

import numpy as np

LN2 = np.log(2.0)


class BisectionError(RuntimeError):
    def __init__(self, lo, hi, detail):
        self.bracket = (lo, hi)
        super().__init__(f"{detail} (bracket [{lo:.9e}, {hi:.9e}])")


@dataclass(frozen=True)
class BandwidthContext:
    """Everything the allocator needs to know about the vehicles.

    bits_full/local_full/edge_time_full are the whole-task quantities (split
    phi = 0 or 1), e_loc_full the all-local energy; splits is the incumbent
    split vector used by the fixed-split modes.
    """

    bits_full: np.ndarray    # s_n, bits
    local_full: np.ndarray   # s*c/rho_l, s
    edge_time_full: np.ndarray  # s*c/edge_share, s (inf when no share)
    e_loc_full: np.ndarray   # kappa*rho_l^2*s*c, J
    q: np.ndarray            # P*gain/N0, Hz
    tx_power: float
    energy_budget: float
    splits: np.ndarray


def _rate(b, q):
    b = np.asarray(b, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        raw = b * np.log1p(q / np.maximum(b, 1e-300)) / LN2
    return np.where(b > 0, raw, 0.0)


def _rate_slope(b, q):
    # d rate / d b = [ln(1 + q/b) - q/(b+q)] / ln 2
    return (np.log1p(q / b) - q / (b + q)) / LN2


def _invert_rate(q, target, b_cap, iters=48):
    """Minimum bandwidth giving rate >= target, inf when b_cap is not enough.

    Vectorized bisection; target <= 0 maps to 0.
    """
    q = np.asarray(q, dtype=float)
    target = np.asarray(target, dtype=float)
    shape = np.broadcast(q, target).shape
    out = np.full(shape, np.inf)
    need = np.broadcast_to(target > 0, shape)
    out[~need] = 0.0
    reachable = need & (_rate(np.full(shape, float(b_cap)), q) >= target)
    lo = np.zeros(shape)
    hi = np.full(shape, float(b_cap))
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        ok = _rate(mid, q) >= target
        hi = np.where(ok, mid, hi)
        lo = np.where(ok, lo, mid)
    out[reachable] = hi[reachable]
    return out


def split_bounds_at_rate(e_loc_full, rate, bits_full, tx_power, budget):
    """Vectorized energy-feasible split interval; lo > hi marks infeasible."""
    with np.errstate(divide="ignore"):
        e_tx = np.where(rate > 0, tx_power * bits_full / rate, np.inf)
    lo = np.zeros_like(e_tx)
    hi = np.ones_like(e_tx)
    inf_tx = ~np.isfinite(e_tx)
    tx_over = np.isfinite(e_tx) & (e_tx > budget)
    loc_over = e_loc_full > budget
    lo = np.where(inf_tx & ~loc_over, 1.0, lo)
    hi = np.where(inf_tx & loc_over, -1.0, hi)
    denom = np.where(tx_over & ~loc_over, e_tx - e_loc_full, 1.0)
    lo = np.where(tx_over & ~loc_over, np.minimum((e_tx - budget) / denom, 1.0), lo)
    denom = np.where(loc_over & ~tx_over & ~inf_tx, e_loc_full - e_tx, 1.0)
    hi = np.where(loc_over & ~tx_over & ~inf_tx,
                  np.minimum((budget - e_tx) / denom, 1.0), hi)
    both = tx_over & loc_over
    lo = np.where(both, 1.0, lo)
    hi = np.where(both, -1.0, hi)
    return lo, hi


def _resplit_core(ctx: BandwidthContext, b):
    r = _rate(b, ctx.q)
    lo, hi = split_bounds_at_rate(ctx.e_loc_full, r, ctx.bits_full, ctx.tx_power,
                                  ctx.energy_budget)
    with np.errstate(divide="ignore"):
        b_off = np.where(r > 0, ctx.bits_full / r, np.inf) + ctx.edge_time_full
    a = ctx.local_full
    with np.errstate(invalid="ignore"):
        phi_star = np.where(np.isfinite(b_off), b_off / (a + b_off), 1.0)
    phi = np.clip(phi_star, lo, np.maximum(hi, lo))
    # snap near-total clamps to exactly fully local (see the split step)
    phi = np.where(lo >= 1.0 - 1e-9, 1.0, phi)
    return phi, b_off, lo <= hi


def resplit_at_bandwidth(ctx: BandwidthContext, b):
    """Best feasible split per vehicle at dedicated bandwidth b."""
    phi, _, feasible = _resplit_core(ctx, b)
    return np.where(feasible, phi, 1.0)


def best_completion_at_bandwidth(ctx: BandwidthContext, b):
    """T_n(b): completion after re-splitting, vectorized over any b shape."""
    phi, b_off, feasible = _resplit_core(ctx, b)
    with np.errstate(invalid="ignore"):
        t_off = np.where(phi >= 1.0, 0.0, (1.0 - phi) * b_off)
    t = np.maximum(phi * ctx.local_full, t_off)
    return np.where(feasible, t, np.inf)


def _fixed_split_completions(ctx, b):
    r = _rate(b, ctx.q)
    bits = (1.0 - ctx.splits) * ctx.bits_full
    tx = np.where(bits > 0, np.divide(bits, r, out=np.full_like(r, np.inf), where=r > 0), 0.0)
    with np.errstate(invalid="ignore"):
        edge = np.where(bits > 0, (1.0 - ctx.splits) * ctx.edge_time_full, 0.0)
    return np.maximum(ctx.splits * ctx.local_full, tx + edge)


def allocate_bandwidth(ctx: BandwidthContext, total, mode="equal_split",
                       rel_tol=1e-9, max_iters=200):
    """Split a band of `total` Hz among the vehicles."""
    n = ctx.bits_full.size
    if total <= 0:
        raise ValueError("total bandwidth must be > 0")
    equal = np.full(n, total / n)
    if mode == "equal_split":
        return equal
    if mode == "min_max":
        alloc = _min_max_alloc(ctx, total, rel_tol, max_iters)
        better = np.max(best_completion_at_bandwidth(ctx, alloc)) <= np.max(
            best_completion_at_bandwidth(ctx, equal))
    elif mode == "min_sum":
        alloc = _min_sum_alloc(ctx, total)
        better = np.sum(_fixed_split_completions(ctx, alloc)) <= np.sum(
            _fixed_split_completions(ctx, equal))
    else:
        raise ValueError(f"unknown bandwidth mode {mode!r}")
    return alloc if better else equal


def _spread_leftover(alloc, total):
    used = np.sum(alloc)
    if used > 0:
        return alloc * (total / used)
    return np.full_like(alloc, total / alloc.size)


# -- min-max on the re-splitting completion map ------------------------------


def _min_max_alloc(ctx, total, rel_tol, max_iters, b_iters=64, strict=True):
    n = ctx.bits_full.size
    equal = np.full(n, total / n)
    hi_t = float(np.max(best_completion_at_bandwidth(ctx, equal)))
    if not np.isfinite(hi_t):
        return equal
    lo_t = 0.0

    def demand(t):
        # smallest per-vehicle bandwidth with T_n(b) <= t, by bisection
        blo = np.zeros(n)
        bhi = np.full(n, float(total))
        feasible = best_completion_at_bandwidth(ctx, bhi) <= t
        for _ in range(b_iters):
            mid = 0.5 * (blo + bhi)
            ok = best_completion_at_bandwidth(ctx, mid) <= t
            bhi = np.where(ok, mid, bhi)
            blo = np.where(ok, blo, mid)
        return np.where(feasible, bhi, np.inf)

    converged = False
    for _ in range(max_iters):
        if hi_t - lo_t <= rel_tol * max(hi_t, 1e-300):
            converged = True
            break
        mid = 0.5 * (lo_t + hi_t)
        if np.sum(demand(mid)) <= total:
            hi_t = mid
        else:
            lo_t = mid
    if strict and not converged and hi_t - lo_t > 1e-6 * max(hi_t, 1e-300):
        raise BisectionError(lo_t, hi_t,
                             f"deadline bisection did not converge in {max_iters} iterations")
    alloc = demand(hi_t)
    if not np.all(np.isfinite(alloc)) or np.sum(alloc) > total:
        return equal
    return _spread_leftover(alloc, total)


def min_max_alloc_table(ctx, total, t_iters=26, b_iters=40):
    """Reduced-iteration min-max allocation used as the clamp-escape
    candidate inside the descent loop; same map as the exact mode."""
    return _min_max_alloc(ctx, total, rel_tol=1e-6, max_iters=t_iters,
                          b_iters=b_iters, strict=False)


# -- exact convex min-sum at fixed splits -------------------------------------

# The marginal time saving of extra bandwidth has the separable form
# bits * r'(b) / r(b)^2 = (bits*ln2/q^2) * psi(q/b) with a universal
# increasing psi(x) = x^2 (ln(1+x) - x/(1+x)) / ln(1+x)^2, so one tabulated
# inverse serves every vehicle. Interpolation error in b is O(1e-4) relative,
# second order in the objective around the stationary point.
_PSI_LOG_X = np.linspace(np.log(1e-9), np.log(1e12), 8192)


def _log_psi(logx):
    x = np.exp(logx)
    l1p = np.log1p(x)
    return 2.0 * logx + np.log(l1p - x / (1.0 + x)) - 2.0 * np.log(l1p)


_PSI_LOG_Y = _log_psi(_PSI_LOG_X)
assert np.all(np.diff(_PSI_LOG_Y) > 0)


def _psi_inverse(logy):
    return np.interp(logy, _PSI_LOG_Y, _PSI_LOG_X, left=_PSI_LOG_X[0], right=_PSI_LOG_X[-1])


def _min_sum_alloc(ctx, total, iters=48):
    bits = (1.0 - ctx.splits) * ctx.bits_full
    q = ctx.q
    with np.errstate(invalid="ignore"):
        # 0 * inf for fully local vehicles; the active mask discards it
        edge_times = np.where(bits > 0, (1.0 - ctx.splits) * ctx.edge_time_full, 0.0)
    local_floors = ctx.splits * ctx.local_full
    active = bits > 0
    n = bits.size
    if not np.any(active):
        return np.full(n, total / n)
    # cap: bandwidth past which the offload branch beats the local branch
    slack = local_floors - edge_times
    with np.errstate(over="ignore"):
        cap_target = np.where(active & (slack > 0), bits / np.maximum(slack, 1e-300), np.inf)
    cap = _invert_rate(q, np.where(np.isfinite(cap_target), cap_target, np.inf), total)
    cap = np.where(active, np.where(np.isfinite(cap), cap, total), 0.0)
    if np.sum(cap) <= total:
        return _spread_leftover(np.where(active, np.maximum(cap, 1e-300), 0.0), total)

    a_idx = np.where(active)[0]
    qa, ba, capa = q[a_idx], bits[a_idx], cap[a_idx]
    base = np.log(ba * LN2) - 2.0 * np.log(qa)   # ln of bits*ln2/q^2

    def b_of_log_lambda(loglam):
        x = np.exp(_psi_inverse(loglam - base))
        return np.minimum(capa, qa / x)

    lam_hi = 0.0
    while np.sum(b_of_log_lambda(lam_hi)) > total:
        lam_hi += 4.0
    lam_lo = lam_hi
    while np.sum(b_of_log_lambda(lam_lo)) < total and lam_lo > -600.0:
        lam_lo -= 4.0
    for _ in range(iters):
        lam = 0.5 * (lam_lo + lam_hi)
        if np.sum(b_of_log_lambda(lam)) > total:
            lam_lo = lam
        else:
            lam_hi = lam
    alloc = np.zeros(n)
    alloc[a_idx] = b_of_log_lambda(lam_hi)
    return _spread_leftover(alloc, total)
