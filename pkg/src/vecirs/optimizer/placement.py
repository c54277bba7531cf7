"""Drone placement maximizing the worst cascaded path gain.

The objective min_n G0^2 * (d_veh_n * d_ap)^(-a) depends on the horizontal
position only through the squared 3D distances u_n = |p-v_n|^2 + H^2 and
w = |p-ap|^2 + H^2. Each iteration linearizes ln(u) and ln(w) at the current
point, which lower-bounds every vehicle's log gain by a concave isotropic
quadratic peak_n - gamma_n |p - z_n|^2. The max-min of such quadratics over
the area rectangle is solved exactly by enumerating the finitely many KKT
candidates (peaks, pairwise equalizers along the peak-to-peak segment, triple
crossings, and their 1D analogues on the rectangle edges), so the true worst
gain never decreases across iterations.
"""

from itertools import combinations

import numpy as np


def _log_min_gain(points, vehicles_xy, ap_xy, h2, exponent, log_ref2):
    """ln of the worst cascade gain at each point, vectorized over points."""
    p = np.atleast_2d(points)
    du = p[:, None, :] - vehicles_xy[None, :, :]
    u = du[:, :, 0] ** 2 + du[:, :, 1] ** 2 + h2
    dw = p - ap_xy
    w = dw[:, 0] ** 2 + dw[:, 1] ** 2 + h2
    logs = log_ref2 - 0.5 * exponent * (np.log(u) + np.log(w)[:, None])
    return np.min(logs, axis=1)


def _surrogate_at(p0, vehicles_xy, ap_xy, h2, exponent, log_ref2):
    """Concave quadratic minorants peak_n - gamma_n |p - z_n|^2 at p0."""
    du = vehicles_xy - p0
    u0 = du[:, 0] ** 2 + du[:, 1] ** 2 + h2
    dw = ap_xy - p0
    w0 = dw[0] ** 2 + dw[1] ** 2 + h2
    f0 = log_ref2 - 0.5 * exponent * (np.log(u0) + np.log(w0))
    alpha = 0.5 * exponent / u0
    beta = 0.5 * exponent / w0
    gamma = alpha + beta
    z = (alpha[:, None] * vehicles_xy + beta * ap_xy) / gamma[:, None]
    uz = np.sum((z - vehicles_xy) ** 2, axis=1) + h2
    wz = np.sum((z - ap_xy) ** 2, axis=1) + h2
    peak = f0 - alpha * (uz - u0) - beta * (wz - w0)
    return peak, gamma, z


def _roots_batch(a, b, c):
    """Real roots of a x^2 + b x + c = 0 per row; NaN where absent."""
    out = np.full((a.size, 2), np.nan)
    lin = np.abs(a) < 1e-30
    nz = lin & (np.abs(b) > 1e-30)
    out[nz, 0] = -c[nz] / b[nz]
    quad = ~lin
    disc = b * b - 4.0 * a * c
    ok = quad & (disc >= 0)
    r = np.sqrt(np.where(ok, disc, 0.0))
    denom = np.where(quad, 2.0 * a, 1.0)
    out[ok, 0] = ((-b - r) / denom)[ok]
    out[ok, 1] = ((-b + r) / denom)[ok]
    return out


def _pair_candidates(peak, gamma, z, ii, jj):
    """Equalizer points of each pair along its peak-to-peak segment."""
    d = z[jj] - z[ii]
    ll = np.sum(d * d, axis=1)
    a = (gamma[jj] - gamma[ii]) * ll
    b = -2.0 * gamma[jj] * ll
    c = peak[ii] - peak[jj] + gamma[jj] * ll
    s = _roots_batch(a, b, c)
    pts = z[ii][:, None, :] + s[:, :, None] * d[:, None, :]
    return pts.reshape(-1, 2)


def _conic_coeffs(peak, gamma, z, ii, jj):
    """g_i - g_j = 0 written as A|p|^2 + B.p + c = 0, batched."""
    a = gamma[jj] - gamma[ii]
    b = 2.0 * (gamma[ii][:, None] * z[ii] - gamma[jj][:, None] * z[jj])
    zz_i = np.sum(z[ii] ** 2, axis=1)
    zz_j = np.sum(z[jj] ** 2, axis=1)
    c = (peak[ii] - peak[jj]) - gamma[ii] * zz_i + gamma[jj] * zz_j
    return a, b, c


def _triple_candidates(peak, gamma, z, ti, tj, tk):
    """Common points of g_i = g_j = g_k, batched over triples."""
    a1, b1, c1 = _conic_coeffs(peak, gamma, z, ti, tj)
    a2, b2, c2 = _conic_coeffs(peak, gamma, z, ti, tk)
    # eliminate |p|^2: the locus intersection lies on lb.p + lc = 0
    lb = a2[:, None] * b1 - a1[:, None] * b2
    lc = a2 * c1 - a1 * c2
    nrm = np.hypot(lb[:, 0], lb[:, 1])
    good = nrm > 1e-30
    nrm = np.where(good, nrm, 1.0)
    lb = lb / nrm[:, None]
    lc = lc / nrm
    p_base = -lc[:, None] * lb
    dirv = np.column_stack([-lb[:, 1], lb[:, 0]])
    # substitute into whichever conic is genuinely quadratic
    use2 = np.abs(a1) <= 1e-30
    aa = np.where(use2, a2, a1)
    bsel = np.where(use2[:, None], b2, b1)
    csel = np.where(use2, c2, c1)
    both_linear = np.abs(aa) <= 1e-30
    aa_safe = np.where(both_linear, 1.0, aa)
    bb = 2.0 * aa_safe * np.sum(p_base * dirv, axis=1) + np.sum(bsel * dirv, axis=1)
    cc = (aa_safe * np.sum(p_base * p_base, axis=1) + np.sum(bsel * p_base, axis=1) + csel)
    t = _roots_batch(np.where(both_linear, 0.0, aa_safe), bb, cc)
    t[~(good & ~both_linear)] = np.nan
    pts = p_base[:, None, :] + t[:, :, None] * dirv[:, None, :]
    pts = pts.reshape(-1, 2)
    if np.any(both_linear):
        # equal curvatures: both loci are straight lines, intersect directly
        det = b1[:, 0] * b2[:, 1] - b1[:, 1] * b2[:, 0]
        ok = both_linear & (np.abs(det) > 1e-30)
        det = np.where(ok, det, 1.0)
        x = (-c1 * b2[:, 1] + c2 * b1[:, 1]) / det
        y = (-b1[:, 0] * c2 + b2[:, 0] * c1) / det
        lin_pts = np.column_stack([np.where(ok, x, np.nan), np.where(ok, y, np.nan)])
        pts = np.concatenate([pts, lin_pts], axis=0)
    return pts


def _edge_candidates(peak, gamma, z, ii, jj, lo, hi, fixed, axis):
    """1D max-min candidates on one rectangle edge."""
    # restricted parabola: off_n - gamma_n (t - z_n[axis])^2
    off = peak - gamma * (z[:, 1 - axis] - fixed) ** 2
    ts = [z[:, axis]]
    a = gamma[jj] - gamma[ii]
    b = 2.0 * (gamma[ii] * z[ii, axis] - gamma[jj] * z[jj, axis])
    c = (off[ii] - off[jj]) - gamma[ii] * z[ii, axis] ** 2 + gamma[jj] * z[jj, axis] ** 2
    ts.append(_roots_batch(a, b, c).ravel())
    ts.append(np.array([lo, hi]))
    t = np.clip(np.concatenate(ts), lo, hi)
    pts = np.empty((t.size, 2))
    pts[:, axis] = t
    pts[:, 1 - axis] = fixed
    return pts


def _maximize_surrogate(peak, gamma, z, area_side, pair_idx, triple_idx):
    """Exact argmax of min_n (peak_n - gamma_n |p-z_n|^2) over the rectangle."""
    ii, jj = pair_idx
    cands = [z, _pair_candidates(peak, gamma, z, ii, jj)]
    if triple_idx is not None:
        cands.append(_triple_candidates(peak, gamma, z, *triple_idx))
    for fixed in (0.0, area_side):
        for axis in (0, 1):
            cands.append(_edge_candidates(peak, gamma, z, ii, jj, 0.0, area_side, fixed, axis))
    pts = np.concatenate(cands, axis=0)
    keep = (
        np.all(np.isfinite(pts), axis=1)
        & (pts[:, 0] >= -1e-9) & (pts[:, 0] <= area_side + 1e-9)
        & (pts[:, 1] >= -1e-9) & (pts[:, 1] <= area_side + 1e-9)
    )
    pts = np.clip(pts[keep], 0.0, area_side)
    d = pts[:, None, :] - z[None, :, :]
    vals = np.min(peak[None, :] - gamma[None, :] * (d[:, :, 0] ** 2 + d[:, :, 1] ** 2), axis=1)
    order = np.lexsort((pts[:, 1], pts[:, 0], -vals))
    return pts[order[0]]


def place_drone_sca(scenario, init_xy=None, sca_max_iters=50, sca_step_tol=0.1,
                    grid_resolution=25, n_starts=3):
    """Best drone position for the worst-vehicle cascade gain.

    Seeds with the best points of a coarse grid, then ascends the surrogate
    from each seed. Returns (xy, trace) where trace lists the true
    worst-vehicle linear gain per accepted iterate (nondecreasing) of the
    winning start. Ties break toward the lowest (x, y).
    """
    cfg = scenario.config
    area = cfg.area_side
    vxy = scenario.positions()
    ap = np.asarray(scenario.ap_position, dtype=float)
    h2 = cfg.drone_height ** 2
    a = cfg.pathloss_exp_los
    log_ref2 = 2.0 * np.log(cfg.ref_gain_1m)
    n = len(vxy)
    pair_idx = (np.array([i for i, _ in combinations(range(n), 2)], dtype=int),
                np.array([j for _, j in combinations(range(n), 2)], dtype=int))
    if n >= 3:
        trips = list(combinations(range(n), 3))
        triple_idx = tuple(np.array(t, dtype=int) for t in zip(*trips))
    else:
        triple_idx = None

    def true_val(p):
        return float(_log_min_gain(p[None, :], vxy, ap, h2, a, log_ref2)[0])

    if init_xy is not None:
        seeds = [np.asarray(init_xy, dtype=float)]
    else:
        g = np.linspace(0.0, area, int(grid_resolution))
        gx, gy = np.meshgrid(g, g, indexing="ij")
        pts = np.column_stack([gx.ravel(), gy.ravel()])
        vals = _log_min_gain(pts, vxy, ap, h2, a, log_ref2)
        order = np.lexsort((pts[:, 1], pts[:, 0], -vals))
        seeds = [pts[i] for i in order[: max(1, int(n_starts))]]

    best = None
    for seed in seeds:
        p0 = seed.copy()
        v0 = true_val(p0)
        trace = [v0]
        for _ in range(int(sca_max_iters)):
            peak, gamma, z = _surrogate_at(p0, vxy, ap, h2, a, log_ref2)
            p1 = _maximize_surrogate(peak, gamma, z, area, pair_idx, triple_idx)
            v1 = true_val(p1)
            if v1 < v0:  # the minorant guarantees ascent; guard the numerics
                break
            step = float(np.hypot(*(p1 - p0)))
            p0, v0 = p1, v1
            trace.append(v0)
            if step < sca_step_tol:
                break
        key = (-v0, p0[0], p0[1])
        if best is None or key < best[0]:
            best = (key, p0, trace)
    xy = (float(best[1][0]), float(best[1][1]))
    gains = [float(np.exp(v)) for v in best[2]]
    return xy, gains
