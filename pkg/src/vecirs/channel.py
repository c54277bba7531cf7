"""Radio links: log-distance path loss, block fading, IRS cascade, rates.

The ground vehicle-AP link is blocked (Rayleigh, high exponent). Both drone
legs (vehicle-IRS and IRS-AP) are elevation-favored Rician links with a lower
exponent; distances to the drone are 3D through its fixed altitude. All
small-scale coefficients have unit average power, so large-scale path loss
enters separately through effective_gain.
"""

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


def path_loss(distance, exponent, ref_gain):
    """Linear power gain ref_gain * d^-exponent, d clamped to >= 1 m."""
    d = np.maximum(np.asarray(distance, dtype=float), 1.0)
    exponent = float(exponent)
    ref_gain = float(ref_gain)
    if not (np.all(np.isfinite(d)) and np.isfinite(exponent) and np.isfinite(ref_gain)):
        raise ValueError("path_loss inputs must be finite")
    if exponent < 2:
        raise ValueError(f"pathloss exponent must be >= 2, got {exponent}")
    if ref_gain <= 0:
        raise ValueError(f"reference gain must be > 0, got {ref_gain}")
    out = ref_gain * d ** (-exponent)
    if np.ndim(distance) == 0:
        return float(out)
    return out


def sample_fading(kind, count, rng, k_db=None):
    """Unit-power small-scale coefficients, E[|h|^2] = 1.

    kind 'rayleigh': circularly symmetric complex normal.
    kind 'rician': deterministic real line-of-sight part of power K/(K+1)
    plus scattered power 1/(K+1); k_db=+inf degenerates to the constant 1.
    """
    count = int(count)
    if kind == "rayleigh":
        z = rng.standard_normal(count) + 1j * rng.standard_normal(count)
        return z / np.sqrt(2.0)
    if kind == "rician":
        if k_db is None:
            raise ValueError("rician fading needs k_db")
        k_db = float(k_db)
        if np.isposinf(k_db):
            return np.ones(count, dtype=complex)
        k = 10.0 ** (k_db / 10.0)
        los = np.sqrt(k / (k + 1.0))
        sigma = np.sqrt(1.0 / (2.0 * (k + 1.0)))
        z = rng.standard_normal(count) + 1j * rng.standard_normal(count)
        return los + sigma * z
    raise ValueError(f"unknown fading kind {kind!r}")


@dataclass(frozen=True)
class ChannelRealization:
    """One fading block: direct (N,), to_irs (N, K), irs_to_ap (K,)."""

    direct: np.ndarray
    to_irs: np.ndarray
    irs_to_ap: np.ndarray

    def __post_init__(self):
        n, k = self.to_irs.shape
        if self.direct.shape != (n,) or self.irs_to_ap.shape != (k,):
            raise ValueError("channel dimensions do not match (N, K)")


def sample_realization(scenario, rng) -> ChannelRealization:
    """Draw one block-fading realization for every link in the scenario."""
    cfg = scenario.config
    n, k = cfg.n_vehicles, cfg.n_irs_elements
    direct = sample_fading("rayleigh", n, rng)
    to_irs = sample_fading("rician", n * k, rng, k_db=cfg.rician_k_db).reshape(n, k)
    irs_to_ap = sample_fading("rician", k, rng, k_db=cfg.rician_k_db)
    return ChannelRealization(direct=direct, to_irs=to_irs, irs_to_ap=irs_to_ap)


def cascaded_channel(to_irs, irs_to_ap, phases):
    """Coherent sum over elements: sum_k h_k g_k exp(j theta_k)."""
    h = np.asarray(to_irs)
    g = np.asarray(irs_to_ap)
    theta = np.asarray(phases, dtype=float)
    if not (h.shape == g.shape == theta.shape):
        raise ValueError(
            f"cascade length mismatch: to_irs {h.shape}, irs_to_ap {g.shape}, phases {theta.shape}"
        )
    if h.size == 0:
        return 0j
    return complex(np.sum(h * g * np.exp(1j * theta)))


def optimal_phases(direct, to_irs, irs_to_ap):
    """Element phases that align every cascaded term with the direct link.

    theta_k = (arg(direct) - arg(h_k g_k)) mod 2pi. A zero direct link aligns
    to the positive real axis. The aligned effective amplitude is
    |direct| + sum_k |h_k||g_k|, which is the maximum over all phase vectors.
    """
    h = np.asarray(to_irs)
    g = np.asarray(irs_to_ap)
    ref = 0.0 if direct == 0 else float(np.angle(direct))
    theta = np.mod(ref - np.angle(h * g), TWO_PI)
    return theta


def quantize_phases(phases, bits):
    """Round each phase to the nearest of 2^bits uniform levels, ties down."""
    if bits is None:
        return np.asarray(phases, dtype=float)
    bits = int(bits)
    if bits < 1:
        raise ValueError(f"phase_bits must be >= 1, got {bits}")
    levels = 2 ** bits
    step = TWO_PI / levels
    # ceil(x - 0.5) rounds half-way cases down
    idx = np.ceil(np.asarray(phases, dtype=float) / step - 0.5).astype(np.int64) % levels
    return idx * step


def effective_gain(direct, cascaded, pl_direct, pl_cascaded):
    """|sqrt(pl_direct) * direct + sqrt(pl_cascaded) * cascaded|^2.

    pl_cascaded is the product of the two line-of-sight leg path losses.
    """
    if pl_direct < 0 or pl_cascaded < 0:
        raise ValueError("path losses must be >= 0")
    amp = np.sqrt(pl_direct) * direct + np.sqrt(pl_cascaded) * cascaded
    return float(np.abs(amp) ** 2)


def achievable_rate(bandwidth, tx_power, gain, noise_density):
    """Shannon rate b * log2(1 + P*gain / (N0*b)) in bits/s."""
    b = np.asarray(bandwidth, dtype=float)
    if np.any(b < 0):
        raise ValueError("bandwidth must be >= 0")
    if noise_density <= 0:
        raise ValueError("noise density must be > 0")
    snr = np.divide(tx_power * gain, noise_density * b, out=np.zeros_like(b), where=b > 0)
    out = b * np.log2(1.0 + snr)
    if np.ndim(bandwidth) == 0:
        return float(out)
    return out


def rate_limit(tx_power, gain, noise_density):
    """Wideband rate ceiling P*gain / (N0*ln2) as bandwidth grows."""
    return tx_power * gain / (noise_density * np.log(2.0))


# -- geometry helpers -------------------------------------------------------


def direct_distances(scenario):
    """Ground distances vehicle -> AP."""
    d = scenario.positions() - np.asarray(scenario.ap_position)
    return np.hypot(d[:, 0], d[:, 1])


def drone_leg_distances(scenario, drone_xy):
    """3D distances (vehicle -> drone, drone -> AP) through the altitude."""
    h = scenario.config.drone_height
    p = np.asarray(drone_xy, dtype=float)
    dv = scenario.positions() - p
    d_veh = np.sqrt(dv[:, 0] ** 2 + dv[:, 1] ** 2 + h * h)
    da = np.asarray(scenario.ap_position) - p
    d_ap = float(np.sqrt(da[0] ** 2 + da[1] ** 2 + h * h))
    return d_veh, d_ap


def cascade_path_gain(scenario, drone_xy):
    """Per-vehicle product of both leg path losses for a drone position."""
    cfg = scenario.config
    d_veh, d_ap = drone_leg_distances(scenario, drone_xy)
    pl_veh = path_loss(d_veh, cfg.pathloss_exp_los, cfg.ref_gain_1m)
    pl_ap = path_loss(d_ap, cfg.pathloss_exp_los, cfg.ref_gain_1m)
    return pl_veh * pl_ap


def direct_path_gain(scenario):
    cfg = scenario.config
    return path_loss(direct_distances(scenario), cfg.pathloss_exp_direct, cfg.ref_gain_1m)


def aligned_phase_matrix(realization, quantize_bits=None):
    """Per-vehicle optimal (optionally quantized) phase vectors, shape (N, K).

    The surface is reconfigured per served vehicle within the fading block,
    so each vehicle sees its own aligned phase profile.
    """
    n = realization.direct.shape[0]
    rows = []
    for i in range(n):
        theta = optimal_phases(realization.direct[i], realization.to_irs[i], realization.irs_to_ap)
        rows.append(quantize_phases(theta, quantize_bits))
    return np.array(rows)


def vehicle_gains(scenario, realization, drone_xy, phase_matrix, include_irs=True):
    """Effective power gain per vehicle for a drone position and phase set."""
    pl_d = direct_path_gain(scenario)
    if not include_irs:
        return pl_d * np.abs(realization.direct) ** 2
    pl_c = cascade_path_gain(scenario, drone_xy)
    gains = np.empty(scenario.config.n_vehicles)
    for i in range(scenario.config.n_vehicles):
        casc = cascaded_channel(realization.to_irs[i], realization.irs_to_ap, phase_matrix[i])
        gains[i] = effective_gain(realization.direct[i], casc, pl_d[i], pl_c[i])
    return gains
