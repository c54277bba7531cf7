"""World setup: system constants, random vehicle/task generation, config I/O.

All quantities are SI: bits, cycles, Hz, W, J, m, s. The default constants
reproduce the standard 10-vehicle / 30-element setup (20 MHz band, drone at
80 m, -173 dBm/Hz noise floor, 25 Gcycles/s edge server).
"""

import json
from dataclasses import dataclass, field, fields, replace

import numpy as np


class ConfigError(ValueError):
    """A configuration value violates an invariant."""

    def __init__(self, field_name, value, message):
        self.field_name = field_name
        self.value = value
        super().__init__(f"{field_name} {message} (got {value!r})")


@dataclass(frozen=True)
class SystemConfig:
    n_vehicles: int = 10
    n_irs_elements: int = 30
    drone_height: float = 80.0            # m
    bandwidth_total: float = 20e6         # Hz
    noise_density: float = 10 ** (-20.3)  # W/Hz, i.e. -173 dBm/Hz
    edge_cpu_total: float = 25e9          # cycles/s shared at the edge
    local_cpu_max: float = 1e6            # cycles/s cap for vehicle CPUs
    area_side: float = 500.0              # m, square deployment area
    ap_position: tuple = (250.0, 250.0)   # m
    tx_power: float = 0.1                 # W per vehicle
    energy_budget: float = 1.0            # J per vehicle per task
    kappa: float = 1e-28                  # J*s^2/cycles^3 switched capacitance
    pathloss_exp_direct: float = 3.5      # vehicle-AP ground link (blocked)
    pathloss_exp_los: float = 2.2         # vehicle-drone and drone-AP legs
    ref_gain_1m: float = 1e-3             # linear gain at 1 m (-30 dB)
    rician_k_db: float = 10.0             # K-factor of the drone legs
    phase_bits: int | None = None         # None = continuous phase control
    seed: int = 12345
    data_size_range: tuple = (1e7, 1e8)       # bits
    cycle_density_range: tuple = (2e3, 1e4)   # cycles/bit


@dataclass(frozen=True)
class TaskSpec:
    data_size: float      # bits
    cycle_density: float  # cycles/bit

    @property
    def cycles(self):
        return self.data_size * self.cycle_density


@dataclass(frozen=True)
class Vehicle:
    id: int
    position: tuple       # (x, y) m
    local_cpu: float      # cycles/s
    task: TaskSpec


@dataclass(frozen=True)
class Scenario:
    config: SystemConfig
    vehicles: tuple
    ap_position: tuple

    def positions(self):
        return np.array([v.position for v in self.vehicles])

    def data_sizes(self):
        return np.array([v.task.data_size for v in self.vehicles])

    def cycle_densities(self):
        return np.array([v.task.cycle_density for v in self.vehicles])

    def local_cpus(self):
        return np.array([v.local_cpu for v in self.vehicles])


def _require(cond, field_name, value, message):
    if not cond:
        raise ConfigError(field_name, value, message)


def validate_config(config: SystemConfig) -> SystemConfig:
    """Return the config unchanged if every invariant holds.

    Raises ConfigError naming the first violated field.
    """
    c = config
    _require(c.n_vehicles >= 1, "n_vehicles", c.n_vehicles, "must be >= 1")
    _require(c.n_irs_elements >= 1, "n_irs_elements", c.n_irs_elements, "must be >= 1")
    _require(c.drone_height > 0, "drone_height", c.drone_height, "must be > 0")
    _require(c.bandwidth_total > 0, "bandwidth_total", c.bandwidth_total, "must be > 0")
    _require(c.noise_density > 0, "noise_density", c.noise_density, "must be > 0")
    _require(c.edge_cpu_total > 0, "edge_cpu_total", c.edge_cpu_total, "must be > 0")
    _require(c.local_cpu_max > 0, "local_cpu_max", c.local_cpu_max, "must be > 0")
    _require(c.area_side > 0, "area_side", c.area_side, "must be > 0")
    _require(len(c.ap_position) == 2, "ap_position", c.ap_position, "must be a 2D point")
    _require(c.tx_power > 0, "tx_power", c.tx_power, "must be > 0")
    _require(c.energy_budget > 0, "energy_budget", c.energy_budget, "must be > 0")
    _require(c.kappa > 0, "kappa", c.kappa, "must be > 0")
    _require(c.pathloss_exp_los >= 2, "pathloss_exp_los", c.pathloss_exp_los, "must be >= 2")
    _require(
        c.pathloss_exp_direct >= c.pathloss_exp_los,
        "pathloss_exp_direct", c.pathloss_exp_direct,
        "must be >= pathloss_exp_los (the blocked ground link cannot be less lossy)",
    )
    _require(c.ref_gain_1m > 0, "ref_gain_1m", c.ref_gain_1m, "must be > 0")
    _require(np.isfinite(c.rician_k_db), "rician_k_db", c.rician_k_db, "must be finite")
    if c.phase_bits is not None:
        _require(int(c.phase_bits) >= 1, "phase_bits", c.phase_bits, "must be >= 1 or None")
    _require(0 <= int(c.seed) < 2 ** 64, "seed", c.seed, "must fit in 64 bits")
    lo, hi = c.data_size_range
    _require(0 < lo <= hi, "data_size_range", c.data_size_range, "must satisfy 0 < lo <= hi")
    lo, hi = c.cycle_density_range
    _require(0 < lo <= hi, "cycle_density_range", c.cycle_density_range, "must satisfy 0 < lo <= hi")
    return config


def generate_scenario(config: SystemConfig) -> Scenario:
    """Draw a reproducible world snapshot from config.seed.

    Positions are uniform over the square, task sizes and cycle densities
    uniform over their configured closed ranges, and vehicle CPU speeds
    uniform over (0, local_cpu_max]. Identical configs give identical
    scenarios; fields not consumed here (e.g. phase_bits) do not perturb
    the draw.
    """
    validate_config(config)
    n = config.n_vehicles
    rng = np.random.default_rng(np.random.SeedSequence(int(config.seed)))
    pos = rng.uniform(0.0, config.area_side, size=(n, 2))
    s_lo, s_hi = config.data_size_range
    sizes = rng.uniform(s_lo, s_hi, size=n)
    c_lo, c_hi = config.cycle_density_range
    densities = rng.uniform(c_lo, c_hi, size=n)
    # uniform over (0, cap]: 1 - u with u in [0, 1)
    local = config.local_cpu_max * (1.0 - rng.uniform(0.0, 1.0, size=n))
    vehicles = tuple(
        Vehicle(
            id=i,
            position=(float(pos[i, 0]), float(pos[i, 1])),
            local_cpu=float(local[i]),
            task=TaskSpec(data_size=float(sizes[i]), cycle_density=float(densities[i])),
        )
        for i in range(n)
    )
    return Scenario(config=config, vehicles=vehicles, ap_position=tuple(config.ap_position))


def pin_vehicle_attribute(scenario: Scenario, attribute: str, value: float) -> Scenario:
    """Return a copy with one per-vehicle attribute set homogeneously.

    Used by sweeps so that the non-swept draws stay identical across the
    sweep axis. attribute is one of local_cpu, cycle_density, data_size.
    """
    vehicles = []
    for v in scenario.vehicles:
        if attribute == "local_cpu":
            vehicles.append(replace(v, local_cpu=float(value)))
        elif attribute == "cycle_density":
            vehicles.append(replace(v, task=replace(v.task, cycle_density=float(value))))
        elif attribute == "data_size":
            vehicles.append(replace(v, task=replace(v.task, data_size=float(value))))
        else:
            raise ValueError(f"unknown vehicle attribute {attribute!r}")
    return replace(scenario, vehicles=tuple(vehicles))


_TUPLE_KEYS = {"ap_position", "data_size_range", "cycle_density_range"}


def config_from_dict(raw: dict) -> SystemConfig:
    """Build a SystemConfig from a flat dict; unknown keys are an error."""
    known = {f.name for f in fields(SystemConfig)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(unknown[0], raw[unknown[0]], "is not a recognized config key")
    kwargs = {}
    for key, value in raw.items():
        if key in _TUPLE_KEYS:
            value = tuple(value)
        if key == "phase_bits":
            if value in (None, "continuous"):
                value = None
            else:
                value = int(value)
        if key in ("n_vehicles", "n_irs_elements", "seed"):
            value = int(value)
        kwargs[key] = value
    return validate_config(SystemConfig(**kwargs))


def load_config(path) -> SystemConfig:
    """Read a flat JSON config file; every key is optional and defaulted."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("<file>", str(path), f"is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError("<file>", str(path), "must contain a JSON object")
    return config_from_dict(raw)


def config_to_dict(config: SystemConfig) -> dict:
    out = {}
    for f in fields(SystemConfig):
        value = getattr(config, f.name)
        if isinstance(value, tuple):
            value = list(value)
        out[f.name] = value
    if out["phase_bits"] is None:
        out["phase_bits"] = "continuous"
    return out
