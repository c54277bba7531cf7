"""Simulator and optimizer for drone-mounted IRS assisted vehicular edge computing."""

from .scenario import SystemConfig, TaskSpec, Vehicle, Scenario, ConfigError
from .scenario import generate_scenario, validate_config, load_config
from .channel import ChannelRealization, sample_realization
from .offload import AllocationDecision, ResultRecord, evaluate_scheme, SCHEMES
from .optimizer.bcd import SolveOptions, SolveTrace, bcd_optimize
from .optimizer.oracle import OracleGrid, brute_force_oracle

__version__ = "0.1.0"

__all__ = [
    "SystemConfig", "TaskSpec", "Vehicle", "Scenario", "ConfigError",
    "generate_scenario", "validate_config", "load_config",
    "ChannelRealization", "sample_realization",
    "AllocationDecision", "ResultRecord", "evaluate_scheme", "SCHEMES",
    "SolveOptions", "SolveTrace", "bcd_optimize",
    "OracleGrid", "brute_force_oracle",
]
