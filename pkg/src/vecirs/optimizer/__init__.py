from .bcd import SolveOptions, SolveTrace, bcd_optimize
from .bandwidth import BandwidthContext, allocate_bandwidth
from .edge import allocate_edge_cpu, allocate_edge_cpu_sum
from .oracle import OracleGrid, brute_force_oracle
from .placement import place_drone_sca
from .splits import compute_min_split_for_energy, energy_split_interval, optimal_split

__all__ = [
    "SolveOptions", "SolveTrace", "bcd_optimize",
    "BandwidthContext", "allocate_bandwidth",
    "allocate_edge_cpu", "allocate_edge_cpu_sum",
    "OracleGrid", "brute_force_oracle",
    "place_drone_sca",
    "compute_min_split_for_energy", "energy_split_interval", "optimal_split",
]
