"""Closed-form split selection and the energy feasibility interval.

With branch times t_local = phi*A and t_offload = (1-phi)*B the completion
max(phi*A, (1-phi)*B) is V-shaped in phi with unconstrained minimizer
B/(A+B). The per-vehicle energy kappa*rho^2*phi*s*c + P*(1-phi)*s/rate is
linear in phi, so the budget carves a feasible subinterval of [0, 1] and the
constrained optimum is the clamped equalizer.
"""


class EnergyInfeasible(ValueError):
    """No split in [0, 1] satisfies the energy budget."""

    def __init__(self, detail, vehicle_id=None):
        self.vehicle_id = vehicle_id
        prefix = f"vehicle {vehicle_id}: " if vehicle_id is not None else ""
        super().__init__(f"{prefix}{detail}")


class SplitInfeasible(ValueError):
    pass


def optimal_split(local_coeff, offload_coeff, min_split=0.0, max_split=1.0):
    """Minimizer of max(phi*A, (1-phi)*B) over [min_split, max_split].

    A is the full-local time, B the full-offload time. min_split is the
    energy clamp pushing computation local; max_split the opposite clamp.
    """
    if min_split > 1.0 or min_split > max_split:
        raise SplitInfeasible(
            f"empty split interval [{min_split}, {max_split}]"
        )
    a, b = float(local_coeff), float(offload_coeff)
    if a < 0 or b < 0:
        raise ValueError("branch coefficients must be >= 0")
    if a + b == 0:
        phi = 0.0
    else:
        phi = b / (a + b)
    return min(max(phi, min_split, 0.0), max_split, 1.0)


def energy_split_interval(e_local_full, e_tx_full, budget):
    """Feasible [lo, hi] for phi under phi*E_loc + (1-phi)*E_tx <= budget.

    e_local_full is the energy of computing everything locally, e_tx_full the
    transmit energy of offloading everything (inf when the rate is zero).
    Raises EnergyInfeasible when no split fits, reporting the cheapest point.
    """
    e_loc, e_tx, w = float(e_local_full), float(e_tx_full), float(budget)
    if e_loc < 0 or w <= 0:
        raise ValueError("energies must be >= 0 and budget > 0")
    if e_tx == float("inf"):
        # zero rate: only the all-local split avoids infinite transmit energy
        if e_loc <= w:
            return 1.0, 1.0
        raise EnergyInfeasible(
            f"all-local energy {e_loc:.6e} J exceeds budget {w:.6e} J and the rate is zero"
        )
    if e_loc <= w and e_tx <= w:
        return 0.0, 1.0
    if e_tx > w and e_loc > w:
        e_min = min(e_loc, e_tx)
        raise EnergyInfeasible(
            f"minimum achievable energy {e_min:.6e} J exceeds budget {w:.6e} J"
        )
    if e_tx > w:  # energy falls as phi grows; feasible above the crossing
        lo = (e_tx - w) / (e_tx - e_loc)
        return min(lo, 1.0), 1.0
    # e_loc > w: energy rises with phi; feasible below the crossing
    hi = (w - e_tx) / (e_loc - e_tx)
    return 0.0, min(hi, 1.0)


def compute_min_split_for_energy(task, local_cpu, tx_power, rate, kappa, energy_budget):
    """Smallest phi meeting the energy budget at the given rate."""
    e_loc = kappa * local_cpu ** 2 * task.data_size * task.cycle_density
    e_tx = tx_power * task.data_size / rate if rate > 0 else float("inf")
    lo, _hi = energy_split_interval(e_loc, e_tx, energy_budget)
    return lo
