"""Compare the compiled scan kernel against the numpy fallback.

Runs the oracle's inner allocation scan on realistic problem shapes and, when
both backends are importable, a whole small-instance oracle solve. Invoke as
`python benchmarks/bench_kernels.py`.
"""

import time

import numpy as np

from vecirs.kernels import _fallback

try:
    from vecirs.kernels import _native
except ImportError:
    _native = None


def _case(rng, n, mb, me, p):
    local = rng.uniform(50, 3000, n)
    tx = rng.uniform(0.05, 20, (mb, n))
    ed = rng.uniform(0.5, 200, (me, n))
    lo = np.where(rng.random((mb, n)) < 0.5, rng.uniform(0, 0.7, (mb, n)), 0.0)
    hi = np.ones((mb, n))
    phi = np.linspace(0.0, 1.0, p)
    return local, tx, ed, lo, hi, phi


def bench_scan(repeats=5):
    rng = np.random.default_rng(1)
    shapes = [(1, 1, 1, 1001), (2, 51, 51, 1001), (3, 66, 66, 1001)]
    print(f"{'shape (N,Mb,Me,P)':>22} {'numpy':>12} {'native':>12} {'speedup':>9}")
    for n, mb, me, p in shapes:
        case = _case(rng, n, mb, me, p)
        t0 = time.perf_counter()
        for _ in range(repeats):
            ref = _fallback.best_allocation_scan(*case, False)
        t_py = (time.perf_counter() - t0) / repeats
        if _native is None:
            print(f"{str((n, mb, me, p)):>22} {t_py * 1e3:>10.2f}ms {'absent':>12}")
            continue
        t0 = time.perf_counter()
        for _ in range(repeats):
            got = _native.best_allocation_scan(*case, False)
        t_c = (time.perf_counter() - t0) / repeats
        assert got[1] == ref[1] and got[2] == ref[2]
        print(f"{str((n, mb, me, p)):>22} {t_py * 1e3:>10.2f}ms {t_c * 1e3:>10.2f}ms "
              f"{t_py / t_c:>8.1f}x")


def bench_oracle():
    import os

    from vecirs.channel import sample_realization
    from vecirs.optimizer.oracle import brute_force_oracle
    from vecirs.scenario import SystemConfig, generate_scenario

    cfg = SystemConfig(n_vehicles=2, n_irs_elements=4, local_cpu_max=1e9,
                       kappa=1e-30, energy_budget=1.0, tx_power=1.0, seed=11)
    scen = generate_scenario(cfg)
    real = sample_realization(scen, np.random.default_rng(3))

    import vecirs.kernels as kernels

    results = {}
    for backend, impl in (("python", _fallback), ("native", _native)):
        if impl is None:
            continue
        kernels.best_allocation_scan = impl.best_allocation_scan
        t0 = time.perf_counter()
        _, obj = brute_force_oracle(scen, real)
        results[backend] = (time.perf_counter() - t0, obj)
    kernels.best_allocation_scan = kernels._impl.best_allocation_scan
    print("\nfull 2-vehicle oracle solve:")
    for backend, (dt, obj) in results.items():
        print(f"  {backend:>7}: {dt:7.2f} s  objective {obj:.6f}")
    objs = [v[1] for v in results.values()]
    if len(objs) == 2:
        assert abs(objs[0] - objs[1]) <= 1e-9 * max(objs), "backend mismatch"


if __name__ == "__main__":
    bench_scan()
    bench_oracle()
