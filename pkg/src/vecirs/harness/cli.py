"""Command line front end.

Exit codes: 0 success, 1 usage error, 2 configuration error, 3 infeasible
instance (run subcommand).
"""

import argparse
import sys
from dataclasses import replace

import numpy as np

from ..channel import sample_realization
from ..offload import InfeasibleDecision, SCHEMES, evaluate_scheme, objective_value
from ..optimizer.bcd import SolveOptions, bcd_optimize
from ..optimizer.oracle import OracleGrid, brute_force_oracle
from ..optimizer.splits import EnergyInfeasible
from ..scenario import ConfigError, SystemConfig, generate_scenario, load_config
from .sweep import (
    format_number,
    load_spec,
    preset_sweep,
    run_sweep,
    spec_to_dict,
    write_csv,
)

USAGE_EXIT = 1
CONFIG_EXIT = 2
INFEASIBLE_EXIT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _parse_quantize(text):
    if text is None or text == "keep":
        return "keep"
    if text == "continuous":
        return None
    try:
        return int(text)
    except ValueError:
        raise SystemExit(USAGE_EXIT)


def _load_base_config(path):
    if path is None:
        return SystemConfig()
    return load_config(path)


def _apply_overrides(cfg, seed=None, quantize="keep"):
    if seed is not None:
        cfg = replace(cfg, seed=int(seed))
    if quantize != "keep":
        cfg = replace(cfg, phase_bits=quantize)
    return cfg


def _cmd_run(args):
    cfg = _apply_overrides(_load_base_config(args.config), args.seed,
                           _parse_quantize(args.quantize_bits))
    scen = generate_scenario(cfg)
    rng = np.random.default_rng(np.random.SeedSequence([int(cfg.seed), 1]))
    real = sample_realization(scen, rng)
    scheme = args.scheme or "vha_irs"
    if scheme not in SCHEMES:
        print(f"error: unknown scheme {scheme!r}", file=sys.stderr)
        return USAGE_EXIT
    try:
        decision, trace = bcd_optimize(scen, real, SolveOptions(), scheme=scheme)
        records = evaluate_scheme(scen, real, decision, scheme)
    except (EnergyInfeasible, InfeasibleDecision) as exc:
        print(f"infeasible instance: {exc}", file=sys.stderr)
        return INFEASIBLE_EXIT
    objective = objective_value(records)
    print(f"scheme {scheme}")
    print(f"objective_s {format_number(objective)}")
    print(f"iterations {trace.iterations} termination {trace.termination}")
    print(f"drone_xy {format_number(decision.drone_xy[0])} {format_number(decision.drone_xy[1])}")
    print("vehicle split rate_bps t_completion_s energy_j")
    for rec in records:
        print(f"{rec.vehicle_id} {format_number(rec.split)} {format_number(rec.rate)} "
              f"{format_number(rec.t_completion)} {format_number(rec.energy)}")
    return 0


def _filter_schemes(spec, scheme_arg):
    if not scheme_arg:
        return spec
    wanted = tuple(s.strip() for s in scheme_arg.split(",") if s.strip())
    for s in wanted:
        if s not in SCHEMES:
            print(f"error: unknown scheme {s!r}", file=sys.stderr)
            raise SystemExit(USAGE_EXIT)
    return replace(spec, schemes=wanted)


def _cmd_sweep(args):
    spec = load_spec(args.spec)
    if args.seeds is not None:
        spec = replace(spec, n_seeds=int(args.seeds))
    if args.seed is not None:
        spec = replace(spec, base_seed=int(args.seed))
    spec = _filter_schemes(spec, args.scheme)
    rows = run_sweep(spec)
    write_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_fig(args):
    spec = preset_sweep(
        args.figure, n_seeds=args.seeds if args.seeds is not None else 20,
        base_seed=args.seed if args.seed is not None else 2024,
        phase_bits=_parse_quantize(args.quantize_bits),
    )
    spec = _filter_schemes(spec, args.scheme)
    if args.print_spec:
        import json

        print(json.dumps(spec_to_dict(spec), indent=2, sort_keys=True))
        return 0
    rows = run_sweep(spec)
    write_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_oracle_check(args):
    if args.config:
        cfg = load_config(args.config)
    else:
        cfg = SystemConfig(n_vehicles=2, n_irs_elements=4, local_cpu_max=1e9,
                           kappa=1e-30, energy_budget=1.0, tx_power=4.0)
    cfg = _apply_overrides(cfg, args.seed)
    if cfg.n_vehicles > 3:
        print("error: oracle-check needs n_vehicles <= 3", file=sys.stderr)
        return CONFIG_EXIT
    scen = generate_scenario(cfg)
    rng = np.random.default_rng(np.random.SeedSequence([int(cfg.seed), 1]))
    real = sample_realization(scen, rng)
    try:
        decision, trace = bcd_optimize(scen, real, SolveOptions(), scheme="vha_irs")
        _, oracle_obj = brute_force_oracle(scen, real, OracleGrid())
    except (EnergyInfeasible, InfeasibleDecision) as exc:
        print(f"infeasible instance: {exc}", file=sys.stderr)
        return INFEASIBLE_EXIT
    bcd_obj = trace.objectives[-1]
    gap = bcd_obj / oracle_obj - 1.0
    print(f"bcd_objective_s {format_number(bcd_obj)}")
    print(f"oracle_objective_s {format_number(oracle_obj)}")
    print(f"relative_gap {format_number(gap)}")
    return 0


def build_parser():
    parser = _Parser(prog="vecirs", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="solve one seeded instance")
    p_run.add_argument("--config", help="JSON config file")
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--scheme", default="vha_irs")
    p_run.add_argument("--quantize-bits", default="keep")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a sweep spec file, write CSV")
    p_sweep.add_argument("spec", help="JSON sweep spec")
    p_sweep.add_argument("--out", default="sweep.csv")
    p_sweep.add_argument("--seeds", type=int)
    p_sweep.add_argument("--seed", type=int)
    p_sweep.add_argument("--scheme")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_fig = sub.add_parser("fig", help="run a canned figure sweep")
    p_fig.add_argument("figure", choices=["fig3a", "fig3b", "fig3c", "fig4"])
    p_fig.add_argument("--out", default=None)
    p_fig.add_argument("--seeds", type=int)
    p_fig.add_argument("--seed", type=int)
    p_fig.add_argument("--scheme")
    p_fig.add_argument("--quantize-bits", default="keep")
    p_fig.add_argument("--print-spec", action="store_true")
    p_fig.set_defaults(func=_cmd_fig)

    p_oc = sub.add_parser("oracle-check", help="small-instance oracle comparison")
    p_oc.add_argument("--config")
    p_oc.add_argument("--seed", type=int)
    p_oc.set_defaults(func=_cmd_oracle_check)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "fig" and not args.print_spec and args.out is None:
        args.out = f"{args.figure}.csv"
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return CONFIG_EXIT
    except (ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return CONFIG_EXIT


if __name__ == "__main__":
    sys.exit(main())
