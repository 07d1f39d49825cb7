"""
Command line entry point.

    python -m src.cli run experiments/quadratic_bias/config.toml --jobs 2
    python -m src.cli compare experiments/quadratic_bias/config.toml -a dude_asgd vanilla_asgd
    python -m src.cli verify invariants
    python -m src.cli partition -n 10 --alpha 0.1 --samples 10000 --classes 10 -o partition.json
"""

import argparse
import json
import sys
from typing import List

import numpy as np

from src.config.constants import EXIT_CONFIG_INVALID, EXIT_NUMERIC_BLOWUP, EXIT_OK, EXIT_VERIFY_FAILED, AlgorithmKind
from src.config.exceptions import ConfigError, InvariantBreach, NumericalBlowUp
from src.config.run_config import RunConfig
from src.executables.compare import compare
from src.executables.verify import SUITES, run_suite
from src.objectives.partition import dirichlet_partition
from src.objectives.sampling import LABEL_SALT, keyed_rng
from src.state.run_sims import create_runs
from src.write_data.write_data import write_json


def load_config(args) -> RunConfig:
    """Config file plus command-line overrides."""
    config = RunConfig.load(args.config)
    run = {}
    if args.jobs is not None:
        run["jobs"] = args.jobs
    if args.seeds:
        run["seeds"] = args.seeds
    if args.T is not None:
        run["T"] = args.T
    if args.output_dir is not None:
        run["output_dir"] = args.output_dir
    if args.quiet:
        run["verbose"] = False
    return config.replace(run=run) if run else config


def cmd_run(args) -> int:
    config = load_config(args)
    create_runs(config)
    return EXIT_OK


def cmd_compare(args) -> int:
    config = load_config(args)
    table = compare(config, args.algorithms, num_points=args.points)
    for name, value in sorted(table["avg_grad_norm_sq"].items(), key=lambda kv: kv[1]):
        print(f"{name:>15s}  avg grad norm^2 {value:.6e}", flush=True)
    return EXIT_OK


def cmd_verify(args) -> int:
    result = run_suite(args.suite)
    text = json.dumps(result, indent=4, sort_keys=True)
    print(text, flush=True)
    if args.output:
        write_json(args.output, result)
    return EXIT_OK if result["passed"] else EXIT_VERIFY_FAILED


def cmd_partition(args) -> int:
    if args.labels:
        labels = np.loadtxt(args.labels, dtype=np.int64, ndmin=1)
    else:
        labels = keyed_rng(args.seed, LABEL_SALT).integers(0, args.classes, size=args.samples)
    partition = dirichlet_partition(labels, args.n, args.alpha, args.seed)
    result = partition.to_dict()
    result["counts"] = partition.counts().tolist()
    result["alpha"] = args.alpha
    result["seed"] = args.seed
    if args.output:
        write_json(args.output, result)
    else:
        print(json.dumps(result, sort_keys=True), flush=True)
    return EXIT_OK


def add_config_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("config", help="TOML run configuration")
    parser.add_argument("--jobs", type=int, default=None, help="concurrent seeds (default: [run] jobs)")
    parser.add_argument("--seeds", type=int, nargs="+", default=None, help="override [run] seeds")
    parser.add_argument("-T", dest="T", type=int, default=None, help="override [run] T")
    parser.add_argument("--output-dir", default=None, help="override [run] output_dir")
    parser.add_argument("-q", "--quiet", action="store_true", help="suppress progress output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dudesim", description="Asynchronous SGD simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate every seed of one configuration")
    add_config_arguments(run)
    run.set_defaults(func=cmd_run)

    cmp = sub.add_parser("compare", help="run several algorithms on shared traces and streams")
    add_config_arguments(cmp)
    cmp.add_argument(
        "-a",
        "--algorithms",
        nargs="+",
        default=[k.value for k in AlgorithmKind],
        choices=[k.value for k in AlgorithmKind],
        help="algorithms to compare (default: all)",
    )
    cmp.add_argument("--points", type=int, default=50, help="virtual-time grid size (default: 50)")
    cmp.set_defaults(func=cmd_compare)

    ver = sub.add_parser("verify", help="run a property suite")
    ver.add_argument("suite", choices=sorted(SUITES))
    ver.add_argument("-o", "--output", default=None, help="also write the JSON report here")
    ver.set_defaults(func=cmd_verify)

    part = sub.add_parser("partition", help="Dirichlet label partition")
    part.add_argument("-n", type=int, required=True, help="number of workers")
    part.add_argument("--alpha", type=float, required=True, help="Dirichlet concentration")
    part.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")
    part.add_argument("--labels", default=None, help="text file with one integer label per line")
    part.add_argument("--samples", type=int, default=10_000, help="random labels to draw without --labels")
    part.add_argument("--classes", type=int, default=10, help="classes for random labels (default: 10)")
    part.add_argument("-o", "--output", default=None, help="JSON output file (default: stdout)")
    part.set_defaults(func=cmd_partition)
    return parser


def main(argv: List[str] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"invalid config: {err}", file=sys.stderr)
        return EXIT_CONFIG_INVALID
    except NumericalBlowUp as err:
        print(f"numeric blow-up at iteration {err.iteration}: {err}", file=sys.stderr)
        return EXIT_NUMERIC_BLOWUP
    except InvariantBreach as err:
        print(f"invariant violated: {err}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
