"""Command line interface.

Subcommands: ``solve`` (one GA run), ``bench`` (experiment spec), ``oracle``
(exact optimum for small instances), ``sweep`` (hyper-parameter grid).
Exit codes: 0 success, 1 usage error, 2 I/O error, 3 trial failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bench, oracle
from .evolution import GAConfig, config_from_mapping, evolve, load_ga_config
from .instances import InstanceParseError, load_instance
from .solution import chromosome_to_string

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_TRIAL_FAILURE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we reserve 2 for I/O
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="fstsp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run the GA on one instance")
    solve.add_argument("instance")
    solve.add_argument("--config", help="GAConfig file (JSON or key = value text)")
    solve.add_argument("--seed", type=int)
    solve.add_argument("--generations", type=int)
    solve.add_argument("--alpha", type=float)
    solve.add_argument("--tour-file", help="seed tour: one node id per line")
    solve.add_argument("--format", choices=["bouman", "canonical"])
    solve.add_argument("--json", action="store_true", help="print run stats as JSON")

    bench_p = sub.add_parser("bench", help="run an experiment spec")
    bench_p.add_argument("spec")
    bench_p.add_argument("--jobs", type=int, default=None,
                         help="parallel trials (default: FSTSP_JOBS or 1)")

    oracle_p = sub.add_parser("oracle", help="exact optimum by enumeration")
    oracle_p.add_argument("instance")
    oracle_p.add_argument("--limit-n", type=int, default=oracle.DEFAULT_CUSTOMER_LIMIT)
    oracle_p.add_argument("--format", choices=["bouman", "canonical"])

    sweep_p = sub.add_parser("sweep", help="hyper-parameter sweep from a grid file")
    sweep_p.add_argument("grid")
    sweep_p.add_argument("--allow-large", action="store_true")
    sweep_p.add_argument("--jobs", type=int, default=None)
    return parser


def _load_tour(path: str) -> list[int]:
    with open(path, "r", encoding="utf-8") as fh:
        tour = [int(line) for line in fh.read().split()]
    if 0 in tour and tour[0] != 0:
        i = tour.index(0)
        tour = tour[i:] + tour[:i]  # tours are cyclic; anchor at the depot
    return tour


def _solve_config(args) -> GAConfig:
    cfg = load_ga_config(args.config) if args.config else GAConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    if args.generations is not None:
        cfg.num_generations = args.generations
    if args.alpha is not None:
        cfg.alpha = args.alpha
    return cfg


def _cmd_solve(args) -> int:
    inst = load_instance(args.instance, args.format)
    cfg = _solve_config(args)
    tour = _load_tour(args.tour_file) if args.tour_file else None
    stats = evolve(inst, cfg, tour=tour)
    if args.json:
        print(json.dumps(stats.to_json_dict(), indent=2))
    else:
        print(f"instance: {inst.name} (n={inst.n})")
        print(f"best makespan: {stats.best_fitness:.2f}")
        print(f"chromosome: {chromosome_to_string(stats.best_chromosome)}")
        print(f"generations: {stats.generations_run}  wall: {stats.wall_time:.2f}s")
        if stats.truncated:
            print("warning: run interrupted; results are partial")
    return EXIT_OK


def _cmd_bench(args) -> int:
    jobs = args.jobs
    if jobs is None:
        jobs = int(os.environ.get("FSTSP_JOBS", 1))
    spec = bench.spec_from_json(args.spec, jobs=jobs)
    report = bench.run_experiment(spec)
    sys.stdout.write(bench.emit_report(report, "csv"))
    if spec.output:
        print(f"reports written to {spec.output}.csv / {spec.output}.json", file=sys.stderr)
    if report.failures:
        for name, trial, err in report.failures:
            print(f"trial failure: {name} trial {trial}: {err}", file=sys.stderr)
        return EXIT_TRIAL_FAILURE
    return EXIT_OK


def _cmd_oracle(args) -> int:
    inst = load_instance(args.instance, args.format)
    result = oracle.brute_force_solve(inst, limit_n=args.limit_n)
    print(f"instance: {inst.name} (n={inst.n})")
    print(f"optimal makespan: {result.optimal_makespan:.2f}")
    print(f"chromosome: {chromosome_to_string(result.optimal_chromosome)}")
    print(f"assignments evaluated: {result.evaluated_count}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    jobs = args.jobs
    if jobs is None:
        jobs = int(os.environ.get("FSTSP_JOBS", 1))
    base = Path(args.grid).parent
    with open(args.grid, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    inst_path = data["instance"]
    if not os.path.isabs(inst_path):
        inst_path = str(base / inst_path)
    cfg = config_from_mapping(data.get("config", {}))
    rows = bench.sweep_hyperparameters(
        grid=data.get("grid"),
        inst_path=inst_path,
        trials=int(data.get("trials", 30)),
        base_config=cfg,
        rows=data.get("rows"),
        allow_large=args.allow_large,
        jobs=jobs,
    )
    text = bench.sweep_to_csv(rows)
    sys.stdout.write(text)
    output = data.get("output")
    if output:
        out_path = Path(output if os.path.isabs(output) else base / output)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(text, encoding="utf-8")
        print(f"sweep written to {out_path}", file=sys.stderr)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "oracle":
            return _cmd_oracle(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, InstanceParseError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
