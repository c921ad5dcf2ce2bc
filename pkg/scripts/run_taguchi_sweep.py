#!/usr/bin/env python3
"""Hyper-parameter sweep over the bundled orthogonal-array subset.

Runs the 16-row design from data/taguchi_l16.json (or a full cartesian
grid with --full-grid) on the bundled 20-customer instance and prints the
mean-fitness table. Desk-scale defaults; raise --trials/--generations to
reproduce a serious tuning run.

Example:
    python scripts/run_taguchi_sweep.py --trials 3 --generations 20000
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from fstsp_saga.bench import sweep_hyperparameters, sweep_to_csv
from fstsp_saga.evolution import GAConfig


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--instance", default=str(ROOT / "data" / "large" / "uniform-n20-01.txt"))
    parser.add_argument("--trials", type=int, default=3)
    parser.add_argument("--generations", type=int, default=20_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument(
        "--full-grid",
        action="store_true",
        help="sweep the full 4x4x4x4 level grid instead of the 16-row subset",
    )
    parser.add_argument("--output", default=None)
    args = parser.parse_args()

    base = GAConfig(num_generations=args.generations, seed=args.seed)
    if args.full_grid:
        grid = {
            "innovation_rate": [6, 7, 8, 9],
            "initial_drone_pct": [2, 5, 8, 11],
            "population_size": [20, 30, 40, 50],
            "tournament_size": [5, 20, 35, 50],
        }
        rows = sweep_hyperparameters(
            grid, args.instance, args.trials, base, jobs=args.jobs
        )
    else:
        subset = json.loads((ROOT / "data" / "taguchi_l16.json").read_text())["rows"]
        rows = sweep_hyperparameters(
            None, args.instance, args.trials, base, rows=subset, jobs=args.jobs
        )
    text = sweep_to_csv(rows)
    sys.stdout.write(text)
    if args.output:
        Path(args.output).parent.mkdir(parents=True, exist_ok=True)
        Path(args.output).write_text(text, encoding="utf-8")
    best = min(rows, key=lambda r: r.mean_fitness)
    print(f"# best config #{best.config_number}: {best.levels} "
          f"(mean fitness {best.mean_fitness:.2f})", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
