#!/usr/bin/env python3
"""Gap table on the bundled small benchmark (exact optima as references).

Runs seeded GA trials on every bundled instance of the requested sizes and
prints a CSV with best, mean and gap-to-optimum columns. Defaults are
desk-scale; pass --trials 30 --generations 1000000 for a full-scale run.

Example:
    python scripts/run_small_benchmark.py --sizes 5 6 --trials 3 \
        --generations 100000 --output out/small
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from fstsp_saga.bench import ExperimentSpec, emit_report, run_experiment
from fstsp_saga.evolution import GAConfig


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[5, 6])
    parser.add_argument("--trials", type=int, default=3)
    parser.add_argument("--generations", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--output", default=None, help="report path prefix")
    args = parser.parse_args()

    data = ROOT / "data" / "small_benchmark"
    import json

    references = json.loads((data / "references.json").read_text())
    paths = [
        str(data / f"uniform-n{size:02d}-{idx:02d}.txt")
        for size in args.sizes
        for idx in range(1, 11)
    ]
    spec = ExperimentSpec(
        instance_paths=paths,
        config=GAConfig(num_generations=args.generations, seed=args.seed),
        trials=args.trials,
        reference_values=references,
        output=args.output,
        jobs=args.jobs,
    )
    report = run_experiment(spec)
    sys.stdout.write(emit_report(report, "csv"))
    gaps = [row.gap_pct for row in report.rows if row.gap_pct is not None]
    optimal = sum(1 for g in gaps if abs(g) <= 1e-6)
    print(
        f"# optimal on {optimal}/{len(gaps)} instances, "
        f"mean gap {sum(gaps) / len(gaps):.3f}%",
        file=sys.stderr,
    )
    return 3 if report.failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
