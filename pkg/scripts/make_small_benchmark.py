#!/usr/bin/env python3
"""Regenerate the bundled benchmark instances and their oracle references.

Writes canonical-format instances under data/ with a fixed seed so the
files are reproducible byte for byte:

* data/small_benchmark/uniform-n{05,06,07}-{01..10}.txt
  (5, 6 and 7 customers; depot plus customers uniform in [0, 100]^2)
* data/small_benchmark/references.json
  exact optima; sizes 5-6 come from the independent no-pruning
  enumeration, size 7 from the pruned solver (cross-checked elsewhere)
* data/large/uniform-n{10,20,50,75}-01.txt (no references)
* data/taguchi_l16.json: a 16-row orthogonal-array subset for sweeps

Run from the repository root: python scripts/make_small_benchmark.py
"""

from __future__ import annotations

import json
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from fstsp_saga.instances import Instance, Node, to_canonical
from fstsp_saga.oracle import brute_force_solve, brute_force_solve_unpruned

SEED = 202_408
SMALL_SIZES = (5, 6, 7)  # customers per instance
LARGE_SIZES = (10, 20, 50, 75)
INSTANCES_PER_SIZE = 10
BOX = 100.0

L16_ROWS = [
    {"innovation_rate": 6, "initial_drone_pct": 2, "population_size": 20, "tournament_size": 5},
    {"innovation_rate": 6, "initial_drone_pct": 5, "population_size": 30, "tournament_size": 20},
    {"innovation_rate": 6, "initial_drone_pct": 8, "population_size": 40, "tournament_size": 35},
    {"innovation_rate": 6, "initial_drone_pct": 11, "population_size": 50, "tournament_size": 50},
    {"innovation_rate": 7, "initial_drone_pct": 2, "population_size": 30, "tournament_size": 35},
    {"innovation_rate": 7, "initial_drone_pct": 5, "population_size": 20, "tournament_size": 50},
    {"innovation_rate": 7, "initial_drone_pct": 8, "population_size": 50, "tournament_size": 5},
    {"innovation_rate": 7, "initial_drone_pct": 11, "population_size": 40, "tournament_size": 20},
    {"innovation_rate": 8, "initial_drone_pct": 2, "population_size": 40, "tournament_size": 50},
    {"innovation_rate": 8, "initial_drone_pct": 5, "population_size": 50, "tournament_size": 35},
    {"innovation_rate": 8, "initial_drone_pct": 8, "population_size": 20, "tournament_size": 20},
    {"innovation_rate": 8, "initial_drone_pct": 11, "population_size": 30, "tournament_size": 5},
    {"innovation_rate": 9, "initial_drone_pct": 2, "population_size": 50, "tournament_size": 20},
    {"innovation_rate": 9, "initial_drone_pct": 5, "population_size": 40, "tournament_size": 5},
    {"innovation_rate": 9, "initial_drone_pct": 8, "population_size": 30, "tournament_size": 50},
    {"innovation_rate": 9, "initial_drone_pct": 11, "population_size": 20, "tournament_size": 35},
]


def make_instance(name: str, customers: int, rng: random.Random) -> Instance:
    nodes = tuple(
        Node(i, round(rng.uniform(0.0, BOX), 4), round(rng.uniform(0.0, BOX), 4))
        for i in range(customers + 1)
    )
    return Instance(name=name, nodes=nodes, alpha=2.0)


def main() -> int:
    root = Path(__file__).resolve().parents[1]
    small_dir = root / "data" / "small_benchmark"
    large_dir = root / "data" / "large"
    small_dir.mkdir(parents=True, exist_ok=True)
    large_dir.mkdir(parents=True, exist_ok=True)

    rng = random.Random(SEED)
    references: dict[str, float] = {}

    for customers in SMALL_SIZES:
        for idx in range(1, INSTANCES_PER_SIZE + 1):
            name = f"uniform-n{customers:02d}-{idx:02d}"
            inst = make_instance(name, customers, rng)
            (small_dir / f"{name}.txt").write_text(to_canonical(inst), encoding="utf-8")
            t0 = time.perf_counter()
            if customers <= 6:
                result = brute_force_solve_unpruned(inst)
                method = "unpruned"
            else:
                result = brute_force_solve(inst)
                method = "pruned"
            references[name] = result.optimal_makespan
            print(
                f"{name}: optimum {result.optimal_makespan:.4f} "
                f"({method}, {time.perf_counter() - t0:.1f}s)"
            )

    with open(small_dir / "references.json", "w", encoding="utf-8") as fh:
        json.dump(references, fh, indent=2, sort_keys=True)
        fh.write("\n")

    for customers in LARGE_SIZES:
        name = f"uniform-n{customers:02d}-01"
        inst = make_instance(name, customers, rng)
        (large_dir / f"{name}.txt").write_text(to_canonical(inst), encoding="utf-8")
        print(f"{name}: written")

    with open(root / "data" / "taguchi_l16.json", "w", encoding="utf-8") as fh:
        json.dump({"rows": L16_ROWS}, fh, indent=2)
        fh.write("\n")
    print("done")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
