"""Experiment harness: seeded trials, aggregation, gap tables, sweeps.

Trials are seeded as ``config.seed + trial_index``, so results never depend
on scheduling order and a spec re-run reproduces its report byte for byte
(wall-time columns aside).
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from statistics import mean

from .evolution import GAConfig, config_from_mapping, evolve
from .instances import load_instance

log = logging.getLogger(__name__)

CSV_COLUMNS = ("instance", "n", "trials", "best", "mean", "gap_pct", "mean_seconds")


@dataclass(slots=True)
class ExperimentSpec:
    """One benchmark run: instances x trials under a single config."""

    instance_paths: list[str]
    config: GAConfig = field(default_factory=GAConfig)
    trials: int = 30
    reference_values: dict[str, float] | None = None
    output: str | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")


@dataclass(slots=True)
class InstanceReport:
    name: str
    path: str
    n: int
    trial_bests: list[float]
    best: float
    mean_best: float
    gap_pct: float | None
    mean_seconds: float


@dataclass(slots=True)
class RunReport:
    rows: list[InstanceReport]
    trials: int
    failures: list[tuple[str, int, str]] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "trials": self.trials,
            "rows": [
                {
                    "instance": r.name,
                    "path": r.path,
                    "n": r.n,
                    "trials": self.trials,
                    "trial_bests": r.trial_bests,
                    "best": r.best,
                    "mean": r.mean_best,
                    "gap_pct": r.gap_pct,
                    "mean_seconds": r.mean_seconds,
                }
                for r in self.rows
            ],
            "failures": [
                {"instance": name, "trial": trial, "error": err}
                for name, trial, err in self.failures
            ],
        }


def spec_from_json(path, jobs: int | None = None) -> ExperimentSpec:
    base = Path(path).parent
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    refs = data.get("references")
    if isinstance(refs, str):
        with open(base / refs, "r", encoding="utf-8") as fh:
            refs = json.load(fh)
    cfg = config_from_mapping(data.get("config", {}))
    instance_paths = [str((base / p)) if not os.path.isabs(p) else p
                      for p in data["instances"]]
    output = data.get("output")
    if output is not None and not os.path.isabs(output):
        output = str(base / output)
    if jobs is None:
        jobs = int(data.get("jobs", os.environ.get("FSTSP_JOBS", 1)))
    return ExperimentSpec(
        instance_paths=instance_paths,
        config=cfg,
        trials=int(data.get("trials", 30)),
        reference_values=refs,
        output=output,
        jobs=jobs,
    )


def _run_trial(path: str, cfg_kwargs: dict, seed: int) -> tuple[float, float]:
    cfg = GAConfig(**{**cfg_kwargs, "seed": seed})
    stats = evolve(load_instance(path), cfg)
    return stats.best_fitness, stats.wall_time


def _config_kwargs(cfg: GAConfig) -> dict:
    return {
        "population_size": cfg.population_size,
        "tournament_size": cfg.tournament_size,
        "innovation_rate": cfg.innovation_rate,
        "initial_drone_pct": cfg.initial_drone_pct,
        "num_generations": cfg.num_generations,
        "alpha": cfg.alpha,
    }


def _lookup_reference(refs: dict[str, float] | None, name: str, path: str) -> float | None:
    if not refs:
        return None
    for key in (name, path, Path(path).name, Path(path).stem):
        if key in refs:
            return float(refs[key])
    return None


def run_experiment(spec: ExperimentSpec) -> RunReport:
    """Run every instance for ``spec.trials`` seeded trials and aggregate.

    Missing instance files fail fast before any trial. A trial that raises
    is recorded as a failure and the run continues. Reports are written to
    ``<output>.csv`` and ``<output>.json`` when an output path is set.
    """
    for path in spec.instance_paths:
        if not Path(path).is_file():
            raise FileNotFoundError(f"instance file not found: {path}")
    instances = [(path, load_instance(path)) for path in spec.instance_paths]

    cfg_kwargs = _config_kwargs(spec.config)
    base_seed = spec.config.seed
    tasks = [
        (idx, trial, path)
        for idx, (path, _) in enumerate(instances)
        for trial in range(spec.trials)
    ]
    results: dict[tuple[int, int], tuple[float, float]] = {}
    failures: list[tuple[str, int, str]] = []

    if spec.jobs > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            futures = {
                (idx, trial): pool.submit(_run_trial, path, cfg_kwargs, base_seed + trial)
                for idx, trial, path in tasks
            }
            for (idx, trial), fut in futures.items():
                try:
                    results[(idx, trial)] = fut.result()
                except Exception as exc:  # noqa: BLE001 - trial isolation
                    failures.append((instances[idx][1].name, trial, repr(exc)))
    else:
        for idx, trial, path in tasks:
            try:
                results[(idx, trial)] = _run_trial(path, cfg_kwargs, base_seed + trial)
            except Exception as exc:  # noqa: BLE001 - trial isolation
                failures.append((instances[idx][1].name, trial, repr(exc)))

    rows = []
    for idx, (path, inst) in enumerate(instances):
        bests = []
        times = []
        for trial in range(spec.trials):
            got = results.get((idx, trial))
            if got is None:
                continue
            bests.append(got[0])
            times.append(got[1])
        if not bests:
            log.error("every trial failed for %s", inst.name)
            continue
        best = min(bests)
        ref = _lookup_reference(spec.reference_values, inst.name, path)
        gap = None if ref is None else 100.0 * (best - ref) / ref
        rows.append(
            InstanceReport(
                name=inst.name,
                path=path,
                n=inst.n,
                trial_bests=bests,
                best=best,
                mean_best=mean(bests),
                gap_pct=gap,
                mean_seconds=mean(times),
            )
        )
    report = RunReport(rows=rows, trials=spec.trials, failures=failures)
    if spec.output:
        write_report(report, spec.output)
    return report


def emit_report(report: RunReport, fmt: str = "csv") -> str:
    """Render a report as CSV or JSON text.

    CSV shows two decimals; JSON carries full precision. A missing
    reference leaves the gap cell empty (CSV) or null (JSON).
    """
    if fmt == "json":
        return json.dumps(report.to_json_dict(), indent=2) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in report.rows:
        writer.writerow(
            [
                r.name,
                r.n,
                report.trials,
                f"{r.best:.2f}",
                f"{r.mean_best:.2f}",
                "" if r.gap_pct is None else f"{r.gap_pct:.2f}",
                f"{r.mean_seconds:.2f}",
            ]
        )
    return buf.getvalue()


def write_report(report: RunReport, output_prefix: str) -> tuple[str, str]:
    prefix = Path(output_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    csv_path = prefix.with_suffix(".csv")
    json_path = prefix.with_suffix(".json")
    csv_path.write_text(emit_report(report, "csv"), encoding="utf-8")
    json_path.write_text(emit_report(report, "json"), encoding="utf-8")
    return str(csv_path), str(json_path)


# ---------------------------------------------------------------------------
# Hyper-parameter sweeps

SWEEP_PARAMS = ("innovation_rate", "initial_drone_pct", "population_size", "tournament_size")
MAX_GRID_CONFIGS = 1024

# The config singled out as the default operating point in sweep output.
DEFAULT_LEVELS = {
    "innovation_rate": 7,
    "initial_drone_pct": 2.0,
    "population_size": 50,
    "tournament_size": 5,
}


@dataclass(slots=True)
class SweepRow:
    config_number: int
    levels: dict
    mean_fitness: float
    selected: bool


def _grid_rows(grid: dict[str, list]) -> list[dict]:
    for param in grid:
        if param not in SWEEP_PARAMS:
            raise ValueError(f"unknown sweep parameter {param!r}")
        if not grid[param]:
            raise ValueError(f"empty level list for {param!r}")
    rows = [{}]
    for param in SWEEP_PARAMS:
        levels = grid.get(param)
        if levels is None:
            continue
        rows = [dict(row, **{param: lvl}) for row in rows for lvl in levels]
    return rows


def sweep_hyperparameters(
    grid: dict[str, list] | None,
    inst_path: str,
    trials: int,
    base_config: GAConfig,
    rows: list[dict] | None = None,
    allow_large: bool = False,
    jobs: int = 1,
) -> list[SweepRow]:
    """Mean best fitness per configuration over seeded trials.

    ``grid`` expands to its cartesian product; ``rows`` supplies an explicit
    configuration list instead (e.g. an orthogonal-array subset). Grids
    beyond ``MAX_GRID_CONFIGS`` need ``allow_large``.
    """
    if (grid is None) == (rows is None):
        raise ValueError("provide exactly one of grid or rows")
    configs = rows if rows is not None else _grid_rows(grid)
    if len(configs) > MAX_GRID_CONFIGS and not allow_large:
        raise ValueError(
            f"{len(configs)} configurations exceeds {MAX_GRID_CONFIGS}; "
            "pass allow_large to proceed"
        )
    out = []
    base = _config_kwargs(base_config)
    for number, levels in enumerate(configs, start=1):
        unknown = set(levels) - set(SWEEP_PARAMS)
        if unknown:
            raise ValueError(f"unknown sweep parameter(s) {sorted(unknown)}")
        cfg = GAConfig(**{**base, **levels, "seed": base_config.seed})
        spec = ExperimentSpec(
            instance_paths=[inst_path], config=cfg, trials=trials, jobs=jobs
        )
        report = run_experiment(spec)
        fitness = mean(report.rows[0].trial_bests)
        selected = all(float(getattr(cfg, k)) == float(v) for k, v in DEFAULT_LEVELS.items())
        out.append(SweepRow(number, dict(levels), fitness, selected))
    return out


def sweep_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["config_number", *SWEEP_PARAMS, "mean_fitness", "selected"])
    for row in rows:
        writer.writerow(
            [
                row.config_number,
                *[row.levels.get(p, "") for p in SWEEP_PARAMS],
                f"{row.mean_fitness:.2f}",
                "yes" if row.selected else "no",
            ]
        )
    return buf.getvalue()
