"""Self-adaptive genetic algorithm for the Flying Sidekick TSP.

A truck at unit speed and a faster drone jointly serve every customer once;
the objective is the total completion time (makespan). The solver is a
steady-state GA whose crossover and mutation operators are chosen by a
per-individual memeplex that co-evolves with the population. An exhaustive
oracle provides ground truth on small instances and a benchmark harness
reproduces gap and mean-best tables.
"""

from .instances import (
    DistanceMatrix,
    Instance,
    Node,
    SpeedModel,
    build_distance_matrix,
    drone_time,
    load_instance,
    parse_instance,
    to_canonical,
    truck_time,
)
from .solution import (
    Chromosome,
    Gene,
    NodeType,
    SubtourPair,
    chromosome_from_string,
    chromosome_to_string,
    decompose_subtours,
    evaluate_makespan,
    repair,
    subtour_time,
    validate_feasibility,
)
from .seeding import (
    build_initial_population,
    compute_node_scores,
    exact_tsp_tour,
    heuristic_tsp_tour,
    roulette_select,
)
from .evolution import (
    GAConfig,
    Individual,
    Memeplex,
    Population,
    RunStats,
    apply_crossover,
    evolve,
    mutate_memeplex,
    mutate_tour,
    mutate_types,
    replace_population,
    tournament_select,
)
from .oracle import OracleResult, brute_force_solve, brute_force_solve_unpruned, verify_run
from .bench import ExperimentSpec, RunReport, emit_report, run_experiment, sweep_hyperparameters

__version__ = "0.1.0"
