"""Exact solver by exhaustive enumeration, for ground truth on small instances.

Enumerates every depot-anchored customer permutation and, per permutation,
every feasible node-type assignment, taking the global makespan minimum.
Intentionally simpler than the GA it validates. Two routes are provided: a
pruned depth-first enumeration (the default solver) and a plain
product-space enumeration with no pruning, kept as an independent
cross-check of the pruned one.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product

from .instances import Instance, SpeedModel, build_distance_matrix
from .solution import (
    COMBINED,
    DRONE,
    TRUCK_ONLY,
    Chromosome,
    evaluate_makespan,
    validate_feasibility,
)

DEFAULT_CUSTOMER_LIMIT = 8


class OracleSizeError(ValueError):
    """Instance too large for exhaustive enumeration."""


@dataclass(slots=True)
class OracleResult:
    optimal_makespan: float
    optimal_chromosome: Chromosome
    evaluated_count: int


def brute_force_solve(inst: Instance, limit_n: int = DEFAULT_CUSTOMER_LIMIT,
                      alpha: float | None = None) -> OracleResult:
    """Exact optimum over all permutations and feasible type assignments.

    ``limit_n`` caps the customer count (default 8; 9 stays tractable only
    thanks to pruning). The search runs depth first over positions,
    closing subtour pairs at combined stops; because every completed pair
    only ever adds time, a partial sum at or above the incumbent prunes the
    whole subtree. ``evaluated_count`` counts complete feasible
    assignments reached.
    """
    customers = inst.n - 1
    if customers > limit_n:
        raise OracleSizeError(
            f"{customers} customers exceeds the enumeration limit of {limit_n}"
        )
    dm = build_distance_matrix(inst)
    sm = SpeedModel(alpha=alpha if alpha is not None else inst.alpha)
    d = dm.d
    inv_alpha = 1.0 / sm.alpha

    best_value = float("inf")
    best_nodes: list[int] | None = None
    best_types: list[int] | None = None
    evaluated = 0

    n = inst.n
    types = [COMBINED] * n

    def search(nodes: list[int], pos: int, partial: float, launch: int, prev: int,
               truck: float, drone_node: int, has_truck_only: bool, combined_seen: int):
        nonlocal best_value, best_nodes, best_types, evaluated
        if partial >= best_value:
            return
        if pos == n:
            # Close the wrap segment at the depot.
            if has_truck_only and drone_node < 0:
                return
            if drone_node >= 0 and combined_seen == 1:
                return  # sortie would launch and land at the same stop
            leg = truck + d[prev][0]
            if drone_node >= 0:
                flight = (d[launch][drone_node] + d[drone_node][0]) * inv_alpha
                leg = leg if leg >= flight else flight
            total = partial + leg
            evaluated += 1
            if total < best_value:
                best_value = total
                best_nodes = list(nodes)
                best_types = list(types)
            return
        v = nodes[pos]
        # Combined: close the current segment here.
        if not (has_truck_only and drone_node < 0):
            leg = truck + d[prev][v]
            if drone_node >= 0:
                flight = (d[launch][drone_node] + d[drone_node][v]) * inv_alpha
                leg = leg if leg >= flight else flight
            types[pos] = COMBINED
            search(nodes, pos + 1, partial + leg, v, v, 0.0, -1, False, combined_seen + 1)
        # Drone: at most one per segment.
        if drone_node < 0:
            types[pos] = DRONE
            search(nodes, pos + 1, partial, launch, prev, truck, v, has_truck_only, combined_seen)
        # Truck-only: legal only if the segment ends up containing a drone.
        types[pos] = TRUCK_ONLY
        search(nodes, pos + 1, partial, launch, v, truck + d[prev][v], drone_node,
               True, combined_seen)
        types[pos] = COMBINED  # restore for callers above

    for perm in permutations(range(1, n)):
        nodes = [0, *perm]
        search(nodes, 1, 0.0, 0, 0, 0.0, -1, False, 1)

    if best_nodes is None:
        raise RuntimeError("enumeration found no feasible assignment")
    return OracleResult(
        optimal_makespan=best_value,
        optimal_chromosome=Chromosome(best_nodes, best_types),
        evaluated_count=evaluated,
    )


def brute_force_solve_unpruned(inst: Instance, limit_n: int = 6,
                               alpha: float | None = None) -> OracleResult:
    """Independent no-pruning enumeration used to cross-check the solver.

    Walks the full permutation x type-assignment product, filters with
    :func:`validate_feasibility` and evaluates with
    :func:`evaluate_makespan`, sharing the GA's own feasibility and
    objective definitions. Much slower; keep the customer count small.
    """
    customers = inst.n - 1
    if customers > limit_n:
        raise OracleSizeError(
            f"{customers} customers exceeds the unpruned enumeration limit of {limit_n}"
        )
    dm = build_distance_matrix(inst)
    sm = SpeedModel(alpha=alpha if alpha is not None else inst.alpha)
    n = inst.n
    best_value = float("inf")
    best_chrom: Chromosome | None = None
    evaluated = 0
    type_space = list(product((COMBINED, DRONE, TRUCK_ONLY), repeat=n - 1))
    for perm in permutations(range(1, n)):
        nodes = [0, *perm]
        for assignment in type_space:
            chrom = Chromosome(nodes, [COMBINED, *assignment])
            if validate_feasibility(chrom):
                continue
            value = evaluate_makespan(chrom, dm, sm)
            evaluated += 1
            if value < best_value:
                best_value = value
                best_chrom = chrom
    if best_chrom is None:
        raise RuntimeError("enumeration found no feasible assignment")
    return OracleResult(best_value, best_chrom, evaluated)


@dataclass(slots=True)
class GapReport:
    optimal: float
    found: float
    gap_pct: float
    within_tolerance: bool


def verify_run(inst: Instance, ga_best: float, tolerance: float,
               optimal: float | None = None) -> GapReport:
    """Percentage gap of a GA result against the exact optimum.

    ``optimal`` skips re-solving when the oracle value is already known.
    """
    if optimal is None:
        optimal = brute_force_solve(inst).optimal_makespan
    if optimal <= 1e-12:
        raise ValueError("optimal makespan is zero; gap undefined "
                         "(degenerate coincident-point instance?)")
    gap = 100.0 * (ga_best - optimal) / optimal
    return GapReport(optimal=optimal, found=ga_best, gap_pct=gap,
                     within_tolerance=abs(gap) <= tolerance)
