"""Seed tour construction and initial population.

The GA starts from a high-quality TSP tour: an exact Held-Karp tour for
small instances, or nearest-neighbour construction plus 2-opt descent for
larger ones. Customers are then scored by the makespan saving expected from
serving them by drone, and each initial individual converts a few
roulette-selected stops into drone stops.
"""

from __future__ import annotations

import logging
import random
from typing import TYPE_CHECKING

from .instances import DistanceMatrix, SpeedModel
from .solution import COMBINED, DRONE, Chromosome, evaluate_makespan, repair

if TYPE_CHECKING:
    from .evolution import GAConfig, Population

log = logging.getLogger(__name__)

EXACT_TSP_MAX_NODES = 13


class TspSizeError(ValueError):
    """Instance too large for the exact solver; use heuristic_tsp_tour."""


class EmptyWheelError(ValueError):
    """Roulette selection over all-zero scores."""


def tour_length(tour: list[int], dm: DistanceMatrix) -> float:
    d = dm.d
    total = 0.0
    prev = tour[-1]
    for v in tour:
        total += d[prev][v]
        prev = v
    return total


def exact_tsp_tour(dm: DistanceMatrix) -> list[int]:
    """Provably optimal closed tour starting at the depot (Held-Karp).

    Memory and time grow as 2^n, so instances above
    ``EXACT_TSP_MAX_NODES`` nodes are rejected.
    """
    n = dm.n
    if n > EXACT_TSP_MAX_NODES:
        raise TspSizeError(
            f"{n} nodes exceeds the exact limit of {EXACT_TSP_MAX_NODES}; "
            "use heuristic_tsp_tour"
        )
    if n <= 2:
        return list(range(n))
    d = dm.d
    m = n - 1  # customers 1..n-1 mapped to bits 0..m-1
    size = 1 << m
    INF = float("inf")
    cost = [[INF] * m for _ in range(size)]
    parent = [[-1] * m for _ in range(size)]
    for j in range(m):
        cost[1 << j][j] = d[0][j + 1]
    for mask in range(size):
        row = cost[mask]
        for j in range(m):
            cj = row[j]
            if cj == INF:
                continue
            dj = d[j + 1]
            rest = ~mask & (size - 1)
            k = 0
            while rest:
                if rest & 1:
                    nxt = mask | (1 << k)
                    c = cj + dj[k + 1]
                    if c < cost[nxt][k]:
                        cost[nxt][k] = c
                        parent[nxt][k] = j
                rest >>= 1
                k += 1
    full = size - 1
    best_j = -1
    best_cost = INF
    for j in range(m):
        c = cost[full][j] + d[j + 1][0]
        if c < best_cost:
            best_cost = c
            best_j = j
    path = []
    mask, j = full, best_j
    while j >= 0:
        path.append(j + 1)
        mask, j = mask ^ (1 << j), parent[mask][j]
    path.reverse()
    return [0] + path


def _nearest_neighbour(dm: DistanceMatrix, start: int) -> list[int]:
    n = dm.n
    d = dm.d
    unvisited = set(range(n))
    unvisited.remove(start)
    tour = [start]
    current = start
    while unvisited:
        row = d[current]
        nxt = min(unvisited, key=lambda v: (row[v], v))
        unvisited.remove(nxt)
        tour.append(nxt)
        current = nxt
    return tour


def _two_opt(tour: list[int], dm: DistanceMatrix) -> list[int]:
    """First-improvement 2-opt descent; stops at a local optimum."""
    d = dm.d
    n = len(tour)
    tour = list(tour)
    improved = True
    while improved:
        improved = False
        for i in range(n - 1):
            a, b = tour[i], tour[i + 1]
            dab = d[a][b]
            for j in range(i + 2, n):
                c = tour[j]
                e = tour[(j + 1) % n]
                if a == e:
                    continue
                delta = d[a][c] + d[b][e] - dab - d[c][e]
                if delta < -1e-12:
                    tour[i + 1 : j + 1] = reversed(tour[i + 1 : j + 1])
                    improved = True
                    a, b = tour[i], tour[i + 1]
                    dab = d[a][b]
    return tour


def _rotate_to_depot(tour: list[int]) -> list[int]:
    i = tour.index(0)
    return tour[i:] + tour[:i]


def heuristic_tsp_tour(dm: DistanceMatrix, seed: int = 0) -> list[int]:
    """Nearest-neighbour tours refined by 2-opt descent.

    Runs the construction from the depot plus a few seeded alternative
    start nodes and keeps the shortest local optimum. Deterministic for a
    given seed.
    """
    n = dm.n
    if n < 2:
        raise ValueError("need at least 2 nodes")
    rng = random.Random(seed)
    starts = [0]
    extra = min(3, n - 1)
    starts.extend(rng.sample(range(1, n), extra))
    best = None
    best_len = float("inf")
    for s in starts:
        cand = _two_opt(_nearest_neighbour(dm, s), dm)
        length = tour_length(cand, dm)
        if length < best_len - 1e-12:
            best, best_len = cand, length
    return _rotate_to_depot(best)


def compute_node_scores(tour: list[int], dm: DistanceMatrix, sm: SpeedModel) -> list[float]:
    """Drone-saving score per tour position (position 0, the depot, gets 0).

    For position ``j`` with tour predecessor ``i`` and successor ``k`` (the
    last position wraps to the depot), the score is the truck time saved by
    flying ``j``: detour via ``j`` minus the slower of the drone's flight
    and the truck shortcut, floored at 1 so every customer keeps a nonzero
    chance in roulette selection.
    """
    d = dm.d
    inv_alpha = 1.0 / sm.alpha
    n = len(tour)
    scores = [0.0] * n
    for pos in range(1, n):
        i = tour[pos - 1]
        j = tour[pos]
        k = tour[pos + 1] if pos < n - 1 else tour[0]
        detour = d[i][j] + d[j][k]
        covered = max(detour * inv_alpha, d[i][k])
        scores[pos] = max(detour - covered, 1.0)
    return scores


def roulette_select(scores: list[float], rng: random.Random) -> int:
    """Draw an index with probability proportional to its score."""
    total = 0.0
    for s in scores:
        total += s
    if total <= 0.0:
        raise EmptyWheelError("all scores are zero")
    r = rng.random() * total
    acc = 0.0
    last_positive = -1
    for i, s in enumerate(scores):
        if s > 0.0:
            acc += s
            last_positive = i
            if r < acc:
                return i
    return last_positive  # guard against float round-off at the top end


def build_initial_population(
    tour: list[int],
    dm: DistanceMatrix,
    sm: SpeedModel,
    cfg: "GAConfig",
    rng: random.Random,
) -> "Population":
    """Population of repaired drone-seeded variants of the seed tour.

    Every individual starts as the all-combined tour;
    ``max(1, floor(initial_drone_pct/100 * n))`` distinct positions are
    converted to drone stops by roulette selection over the node scores
    (selected scores are zeroed so a position cannot be drawn twice), the
    result is repaired, evaluated, and paired with a uniformly random
    memeplex.
    """
    # Deferred import: evolution imports this module at top level.
    from .evolution import Individual, Population, random_memeplex

    n = len(tour)
    base_scores = compute_node_scores(tour, dm, sm)
    conversions = max(1, int(cfg.initial_drone_pct / 100.0 * n))
    nodes = list(tour)
    individuals = []
    for _ in range(cfg.population_size):
        scores = list(base_scores)
        types = [COMBINED] * n
        for _ in range(conversions):
            try:
                pos = roulette_select(scores, rng)
            except EmptyWheelError:
                log.warning(
                    "initial drone conversions exhausted the score wheel; "
                    "skipping the remainder"
                )
                break
            scores[pos] = 0.0
            types[pos] = DRONE
        chrom = repair(Chromosome(nodes, types))
        fitness = evaluate_makespan(chrom, dm, sm)
        individuals.append(Individual(chrom, random_memeplex(rng), fitness))
    return Population(individuals)
