"""Self-adaptive steady-state GA.

Each individual carries a memeplex of eight memes: a crossover operator and
its probability, one mutation operator per node type, a type-mutation
probability, and a tour mutation operator with its probability. Probability
memes are integers 0..10 interpreted as tenths. Every generation the fitter
parent's memeplex drives crossover and mutation of both offspring, the
offspring inherit a copy of it, and each copy is itself mutated slot-by-slot
at the innovation rate, so operator choice co-evolves with the solutions.

The population is steady state: the two best of {parents, offspring} take
the parent slots; everyone else is untouched.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, fields
from enum import Enum

from .instances import Instance, SpeedModel, build_distance_matrix
from . import seeding
from .solution import (
    COMBINED,
    DRONE,
    TRUCK_ONLY,
    Chromosome,
    chromosome_to_string,
    evaluate_makespan,
    repair,
)


class CrossoverOp(Enum):
    PMX_FULL = "pmx_full"
    PMX_SEQ = "pmx_seq"
    CX_FULL = "cx_full"
    CX_SEQ = "cx_seq"
    OX_FULL = "ox_full"
    OX_SEQ = "ox_seq"
    UX = "ux"
    ONE_POINT = "one_point"
    TWO_POINT = "two_point"


class CombinedMutation(Enum):
    MAKE_FLY = "make_fly"
    MAKE_FLY_PUSH_LEFT = "make_fly_push_left"
    MAKE_FLY_PUSH_RIGHT = "make_fly_push_right"
    MAKE_FLY_PUSH_BOTH = "make_fly_push_both"


class DroneMutation(Enum):
    PUSH_LEFT = "push_left"
    PUSH_RIGHT = "push_right"
    PUSH_BOTH = "push_both"
    SHIFT_LEFT = "shift_left"
    SHIFT_RIGHT = "shift_right"
    SHIFT_BOTH = "shift_both"


class TruckMutation(Enum):
    PUSH_OUT = "push_out"
    END_DRONE_TOUR = "end_drone_tour"


class TourMutation(Enum):
    SWAP = "swap"
    SLIDE = "slide"
    REVERSE = "reverse"


CROSSOVER_OPS = tuple(CrossoverOp)
COMBINED_MUTATIONS = tuple(CombinedMutation)
DRONE_MUTATIONS = tuple(DroneMutation)
TRUCK_MUTATIONS = tuple(TruckMutation)
TOUR_MUTATIONS = tuple(TourMutation)


@dataclass(slots=True)
class Memeplex:
    """Eight meme slots co-evolving with one individual."""

    crossover_op: CrossoverOp
    crossover_prob: int  # tenths, 0..10
    combined_op: CombinedMutation
    drone_op: DroneMutation
    truck_op: TruckMutation
    type_prob: int  # tenths, 0..10
    tour_op: TourMutation
    tour_prob: int  # tenths, 0..10

    def as_tuple(self):
        return (
            self.crossover_op,
            self.crossover_prob,
            self.combined_op,
            self.drone_op,
            self.truck_op,
            self.type_prob,
            self.tour_op,
            self.tour_prob,
        )


def random_memeplex(rng: random.Random) -> Memeplex:
    """Uniform draw per slot, in fixed slot order."""
    return Memeplex(
        crossover_op=CROSSOVER_OPS[rng.randrange(9)],
        crossover_prob=rng.randrange(11),
        combined_op=COMBINED_MUTATIONS[rng.randrange(4)],
        drone_op=DRONE_MUTATIONS[rng.randrange(6)],
        truck_op=TRUCK_MUTATIONS[rng.randrange(2)],
        type_prob=rng.randrange(11),
        tour_op=TOUR_MUTATIONS[rng.randrange(3)],
        tour_prob=rng.randrange(11),
    )


def _should_resample(innovation_rate: int, rng: random.Random) -> bool:
    """One innovation draw: r uniform in [0, 10) compared to the rate."""
    return rng.random() * 10.0 < innovation_rate


def mutate_memeplex(mplex: Memeplex, innovation_rate: int, rng: random.Random) -> Memeplex:
    """Resample each slot independently with probability rate/10.

    A resample draws uniformly over the slot's whole domain, so it may
    reproduce the old value.
    """
    rand = rng.random
    return Memeplex(
        crossover_op=CROSSOVER_OPS[int(rand() * 9)]
        if _should_resample(innovation_rate, rng)
        else mplex.crossover_op,
        crossover_prob=int(rand() * 11)
        if _should_resample(innovation_rate, rng)
        else mplex.crossover_prob,
        combined_op=COMBINED_MUTATIONS[int(rand() * 4)]
        if _should_resample(innovation_rate, rng)
        else mplex.combined_op,
        drone_op=DRONE_MUTATIONS[int(rand() * 6)]
        if _should_resample(innovation_rate, rng)
        else mplex.drone_op,
        truck_op=TRUCK_MUTATIONS[int(rand() * 2)]
        if _should_resample(innovation_rate, rng)
        else mplex.truck_op,
        type_prob=int(rand() * 11)
        if _should_resample(innovation_rate, rng)
        else mplex.type_prob,
        tour_op=TOUR_MUTATIONS[int(rand() * 3)]
        if _should_resample(innovation_rate, rng)
        else mplex.tour_op,
        tour_prob=int(rand() * 11)
        if _should_resample(innovation_rate, rng)
        else mplex.tour_prob,
    )


@dataclass(slots=True, eq=False)
class Individual:
    chromosome: Chromosome
    memeplex: Memeplex
    fitness: float


@dataclass(slots=True, eq=False)
class Population:
    individuals: list[Individual]

    @property
    def size(self) -> int:
        return len(self.individuals)

    def best(self) -> Individual:
        return min(self.individuals, key=lambda ind: ind.fitness)


@dataclass(slots=True)
class GAConfig:
    """Run configuration. ``alpha=None`` keeps the instance's own alpha;
    setting it explicitly overrides whatever the instance file declared."""

    population_size: int = 50
    tournament_size: int = 5
    innovation_rate: int = 7
    initial_drone_pct: float = 2.0
    num_generations: int = 1_000_000
    alpha: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be at least 2")
        # Tournament draws sample with replacement, so sizes beyond the
        # population are meaningful (they just sharpen selection pressure).
        if self.tournament_size < 1:
            raise ValueError("tournament_size must be at least 1")
        if not 0 <= self.innovation_rate <= 10:
            raise ValueError("innovation_rate must be in [0, 10]")
        if not 0.0 <= self.initial_drone_pct <= 100.0:
            raise ValueError("initial_drone_pct must be in [0, 100]")
        if self.num_generations < 0:
            raise ValueError("num_generations must be non-negative")
        if self.alpha is not None and self.alpha <= 0:
            raise ValueError("alpha must be positive")


_CONFIG_FIELDS = {f.name: f.type for f in fields(GAConfig)}


def config_from_mapping(mapping: dict) -> GAConfig:
    kwargs = {}
    for key, value in mapping.items():
        if key not in _CONFIG_FIELDS:
            raise ValueError(f"unknown config key {key!r}")
        kwargs[key] = value
    for key in ("population_size", "tournament_size", "innovation_rate",
                "num_generations", "seed"):
        if key in kwargs:
            kwargs[key] = int(kwargs[key])
    for key in ("initial_drone_pct", "alpha"):
        if key in kwargs and kwargs[key] is not None:
            kwargs[key] = float(kwargs[key])
    return GAConfig(**kwargs)


def load_ga_config(path) -> GAConfig:
    """Read a GAConfig from JSON or ``key = value`` text."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return config_from_mapping(json.loads(text))
    mapping = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        mapping[key.strip()] = value.strip()
    return config_from_mapping(mapping)


@dataclass(slots=True)
class RunStats:
    """Outcome of one evolve run."""

    best_fitness: float
    best_chromosome: Chromosome
    generations_run: int
    wall_time: float
    fitness_trace: list[tuple[int, float]] | None = None
    truncated: bool = False

    def to_json_dict(self) -> dict:
        return {
            "best_fitness": self.best_fitness,
            "best_chromosome": chromosome_to_string(self.best_chromosome),
            "generations_run": self.generations_run,
            "wall_time": self.wall_time,
            "fitness_trace": self.fitness_trace,
            "truncated": self.truncated,
        }


# ---------------------------------------------------------------------------
# Parent selection


def _tournament_index(individuals: list[Individual], t: int, rng: random.Random) -> int:
    # int(random() * n) in place of randrange: the rounding bias is far
    # below anything a sampling test can resolve, and this sits on the
    # hottest path of the generation loop.
    n = len(individuals)
    rand = rng.random
    best_i = int(rand() * n)
    best_f = individuals[best_i].fitness
    for _ in range(t - 1):
        j = int(rand() * n)
        f = individuals[j].fitness
        if f < best_f:
            best_i, best_f = j, f
    return best_i


def tournament_select(pop: Population, t: int, rng: random.Random) -> Individual:
    """Best of ``t`` uniform draws with replacement; ties keep the earliest draw."""
    if t < 1:
        raise ValueError("tournament size must be at least 1")
    if not pop.individuals:
        raise ValueError("cannot select from an empty population")
    return pop.individuals[_tournament_index(pop.individuals, t, rng)]


# ---------------------------------------------------------------------------
# Crossover operators
#
# Three permutation recombinations (PMX, CX, OX) come in a "full" flavour
# that moves (node, type) genes as units and a "seq" flavour that recombines
# node order only, each offspring keeping its own parent's type-by-position
# vector. The remaining three (UX, one-point, two-point) recombine the type
# vector only and inherit the tour from the corresponding parent. Position 0
# (the depot) is never altered.


def _cut_points(n: int, rng: random.Random) -> tuple[int, int]:
    a = 1 + int(rng.random() * (n - 1))
    b = 1 + int(rng.random() * (n - 1))
    return (a, b) if a <= b else (b, a)


def _pmx_child(donor: Chromosome, filler: Chromosome, a: int, b: int) -> tuple[list[int], list[int]]:
    """Middle segment [a, b] from donor, rest from filler via PMX mapping."""
    n = donor.n
    d_nodes, d_types = donor.nodes, donor.types
    f_nodes, f_types = filler.nodes, filler.types
    mid_pos = {d_nodes[m]: m for m in range(a, b + 1)}
    nodes = list(f_nodes)
    types = list(f_types)
    nodes[a : b + 1] = d_nodes[a : b + 1]
    types[a : b + 1] = d_types[a : b + 1]
    for q in range(1, n):
        if a <= q <= b:
            continue
        v, t = f_nodes[q], f_types[q]
        while v in mid_pos:
            m = mid_pos[v]
            v, t = f_nodes[m], f_types[m]
        nodes[q] = v
        types[q] = t
    return nodes, types


def _crossover_pmx(p1: Chromosome, p2: Chromosome, rng: random.Random):
    a, b = _cut_points(p1.n, rng)
    return _pmx_child(p2, p1, a, b), _pmx_child(p1, p2, a, b)


def _cx_cycle(p1: Chromosome, p2: Chromosome, start: int) -> set[int]:
    inv1 = {v: i for i, v in enumerate(p1.nodes)}
    cycle = set()
    pos = start
    while pos not in cycle:
        cycle.add(pos)
        pos = inv1[p2.nodes[pos]]
    return cycle


def _crossover_cx(p1: Chromosome, p2: Chromosome, rng: random.Random):
    # The cycle can never contain position 0: reaching it would require
    # looking up the depot node, which only sits at position 0 itself.
    cycle = _cx_cycle(p1, p2, rng.randrange(1, p1.n))
    nodes1, types1 = list(p2.nodes), list(p2.types)
    nodes2, types2 = list(p1.nodes), list(p1.types)
    for pos in cycle:
        nodes1[pos], types1[pos] = p1.nodes[pos], p1.types[pos]
        nodes2[pos], types2[pos] = p2.nodes[pos], p2.types[pos]
    return (nodes1, types1), (nodes2, types2)


def _ox_child(keeper: Chromosome, other: Chromosome, a: int, b: int) -> tuple[list[int], list[int]]:
    """Middle [a, b] from keeper; the rest filled from ``other``, scanning
    its customer loci cyclically from b+1 and skipping nodes already used.

    The depot is pinned at position 0, so both the fill positions and the
    donor scan cycle over customer loci only.
    """
    n = keeper.n
    nodes = [0] * n
    types = [COMBINED] * n
    nodes[a : b + 1] = keeper.nodes[a : b + 1]
    types[a : b + 1] = keeper.types[a : b + 1]
    used = set(keeper.nodes[a : b + 1])
    fill_positions = list(range(b + 1, n)) + list(range(1, a))
    scan = iter(list(range(b + 1, n)) + list(range(1, b + 1)))
    for q in fill_positions:
        for s in scan:
            v = other.nodes[s]
            if v not in used:
                nodes[q] = v
                types[q] = other.types[s]
                used.add(v)
                break
    return nodes, types


def _crossover_ox(p1: Chromosome, p2: Chromosome, rng: random.Random):
    a, b = _cut_points(p1.n, rng)
    return _ox_child(p1, p2, a, b), _ox_child(p2, p1, a, b)


def _types_from(p: Chromosome) -> list[int]:
    return list(p.types)


def _crossover_ux(p1: Chromosome, p2: Chromosome, rng: random.Random):
    n = p1.n
    types1 = _types_from(p1)
    types2 = _types_from(p2)
    for q in range(1, n):
        if rng.random() < 0.5:
            types1[q] = p2.types[q]
    for q in range(1, n):
        if rng.random() < 0.5:
            types2[q] = p1.types[q]
    return (p1.nodes, types1), (p2.nodes, types2)


def _crossover_one_point(p1: Chromosome, p2: Chromosome, rng: random.Random):
    n = p1.n
    cut = rng.randrange(1, n)
    types1 = p1.types[:cut] + p2.types[cut:]
    types2 = p2.types[:cut] + p1.types[cut:]
    return (p1.nodes, types1), (p2.nodes, types2)


def _crossover_two_point(p1: Chromosome, p2: Chromosome, rng: random.Random):
    a, b = _cut_points(p1.n, rng)
    types1 = p2.types[:a] + p1.types[a : b + 1] + p2.types[b + 1 :]
    types2 = p1.types[:a] + p2.types[a : b + 1] + p1.types[b + 1 :]
    types1[0] = COMBINED
    types2[0] = COMBINED
    return (p1.nodes, types1), (p2.nodes, types2)


_SEQ_BASES = {
    CrossoverOp.PMX_SEQ: _crossover_pmx,
    CrossoverOp.CX_SEQ: _crossover_cx,
    CrossoverOp.OX_SEQ: _crossover_ox,
}

_CROSSOVER_FUNCS = {
    CrossoverOp.PMX_FULL: _crossover_pmx,
    CrossoverOp.CX_FULL: _crossover_cx,
    CrossoverOp.OX_FULL: _crossover_ox,
    CrossoverOp.UX: _crossover_ux,
    CrossoverOp.ONE_POINT: _crossover_one_point,
    CrossoverOp.TWO_POINT: _crossover_two_point,
}


def crossover_chromosomes(
    op: CrossoverOp, p1: Chromosome, p2: Chromosome, rng: random.Random
) -> tuple[Chromosome, Chromosome]:
    """Apply one crossover operator unconditionally (no repair)."""
    if op in _SEQ_BASES:
        (nodes1, _), (nodes2, _) = _SEQ_BASES[op](p1, p2, rng)
        return Chromosome(nodes1, list(p1.types)), Chromosome(nodes2, list(p2.types))
    (nodes1, types1), (nodes2, types2) = _CROSSOVER_FUNCS[op](p1, p2, rng)
    return Chromosome(list(nodes1), list(types1)), Chromosome(list(nodes2), list(types2))


def apply_crossover(
    p1: Individual, p2: Individual, rng: random.Random
) -> tuple[Chromosome, Chromosome]:
    """Recombine two parents under the fitter parent's memeplex.

    One Bernoulli draw (crossover_prob/10) decides for the pair; when it
    fails each offspring inherits its own parent's chromosome verbatim.
    Both offspring are repaired before return.
    """
    mplex = p1.memeplex if p1.fitness <= p2.fitness else p2.memeplex
    if rng.random() * 10.0 < mplex.crossover_prob:
        c1, c2 = crossover_chromosomes(mplex.crossover_op, p1.chromosome, p2.chromosome, rng)
        return repair(c1), repair(c2)
    return repair(p1.chromosome), repair(p2.chromosome)


# ---------------------------------------------------------------------------
# Tour mutation


def apply_tour_op(chrom: Chromosome, op: TourMutation, a: int, b: int) -> Chromosome:
    """Apply one tour operator at positions ``1 <= a < b < n`` (no repair)."""
    nodes = list(chrom.nodes)
    types = list(chrom.types)
    if op is TourMutation.SWAP:
        nodes[a], nodes[b] = nodes[b], nodes[a]
        types[a], types[b] = types[b], types[a]
    elif op is TourMutation.SLIDE:
        # Rotate [a, b] one step left: the gene at a lands on b.
        nodes[a : b + 1] = nodes[a + 1 : b + 1] + nodes[a : a + 1]
        types[a : b + 1] = types[a + 1 : b + 1] + types[a : a + 1]
    else:  # REVERSE
        nodes[a : b + 1] = reversed(nodes[a : b + 1])
        types[a : b + 1] = reversed(types[a : b + 1])
    return Chromosome(nodes, types)


def mutate_tour(
    chrom: Chromosome, op: TourMutation, prob_tenths: int, rng: random.Random
) -> Chromosome:
    """With probability prob/10, reorder two random non-depot positions.

    Genes carry their types with them; the result is repaired. Instances
    with fewer than two customers have no valid position pair: no-op.
    """
    n = chrom.n
    if n < 3:
        return chrom
    if rng.random() * 10.0 >= prob_tenths:
        return chrom
    a = 1 + int(rng.random() * (n - 1))
    b = 1 + int(rng.random() * (n - 1))
    while b == a:
        b = 1 + int(rng.random() * (n - 1))
    if a > b:
        a, b = b, a
    return repair(apply_tour_op(chrom, op, a, b))


# ---------------------------------------------------------------------------
# Node-type mutation
#
# Twelve operators split by the type of the randomly chosen gene. Operators
# whose preconditions fail (e.g. push-left beside the depot) are no-ops, not
# errors. All results are repaired by the caller.


def _segment_bounds(types: list[int], pos: int) -> tuple[int, int]:
    """Enclosing combined positions (close may be n, the wrapped depot)."""
    n = len(types)
    lo = pos
    while lo > 0 and types[lo] != COMBINED:
        lo -= 1
    hi = pos + 1
    while hi < n and types[hi] != COMBINED:
        hi += 1
    return lo, hi


def _segment_has_drone(types: list[int], lo: int, hi: int) -> bool:
    for q in range(lo + 1, hi if hi <= len(types) else len(types)):
        if types[q] == DRONE:
            return True
    return False


def apply_type_op(chrom: Chromosome, pos: int, op) -> Chromosome:
    """Apply one type operator at ``pos`` (no repair; may return the input).

    ``op`` must match the gene's type: a :class:`DroneMutation` for drone
    genes, :class:`CombinedMutation` for combined genes,
    :class:`TruckMutation` for truck-only genes.
    """
    types = list(chrom.types)
    n = len(types)
    changed = False

    if isinstance(op, DroneMutation):
        # Shift-both applies the left shift first, then the right shift on
        # the already-shifted state (so the original gene usually ends up
        # combined, flanked by the two new drone genes).
        if op in (DroneMutation.PUSH_LEFT, DroneMutation.PUSH_BOTH) and pos - 1 >= 1:
            types[pos - 1] = TRUCK_ONLY
            changed = True
        if op in (DroneMutation.PUSH_RIGHT, DroneMutation.PUSH_BOTH) and pos + 1 <= n - 1:
            types[pos + 1] = TRUCK_ONLY
            changed = True
        if op in (DroneMutation.SHIFT_LEFT, DroneMutation.SHIFT_BOTH) and pos - 1 >= 1:
            types[pos - 1] = DRONE
            # Stay truck-only when the sortie continues past this gene,
            # otherwise become its rendezvous.
            right = types[pos + 1] if pos + 1 <= n - 1 else COMBINED
            types[pos] = TRUCK_ONLY if right == TRUCK_ONLY else COMBINED
            changed = True
        if op in (DroneMutation.SHIFT_RIGHT, DroneMutation.SHIFT_BOTH) and pos + 1 <= n - 1:
            types[pos + 1] = DRONE
            left = types[pos - 1]  # position 0 is the depot, always combined
            types[pos] = TRUCK_ONLY if left == TRUCK_ONLY else COMBINED
            changed = True
    elif isinstance(op, CombinedMutation):
        types[pos] = DRONE
        changed = True
        if (
            op in (CombinedMutation.MAKE_FLY_PUSH_LEFT, CombinedMutation.MAKE_FLY_PUSH_BOTH)
            and pos - 1 >= 1
        ):
            types[pos - 1] = TRUCK_ONLY
        if (
            op in (CombinedMutation.MAKE_FLY_PUSH_RIGHT, CombinedMutation.MAKE_FLY_PUSH_BOTH)
            and pos + 1 <= n - 1
        ):
            types[pos + 1] = TRUCK_ONLY
    elif isinstance(op, TruckMutation):
        lo, hi = _segment_bounds(chrom.types, pos)
        if op is TruckMutation.PUSH_OUT:
            # Extend the enclosing sortie on this gene's side of the drone
            # node by demoting that side's combined endpoint, unless the
            # endpoint is the depot or the neighbouring segment already has
            # a sortie (merging two sorties would be illegal).
            drone_pos = -1
            for q in range(lo + 1, min(hi, n)):
                if chrom.types[q] == DRONE:
                    drone_pos = q
                    break
            if drone_pos >= 0:
                if pos < drone_pos and lo >= 1:
                    prev_lo = lo - 1
                    while prev_lo > 0 and chrom.types[prev_lo] != COMBINED:
                        prev_lo -= 1
                    if not _segment_has_drone(chrom.types, prev_lo, lo):
                        types[lo] = TRUCK_ONLY
                        changed = True
                elif pos > drone_pos and hi <= n - 1:
                    next_hi = hi + 1
                    while next_hi < n and chrom.types[next_hi] != COMBINED:
                        next_hi += 1
                    if not _segment_has_drone(chrom.types, hi, next_hi):
                        types[hi] = TRUCK_ONLY
                        changed = True
        else:  # END_DRONE_TOUR
            types[pos] = COMBINED
            changed = True
            # Genes between the new rendezvous and the old one are cut
            # loose from any sortie; promote them. A left side stranded
            # without its drone is caught by repair.
            for q in range(pos + 1, min(hi, n)):
                types[q] = COMBINED
    else:
        raise TypeError(f"not a type-mutation operator: {op!r}")

    if not changed:
        return chrom
    return Chromosome(chrom.nodes, types)


def mutate_types(chrom: Chromosome, mplex: Memeplex, rng: random.Random) -> Chromosome:
    """With probability type_prob/10, mutate one random gene's type.

    The operator applied is the memeplex meme matching the chosen gene's
    type. Requires a feasible chromosome; the result is repaired.
    """
    n = chrom.n
    if n < 2:
        return chrom
    if rng.random() * 10.0 >= mplex.type_prob:
        return chrom
    pos = 1 + int(rng.random() * (n - 1))
    t = chrom.types[pos]
    if t == DRONE:
        op = mplex.drone_op
    elif t == COMBINED:
        op = mplex.combined_op
    else:
        op = mplex.truck_op
    mutated = apply_type_op(chrom, pos, op)
    if mutated is chrom:
        return chrom
    return repair(mutated)


# ---------------------------------------------------------------------------
# Replacement and the main loop


def _select_survivors(p1, p2, o1, o2, k: int) -> list[Individual]:
    """Pick the ``k`` lowest-fitness survivors out of parents and offspring.

    Equal fitness prefers offspring; a parent that ties an already-selected
    offspring is dropped outright rather than taking the next slot, which
    keeps equal-fitness (usually identical) copies from piling up. At least
    two offspring always remain, so ``k <= 2`` slots always fill.
    """
    candidates = [(o1.fitness, 0, o1), (o2.fitness, 0, o2), (p1.fitness, 1, p1), (p2.fitness, 1, p2)]
    candidates.sort(key=lambda c: (c[0], c[1]))
    survivors = []
    offspring_fitness = set()
    for fitness, is_parent, ind in candidates:
        if is_parent and fitness in offspring_fitness:
            continue
        survivors.append(ind)
        if not is_parent:
            offspring_fitness.add(fitness)
        if len(survivors) == k:
            break
    return survivors


def replace_population(
    pop: Population, p1: Individual, p2: Individual, o1: Individual, o2: Individual
) -> Population:
    """Put the two best of {parents, offspring} into the parent slots.

    Ties prefer offspring. When both tournaments picked the same slot the
    single slot receives the best of the three distinct candidates.
    Mutates ``pop`` in place and returns it.
    """
    individuals = pop.individuals
    i1 = individuals.index(p1)
    i2 = individuals.index(p2)
    if i1 == i2:
        individuals[i1] = _select_survivors(p1, p2, o1, o2, 1)[0]
    else:
        winners = _select_survivors(p1, p2, o1, o2, 2)
        individuals[i1] = winners[0]
        individuals[i2] = winners[1]
    return pop


def evolve(
    inst: Instance,
    cfg: GAConfig,
    *,
    tour: list[int] | None = None,
    trace_every: int = 0,
) -> RunStats:
    """Run the steady-state self-adaptive GA and return run statistics.

    Per generation: two tournament selections (slots may coincide), pair
    crossover under the fitter parent's memeplex, per-offspring tour
    mutation then type mutation with that same memeplex, memeplex
    inheritance plus innovation-rate mutation, fitness evaluation, and
    elitist slot replacement. Deterministic for a given (instance, config).
    ``tour`` overrides seed-tour construction; ``trace_every`` samples the
    running best every so many generations into ``fitness_trace``.
    """
    rng = random.Random(cfg.seed)
    dm = build_distance_matrix(inst)
    alpha = cfg.alpha if cfg.alpha is not None else inst.alpha
    sm = SpeedModel(alpha=alpha)
    if tour is None:
        if inst.n <= seeding.EXACT_TSP_MAX_NODES:
            tour = seeding.exact_tsp_tour(dm)
        else:
            tour = seeding.heuristic_tsp_tour(dm, seed=cfg.seed)
    elif tour[0] != 0:
        raise ValueError("seed tour must start at the depot")

    t0 = time.perf_counter()
    pop = seeding.build_initial_population(tour, dm, sm, cfg, rng)
    individuals = pop.individuals
    best = min(individuals, key=lambda ind: ind.fitness)
    best_fitness = best.fitness
    best_chromosome = best.chromosome
    trace: list[tuple[int, float]] | None = [(0, best_fitness)] if trace_every else None

    t = cfg.tournament_size
    innovation = cfg.innovation_rate
    generations_run = 0
    truncated = False
    try:
        for gen in range(1, cfg.num_generations + 1):
            i1 = _tournament_index(individuals, t, rng)
            i2 = _tournament_index(individuals, t, rng)
            p1 = individuals[i1]
            p2 = individuals[i2]
            mplex = p1.memeplex if p1.fitness <= p2.fitness else p2.memeplex

            # Same draw sequence and result as apply_crossover; inlined to
            # skip redundant repair scans of already-feasible parents.
            if rng.random() * 10.0 < mplex.crossover_prob:
                c1, c2 = crossover_chromosomes(mplex.crossover_op, p1.chromosome, p2.chromosome, rng)
                c1 = repair(c1)
                c2 = repair(c2)
            else:
                c1 = p1.chromosome
                c2 = p2.chromosome

            c1 = mutate_tour(c1, mplex.tour_op, mplex.tour_prob, rng)
            c1 = mutate_types(c1, mplex, rng)
            c2 = mutate_tour(c2, mplex.tour_op, mplex.tour_prob, rng)
            c2 = mutate_types(c2, mplex, rng)

            m1 = mutate_memeplex(mplex, innovation, rng)
            m2 = mutate_memeplex(mplex, innovation, rng)

            f1 = evaluate_makespan(c1, dm, sm)
            f2 = evaluate_makespan(c2, dm, sm)
            o1 = Individual(c1, m1, f1)
            o2 = Individual(c2, m2, f2)
            if f1 < best_fitness:
                best_fitness = f1
                best_chromosome = c1
            if f2 < best_fitness:
                best_fitness = f2
                best_chromosome = c2

            if i1 == i2:
                individuals[i1] = _select_survivors(p1, p2, o1, o2, 1)[0]
            else:
                winners = _select_survivors(p1, p2, o1, o2, 2)
                individuals[i1] = winners[0]
                individuals[i2] = winners[1]

            generations_run = gen
            if trace_every and gen % trace_every == 0:
                trace.append((gen, best_fitness))
    except KeyboardInterrupt:
        truncated = True

    wall = time.perf_counter() - t0
    return RunStats(
        best_fitness=best_fitness,
        best_chromosome=best_chromosome,
        generations_run=generations_run,
        wall_time=wall,
        fitness_trace=trace,
        truncated=truncated,
    )
