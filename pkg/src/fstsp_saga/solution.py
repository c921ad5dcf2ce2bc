"""Candidate tours: representation, feasibility, repair and makespan.

A candidate solution visits every node once in a cyclic tour anchored at the
depot. Each visited node is typed: a *combined* stop is served by the truck
carrying the drone (the only legal sortie launch/rendezvous point), a *drone*
stop is served by the drone alone mid-sortie, and a *truck-only* stop is
served by the truck while the drone is airborne.

The tour therefore splits at combined stops into subtour pairs: a truck path
plus an optional one-customer drone sortie between consecutive combined
stops. A pair's duration is the slower of its two vehicles; the makespan is
the sum over all pairs, including the wrap-around leg back to the depot.

Chromosomes are value objects: every operation returns a new chromosome (or
the input unchanged) and nothing here mutates ``nodes``/``types`` lists after
construction, so chromosomes may share them and be evaluated concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator, NamedTuple

from .instances import DistanceMatrix, SpeedModel


class NodeType(IntEnum):
    COMBINED = 1
    DRONE = 2
    TRUCK_ONLY = 3


COMBINED = int(NodeType.COMBINED)
DRONE = int(NodeType.DRONE)
TRUCK_ONLY = int(NodeType.TRUCK_ONLY)

_TYPE_LETTER = {COMBINED: "C", DRONE: "D", TRUCK_ONLY: "T"}
_LETTER_TYPE = {v: k for k, v in _TYPE_LETTER.items()}


class Gene(NamedTuple):
    node: int
    ntype: NodeType


class InfeasibleChromosomeError(ValueError):
    """Raised when an operation requires a feasible chromosome."""


class Violation(NamedTuple):
    """One feasibility defect; ``position`` indexes the offending gene."""

    kind: str
    position: int
    node: int


@dataclass(slots=True)
class Chromosome:
    """Depot-anchored permutation of node indices with a type per position.

    ``nodes[0]`` is always the depot (index 0) and ``types[0]`` is always
    combined; neither is ever modified by any operator.
    """

    nodes: list[int]
    types: list[int]

    def __post_init__(self):
        if len(self.nodes) != len(self.types):
            raise ValueError("nodes and types must have equal length")

    @property
    def n(self) -> int:
        return len(self.nodes)

    def genes(self) -> list[Gene]:
        return [Gene(v, NodeType(t)) for v, t in zip(self.nodes, self.types)]

    @classmethod
    def all_combined(cls, tour: list[int]) -> "Chromosome":
        return cls(list(tour), [COMBINED] * len(tour))


def check_structure(chrom: Chromosome) -> None:
    """Raise unless the chromosome is a depot-anchored permutation."""
    n = chrom.n
    if n == 0:
        raise ValueError("empty chromosome")
    if chrom.nodes[0] != 0:
        raise ValueError(f"depot must occupy position 0, found node {chrom.nodes[0]}")
    if chrom.types[0] != COMBINED:
        raise ValueError("depot gene must be combined")
    if sorted(chrom.nodes) != list(range(n)):
        raise ValueError("nodes are not a permutation of 0..n-1")
    for t in chrom.types:
        if t not in (COMBINED, DRONE, TRUCK_ONLY):
            raise ValueError(f"unknown node type {t}")


def is_depot_anchored_permutation(chrom: Chromosome) -> bool:
    try:
        check_structure(chrom)
    except ValueError:
        return False
    return True


def chromosome_to_string(chrom: Chromosome) -> str:
    """Debug serialization: ``nodeId:typeLetter`` tokens, e.g. ``0:C 3:D``."""
    return " ".join(f"{v}:{_TYPE_LETTER[t]}" for v, t in zip(chrom.nodes, chrom.types))


def chromosome_from_string(text: str) -> Chromosome:
    nodes, types = [], []
    for token in text.split():
        node_part, _, letter = token.partition(":")
        nodes.append(int(node_part))
        types.append(_LETTER_TYPE[letter])
    return Chromosome(nodes, types)


@dataclass(slots=True)
class SubtourPair:
    """Truck path between consecutive combined stops, plus optional sortie.

    ``truck_path`` starts and ends at combined nodes; ``drone_sortie`` is a
    ``(launch, drone_node, rendezvous)`` triple whose endpoints coincide with
    the truck path's endpoints.
    """

    truck_path: list[int]
    drone_sortie: tuple[int, int, int] | None = None


def validate_feasibility(chrom: Chromosome) -> list[Violation]:
    """Return all feasibility violations (empty list means feasible).

    * ``connected-drone-tours``: two drone genes with no combined gene
      between them along the cyclic tour.
    * ``disconnected-truck-only``: a truck-only gene in a segment between
      consecutive combined genes that contains no drone gene.
    * ``coincident-sortie-endpoints``: a drone gene whose sortie would
      launch and rendezvous at the same stop, which happens exactly when
      the depot is the only combined gene in the whole tour.
    """
    nodes, types = chrom.nodes, chrom.types
    n = len(types)
    violations: list[Violation] = []
    prev_drone_pos = -1  # last drone seen since the last combined gene
    seg_truck_positions: list[int] = []
    seg_has_drone = False
    combined_count = 1  # the depot
    first_drone_pos = -1

    def close_segment():
        nonlocal seg_truck_positions, seg_has_drone
        if not seg_has_drone:
            for p in seg_truck_positions:
                violations.append(Violation("disconnected-truck-only", p, nodes[p]))
        seg_truck_positions = []
        seg_has_drone = False

    for p in range(1, n):
        t = types[p]
        if t == COMBINED:
            close_segment()
            prev_drone_pos = -1
            combined_count += 1
        elif t == DRONE:
            if first_drone_pos < 0:
                first_drone_pos = p
            if prev_drone_pos >= 0:
                violations.append(Violation("connected-drone-tours", p, nodes[p]))
            seg_has_drone = True
            prev_drone_pos = p
        else:
            seg_truck_positions.append(p)
    close_segment()  # wrap to the depot

    if first_drone_pos >= 0 and combined_count == 1:
        violations.append(
            Violation("coincident-sortie-endpoints", first_drone_pos, nodes[first_drone_pos])
        )
    return violations


def _fast_feasible(types: list[int]) -> bool:
    """Single fused scan of the three feasibility rules (hot path)."""
    seg_drone = False
    seg_truck = False
    combined = 0  # the depot itself is counted on the first iteration
    any_drone = False
    for t in types:
        if t == COMBINED:
            if seg_truck and not seg_drone:
                return False
            seg_drone = False
            seg_truck = False
            combined += 1
        elif t == DRONE:
            if seg_drone:
                return False
            seg_drone = True
            any_drone = True
        else:
            seg_truck = True
    if seg_truck and not seg_drone:
        return False
    return not (any_drone and combined == 1)


def repair(chrom: Chromosome) -> Chromosome:
    """Legalise a chromosome by promoting genes to combined.

    One pass, repeated to a fixpoint, applies three rules scanning left to
    right over positions 1..n-1:

    * a drone gene with no combined gene anywhere else in the tour cannot
      launch and rendezvous at distinct stops; it is itself promoted;
    * for a drone gene whose next drone gene is connected (only truck-only
      genes between them), the gene at the floor-midpoint of the two
      positions is promoted to serve as the shared rendezvous/launch; when
      they are adjacent there is no midpoint and the later drone gene is
      promoted instead;
    * a truck-only gene whose segment (between consecutive combined genes,
      wrapping to the depot) contains no drone gene is promoted.

    Promotions only ever move types toward combined, so the fixpoint is
    reached in at most n passes. The result always passes
    :func:`validate_feasibility`. Returns the input unchanged (same object)
    when it is already feasible.
    """
    types = chrom.types
    if _fast_feasible(types):
        return chrom
    n = len(types)
    out = None  # copy-on-write
    while True:
        changed = False
        work = out if out is not None else types

        # Coincident-endpoint rule: promote the first drone gene when the
        # depot is the only combined gene.
        has_other_combined = False
        first_drone = -1
        for p in range(1, n):
            t = work[p]
            if t == COMBINED:
                has_other_combined = True
                break
            if t == DRONE and first_drone < 0:
                first_drone = p
        if not has_other_combined and first_drone >= 0:
            if out is None:
                out = list(types)
                work = out
            work[first_drone] = COMBINED
            changed = True

        # Connected drone tours: promote midpoints (or the later gene when
        # adjacent). Promotions land ahead of the cursor, so one scan is
        # enough per pass.
        p = 1
        while p < n:
            if work[p] == DRONE:
                q = p + 1
                while q < n and work[q] == TRUCK_ONLY:
                    q += 1
                if q < n and work[q] == DRONE:
                    mid = q if q == p + 1 else (p + q) // 2
                    if out is None:
                        out = list(types)
                        work = out
                    work[mid] = COMBINED
                    changed = True
            p += 1

        # Disconnected truck-only genes: segments with no drone gene.
        seg_truck: list[int] = []
        seg_has_drone = False
        for p in range(1, n + 1):
            t = work[p] if p < n else COMBINED  # wrap closes at the depot
            if t == COMBINED:
                if seg_truck and not seg_has_drone:
                    if out is None:
                        out = list(types)
                        work = out
                    for q in seg_truck:
                        work[q] = COMBINED
                    changed = True
                seg_truck = []
                seg_has_drone = False
            elif t == DRONE:
                seg_has_drone = True
            else:
                seg_truck.append(p)

        if not changed or _fast_feasible(work):
            break
    if out is None:
        return chrom
    return Chromosome(chrom.nodes, out)


def _segments(chrom: Chromosome) -> Iterator[tuple[int, int]]:
    """Yield (open, close) position pairs of consecutive combined genes.

    Positions are chromosome indices; ``close == n`` denotes the wrap back
    to the depot.
    """
    types = chrom.types
    n = len(types)
    open_pos = 0
    for p in range(1, n):
        if types[p] == COMBINED:
            yield open_pos, p
            open_pos = p
    yield open_pos, n


def decompose_subtours(chrom: Chromosome) -> list[SubtourPair]:
    """Split the cyclic tour at combined genes into subtour pairs.

    The final segment wraps to the depot, which acts as the closing
    combined stop. Raises :class:`InfeasibleChromosomeError` on the first
    offending gene of an infeasible chromosome.
    """
    _raise_on_violations(chrom)
    nodes, types = chrom.nodes, chrom.types
    n = len(nodes)
    pairs: list[SubtourPair] = []
    for open_pos, close_pos in _segments(chrom):
        launch = nodes[open_pos]
        rendezvous = nodes[close_pos] if close_pos < n else nodes[0]
        path = [launch]
        drone_node = None
        for p in range(open_pos + 1, close_pos):
            if types[p] == DRONE:
                drone_node = nodes[p]
            else:
                path.append(nodes[p])
        path.append(rendezvous)
        sortie = (launch, drone_node, rendezvous) if drone_node is not None else None
        pairs.append(SubtourPair(truck_path=path, drone_sortie=sortie))
    return pairs


def subtour_time(pair: SubtourPair, dm: DistanceMatrix, sm: SpeedModel) -> float:
    """Duration of one subtour pair: slower of truck path and sortie."""
    d = dm.d
    path = pair.truck_path
    truck = 0.0
    for a, b in zip(path, path[1:]):
        truck += d[a][b]
    if pair.drone_sortie is None:
        return truck
    launch, drone_node, rendezvous = pair.drone_sortie
    drone = (d[launch][drone_node] + d[drone_node][rendezvous]) / sm.alpha
    return truck if truck >= drone else drone


def evaluate_makespan(chrom: Chromosome, dm: DistanceMatrix, sm: SpeedModel) -> float:
    """Total tour duration; the GA's fitness (lower is better).

    Single fused pass equivalent to summing :func:`subtour_time` over
    :func:`decompose_subtours` (the equivalence is property-tested). Raises
    :class:`InfeasibleChromosomeError` on infeasible input.
    """
    nodes, types = chrom.nodes, chrom.types
    n = len(nodes)
    d = dm.d
    inv_alpha = 1.0 / sm.alpha
    total = 0.0
    launch = nodes[0]
    drow = d[launch]  # distance row of the truck's current node
    truck = 0.0
    drone_node = -1
    seg_truck_only = False
    combined_count = 1
    for p in range(1, n):
        t = types[p]
        v = nodes[p]
        if t == COMBINED:
            truck += drow[v]
            if drone_node >= 0:
                dref = d[launch]
                drone = (dref[drone_node] + d[drone_node][v]) * inv_alpha
                total += truck if truck >= drone else drone
            else:
                if seg_truck_only:
                    _raise_on_violations(chrom)
                total += truck
            launch = v
            drow = d[v]
            truck = 0.0
            drone_node = -1
            seg_truck_only = False
            combined_count += 1
        elif t == DRONE:
            if drone_node >= 0:
                _raise_on_violations(chrom)
            drone_node = v
        else:
            truck += drow[v]
            drow = d[v]
            seg_truck_only = True
    depot = nodes[0]
    truck += drow[depot]
    if drone_node >= 0:
        if combined_count == 1:
            _raise_on_violations(chrom)  # sortie would launch and land at the depot
        drone = (d[launch][drone_node] + d[drone_node][depot]) * inv_alpha
        total += truck if truck >= drone else drone
    else:
        if seg_truck_only:
            _raise_on_violations(chrom)
        total += truck
    return total


def _raise_on_violations(chrom: Chromosome) -> None:
    violations = validate_feasibility(chrom)
    if violations:
        first = violations[0]
        raise InfeasibleChromosomeError(
            f"{first.kind} at position {first.position} (node {first.node})"
        )
