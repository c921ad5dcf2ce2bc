"""Problem instances: parsing, distance matrix, travel-time primitives.

An instance is a depot plus customer locations in the Euclidean plane.
The truck drives at unit speed, so travel time equals distance; the drone
flies ``alpha`` times faster than the truck (default 2). All types here are
immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


class InstanceParseError(ValueError):
    """Malformed instance text. ``line`` is the 1-based offending line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InstanceTruncatedError(InstanceParseError):
    """Fewer node lines than the declared node count."""


class InstanceTooSmallError(InstanceParseError):
    """Instance declares fewer than 2 nodes (depot plus one customer)."""


@dataclass(frozen=True, slots=True)
class Node:
    id: int
    x: float
    y: float


@dataclass(frozen=True, slots=True)
class Instance:
    """A problem instance. ``nodes[0]`` is always the depot."""

    name: str
    nodes: tuple[Node, ...]
    alpha: float = 2.0
    depot_index: int = 0

    def __post_init__(self):
        if not self.nodes:
            raise ValueError("instance has no nodes")
        if self.depot_index != 0:
            raise ValueError("depot must be the first node")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        seen = set()
        for node in self.nodes:
            if not (math.isfinite(node.x) and math.isfinite(node.y)):
                raise ValueError(f"non-finite coordinate on node {node.id}")
            if node.id in seen:
                raise ValueError(f"duplicate node id {node.id}")
            seen.add(node.id)

    @property
    def n(self) -> int:
        return len(self.nodes)

    def coords(self) -> list[tuple[float, float]]:
        return [(nd.x, nd.y) for nd in self.nodes]


@dataclass(frozen=True, slots=True)
class SpeedModel:
    """Unit-speed truck and a drone ``alpha`` times faster."""

    truck_speed: float = 1.0
    alpha: float = 2.0

    def __post_init__(self):
        if self.truck_speed != 1.0:
            raise ValueError("model assumes unit truck speed")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")


@dataclass(frozen=True, slots=True)
class DistanceMatrix:
    """Symmetric Euclidean distances with a zero diagonal.

    ``d`` is a plain list-of-lists: scalar indexing dominates the solver's
    hot path and Python lists beat array wrappers for that access pattern.
    """

    n: int
    d: list[list[float]] = field(repr=False)


def build_distance_matrix(inst: Instance) -> DistanceMatrix:
    pts = inst.coords()
    dist = math.dist
    d = [[dist(p, q) for q in pts] for p in pts]
    return DistanceMatrix(n=len(pts), d=d)


def truck_time(dm: DistanceMatrix, i: int, j: int) -> float:
    """Truck travel time between nodes ``i`` and ``j`` (unit speed)."""
    _check_index(dm, i)
    _check_index(dm, j)
    return dm.d[i][j]


def drone_time(dm: DistanceMatrix, sm: SpeedModel, i: int, j: int) -> float:
    """Drone travel time between nodes ``i`` and ``j``."""
    _check_index(dm, i)
    _check_index(dm, j)
    return dm.d[i][j] / sm.alpha


def _check_index(dm: DistanceMatrix, i: int) -> None:
    if not 0 <= i < dm.n:
        raise IndexError(f"node index {i} out of range [0, {dm.n})")


def parse_instance(text: str, fmt: str = "canonical", name: str | None = None) -> Instance:
    """Parse instance text in ``canonical`` or ``bouman`` format.

    Canonical layout: name line, alpha line, node-count line, then one
    ``id x y`` line per node with the depot first.

    Bouman layout: ``/*...*/`` comment lines are skipped; the remaining
    lines carry truck speed, drone speed, node count, then one ``x y``
    line per node (depot first). Node ids are assigned in file order and
    alpha is drone_speed / truck_speed.
    """
    if fmt == "canonical":
        return _parse_canonical(text)
    if fmt == "bouman":
        return _parse_bouman(text, name or "bouman-instance")
    raise ValueError(f"unknown instance format {fmt!r}")


def load_instance(path, fmt: str | None = None) -> Instance:
    """Read an instance file, sniffing the format when ``fmt`` is None."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if fmt is None:
        stripped = text.lstrip()
        fmt = "bouman" if stripped.startswith("/*") else "canonical"
    from pathlib import Path

    return parse_instance(text, fmt, name=Path(path).stem)


def _numbered_lines(text: str) -> list[tuple[int, str]]:
    return [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), start=1)]


def _parse_float(token: str, lineno: int, what: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise InstanceParseError(f"bad {what} {token!r}", lineno) from None
    if not math.isfinite(value):
        raise InstanceParseError(f"non-finite {what} {token!r}", lineno)
    return value


def _parse_int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise InstanceParseError(f"bad {what} {token!r}", lineno) from None


def _parse_canonical(text: str) -> Instance:
    lines = [(no, ln) for no, ln in _numbered_lines(text) if ln]
    if not lines:
        raise InstanceParseError("empty instance text")
    if len(lines) < 3:
        raise InstanceParseError("expected name, alpha and node-count lines", lines[-1][0])
    name = lines[0][1]
    alpha = _parse_float(lines[1][1], lines[1][0], "alpha")
    count = _parse_int(lines[2][1], lines[2][0], "node count")
    if count < 2:
        raise InstanceTooSmallError(f"instance needs at least 2 nodes, declared {count}", lines[2][0])
    body = lines[3:]
    if len(body) < count:
        raise InstanceTruncatedError(
            f"declared {count} nodes but found {len(body)} node lines", lines[-1][0]
        )
    if len(body) > count:
        raise InstanceParseError("unexpected trailing content", body[count][0])
    nodes = []
    for lineno, ln in body:
        parts = ln.split()
        if len(parts) != 3:
            raise InstanceParseError(f"expected 'id x y', got {ln!r}", lineno)
        nid = _parse_int(parts[0], lineno, "node id")
        x = _parse_float(parts[1], lineno, "x coordinate")
        y = _parse_float(parts[2], lineno, "y coordinate")
        nodes.append(Node(nid, x, y))
    return Instance(name=name, nodes=tuple(nodes), alpha=alpha)


def _parse_bouman(text: str, name: str) -> Instance:
    lines = [
        (no, ln)
        for no, ln in _numbered_lines(text)
        if ln and not ln.startswith("/*")
    ]
    if not lines:
        raise InstanceParseError("empty instance text")
    if len(lines) < 3:
        raise InstanceParseError("expected truck speed, drone speed and node count", lines[-1][0])
    truck_speed = _parse_float(lines[0][1], lines[0][0], "truck speed")
    drone_speed = _parse_float(lines[1][1], lines[1][0], "drone speed")
    if truck_speed <= 0 or drone_speed <= 0:
        raise InstanceParseError("speeds must be positive", lines[0][0])
    count = _parse_int(lines[2][1], lines[2][0], "node count")
    if count < 2:
        raise InstanceTooSmallError(f"instance needs at least 2 nodes, declared {count}", lines[2][0])
    body = lines[3:]
    if len(body) < count:
        raise InstanceTruncatedError(
            f"declared {count} nodes but found {len(body)} coordinate lines", lines[-1][0]
        )
    nodes = []
    for nid, (lineno, ln) in enumerate(body[:count]):
        parts = ln.split()
        if len(parts) != 2:
            raise InstanceParseError(f"expected 'x y', got {ln!r}", lineno)
        x = _parse_float(parts[0], lineno, "x coordinate")
        y = _parse_float(parts[1], lineno, "y coordinate")
        nodes.append(Node(nid, x, y))
    return Instance(name=name, nodes=tuple(nodes), alpha=drone_speed / truck_speed)


def to_canonical(inst: Instance) -> str:
    """Render an instance in the canonical text format (round-trip safe)."""
    out = [inst.name, repr(inst.alpha), str(inst.n)]
    out.extend(f"{nd.id} {nd.x!r} {nd.y!r}" for nd in inst.nodes)
    return "\n".join(out) + "\n"
