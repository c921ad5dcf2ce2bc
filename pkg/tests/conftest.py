import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from fstsp_saga.instances import Instance, Node, SpeedModel, build_distance_matrix
from fstsp_saga.solution import COMBINED, DRONE, TRUCK_ONLY, Chromosome

DATA_DIR = Path(__file__).resolve().parents[1] / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def square_instance() -> Instance:
    # Depot at the origin, then a 3x4 rectangle of customers.
    return Instance(
        "square",
        (Node(0, 0.0, 0.0), Node(1, 0.0, 3.0), Node(2, 4.0, 3.0), Node(3, 4.0, 0.0)),
    )


@pytest.fixture
def square_dm(square_instance):
    return build_distance_matrix(square_instance)


@pytest.fixture
def unit_speed():
    return SpeedModel(alpha=2.0)


def random_instance(n_nodes: int, rng: random.Random, box: float = 100.0) -> Instance:
    nodes = tuple(
        Node(i, rng.uniform(0.0, box), rng.uniform(0.0, box)) for i in range(n_nodes)
    )
    return Instance(f"random-{n_nodes}", nodes)


def random_chromosome(n: int, rng: random.Random) -> Chromosome:
    """Structurally valid chromosome with arbitrary (often infeasible) types."""
    perm = list(range(1, n))
    rng.shuffle(perm)
    types = [COMBINED] + [rng.choice((COMBINED, DRONE, TRUCK_ONLY)) for _ in range(n - 1)]
    return Chromosome([0] + perm, types)


@st.composite
def chromosomes(draw, min_n: int = 2, max_n: int = 18):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    perm = draw(st.permutations(list(range(1, n))))
    types = draw(
        st.lists(
            st.sampled_from((COMBINED, DRONE, TRUCK_ONLY)),
            min_size=n - 1,
            max_size=n - 1,
        )
    )
    return Chromosome([0, *perm], [COMBINED, *types])


@st.composite
def small_instances(draw, min_n: int = 2, max_n: int = 10):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    coords = draw(
        st.lists(
            st.tuples(
                st.floats(0, 100, allow_nan=False, allow_infinity=False),
                st.floats(0, 100, allow_nan=False, allow_infinity=False),
            ),
            min_size=n,
            max_size=n,
        )
    )
    nodes = tuple(Node(i, x, y) for i, (x, y) in enumerate(coords))
    return Instance(f"hyp-{n}", nodes)
