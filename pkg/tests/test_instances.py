import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fstsp_saga.instances import (
    Instance,
    InstanceParseError,
    InstanceTooSmallError,
    InstanceTruncatedError,
    Node,
    SpeedModel,
    build_distance_matrix,
    drone_time,
    load_instance,
    parse_instance,
    to_canonical,
    truck_time,
)

from conftest import random_instance, small_instances

CANONICAL_SAMPLE = "t\n2\n2\n0 0 0\n1 3 4"

BOUMAN_SAMPLE = """\
/*The speed of the truck*/
1
/*The speed of the drone*/
2
/*Number of nodes*/
3
/*Coordinates, depot first*/
10.5 20.25
30.0 40.0
50.0 60.0
"""


class TestParseCanonical:
    def test_basic_fields(self):
        inst = parse_instance(CANONICAL_SAMPLE, "canonical")
        assert inst.name == "t"
        assert inst.n == 2
        assert inst.alpha == 2.0
        assert (inst.nodes[0].x, inst.nodes[0].y) == (0.0, 0.0)
        assert (inst.nodes[1].x, inst.nodes[1].y) == (3.0, 4.0)

    def test_empty_stream(self):
        with pytest.raises(InstanceParseError):
            parse_instance("", "canonical")

    def test_malformed_number_reports_line(self):
        bad = "t\n2\n2\n0 0 0\n1 x 4"
        with pytest.raises(InstanceParseError) as err:
            parse_instance(bad, "canonical")
        assert err.value.line == 5

    def test_truncated(self):
        with pytest.raises(InstanceTruncatedError):
            parse_instance("t\n2\n3\n0 0 0\n1 1 1", "canonical")

    def test_too_small(self):
        with pytest.raises(InstanceTooSmallError):
            parse_instance("t\n2\n1\n0 0 0", "canonical")

    def test_crlf_and_blank_lines(self):
        text = "t\r\n2\r\n2\r\n0 0 0\r\n1 3 4\r\n\r\n"
        inst = parse_instance(text, "canonical")
        assert inst.n == 2


class TestParseBouman:
    def test_comments_skipped_and_alpha_derived(self):
        inst = parse_instance(BOUMAN_SAMPLE, "bouman", name="sample")
        assert inst.name == "sample"
        assert inst.n == 3
        assert inst.alpha == 2.0
        assert inst.nodes[0].id == 0 and inst.nodes[0].x == 10.5
        assert inst.nodes[2].y == 60.0

    def test_eleven_node_file(self):
        coords = "\n".join(f"{i}.0 {i}.5" for i in range(11))
        text = f"/*c*/\n1\n/*c*/\n2\n/*c*/\n11\n{coords}\n"
        inst = parse_instance(text, "bouman")
        assert inst.n == 11  # depot plus ten customers

    def test_truncated(self):
        text = "1\n2\n4\n0 0\n1 1\n"
        with pytest.raises(InstanceTruncatedError):
            parse_instance(text, "bouman")

    def test_zero_speed_rejected(self):
        text = "0\n2\n2\n0 0\n1 1\n"
        with pytest.raises(InstanceParseError):
            parse_instance(text, "bouman")


class TestDistanceMatrix:
    def test_three_four_five(self):
        inst = Instance("i", (Node(0, 0, 0), Node(1, 3, 4)))
        dm = build_distance_matrix(inst)
        assert dm.d[0][1] == 5.0

    def test_single_node(self):
        dm = build_distance_matrix(Instance("i", (Node(0, 1, 1),)))
        assert dm.n == 1
        assert dm.d == [[0.0]]

    def test_unit_right_angle(self):
        inst = Instance("i", (Node(0, 0, 0), Node(1, 1, 0), Node(2, 0, 1)))
        dm = build_distance_matrix(inst)
        assert dm.d[1][2] == pytest.approx(math.sqrt(2), abs=1e-12)


class TestTravelTimes:
    def test_truck_time_is_distance(self, square_dm):
        assert truck_time(square_dm, 0, 2) == 5.0
        assert truck_time(square_dm, 1, 1) == 0.0

    def test_drone_time_divides_by_alpha(self, square_dm, unit_speed):
        assert drone_time(square_dm, unit_speed, 0, 2) == 2.5
        assert drone_time(square_dm, unit_speed, 2, 2) == 0.0
        sm7 = SpeedModel(alpha=2.0)
        inst = Instance("i", (Node(0, 0, 0), Node(1, 7, 0)))
        dm = build_distance_matrix(inst)
        assert drone_time(dm, sm7, 0, 1) == 3.5

    def test_bounds_checked(self, square_dm, unit_speed):
        with pytest.raises(IndexError):
            truck_time(square_dm, 0, 4)
        with pytest.raises(IndexError):
            drone_time(square_dm, unit_speed, -1, 0)


@given(small_instances())
@settings(max_examples=60)
def test_matrix_properties(inst):
    dm = build_distance_matrix(inst)
    sm = SpeedModel(alpha=inst.alpha)
    for i in range(dm.n):
        assert dm.d[i][i] == 0.0
        for j in range(dm.n):
            assert dm.d[i][j] == dm.d[j][i]
            assert dm.d[i][j] >= 0.0
            assert drone_time(dm, sm, i, j) == truck_time(dm, i, j) / sm.alpha


@given(small_instances(), st.floats(0.5, 10, allow_nan=False))
@settings(max_examples=40)
def test_canonical_round_trip(inst, alpha):
    inst = Instance(inst.name, inst.nodes, alpha=alpha)
    again = parse_instance(to_canonical(inst), "canonical")
    assert again == inst


def test_round_trip_random_coordinates():
    rng = random.Random(7)
    for _ in range(50):
        inst = random_instance(rng.randrange(2, 40), rng)
        assert parse_instance(to_canonical(inst), "canonical") == inst


def test_load_instance_sniffs_format(tmp_path):
    p1 = tmp_path / "a.txt"
    p1.write_text(CANONICAL_SAMPLE)
    assert load_instance(p1).n == 2
    p2 = tmp_path / "b.txt"
    p2.write_text(BOUMAN_SAMPLE)
    inst = load_instance(p2)
    assert inst.n == 3 and inst.name == "b"


def test_alpha_must_be_positive():
    with pytest.raises(ValueError):
        Instance("i", (Node(0, 0, 0), Node(1, 1, 1)), alpha=0.0)
    with pytest.raises(ValueError):
        SpeedModel(alpha=-1.0)
