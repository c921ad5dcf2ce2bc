import random

import pytest
from hypothesis import given, settings

from fstsp_saga.instances import SpeedModel, build_distance_matrix
from fstsp_saga.solution import (
    COMBINED,
    DRONE,
    TRUCK_ONLY,
    Chromosome,
    InfeasibleChromosomeError,
    SubtourPair,
    chromosome_from_string,
    chromosome_to_string,
    decompose_subtours,
    evaluate_makespan,
    is_depot_anchored_permutation,
    repair,
    subtour_time,
    validate_feasibility,
)

from conftest import chromosomes, random_chromosome, random_instance


def C(text):
    return chromosome_from_string(text)


class TestSerialization:
    def test_round_trip(self):
        c = C("0:C 3:D 1:T 2:C")
        assert c.nodes == [0, 3, 1, 2]
        assert c.types == [COMBINED, DRONE, TRUCK_ONLY, COMBINED]
        assert chromosome_to_string(c) == "0:C 3:D 1:T 2:C"

    def test_structure_check(self):
        assert is_depot_anchored_permutation(C("0:C 2:D 1:T"))
        assert not is_depot_anchored_permutation(C("1:C 0:C 2:C"))
        assert not is_depot_anchored_permutation(C("0:D 1:C"))
        assert not is_depot_anchored_permutation(Chromosome([0, 1, 1], [1, 1, 1]))


class TestDecompose:
    def test_all_combined_three_nodes(self):
        pairs = decompose_subtours(C("0:C 1:C 2:C"))
        assert pairs == [
            SubtourPair([0, 1]),
            SubtourPair([1, 2]),
            SubtourPair([2, 0]),
        ]

    def test_single_sortie(self):
        pairs = decompose_subtours(C("0:C 1:D 2:C"))
        assert pairs == [
            SubtourPair([0, 2], (0, 1, 2)),
            SubtourPair([2, 0]),
        ]

    def test_truck_only_inside_sortie(self):
        pairs = decompose_subtours(C("0:C 1:T 2:D 3:C"))
        assert pairs == [
            SubtourPair([0, 1, 3], (0, 2, 3)),
            SubtourPair([3, 0]),
        ]

    def test_infeasible_raises_with_position(self):
        with pytest.raises(InfeasibleChromosomeError) as err:
            decompose_subtours(C("0:C 1:T 2:C"))
        assert "position 1" in str(err.value)

    @given(chromosomes(min_n=2, max_n=16))
    @settings(max_examples=150)
    def test_every_gene_covered_exactly_once(self, chrom):
        chrom = repair(chrom)
        pairs = decompose_subtours(chrom)
        seen = []
        for pair in pairs:
            seen.extend(pair.truck_path[:-1])
            if pair.drone_sortie:
                seen.append(pair.drone_sortie[1])
        assert sorted(seen) == list(range(chrom.n))
        for pair in pairs:
            if pair.drone_sortie:
                launch, _, rendezvous = pair.drone_sortie
                assert launch == pair.truck_path[0]
                assert rendezvous == pair.truck_path[-1]
                assert launch != rendezvous


class TestSubtourTime:
    def test_truck_bound_sortie(self, square_dm, unit_speed):
        pair = SubtourPair([0, 2], (0, 1, 2))
        assert subtour_time(pair, square_dm, unit_speed) == 5.0  # max(5, 3.5)

    def test_no_sortie_sums_legs(self, square_dm, unit_speed):
        pair = SubtourPair([1, 2, 3])
        assert subtour_time(pair, square_dm, unit_speed) == 7.0

    def test_drone_bound_sortie(self, unit_speed):
        # Manufactured geometry: truck leg 2, drone flies 8 + 8 at alpha 2.
        from fstsp_saga.instances import DistanceMatrix

        d = [[0.0, 2.0, 8.0], [2.0, 0.0, 8.0], [8.0, 8.0, 0.0]]
        dm = DistanceMatrix(3, d)
        pair = SubtourPair([0, 1], (0, 2, 1))
        assert subtour_time(pair, dm, unit_speed) == 8.0


class TestEvaluate:
    def test_square_with_sortie(self, square_instance, square_dm, unit_speed):
        chrom = C("0:C 1:D 2:C 3:C")
        assert evaluate_makespan(chrom, square_dm, unit_speed) == pytest.approx(12.0)

    def test_all_combined_equals_tour_length(self, square_dm, unit_speed):
        chrom = C("0:C 1:C 2:C 3:C")
        assert evaluate_makespan(chrom, square_dm, unit_speed) == pytest.approx(14.0)

    def test_out_and_back(self, unit_speed):
        from fstsp_saga.instances import Instance, Node, build_distance_matrix

        inst = Instance("i", (Node(0, 0, 0), Node(1, 7, 0)))
        dm = build_distance_matrix(inst)
        assert evaluate_makespan(C("0:C 1:C"), dm, unit_speed) == 14.0

    def test_matches_decomposed_sum(self):
        rng = random.Random(11)
        sm = SpeedModel(alpha=2.0)
        for _ in range(300):
            n = rng.randrange(2, 20)
            inst = random_instance(n, rng)
            dm = build_distance_matrix(inst)
            chrom = repair(random_chromosome(n, rng))
            fused = evaluate_makespan(chrom, dm, sm)
            split = sum(subtour_time(p, dm, sm) for p in decompose_subtours(chrom))
            assert fused == pytest.approx(split, abs=1e-9)

    def test_infeasible_raises(self, square_dm, unit_speed):
        with pytest.raises(InfeasibleChromosomeError):
            evaluate_makespan(C("0:C 1:D 2:D 3:C"), square_dm, unit_speed)

    def test_huge_alpha_leaves_truck_time_only(self):
        rng = random.Random(5)
        sm = SpeedModel(alpha=1e9)
        for _ in range(40):
            n = rng.randrange(3, 15)
            inst = random_instance(n, rng)
            dm = build_distance_matrix(inst)
            chrom = repair(random_chromosome(n, rng))
            truck_nodes = [v for v, t in zip(chrom.nodes, chrom.types) if t != DRONE]
            length = sum(
                dm.d[a][b] for a, b in zip(truck_nodes, truck_nodes[1:] + truck_nodes[:1])
            )
            assert evaluate_makespan(chrom, dm, sm) == pytest.approx(length, rel=1e-6)


class TestValidate:
    def test_connected_drone_tours(self):
        violations = validate_feasibility(C("0:C 1:D 2:T 3:D 4:C"))
        assert [v.kind for v in violations] == ["connected-drone-tours"]
        assert violations[0].position == 3

    def test_disconnected_truck_only(self):
        violations = validate_feasibility(C("0:C 1:T 2:C"))
        assert [v.kind for v in violations] == ["disconnected-truck-only"]
        assert violations[0].position == 1

    def test_feasible_sortie_with_truck_only(self):
        assert validate_feasibility(C("0:C 1:T 2:D 3:C")) == []

    def test_coincident_endpoints(self):
        violations = validate_feasibility(C("0:C 1:D"))
        assert [v.kind for v in violations] == ["coincident-sortie-endpoints"]
        # With another combined gene the wrap sortie is legal.
        assert validate_feasibility(C("0:C 1:C 2:D")) == []

    def test_wrap_segment_truck_only(self):
        violations = validate_feasibility(C("0:C 1:C 2:T"))
        assert [v.kind for v in violations] == ["disconnected-truck-only"]


class TestRepair:
    @pytest.mark.parametrize(
        "before,after",
        [
            ("0:C 1:T 2:C", "0:C 1:C 2:C"),
            ("0:C 1:D 2:T 3:D 4:C", "0:C 1:D 2:C 3:D 4:C"),
            ("0:C 1:D 2:D 3:C", "0:C 1:D 2:C 3:C"),
            ("0:C 1:D", "0:C 1:C"),
            ("0:C 1:C 2:D", "0:C 1:C 2:D"),  # already feasible
        ],
    )
    def test_examples(self, before, after):
        assert chromosome_to_string(repair(C(before))) == after

    def test_feasible_input_returned_unchanged(self):
        chrom = C("0:C 1:T 2:D 3:C")
        assert repair(chrom) is chrom

    @given(chromosomes(min_n=2, max_n=18))
    @settings(max_examples=300)
    def test_repair_feasible_and_idempotent(self, chrom):
        fixed = repair(chrom)
        assert validate_feasibility(fixed) == []
        again = repair(fixed)
        assert again is fixed
        assert is_depot_anchored_permutation(fixed)
        # Promotions only: only conversions toward combined are allowed.
        for before, after in zip(chrom.types, fixed.types):
            assert after == before or after == COMBINED

    def test_repair_bulk_random(self):
        rng = random.Random(99)
        for _ in range(2000):
            chrom = random_chromosome(rng.randrange(4, 31), rng)
            fixed = repair(chrom)
            assert validate_feasibility(fixed) == []
            assert repair(fixed) is fixed
