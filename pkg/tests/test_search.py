import random
from fractions import Fraction

import pytest

from ceei import (
    DiscreteAssignment,
    InconclusiveSearch,
    Instance,
    InstanceTooLarge,
    NotBinary,
    NotIdenticalUtilities,
    SearchBudgets,
    binary_max_nash,
    brute_force_max_nash,
    exists_ceei_disc_bruteforce,
    exists_ceei_frac_discrete,
    find_ceei_disc_identical,
    from_partition,
    gen_random,
    max_nash_discrete,
    nash_welfare,
    PartitionInput,
    verify_ceei_disc,
    verify_ceei_frac,
)
from oracles import has_equal_bipartition, recheck_discrete_price_support


class TestBruteForce:
    def test_separation_instance(self, separation):
        result = brute_force_max_nash(separation)
        assert result.welfare == 10000
        assert result.best == DiscreteAssignment([0, 0, 1, 1])
        assert result.nodes_explored == 16
        assert result.optimal

    def test_binary_gap_instance(self, binary_gap):
        assert brute_force_max_nash(binary_gap).welfare == 2

    def test_single_agent(self, single_agent):
        result = brute_force_max_nash(single_agent)
        assert result.best == DiscreteAssignment([0, 0])
        assert result.welfare == 4

    def test_size_guard(self):
        inst = gen_random(4, 14, 5, seed=0)
        with pytest.raises(InstanceTooLarge):
            brute_force_max_nash(inst, limit=10**6)

    def test_welfare_field_matches_assignment(self, separation):
        result = brute_force_max_nash(separation)
        assert result.welfare == nash_welfare(separation, result.best)


class TestBranchAndBound:
    def test_matches_oracle_on_examples(self, separation, binary_gap):
        for inst in (separation, binary_gap):
            assert max_nash_discrete(inst).welfare == brute_force_max_nash(inst).welfare

    def test_single_agent_two_objects(self):
        result = max_nash_discrete(Instance([[5, 7]]))
        assert result.welfare == 12

    @pytest.mark.parametrize("seed", range(25))
    def test_oracle_equivalence_including_witness(self, seed):
        rng = random.Random(seed)
        inst = gen_random(rng.randint(1, 3), rng.randint(1, 6), 8, seed=seed)
        exhaustive = brute_force_max_nash(inst)
        bounded = max_nash_discrete(inst)
        assert bounded.optimal
        assert bounded.welfare == exhaustive.welfare
        assert bounded.best == exhaustive.best  # shared lexicographic tie-break

    def test_node_budget_truncates_instead_of_raising(self, separation):
        result = max_nash_discrete(separation, SearchBudgets(max_nodes=3))
        assert not result.optimal
        assert result.nodes_explored <= 3
        assert result.welfare == nash_welfare(separation, result.best)

    def test_zero_welfare_frontier_returns_lexicographic_first(self, contested_object):
        result = max_nash_discrete(contested_object)
        assert result.optimal
        assert result.welfare == 0
        assert result.best == DiscreteAssignment([0])

    def test_deterministic_across_runs(self, separation):
        first = max_nash_discrete(separation)
        second = max_nash_discrete(separation)
        assert first == second


class TestExistsFractionalSupport:
    def test_separation_instance_has_one(self, separation):
        found = exists_ceei_frac_discrete(separation)
        assert found == DiscreteAssignment([0, 0, 1, 1])
        assert verify_ceei_frac(separation, found).holds

    def test_binary_gap_has_none(self, binary_gap):
        assert exists_ceei_frac_discrete(binary_gap) is None

    def test_single_agent_everything(self, single_agent):
        assert exists_ceei_frac_discrete(single_agent) == DiscreteAssignment([0, 0])

    def test_contested_object_has_none(self, contested_object):
        # the fractional optimum is positive, every discrete split is not
        assert exists_ceei_frac_discrete(contested_object) is None

    def test_truncated_search_is_inconclusive(self, separation):
        with pytest.raises(InconclusiveSearch):
            exists_ceei_frac_discrete(separation, SearchBudgets(max_nodes=2))

    @pytest.mark.parametrize("seed", range(12))
    def test_found_assignments_reach_the_fractional_optimum(self, seed):
        from ceei import solve_eg

        rng = random.Random(500 + seed)
        inst = gen_random(rng.randint(1, 3), rng.randint(1, 6), 7, seed=seed)
        found = exists_ceei_frac_discrete(inst)
        if found is not None:
            assert verify_ceei_frac(inst, found).holds
            optimum = float(nash_welfare(inst, solve_eg(inst).x))
            assert abs(float(nash_welfare(inst, found)) - optimum) <= 1e-6 * optimum


class TestBinaryMaxNash:
    def test_binary_gap_instance(self, binary_gap):
        result = binary_max_nash(binary_gap)
        assert result.welfare == 2
        assert result.welfare == nash_welfare(binary_gap, result.best)

    def test_identity_instance_forces_diagonal(self):
        inst = Instance([[1 if i == j else 0 for j in range(3)] for i in range(3)])
        result = binary_max_nash(inst)
        assert result.welfare == 1
        assert result.best == DiscreteAssignment([0, 1, 2])

    def test_one_agent_interested_in_one_object(self):
        inst = Instance([[1, 1, 1, 1], [0, 0, 0, 1]])
        result = binary_max_nash(inst)
        assert result.welfare == 3

    def test_rejects_non_binary_entries(self, separation):
        with pytest.raises(NotBinary) as excinfo:
            binary_max_nash(separation)
        assert (excinfo.value.agent, excinfo.value.object) == (0, 0)

    def test_starved_agent_collapses_to_zero(self, contested_object):
        result = binary_max_nash(contested_object)
        assert result.welfare == 0
        assert result.best == DiscreteAssignment([0])

    @pytest.mark.parametrize("seed", range(30))
    def test_matches_oracle_on_random_binary_instances(self, seed):
        rng = random.Random(1000 + seed)
        inst = gen_random(rng.randint(1, 4), rng.randint(1, 8), 1, binary=True, seed=seed)
        assert binary_max_nash(inst).welfare == brute_force_max_nash(inst).welfare

    def test_deterministic_across_runs(self, binary_gap):
        assert binary_max_nash(binary_gap) == binary_max_nash(binary_gap)


class TestIdenticalUtilitiesFinder:
    def test_even_weights_split(self):
        inst = from_partition(PartitionInput([2, 1, 1]))
        found = find_ceei_disc_identical(inst)
        assert found is not None
        sums = [sum(inst.utilities[0][j] for j in found.bundle(i)) for i in range(2)]
        assert sums == [2, 2]
        assert verify_ceei_disc(inst, found).holds

    def test_odd_total_is_a_no_instance(self):
        inst = from_partition(PartitionInput([3, 1, 1]))
        assert find_ceei_disc_identical(inst) is None

    def test_three_way_planted_split(self):
        # n = 2 groups, bound 10: two planted triples (3, 3, 4)
        inst = Instance([[3, 3, 4, 3, 3, 4]] * 2)
        found = find_ceei_disc_identical(inst)
        assert found is not None
        assert verify_ceei_disc(inst, found).holds

    def test_rejects_differing_rows(self, separation):
        with pytest.raises(NotIdenticalUtilities) as excinfo:
            find_ceei_disc_identical(separation)
        assert excinfo.value.agent == 1

    def test_rational_weights_are_scaled(self):
        inst = Instance([[Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)]] * 2)
        found = find_ceei_disc_identical(inst)
        assert found is not None
        sums = [sum((inst.utilities[0][j] for j in found.bundle(i)), Fraction(0)) for i in range(2)]
        assert sums[0] == sums[1] == Fraction(1, 2)

    @pytest.mark.parametrize("seed", range(25))
    def test_agrees_with_subset_sum_oracle(self, seed):
        rng = random.Random(seed)
        values = [rng.randint(1, 20) for _ in range(rng.randint(1, 10))]
        inst = from_partition(PartitionInput(values))
        assert (find_ceei_disc_identical(inst) is not None) == has_equal_bipartition(values)


class TestExistsDiscreteSupport:
    def test_identical_even_weights(self):
        inst = from_partition(PartitionInput([2, 1, 1]))
        found = exists_ceei_disc_bruteforce(inst)
        assert found is not None
        y, prices = found
        assert recheck_discrete_price_support(inst, y, prices)

    def test_identical_odd_weights(self):
        inst = from_partition(PartitionInput([3, 1, 1]))
        assert exists_ceei_disc_bruteforce(inst) is None

    def test_separation_instance_has_some(self, separation):
        found = exists_ceei_disc_bruteforce(separation)
        assert found is not None
        y, prices = found
        assert recheck_discrete_price_support(separation, y, prices)
        # in particular the fractionally supported split qualifies as well
        assert verify_ceei_disc(separation, DiscreteAssignment([0, 0, 1, 1])).holds

    def test_size_guard(self):
        inst = gen_random(3, 20, 3, seed=1)
        with pytest.raises(InstanceTooLarge):
            exists_ceei_disc_bruteforce(inst, limit=1000)
