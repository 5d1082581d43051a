from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rationd.analysis.checks import is_non_wasteful
from rationd.data import InstanceBounds, sample_instance
from rationd.exceptions import ConfigurationError, ContractViolation, OracleBudgetExceeded
from rationd.flow import flow_violations, solve_profitable_flow
from rationd.model import check_allocation, find_addable_agent, total_utility
from rationd.schemas import TieBreakOrder
from rationd.solver import Allocator
from rationd.strategies import (OfflineFlowStrategy, OracleStrategy, build_strategy, solve_exact_oracle,
                                solve_offline_model1, solve_offline_tiebroken)
from rationd.strategies.offline import (ArcEntity, ArcRole, build_model1_network, extract_allocation,
                                        offline_utility_from_flow)

from .conftest import make_agent, make_instance


class TestReduction:

    def test_node_count(self):
        agents = [make_agent(f"a{k}", "0.5", [1, 1], ["c1", "c2", "c3"]) for k in (1, 2, 3)]
        instance = make_instance(agents, {"c1": [1, 1], "c2": [1, 1], "c3": [1, 1]}, supply=[2, 2])
        network, _ = build_model1_network(instance)
        assert network.num_nodes == 1 + 2 + 6 + 3 + 1

    def test_single_slot_has_four_arcs(self):
        instance = make_instance([make_agent("a1", "0.5", [1], ["c1"])], {"c1": [1]}, supply=[1])
        network, mapping = build_model1_network(instance)
        assert len(network.arcs) == 4
        assert [entity.role for entity in mapping.entities] == [
            ArcRole.SUPPLY, ArcRole.QUOTA, ArcRole.ASSIGNMENT, ArcRole.SINK]

    def test_never_available_agent_has_no_incoming_arcs(self):
        agents = [make_agent("a1", "0.5", [1, 1], ["c1"]), make_agent("a2", "0.5", [0, 0], ["c1"])]
        instance = make_instance(agents, {"c1": [1, 1]}, supply=[1, 1])
        network, mapping = build_model1_network(instance)
        assert not [entity for _, entity in mapping.assignment_arcs() if entity.agent == "a2"]
        sink_arc = network.arcs[mapping.arc_of(ArcEntity(role=ArcRole.SINK, agent="a2"))]
        assert not [arc for arc in network.arcs if arc.head == sink_arc.tail]

    def test_flow_cost_is_negated_utility(self, tight_model1):
        network, mapping = build_model1_network(tight_model1)
        result = solve_profitable_flow(network)
        assert not flow_violations(network, result)
        alloc = extract_allocation(tight_model1, result, mapping)
        assert offline_utility_from_flow(result, mapping.scale) == total_utility(tight_model1, alloc)


class TestSolveOfflineModel1:

    def test_tight_instance(self, tight_model1):
        alloc = solve_offline_model1(tight_model1)
        assert total_utility(tight_model1, alloc) == Fraction("0.975")
        assert alloc.day_of("a2") == 1 and alloc.day_of("a1") == 2

    def test_nobody_available(self):
        instance = make_instance([make_agent("a1", "0.5", [0, 0], ["c1"])], {"c1": [1, 1]}, supply=[1, 1])
        alloc = solve_offline_model1(instance)
        assert alloc.matched_count == 0

    def test_two_agents(self, two_agent_instance):
        assert total_utility(two_agent_instance, solve_offline_model1(two_agent_instance)) == Fraction("1.15")

    def test_overall_quotas_are_ignored_with_a_warning(self, tight_model2, caplog):
        alloc = solve_offline_model1(tight_model2)
        assert check_allocation(tight_model2, alloc).ok
        assert "overall quotas are ignored" in caplog.text


class TestTieBroken:

    @pytest.fixture
    def symmetric(self):
        agents = [make_agent(f"a{k}", "0.5", [1], ["c1"]) for k in (1, 2, 3)]
        return make_instance(agents, {"c1": [2]}, supply=[2])

    def test_order_decides_between_equal_agents(self):
        agents = [make_agent("a1", "0.5", [1], ["c1"]), make_agent("a2", "0.5", [1], ["c1"])]
        instance = make_instance(agents, {"c1": [1]}, supply=[1])
        first = solve_offline_tiebroken(instance, TieBreakOrder(order=("a1", "a2")))
        second = solve_offline_tiebroken(instance, TieBreakOrder(order=("a2", "a1")))
        assert [agent for agent, _ in first.matched()] == ["a1"]
        assert [agent for agent, _ in second.matched()] == ["a2"]

    def test_two_of_three(self, symmetric):
        alloc = solve_offline_tiebroken(symmetric, TieBreakOrder(order=("a3", "a1", "a2")))
        assert {agent for agent, _ in alloc.matched()} == {"a3", "a1"}

    def test_unique_optimum_is_unchanged(self, two_agent_instance):
        order = TieBreakOrder(order=("a1", "a2"))
        assert solve_offline_tiebroken(two_agent_instance, order) == solve_offline_model1(two_agent_instance)

    def test_order_must_cover_every_agent(self, symmetric):
        with pytest.raises(ContractViolation):
            solve_offline_tiebroken(symmetric, TieBreakOrder(order=("a1", "a2")))


class TestOracle:

    def test_tight_model2(self, tight_model2):
        alloc = solve_exact_oracle(tight_model2, model2=True)
        # alpha3 + alpha1 * delta + alpha2 * delta
        assert total_utility(tight_model2, alloc) == Fraction("0.2") + Fraction("0.1") + Fraction("0.2")
        assert check_allocation(tight_model2, alloc, model2=True).ok

    def test_empty_instance(self, empty_instance):
        assert solve_exact_oracle(empty_instance).matched_count == 0

    def test_budget(self, tight_model1):
        with pytest.raises(OracleBudgetExceeded):
            solve_exact_oracle(tight_model1, budget=3)

    @settings(max_examples=80, deadline=None, derandomize=True)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_tie_broken_optimum_agrees_with_the_flow(self, seed):
        instance = sample_instance(seed)
        order = TieBreakOrder(order=tuple(agent.id for agent in reversed(instance.agents)))
        flow = solve_offline_tiebroken(instance, order)
        oracle = solve_exact_oracle(instance, order=order)
        assert {agent for agent, _ in flow.matched()} == {agent for agent, _ in oracle.matched()}
        assert total_utility(instance, flow) == total_utility(instance, oracle)


class TestStrategies:

    def test_build_strategy_names(self):
        assert isinstance(build_strategy("offline1"), OfflineFlowStrategy)
        assert build_strategy("oracle2").name == "oracle2"
        assert build_strategy("online2").model2

    def test_unknown_algorithm(self):
        with pytest.raises(ValueError):
            build_strategy("simplex")

    @pytest.mark.parametrize("algorithm", ["offline1", "oracle", "oracle2"])
    def test_adversarial_tie_break_is_online_only(self, algorithm):
        with pytest.raises(ConfigurationError, match="adversarial"):
            build_strategy(algorithm, adversarial=True)
        assert build_strategy("online1", adversarial=True).adversarial

    def test_model2_needs_overall_quotas(self, tight_model1):
        with pytest.raises(ConfigurationError):
            Allocator(OracleStrategy(model2=True)).allocate(tight_model1)

    def test_allocator_delegates(self, tight_model1):
        alloc = Allocator(build_strategy("offline1")).allocate(tight_model1)
        assert total_utility(tight_model1, alloc) == Fraction("0.975")


@settings(max_examples=500, deadline=None, derandomize=True)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_flow_optimum_equals_oracle(seed):
    instance = sample_instance(seed, InstanceBounds(max_agents=6, max_days=3, max_categories=3, max_capacity=2))
    assert total_utility(instance, solve_offline_model1(instance)) == \
        total_utility(instance, solve_exact_oracle(instance))


@settings(max_examples=200, deadline=None, derandomize=True)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.booleans())
def test_offline_optimum_is_non_wasteful(seed, adversarial):
    instance = sample_instance(seed, InstanceBounds(max_agents=8, max_days=4))
    order = TieBreakOrder.default(instance)
    for alloc in (solve_offline_model1(instance),
                  solve_offline_tiebroken(instance, order.inverted() if adversarial else order)):
        assert is_non_wasteful(instance, alloc)
        assert find_addable_agent(instance, alloc) is None
