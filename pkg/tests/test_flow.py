import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from pydantic import ValidationError

from rationd.exceptions import NegativeCycleError
from rationd.flow import Arc, FlowNetwork, flow_violations, solve_profitable_flow


@pytest.fixture
def twin_network() -> FlowNetwork:
    """s -> v (cap 2), then v -> t twice with costs -3 and -1"""
    return FlowNetwork(num_nodes=3, source=0, sink=2, arcs=(
        Arc(tail=0, head=1, capacity=2, cost=0),
        Arc(tail=1, head=2, capacity=1, cost=-3),
        Arc(tail=1, head=2, capacity=1, cost=-1),
    ))


class TestSolveProfitableFlow:

    def test_unbounded(self, twin_network):
        result = solve_profitable_flow(twin_network)
        assert (result.total_flow, result.total_cost) == (2, -4)
        assert result.arc_flows == (2, 1, 1)

    def test_capped_takes_the_cheaper_arc(self, twin_network):
        result = solve_profitable_flow(twin_network, flow_cap=1)
        assert (result.total_flow, result.total_cost) == (1, -3)
        assert result.arc_flows == (1, 1, 0)

    def test_zero_cap(self, twin_network):
        result = solve_profitable_flow(twin_network, flow_cap=0)
        assert (result.total_flow, result.total_cost) == (0, 0)

    def test_negative_cap(self, twin_network):
        with pytest.raises(ValueError):
            solve_profitable_flow(twin_network, flow_cap=-1)

    def test_unprofitable_paths_stay_empty(self):
        network = FlowNetwork(num_nodes=2, source=0, sink=1, arcs=(Arc(tail=0, head=1, capacity=5, cost=2),))
        assert solve_profitable_flow(network).total_flow == 0

    def test_negative_cycle(self):
        network = FlowNetwork(num_nodes=4, source=0, sink=3, arcs=(
            Arc(tail=0, head=1, capacity=1, cost=0),
            Arc(tail=1, head=2, capacity=1, cost=-2),
            Arc(tail=2, head=1, capacity=1, cost=-2),
        ))
        with pytest.raises(NegativeCycleError):
            solve_profitable_flow(network)

    def test_cheapest_flow_is_not_the_largest(self):
        # two units fit, but the single unit along 0-1-2-3 costs less than any pair
        network = FlowNetwork(num_nodes=4, source=0, sink=3, arcs=(
            Arc(tail=0, head=1, capacity=1, cost=-1),
            Arc(tail=0, head=2, capacity=1, cost=0),
            Arc(tail=1, head=2, capacity=1, cost=-5),
            Arc(tail=1, head=3, capacity=1, cost=0),
            Arc(tail=2, head=3, capacity=1, cost=0),
        ))
        result = solve_profitable_flow(network)
        assert result.total_cost == -6
        assert not flow_violations(network, result)


class TestFlowNetwork:

    @pytest.mark.parametrize("arc", [
        Arc(tail=1, head=1, capacity=1, cost=0),
        Arc(tail=2, head=1, capacity=1, cost=0),
        Arc(tail=1, head=0, capacity=1, cost=0),
        Arc(tail=1, head=7, capacity=1, cost=0),
    ])
    def test_rejects_malformed_arcs(self, arc):
        with pytest.raises(ValidationError):
            FlowNetwork(num_nodes=3, source=0, sink=2, arcs=(arc,))

    def test_rejects_negative_capacity(self):
        with pytest.raises(ValidationError):
            Arc(tail=0, head=1, capacity=-1, cost=0)

    def test_source_equals_sink(self):
        with pytest.raises(ValidationError):
            FlowNetwork(num_nodes=2, source=0, sink=0)


def _random_dag(seed: int) -> FlowNetwork:
    """Acyclic network on at most 6 nodes with small capacities and costs"""
    rng = np.random.default_rng(seed)
    num_nodes = int(rng.integers(2, 7))
    arcs = [
        Arc(tail=tail, head=head, capacity=int(rng.integers(0, 3)), cost=int(rng.integers(-4, 3)))
        for tail in range(num_nodes - 1)
        for head in range(tail + 1, num_nodes)
        if rng.random() < 0.6
    ]
    return FlowNetwork(num_nodes=num_nodes, source=0, sink=num_nodes - 1, arcs=tuple(arcs))


def _best_cost(network: FlowNetwork, flow_cap: int | None) -> int:
    """Cheapest feasible flow of value at most the cap, by enumerating every integral arc flow"""
    best = 0
    for flows in itertools.product(*(range(arc.capacity + 1) for arc in network.arcs)):
        balance = [0] * network.num_nodes
        for arc, flow in zip(network.arcs, flows):
            balance[arc.tail] -= flow
            balance[arc.head] += flow
        inner = [node for node in range(network.num_nodes) if node not in (network.source, network.sink)]
        if any(balance[node] for node in inner):
            continue
        if flow_cap is not None and balance[network.sink] > flow_cap:
            continue
        best = min(best, sum(arc.cost * flow for arc, flow in zip(network.arcs, flows)))
    return best


@settings(max_examples=150, deadline=None, derandomize=True)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.sampled_from([None, 0, 1, 2, 3]))
def test_matches_exhaustive_enumeration(seed, flow_cap):
    network = _random_dag(seed)
    if np.prod([arc.capacity + 1 for arc in network.arcs]) > 20000:
        return
    result = solve_profitable_flow(network, flow_cap=flow_cap)
    assert not flow_violations(network, result)
    assert result.total_cost == _best_cost(network, flow_cap)
    if flow_cap is not None:
        assert result.total_flow <= flow_cap


@settings(max_examples=150, deadline=None, derandomize=True)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_raising_the_cap_never_raises_the_cost(seed):
    network = _random_dag(seed)
    costs = [solve_profitable_flow(network, flow_cap=cap).total_cost for cap in range(6)]
    costs.append(solve_profitable_flow(network).total_cost)
    assert all(later <= earlier for earlier, later in zip(costs, costs[1:]))
