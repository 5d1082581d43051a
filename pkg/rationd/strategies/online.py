"""Online greedy allocation: one maximum-weight b-matching of size at most s_i per day.

Model 2 additionally tracks the remaining overall quota r_k of every category
and caps the day's category capacity at min(q_ik, r_k). The day loop reads a
single DayView per day plus the day-independent AgentRoster.
"""
import math
import logging
from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from rationd.exceptions import ConfigurationError, ContractViolation
from rationd.flow import Arc, FlowNetwork, solve_profitable_flow
from rationd.schemas import UNMATCHED, Allocation, Assignment, DayView, Instance, Rational, TieBreakOrder
from rationd.solver import AllocationStrategy

logger = logging.getLogger(__name__)

DayMatching = frozenset[tuple[str, str]]
"""(agent id, category id) edges committed on one day"""


class AgentRoster(BaseModel):
    """Day-independent part of an instance: no availability, quotas or supply"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    agents: tuple[str, ...] = Field(title="Agent ids, input order")
    priorities: dict[str, Rational] = Field(title="Priority factor alpha per agent")
    eligible: dict[str, frozenset[str]] = Field(title="Eligible categories per agent")
    categories: tuple[str, ...] = Field(title="Category ids, input order")
    overall_quotas: dict[str, Optional[int]] = Field(title="Overall quota per category (Model 2)")

    @classmethod
    def from_instance(cls, instance: Instance) -> "AgentRoster":
        return cls(
            agents=tuple(agent.id for agent in instance.agents),
            priorities={agent.id: agent.priority for agent in instance.agents},
            eligible={agent.id: frozenset(agent.eligible) for agent in instance.agents},
            categories=tuple(category.id for category in instance.categories),
            overall_quotas={category.id: category.overall_quota for category in instance.categories},
        )


class DailyMatchState(BaseModel):
    """Online state at the start of a day"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    day_index: int = Field(title="Current day, 1-based")
    unmatched_pool: frozenset[str] = Field(title="Agents not matched yet")
    remaining_overall: dict[str, int] = Field(title="Remaining overall quota r_k (Model 2)", default_factory=dict)
    allocation_so_far: Allocation = Field(title="Matches committed on earlier days")

    @classmethod
    def initial(cls, roster: AgentRoster, model2: bool) -> "DailyMatchState":
        """State before day 1"""
        remaining = dict(roster.overall_quotas) if model2 else {}
        return cls(day_index=1,
                   unmatched_pool=frozenset(roster.agents),
                   remaining_overall=remaining,
                   allocation_so_far=Allocation(assignment={agent_id: UNMATCHED for agent_id in roster.agents}))

    def commit(self, matching: DayMatching) -> "DailyMatchState":
        """State of the next day after committing today's matching"""
        remaining = dict(self.remaining_overall)
        assignment = dict(self.allocation_so_far.assignment)
        for agent_id, category_id in matching:
            assignment[agent_id] = Assignment(category=category_id, day=self.day_index)
            if category_id in remaining:
                remaining[category_id] -= 1
        return DailyMatchState(
            day_index=self.day_index + 1,
            unmatched_pool=self.unmatched_pool - {agent_id for agent_id, _ in matching},
            remaining_overall=remaining,
            allocation_so_far=Allocation(assignment=assignment),
        )


class DayGraph(BaseModel):
    """Bipartite graph H_i of one day"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    day_index: int = Field(title="Day, 1-based")
    agents: tuple[str, ...] = Field(title="Available unmatched agents A_i, input order")
    categories: tuple[str, ...] = Field(title="Categories with positive capacity, input order")
    edges: tuple[tuple[str, str], ...] = Field(title="Agent-category edges E_i")
    weights: dict[str, Rational] = Field(title="Edge weight alpha per agent; delta^(i-1) is common to the day")
    capacities: dict[str, int] = Field(title="Category capacity b'")
    size_cap: int = Field(title="Daily supply s_i")

    def weight(self, agent_id: str, category_id: str) -> Fraction:
        """w_i(a, c); equal for every edge of an agent"""
        return self.weights[agent_id]

    def capacity(self, category_id: str) -> int:
        """b' of a category (0 for dropped categories)"""
        return self.capacities.get(category_id, 0)


def build_day_graph(state: DailyMatchState, view: DayView, roster: AgentRoster, model2: bool = False) -> DayGraph:
    """H_i from one day's view and the online state"""
    if view.day_index != state.day_index:
        raise ContractViolation(f"Day view {view.day_index} given on day {state.day_index}")

    capacities = {}
    for category_id in roster.categories:
        quota = view.daily_quota[category_id]
        if model2:
            quota = min(quota, state.remaining_overall[category_id])
        if quota > 0:
            capacities[category_id] = quota

    agents = tuple(agent_id for agent_id in view.available if agent_id in state.unmatched_pool)
    categories = tuple(category_id for category_id in roster.categories if category_id in capacities)
    edges = tuple(
        (agent_id, category_id)
        for agent_id in agents
        for category_id in categories
        if category_id in roster.eligible[agent_id]
    )
    weights = {agent_id: roster.priorities[agent_id] for agent_id in agents}
    return DayGraph(day_index=state.day_index, agents=agents, categories=categories, edges=edges,
                    weights=weights, capacities=capacities, size_cap=view.supply)


def _integer_weights(graph: DayGraph) -> dict[str, int]:
    """Per-agent weights as coprime integers; invariant under a common factor such as delta^(i-1)"""
    if not graph.weights:
        return {}
    scale = math.lcm(*(weight.denominator for weight in graph.weights.values()))
    scaled = {agent_id: int(weight * scale) for agent_id, weight in graph.weights.items()}
    divisor = math.gcd(*scaled.values()) or 1
    return {agent_id: value // divisor for agent_id, value in scaled.items()}


def max_weight_capped_bmatching(graph: DayGraph, order: Optional[TieBreakOrder] = None) -> DayMatching:
    """Maximum-weight b-matching of size at most s_i.

    Ties in weight go to agents earlier in ``order`` (default: graph order),
    then to categories earlier in input order. The matched agent set is the
    unique optimum under these exact composite weights.
    """
    if not graph.edges or graph.size_cap <= 0:
        return frozenset()

    precedence = sorted(graph.agents, key=order.rank) if order is not None else list(graph.agents)
    num_agents = len(graph.agents)
    num_categories = len(graph.categories)
    matchable = min(graph.size_cap, num_agents)
    agent_base = matchable * num_agents + 1
    category_base = matchable * num_categories + 1

    primary = _integer_weights(graph)
    secondary = {agent_id: num_agents - position for position, agent_id in enumerate(precedence)}
    tertiary = {category_id: num_categories - position for position, category_id in enumerate(graph.categories)}

    source, gate = 0, 1
    agent_node = {agent_id: 2 + position for position, agent_id in enumerate(graph.agents)}
    category_node = {category_id: 2 + num_agents + position for position, category_id in enumerate(graph.categories)}
    sink = 2 + num_agents + num_categories

    arcs = [Arc(tail=source, head=gate, capacity=graph.size_cap, cost=0)]
    arcs += [Arc(tail=gate, head=agent_node[agent_id], capacity=1, cost=0) for agent_id in graph.agents]
    edge_offset = len(arcs)
    for agent_id, category_id in graph.edges:
        composite = (primary[agent_id] * agent_base + secondary[agent_id]) * category_base + tertiary[category_id]
        arcs.append(Arc(tail=agent_node[agent_id], head=category_node[category_id], capacity=1, cost=-composite))
    arcs += [Arc(tail=category_node[category_id], head=sink, capacity=graph.capacities[category_id], cost=0)
             for category_id in graph.categories]

    network = FlowNetwork(num_nodes=sink + 1, source=source, sink=sink, arcs=tuple(arcs))
    result = solve_profitable_flow(network, flow_cap=graph.size_cap)
    return frozenset(
        edge for position, edge in enumerate(graph.edges)
        if result.arc_flows[edge_offset + position] > 0
    )


class DayRecord(BaseModel):
    """One day of an online run"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    graph: DayGraph
    matching: DayMatching


class OnlineTrace(BaseModel):
    """Allocation of an online run with every day's graph and matching"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    allocation: Allocation
    days: tuple[DayRecord, ...]


def resolve_order(instance: Instance, order: Optional[TieBreakOrder], adversarial: bool) -> TieBreakOrder:
    """Agent precedence for a run; adversarial inverts it"""
    resolved = order if order is not None else TieBreakOrder.default(instance)
    resolved.check(instance)
    return resolved.inverted() if adversarial else resolved


def run_online_trace(instance: Instance, model2: bool = False, order: Optional[TieBreakOrder] = None,
                     adversarial: bool = False) -> OnlineTrace:
    """Run the online algorithm day by day, keeping the per-day graphs"""
    if model2 and not instance.has_overall_quotas:
        missing = [category.id for category in instance.categories if category.overall_quota is None]
        raise ConfigurationError(f"Model 2 run needs overall quotas; missing on {missing}")

    precedence = resolve_order(instance, order, adversarial)
    roster = AgentRoster.from_instance(instance)
    state = DailyMatchState.initial(roster, model2)
    days = []
    for view in instance.iter_day_views():
        graph = build_day_graph(state, view, roster, model2)
        matching = max_weight_capped_bmatching(graph, precedence)
        logger.debug(f"day {state.day_index}: {len(graph.agents)} candidates, {len(matching)} matched")
        days.append(DayRecord(graph=graph, matching=matching))
        state = state.commit(matching)

    return OnlineTrace(allocation=state.allocation_so_far, days=tuple(days))


def run_online(instance: Instance, model2: bool = False, order: Optional[TieBreakOrder] = None,
               adversarial: bool = False) -> Allocation:
    """Online greedy allocation (Model 1, or Model 2 when model2 is set)"""
    return run_online_trace(instance, model2, order, adversarial).allocation


class OnlineGreedyStrategy(AllocationStrategy):
    """Daily greedy b-matching, Model 1 or Model 2"""

    def __init__(self, model2: bool = False, order: Optional[TieBreakOrder] = None,
                 adversarial: bool = False) -> None:
        self.model2 = model2
        self.name = "online2" if model2 else "online1"
        self.order = order
        self.adversarial = adversarial

    def allocate(self, instance: Instance) -> Allocation:
        return run_online(instance, self.model2, self.order, self.adversarial)
