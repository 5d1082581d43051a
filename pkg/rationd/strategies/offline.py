"""Offline optimum for Model 1 through the min-cost-flow reduction.

Layers: source -> day d_j (cap s_j) -> category-day c_ij (cap q_ij) ->
agent a_k (cap 1, cost = -scaled utility) -> sink (cap 1). A unit of flow
through c_ij -> a_k matches a_k under c_i on d_j.
"""
import math
import logging
from enum import StrEnum
import functools
from fractions import Fraction
from typing import Callable, Iterator, Optional

from pydantic import BaseModel, ConfigDict, Field

from rationd import config
from rationd.flow import Arc, FlowNetwork, FlowResult, solve_profitable_flow
from rationd.model import utility_of
from rationd.schemas import Allocation, Instance, TieBreakOrder
from rationd.solver import AllocationStrategy

logger = logging.getLogger(__name__)


class ArcRole(StrEnum):
    """Semantic family of a reduction arc"""
    SUPPLY = "supply"
    QUOTA = "quota"
    ASSIGNMENT = "assignment"
    SINK = "sink"


class ArcEntity(BaseModel):
    """What a reduction arc stands for"""
    model_config = ConfigDict(frozen=True)

    role: ArcRole
    day: Optional[int] = None
    category: Optional[str] = None
    agent: Optional[str] = None


class ReductionMap(BaseModel):
    """Arc index <-> entity correspondence of one reduction"""
    model_config = ConfigDict(frozen=True)

    entities: tuple[ArcEntity, ...] = Field(title="Entity per arc index")
    scale: int = Field(title="Utility scale (common denominator)")

    @functools.cached_property
    def arc_index(self) -> dict[ArcEntity, int]:
        """Entity -> arc index"""
        return {entity: index for index, entity in enumerate(self.entities)}

    def entity(self, arc: int) -> ArcEntity:
        """Entity behind an arc"""
        return self.entities[arc]

    def arc_of(self, entity: ArcEntity) -> int:
        """Arc carrying an entity"""
        return self.arc_index[entity]

    def assignment_arcs(self) -> Iterator[tuple[int, ArcEntity]]:
        """(arc index, entity) of every agent-category-day arc"""
        for index, entity in enumerate(self.entities):
            if entity.role == ArcRole.ASSIGNMENT:
                yield index, entity


def _eligible_pairs(instance: Instance) -> Iterator[tuple[int, int, int]]:
    """(agent position, category position, day) triples that may carry flow"""
    for agent_position, agent in enumerate(instance.agents):
        for category_position, category in enumerate(instance.categories):
            if category.id not in agent.eligible:
                continue
            for day_index in range(1, instance.num_days + 1):
                if agent.available_on(day_index):
                    yield agent_position, category_position, day_index


def utility_scale(instance: Instance) -> int:
    """Least common denominator of every utility the reduction can realize"""
    denominators = {
        utility_of(instance.agents[k].priority, day_index, instance.discount).denominator
        for k, _, day_index in _eligible_pairs(instance)
    }
    return math.lcm(*denominators) if denominators else 1


def _build_network(instance: Instance,
                   assignment_cost: Callable[[int, int], int]) -> tuple[FlowNetwork, tuple[ArcEntity, ...], int]:
    """Layered reduction with a caller-chosen cost for agent k on day j"""
    num_days = instance.num_days
    num_categories = len(instance.categories)
    source = 0

    def day_node(day_index: int) -> int:
        return day_index

    def category_node(category_position: int, day_index: int) -> int:
        return 1 + num_days + category_position * num_days + (day_index - 1)

    def agent_node(agent_position: int) -> int:
        return 1 + num_days + num_categories * num_days + agent_position

    sink = 1 + num_days + num_categories * num_days + len(instance.agents)
    arcs: list[Arc] = []
    entities: list[ArcEntity] = []

    for day_index in range(1, num_days + 1):
        arcs.append(Arc(tail=source, head=day_node(day_index),
                        capacity=instance.daily_supply[day_index - 1], cost=0))
        entities.append(ArcEntity(role=ArcRole.SUPPLY, day=day_index))

    for category_position, category in enumerate(instance.categories):
        for day_index in range(1, num_days + 1):
            arcs.append(Arc(tail=day_node(day_index), head=category_node(category_position, day_index),
                            capacity=category.daily_quota[day_index - 1], cost=0))
            entities.append(ArcEntity(role=ArcRole.QUOTA, day=day_index, category=category.id))

    widest = 0
    for agent_position, category_position, day_index in _eligible_pairs(instance):
        cost = assignment_cost(agent_position, day_index)
        widest = max(widest, abs(cost).bit_length())
        arcs.append(Arc(tail=category_node(category_position, day_index), head=agent_node(agent_position),
                        capacity=1, cost=cost))
        entities.append(ArcEntity(role=ArcRole.ASSIGNMENT, day=day_index,
                                  category=instance.categories[category_position].id,
                                  agent=instance.agents[agent_position].id))

    for agent_position, agent in enumerate(instance.agents):
        arcs.append(Arc(tail=agent_node(agent_position), head=sink, capacity=1, cost=0))
        entities.append(ArcEntity(role=ArcRole.SINK, agent=agent.id))

    network = FlowNetwork(num_nodes=sink + 1, source=source, sink=sink, arcs=tuple(arcs))
    return network, tuple(entities), widest


def build_model1_network(instance: Instance) -> tuple[FlowNetwork, ReductionMap]:
    """Flow network whose min-cost flow is a maximum-utility Model 1 allocation"""
    scale = utility_scale(instance)

    def assignment_cost(agent_position: int, day_index: int) -> int:
        utility = utility_of(instance.agents[agent_position].priority, day_index, instance.discount)
        return -int(utility * scale)

    network, entities, widest = _build_network(instance, assignment_cost)
    _log_cost_width(widest)
    return network, ReductionMap(entities=entities, scale=scale)


def _log_cost_width(widest: int) -> None:
    if widest > config.COST_BIT_BUDGET:
        logger.warning(f"scaled costs need {widest} bits; solving with arbitrary-precision integers")
    else:
        logger.debug(f"scaled costs fit in {widest} bits")


def extract_allocation(instance: Instance, result: FlowResult, mapping: ReductionMap) -> Allocation:
    """Read matched (agent, category, day) off the saturated assignment arcs"""
    matches = {
        entity.agent: (entity.category, entity.day)
        for index, entity in mapping.assignment_arcs()
        if result.arc_flows[index] > 0
    }
    return Allocation.from_matches(instance, matches)


def offline_utility_from_flow(result: FlowResult, scale: int) -> Fraction:
    """Utility recovered from a Model 1 flow: minus its cost over the scale"""
    return Fraction(-result.total_cost, scale)


def _warn_overall_quotas(instance: Instance) -> None:
    if any(category.overall_quota is not None for category in instance.categories):
        logger.warning("overall quotas are ignored by the Model 1 offline solver")


def solve_offline_model1(instance: Instance) -> Allocation:
    """Maximum-utility allocation under daily supply and daily quotas"""
    _warn_overall_quotas(instance)
    network, mapping = build_model1_network(instance)
    result = solve_profitable_flow(network)
    logger.debug(f"offline optimum matches {result.total_flow} agents")
    return extract_allocation(instance, result, mapping)


def solve_offline_tiebroken(instance: Instance, order: TieBreakOrder) -> Allocation:
    """Maximum-utility allocation that, among optima, maximizes sum of 2^-rank over matched agents"""
    order.check(instance)
    _warn_overall_quotas(instance)
    scale = utility_scale(instance)
    num_agents = len(instance.agents)
    # one agent contributes at most once, so sum of 2^(n - rank) < 2^n never outweighs a utility unit
    shift = 1 << num_agents

    def assignment_cost(agent_position: int, day_index: int) -> int:
        agent = instance.agents[agent_position]
        utility = int(utility_of(agent.priority, day_index, instance.discount) * scale)
        return -(utility * shift + (1 << (num_agents - order.rank(agent.id))))

    network, entities, widest = _build_network(instance, assignment_cost)
    _log_cost_width(widest)
    result = solve_profitable_flow(network)
    return extract_allocation(instance, result, ReductionMap(entities=entities, scale=scale * shift))


class OfflineFlowStrategy(AllocationStrategy):
    """Model 1 offline optimum, optionally tie-broken by an agent order"""

    name = "offline1"

    def __init__(self, order: Optional[TieBreakOrder] = None) -> None:
        self.order = order

    def allocate(self, instance: Instance) -> Allocation:
        if self.order is None:
            return solve_offline_model1(instance)
        return solve_offline_tiebroken(instance, self.order)
