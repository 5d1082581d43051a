"""Independent checks of online runs and allocations."""
import logging

import networkx as nx
from pydantic import BaseModel, ConfigDict

from rationd.model import check_allocation, find_addable_agent
from rationd.schemas import Allocation, Instance
from rationd.strategies.online import DayGraph, OnlineTrace

logger = logging.getLogger(__name__)


class DailyMaximumCheck(BaseModel):
    """Committed matching size against the maximum capped b-matching size of a day"""
    model_config = ConfigDict(frozen=True)

    day: int
    matched: int
    maximum: int

    @property
    def ok(self) -> bool:
        return self.matched == self.maximum


def maximum_matching_size(graph: DayGraph) -> int:
    """Maximum-cardinality capped b-matching size, by networkx max flow"""
    if not graph.edges or graph.size_cap <= 0:
        return 0
    network = nx.DiGraph()
    network.add_edge("source", "gate", capacity=graph.size_cap)
    for agent_id in graph.agents:
        network.add_edge("gate", ("agent", agent_id), capacity=1)
    for agent_id, category_id in graph.edges:
        network.add_edge(("agent", agent_id), ("category", category_id), capacity=1)
    for category_id in graph.categories:
        network.add_edge(("category", category_id), "sink", capacity=graph.capacity(category_id))
    return int(nx.maximum_flow_value(network, "source", "sink"))


def verify_daily_maximum(trace: OnlineTrace) -> list[DailyMaximumCheck]:
    """One check per day of an online run"""
    checks = [
        DailyMaximumCheck(day=record.graph.day_index, matched=len(record.matching),
                          maximum=maximum_matching_size(record.graph))
        for record in trace.days
    ]
    for check in checks:
        if not check.ok:
            logger.error(f"day {check.day} matched {check.matched} of a possible {check.maximum}")
    return checks


def is_non_wasteful(instance: Instance, alloc: Allocation, model2: bool = False) -> bool:
    """Feasible and no agent can be added without breaking a constraint"""
    return check_allocation(instance, alloc, model2).ok and find_addable_agent(instance, alloc, model2) is None
