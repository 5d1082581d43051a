"""Charging-scheme certificate for the online competitive ratio.

Every agent matched offline (N) charges exactly one agent matched online (M)
with factor u_N(charger) / u_M(target). Each online agent offers three slots:
``earlier`` (its own Type 1 self charge, factor <= delta), ``same_day`` (a
charger matched offline on the target's online day, factor <= 1) and, in
Model 2, ``overflow`` (a charger whose offline category is the target's and
whose offline day is later, factor <= alpha_max/alpha_min * delta).
A full assignment bounds OPT by the sum of slot bounds times ALG.
"""
import logging
from enum import StrEnum
from fractions import Fraction
from typing import Iterable, Literal, Mapping, Optional, Union

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field

from rationd.exceptions import ContractViolation
from rationd.model import check_allocation, utility_of
from rationd.schemas import Allocation, Instance, Rational

logger = logging.getLogger(__name__)

Node = tuple[str, str]
"""("agent", id) or ("category", id)"""

DayEdges = Union[Mapping[str, str], Iterable[tuple[str, str]]]


class EdgeLabel(StrEnum):
    """Which day matching an edge of the symmetric difference comes from"""
    M = "M"
    N = "N"


class Component(BaseModel):
    """Alternating path or even cycle of a symmetric difference"""
    model_config = ConfigDict(frozen=True)

    kind: Literal["path", "cycle"]
    nodes: tuple[Node, ...]
    labels: tuple[EdgeLabel, ...]

    def edges(self) -> list[tuple[str, str, EdgeLabel]]:
        """(agent, category, label) of every edge"""
        result = []
        for (left, right), label in zip(zip(self.nodes, self.nodes[1:]), self.labels):
            agent, category = (left[1], right[1]) if left[0] == "agent" else (right[1], left[1])
            result.append((agent, category, label))
        return result


class Decomposition(BaseModel):
    """Edge-disjoint components covering a symmetric difference"""
    model_config = ConfigDict(frozen=True)

    components: tuple[Component, ...] = ()

    def edges(self) -> set[tuple[str, str, EdgeLabel]]:
        """Union of all component edges"""
        return {edge for component in self.components for edge in component.edges()}


def _as_matching(edges: DayEdges, label: str) -> dict[str, str]:
    pairs = edges.items() if isinstance(edges, Mapping) else edges
    matching: dict[str, str] = {}
    for agent_id, category_id in pairs:
        if agent_id in matching:
            raise ContractViolation(f"Agent {agent_id} appears twice in day matching {label}")
        matching[agent_id] = category_id
    return matching


class _Walker:
    """Extracts alternating walks from the symmetric difference"""

    def __init__(self, day_m: dict[str, str], day_n: dict[str, str]) -> None:
        self.edges: list[tuple[str, str, EdgeLabel]] = []
        for matching, label, other in ((day_m, EdgeLabel.M, day_n), (day_n, EdgeLabel.N, day_m)):
            for agent_id, category_id in sorted(matching.items()):
                if other.get(agent_id) != category_id:
                    self.edges.append((agent_id, category_id, label))

        self.used = [False] * len(self.edges)
        self.at_agent: dict[str, dict[EdgeLabel, int]] = {}
        self.at_category: dict[str, list[int]] = {}
        for index, (agent_id, category_id, label) in enumerate(self.edges):
            self.at_agent.setdefault(agent_id, {})[label] = index
            self.at_category.setdefault(category_id, []).append(index)
        for incident in self.at_category.values():
            incident.sort(key=lambda index: self.edges[index][0])

    def unused_at(self, category_id: str, label: EdgeLabel) -> int:
        return sum(1 for index in self.at_category[category_id]
                   if not self.used[index] and self.edges[index][2] == label)

    def _next_edge(self, node: Node, want: Optional[EdgeLabel]) -> Optional[int]:
        kind, name = node
        if kind == "agent":
            incident = self.at_agent[name]
            candidates = [incident[want]] if want in incident else ([] if want else list(incident.values()))
            return next((index for index in candidates if not self.used[index]), None)
        return next((index for index in self.at_category[name]
                     if not self.used[index] and self.edges[index][2] == want), None)

    def walk(self, start: Node, want: Optional[EdgeLabel]) -> Component:
        nodes = [start]
        labels: list[EdgeLabel] = []
        node = start
        while (index := self._next_edge(node, want)) is not None:
            self.used[index] = True
            agent_id, category_id, label = self.edges[index]
            node = ("category", category_id) if node[0] == "agent" else ("agent", agent_id)
            nodes.append(node)
            labels.append(label)
            want = EdgeLabel.N if label == EdgeLabel.M else EdgeLabel.M

        closed = len(nodes) > 2 and nodes[0] == nodes[-1]
        return Component(kind="cycle" if closed else "path", nodes=tuple(nodes), labels=tuple(labels))


def decompose_symmetric_difference(day_m: DayEdges, day_n: DayEdges) -> Decomposition:
    """Split M_i xor N_i into alternating paths and even cycles.

    Walks start from degree-one agents, then from categories holding more
    unused edges of one label, and finally close the remaining cycles from
    agents. At a category the walk continues along the smallest agent id.
    """
    walker = _Walker(_as_matching(day_m, "M"), _as_matching(day_n, "N"))
    components = []

    for agent_id in sorted(walker.at_agent):
        incident = walker.at_agent[agent_id]
        if len(incident) == 1 and not walker.used[next(iter(incident.values()))]:
            components.append(walker.walk(("agent", agent_id), None))

    while True:
        for category_id in sorted(walker.at_category):
            surplus_m = walker.unused_at(category_id, EdgeLabel.M)
            surplus_n = walker.unused_at(category_id, EdgeLabel.N)
            if surplus_m != surplus_n:
                label = EdgeLabel.M if surplus_m > surplus_n else EdgeLabel.N
                components.append(walker.walk(("category", category_id), label))
                break
        else:
            break

    for agent_id in sorted(walker.at_agent):
        index = walker.at_agent[agent_id].get(EdgeLabel.M)
        if index is not None and not walker.used[index]:
            components.append(walker.walk(("agent", agent_id), EdgeLabel.M))

    return Decomposition(components=tuple(components))


class ChargeKind(StrEnum):
    """Slot of the charged agent taken by a charge"""
    EARLIER = "earlier"
    SAME_DAY = "same_day"
    OVERFLOW = "overflow"


class Charge(BaseModel):
    """Charger (matched offline) charges target (matched online)"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    charger: str
    charged: str
    factor: Rational
    kind: ChargeKind
    day: int = Field(title="Charger's offline day")


class ChargingReport(BaseModel):
    """Charging assignment and its load certificate"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    type1_agents: frozenset[str] = Field(title="Matched online on an earlier day than offline")
    charges: tuple[Charge, ...] = Field(title="One charge per offline-matched agent")
    per_target_load: dict[str, tuple[Rational, ...]] = Field(title="Factors charged to each online agent")
    bound_certified: bool
    witness_day: Optional[int] = Field(title="First day without a valid charge", default=None)
    day_sizes: dict[int, tuple[int, int]] = Field(title="(|X_i|, |Y_i|) per day", default_factory=dict)
    repaired: bool = Field(title="Global assignment replaced the day-by-day procedure", default=False)


class _ChargingScheme:
    """Builds the charges for one (online, offline) pair"""

    def __init__(self, instance: Instance, online: Allocation, offline: Allocation, model2: bool) -> None:
        self.instance = instance
        self.online = online
        self.offline = offline
        self.model2 = model2
        priorities = [agent.priority for agent in instance.agents]
        spread = max(priorities) / min(priorities) if priorities else Fraction(1)
        self.bounds = {
            ChargeKind.EARLIER: instance.discount,
            ChargeKind.SAME_DAY: Fraction(1),
            ChargeKind.OVERFLOW: spread * instance.discount,
        }
        self.online_slots = dict(online.matched())
        self.offline_slots = dict(offline.matched())
        self.charges: dict[str, Charge] = {}
        self.taken: set[tuple[str, ChargeKind]] = set()

    def online_utility(self, agent_id: str) -> Fraction:
        slot = self.online_slots[agent_id]
        return utility_of(self.instance.agent(agent_id).priority, slot.day, self.instance.discount)

    def offline_utility(self, agent_id: str) -> Fraction:
        slot = self.offline_slots[agent_id]
        return utility_of(self.instance.agent(agent_id).priority, slot.day, self.instance.discount)

    def factor(self, charger: str, target: str) -> Fraction:
        return self.offline_utility(charger) / self.online_utility(target)

    def admissible(self, charger: str, target: str, kind: ChargeKind) -> bool:
        """Slot shape: own earlier match, a match on the charger's day, or an earlier match in its category"""
        offline, online = self.offline_slots[charger], self.online_slots.get(target)
        if online is None:
            return False
        if kind == ChargeKind.EARLIER:
            return charger == target and online.day < offline.day
        if kind == ChargeKind.SAME_DAY:
            return online.day == offline.day
        return self.model2 and online.day < offline.day and online.category == offline.category

    def free_slots(self, charger: str, targets: Iterable[str]) -> list[tuple[str, ChargeKind]]:
        """Untaken admissible slots within their factor bound"""
        kinds = [ChargeKind.EARLIER, ChargeKind.SAME_DAY] + ([ChargeKind.OVERFLOW] if self.model2 else [])
        return [
            (target, kind)
            for target in targets
            for kind in kinds
            if (target, kind) not in self.taken
            and self.admissible(charger, target, kind)
            and self.factor(charger, target) <= self.bounds[kind]
        ]

    def try_charge(self, charger: str, target: str, kind: ChargeKind) -> bool:
        if charger in self.charges or (target, kind) in self.taken:
            return False
        if not self.admissible(charger, target, kind):
            return False
        factor = self.factor(charger, target)
        if factor > self.bounds[kind]:
            return False
        self.charges[charger] = Charge(charger=charger, charged=target, factor=factor, kind=kind,
                                       day=self.offline_slots[charger].day)
        self.taken.add((target, kind))
        return True

    def type1_agents(self) -> frozenset[str]:
        return frozenset(
            agent_id for agent_id, slot in self.offline_slots.items()
            if agent_id in self.online_slots and self.online_slots[agent_id].day < slot.day
        )

    def path_partners(self, day_y: dict[str, str], day_x: dict[str, str]) -> dict[str, str]:
        """Charger -> target at the two agent ends of an alternating path of M_i xor N_i"""
        partners = {}
        for component in decompose_symmetric_difference(day_y, day_x).components:
            if component.kind != "path":
                continue
            (first_kind, first), (last_kind, last) = component.nodes[0], component.nodes[-1]
            if first_kind == "agent" and last_kind == "agent":
                charger, target = (first, last) if component.labels[0] == EdgeLabel.N else (last, first)
                partners[charger] = target
        return partners

    def _slot_weight(self, charger: str, target: str, kind: ChargeKind, partners: dict[str, str]) -> int:
        if kind == ChargeKind.OVERFLOW:
            return 1
        if charger == target:
            return 4
        return 3 if partners.get(charger) == target else 2

    def charge_day(self, day_index: int, type1: frozenset[str]) -> tuple[int, int]:
        """Charge X_i as one maximum-cardinality matching onto free slots.

        Among maximum matchings, same-day slots win over overflow slots and
        self charges and path partners win over other same-day targets.
        """
        day_x = {agent_id: slot.category for agent_id, slot in self.offline_slots.items()
                 if slot.day == day_index and agent_id not in type1}
        day_y = self.online.on_day(day_index)
        partners = self.path_partners(day_y, day_x)
        targets = sorted(agent_id for agent_id, slot in self.online_slots.items() if slot.day <= day_index)

        graph = nx.Graph()
        for charger in sorted(day_x):
            for target, kind in self.free_slots(charger, targets):
                graph.add_edge(("charger", charger), ("slot", target, kind.value),
                               weight=self._slot_weight(charger, target, kind, partners))

        for left, right in sorted(nx.max_weight_matching(graph, maxcardinality=True)):
            charger_node, slot_node = (left, right) if left[0] == "charger" else (right, left)
            self.try_charge(charger_node[1], slot_node[1], ChargeKind(slot_node[2]))

        return len(day_x), len(day_y)

    def repair(self, type1: frozenset[str]) -> None:
        """Re-assign every non-Type-1 charge as one bipartite matching over admissible free slots"""
        logger.warning("day-by-day charging left agents uncharged; solving a global assignment")
        for charger in [agent_id for agent_id in self.charges if agent_id not in type1]:
            charge = self.charges.pop(charger)
            self.taken.discard((charge.charged, charge.kind))

        graph = nx.Graph()
        chargers = [("charger", agent_id) for agent_id in sorted(self.offline_slots) if agent_id not in type1]
        graph.add_nodes_from(chargers)
        targets = sorted(self.online_slots)
        for _, charger in chargers:
            for target, kind in self.free_slots(charger, targets):
                graph.add_edge(("charger", charger), ("slot", target, kind.value))

        matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=chargers)
        for node in chargers:
            slot = matching.get(node)
            if slot is not None:
                self.try_charge(node[1], slot[1], ChargeKind(slot[2]))

    def certified(self) -> bool:
        loads: dict[str, list[ChargeKind]] = {}
        for charge in self.charges.values():
            if charge.factor > self.bounds[charge.kind]:
                return False
            if not self.admissible(charge.charger, charge.charged, charge.kind):
                return False
            loads.setdefault(charge.charged, []).append(charge.kind)
        limit = 3 if self.model2 else 2
        return (set(self.charges) == set(self.offline_slots)
                and all(len(kinds) <= limit and len(set(kinds)) == len(kinds) for kinds in loads.values()))


def build_charging_report(instance: Instance, online_alloc: Allocation, offline_alloc: Allocation,
                          model2: bool = False) -> ChargingReport:
    """Charge every offline-matched agent to an online-matched agent and certify the loads"""
    for name, alloc in (("online", online_alloc), ("offline", offline_alloc)):
        report = check_allocation(instance, alloc, model2)
        if not report.ok:
            raise ContractViolation(f"{name} allocation is infeasible: {report.violations[0].message}")

    scheme = _ChargingScheme(instance, online_alloc, offline_alloc, model2)
    type1 = scheme.type1_agents()
    for agent_id in sorted(type1):
        scheme.try_charge(agent_id, agent_id, ChargeKind.EARLIER)

    day_sizes = {day_index: scheme.charge_day(day_index, type1) for day_index in range(1, instance.num_days + 1)}

    repaired = set(scheme.charges) != set(scheme.offline_slots)
    if repaired:
        scheme.repair(type1)

    uncharged = sorted(set(scheme.offline_slots) - set(scheme.charges),
                       key=lambda agent_id: scheme.offline_slots[agent_id].day)
    witness_day = scheme.offline_slots[uncharged[0]].day if uncharged else None
    certified = scheme.certified()
    if not certified:
        logger.warning(f"charging certificate failed (witness day {witness_day})")

    charges = tuple(sorted(scheme.charges.values(), key=lambda charge: (charge.day, charge.charger)))
    per_target_load: dict[str, tuple[Fraction, ...]] = {}
    for charge in charges:
        per_target_load[charge.charged] = per_target_load.get(charge.charged, ()) + (charge.factor,)

    return ChargingReport(type1_agents=type1, charges=charges, per_target_load=per_target_load,
                          bound_certified=certified, witness_day=witness_day, day_sizes=day_sizes,
                          repaired=repaired)
