"""Integer min-cost flow: successive shortest paths with node potentials.

Used by the offline reduction and by the daily b-matching of the online
algorithm. Augmentation continues while the cheapest residual source-sink
path has negative cost and the flow cap is not reached, so the result is a
minimum-cost flow among all flows of value at most the cap.
"""
import heapq
import logging
from collections import deque
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from rationd.exceptions import NegativeCycleError

logger = logging.getLogger(__name__)

INF = float("inf")


class Arc(BaseModel):
    """Directed arc with integer capacity and cost"""
    model_config = ConfigDict(frozen=True)

    tail: int = Field(title="Tail node")
    head: int = Field(title="Head node")
    capacity: int = Field(title="Capacity", ge=0)
    cost: int = Field(title="Cost per unit of flow")


class FlowNetwork(BaseModel):
    """Flow network with distinguished source and sink"""
    model_config = ConfigDict(frozen=True)

    num_nodes: int = Field(title="Number of nodes", gt=0)
    source: int = Field(title="Source node")
    sink: int = Field(title="Sink node")
    arcs: tuple[Arc, ...] = Field(title="Arcs", default=())

    @model_validator(mode="after")
    def check_structure(self) -> "FlowNetwork":
        """Reject self-loops, dangling ids, arcs out of the sink or into the source"""
        nodes = range(self.num_nodes)
        if self.source not in nodes or self.sink not in nodes or self.source == self.sink:
            raise ValueError("source and sink must be distinct nodes of the network")
        for index, arc in enumerate(self.arcs):
            if arc.tail not in nodes or arc.head not in nodes:
                raise ValueError(f"arc {index} references a node outside 0..{self.num_nodes - 1}")
            if arc.tail == arc.head:
                raise ValueError(f"arc {index} is a self-loop on node {arc.tail}")
            if arc.tail == self.sink:
                raise ValueError(f"arc {index} leaves the sink")
            if arc.head == self.source:
                raise ValueError(f"arc {index} enters the source")
        return self


class FlowResult(BaseModel):
    """Arc flows, flow value and cost"""
    model_config = ConfigDict(frozen=True)

    arc_flows: tuple[int, ...] = Field(title="Flow per arc")
    total_flow: int = Field(title="Net flow out of the source")
    total_cost: int = Field(title="Total cost")


class _ResidualGraph:
    """Paired forward/backward residual edges; edge e and e ^ 1 are twins"""

    def __init__(self, network: FlowNetwork) -> None:
        self.num_nodes = network.num_nodes
        self.head: list[int] = []
        self.capacity: list[int] = []
        self.cost: list[int] = []
        self.adjacency: list[list[int]] = [[] for _ in range(network.num_nodes)]
        self.potential: list[int] = [0] * network.num_nodes
        for arc in network.arcs:
            self._add(arc.tail, arc.head, arc.capacity, arc.cost)

    def _add(self, tail: int, head: int, capacity: int, cost: int) -> None:
        index = len(self.head)
        self.head += [head, tail]
        self.capacity += [capacity, 0]
        self.cost += [cost, -cost]
        self.adjacency[tail].append(index)
        self.adjacency[head].append(index + 1)

    def tail(self, edge: int) -> int:
        return self.head[edge ^ 1]

    def reduced_cost(self, edge: int) -> int:
        return self.cost[edge] + self.potential[self.tail(edge)] - self.potential[self.head[edge]]

    def init_potential(self, source: int) -> None:
        """Label-correcting shortest paths from the source; absorbs negative costs"""
        dist: list[float] = [INF] * self.num_nodes
        hops = [0] * self.num_nodes
        in_queue = [False] * self.num_nodes
        dist[source] = 0
        queue = deque([source])
        in_queue[source] = True
        while queue:
            u = queue.popleft()
            in_queue[u] = False
            for edge in self.adjacency[u]:
                if self.capacity[edge] <= 0:
                    continue
                v = self.head[edge]
                candidate = dist[u] + self.cost[edge]
                if candidate < dist[v]:
                    dist[v] = candidate
                    hops[v] = hops[u] + 1
                    if hops[v] >= self.num_nodes:
                        raise NegativeCycleError("Negative-cost cycle reachable from the source")
                    if not in_queue[v]:
                        queue.append(v)
                        in_queue[v] = True
        self.potential = [int(d) if d < INF else 0 for d in dist]

    def shortest_path_phase(self, source: int, sink: int) -> Optional[int]:
        """Dijkstra on reduced costs; updates potentials and returns the s-t path cost"""
        dist: list[float] = [INF] * self.num_nodes
        dist[source] = 0
        heap: list[tuple[int, int]] = [(0, source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for edge in self.adjacency[u]:
                if self.capacity[edge] <= 0:
                    continue
                v = self.head[edge]
                candidate = d + self.cost[edge] + self.potential[u] - self.potential[v]
                if candidate < dist[v]:
                    dist[v] = candidate
                    heapq.heappush(heap, (candidate, v))

        to_sink = dist[sink]
        if to_sink == INF:
            return None
        for node in range(self.num_nodes):
            self.potential[node] += int(min(dist[node], to_sink))
        return self.potential[sink] - self.potential[source]

    def push_blocking_flow(self, source: int, sink: int, limit: Optional[int]) -> int:
        """Saturate zero-reduced-cost paths level by level; returns the amount pushed"""
        pushed = 0
        while limit is None or pushed < limit:
            level = self._admissible_levels(source)
            if level[sink] < 0:
                break
            step = self._push_level_graph(source, sink, level, None if limit is None else limit - pushed)
            if step == 0:
                break
            pushed += step
        return pushed

    def _admissible_levels(self, source: int) -> list[int]:
        level = [-1] * self.num_nodes
        level[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for edge in self.adjacency[u]:
                v = self.head[edge]
                if level[v] < 0 and self.capacity[edge] > 0 and self.reduced_cost(edge) == 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level

    def _push_level_graph(self, source: int, sink: int, level: list[int], limit: Optional[int]) -> int:
        pointer = [0] * self.num_nodes
        pushed = 0
        while limit is None or pushed < limit:
            path: list[int] = []
            u = source
            while u != sink:
                adjacency = self.adjacency[u]
                advanced = False
                while pointer[u] < len(adjacency):
                    edge = adjacency[pointer[u]]
                    v = self.head[edge]
                    if self.capacity[edge] > 0 and level[v] == level[u] + 1 and self.reduced_cost(edge) == 0:
                        path.append(edge)
                        u = v
                        advanced = True
                        break
                    pointer[u] += 1
                if advanced:
                    continue
                if u == source:
                    return pushed
                # dead end: retreat and skip the edge that led here
                level[u] = -1
                edge = path.pop()
                u = self.tail(edge)
                pointer[u] += 1

            amount = min(self.capacity[edge] for edge in path)
            if limit is not None:
                amount = min(amount, limit - pushed)
            for edge in path:
                self.capacity[edge] -= amount
                self.capacity[edge ^ 1] += amount
            pushed += amount
        return pushed


def solve_profitable_flow(network: FlowNetwork, flow_cap: Optional[int] = None) -> FlowResult:
    """Minimum-cost flow among flows of value at most flow_cap (None = unbounded)"""
    if flow_cap is not None and flow_cap < 0:
        raise ValueError(f"flow_cap must be non-negative, got {flow_cap}")

    residual = _ResidualGraph(network)
    residual.init_potential(network.source)

    total_flow = 0
    phases = 0
    while flow_cap is None or total_flow < flow_cap:
        path_cost = residual.shortest_path_phase(network.source, network.sink)
        if path_cost is None or path_cost >= 0:
            break
        remaining = None if flow_cap is None else flow_cap - total_flow
        pushed = residual.push_blocking_flow(network.source, network.sink, remaining)
        if pushed == 0:
            break
        total_flow += pushed
        phases += 1

    arc_flows = tuple(residual.capacity[2 * index + 1] for index in range(len(network.arcs)))
    total_cost = sum(flow * arc.cost for flow, arc in zip(arc_flows, network.arcs))
    logger.debug(f"flow {total_flow} at cost {total_cost} after {phases} phases "
                 f"({network.num_nodes} nodes, {len(network.arcs)} arcs)")
    return FlowResult(arc_flows=arc_flows, total_flow=total_flow, total_cost=total_cost)


def flow_violations(network: FlowNetwork, result: FlowResult) -> list[str]:
    """Capacity and conservation breaches of a result (empty when valid)"""
    problems = []
    if len(result.arc_flows) != len(network.arcs):
        return [f"{len(result.arc_flows)} flows for {len(network.arcs)} arcs"]

    balance = [0] * network.num_nodes
    for index, (flow, arc) in enumerate(zip(result.arc_flows, network.arcs)):
        if not 0 <= flow <= arc.capacity:
            problems.append(f"arc {index} carries {flow} outside [0, {arc.capacity}]")
        balance[arc.tail] -= flow
        balance[arc.head] += flow

    for node, net in enumerate(balance):
        if node not in (network.source, network.sink) and net != 0:
            problems.append(f"node {node} is unbalanced by {net}")
    if -balance[network.source] != result.total_flow:
        problems.append(f"source emits {-balance[network.source]} but total_flow is {result.total_flow}")
    cost = sum(flow * arc.cost for flow, arc in zip(result.arc_flows, network.arcs))
    if cost != result.total_cost:
        problems.append(f"arc costs sum to {cost} but total_cost is {result.total_cost}")
    return problems
