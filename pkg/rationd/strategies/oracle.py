"""Exact maximum-utility allocation by depth-first enumeration (desk-scale instances)."""
import logging
from fractions import Fraction
from typing import Optional

from rationd import config
from rationd.exceptions import OracleBudgetExceeded
from rationd.model import utility_of
from rationd.schemas import Allocation, Instance, TieBreakOrder
from rationd.solver import AllocationStrategy

logger = logging.getLogger(__name__)

Option = tuple[Fraction, int, int]
"""(utility, category position, day)"""


class _OracleSearch:
    """Branch and bound over agents in input order; each agent takes a slot or stays out"""

    def __init__(self, instance: Instance, model2: bool, budget: int,
                 order: Optional[TieBreakOrder]) -> None:
        self.instance = instance
        self.budget = budget
        self.nodes = 0
        num_agents = len(instance.agents)

        self.supply_left = list(instance.daily_supply)
        self.quota_left = [list(category.daily_quota) for category in instance.categories]
        self.overall_left = [
            category.overall_quota if model2 and category.overall_quota is not None else num_agents
            for category in instance.categories
        ]

        self.options: list[list[Option]] = []
        for agent in instance.agents:
            options = [
                (utility_of(agent.priority, day_index, instance.discount), position, day_index)
                for position, category in enumerate(instance.categories)
                if category.id in agent.eligible
                for day_index in range(1, instance.num_days + 1)
                if agent.available_on(day_index)
            ]
            options.sort(key=lambda option: (-option[0], option[2], option[1]))
            self.options.append(options)

        # REG as integers: 2^(n - rank), so higher precedence weighs more
        self.tie_weight = [
            (1 << (num_agents - order.rank(agent.id))) if order is not None else 0
            for agent in instance.agents
        ]

        # suffix bounds: best single option per agent, from agent k onwards
        self.utility_bound = [Fraction(0)] * (num_agents + 1)
        self.tie_bound = [0] * (num_agents + 1)
        for k in range(num_agents - 1, -1, -1):
            has_option = bool(self.options[k])
            self.utility_bound[k] = self.utility_bound[k + 1] + (self.options[k][0][0] if has_option else 0)
            self.tie_bound[k] = self.tie_bound[k + 1] + (self.tie_weight[k] if has_option else 0)

        self.current: list[Optional[tuple[int, int]]] = [None] * num_agents
        self.best: list[Optional[tuple[int, int]]] = [None] * num_agents
        self.best_score: tuple[Fraction, int] = (Fraction(-1), -1)

    def run(self) -> list[Optional[tuple[int, int]]]:
        self._visit(0, Fraction(0), 0)
        logger.debug(f"oracle visited {self.nodes} nodes, best utility {self.best_score[0]}")
        return self.best

    def _visit(self, k: int, utility: Fraction, tie: int) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise OracleBudgetExceeded(f"Exact oracle exceeded its budget of {self.budget} nodes")

        if k == len(self.options):
            if (utility, tie) > self.best_score:
                self.best_score = (utility, tie)
                self.best = list(self.current)
            return

        if (utility + self.utility_bound[k], tie + self.tie_bound[k]) <= self.best_score:
            return

        for value, position, day_index in self.options[k]:
            if (self.supply_left[day_index - 1] <= 0 or self.quota_left[position][day_index - 1] <= 0
                    or self.overall_left[position] <= 0):
                continue
            self._take(position, day_index, -1)
            self.current[k] = (position, day_index)
            self._visit(k + 1, utility + value, tie + self.tie_weight[k])
            self.current[k] = None
            self._take(position, day_index, 1)

        self._visit(k + 1, utility, tie)

    def _take(self, position: int, day_index: int, delta: int) -> None:
        self.supply_left[day_index - 1] += delta
        self.quota_left[position][day_index - 1] += delta
        self.overall_left[position] += delta


def solve_exact_oracle(instance: Instance, model2: bool = False,
                       budget: int = config.DEFAULT_ORACLE_BUDGET,
                       order: Optional[TieBreakOrder] = None) -> Allocation:
    """Exact optimum; with an order, lexicographically maximizes (utility, sum of 2^-rank)"""
    size = len(instance.agents) * instance.num_days * len(instance.categories)
    if size > budget:
        raise OracleBudgetExceeded(
            f"Instance size {len(instance.agents)}x{instance.num_days}x{len(instance.categories)} "
            f"exceeds the oracle budget of {budget}")
    if order is not None:
        order.check(instance)

    best = _OracleSearch(instance, model2, budget, order).run()
    matches = {
        agent.id: (instance.categories[slot[0]].id, slot[1])
        for agent, slot in zip(instance.agents, best)
        if slot is not None
    }
    return Allocation.from_matches(instance, matches)


class OracleStrategy(AllocationStrategy):
    """Exact enumeration, Model 1 or Model 2"""

    def __init__(self, model2: bool = False, budget: int = config.DEFAULT_ORACLE_BUDGET,
                 order: Optional[TieBreakOrder] = None) -> None:
        self.model2 = model2
        self.name = "oracle2" if model2 else "oracle"
        self.budget = budget
        self.order = order

    def allocate(self, instance: Instance) -> Allocation:
        return solve_exact_oracle(instance, model2=self.model2, budget=self.budget, order=self.order)
