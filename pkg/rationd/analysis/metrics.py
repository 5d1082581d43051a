"""Remaining fraction of unmatched agents, per day and per group."""
import logging
from collections import Counter
from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field

from rationd.model import utility_of
from rationd.schemas import Allocation, Instance, Rational

logger = logging.getLogger(__name__)

ALL_GROUP = "all"


class MetricsRow(BaseModel):
    """Counts of one group on one day"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    day: int
    group: str
    gamma: int = Field(title="Agents reachable by this day")
    eta: int = Field(title="Agents matched by this day")
    fraction_unvaccinated: Rational = Field(title="1 - eta / gamma, 0 when gamma is 0")
    matched_today: int
    cumulative_utility: Rational


class MetricsSeries(BaseModel):
    """Metric rows ordered by day, then group"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rows: tuple[MetricsRow, ...] = ()

    @property
    def groups(self) -> list[str]:
        return sorted({row.group for row in self.rows})

    def row(self, day: int, group: str = ALL_GROUP) -> MetricsRow:
        """Row of one (day, group)"""
        for candidate in self.rows:
            if candidate.day == day and candidate.group == group:
                return candidate
        raise KeyError(f"No metrics for group {group!r} on day {day}")

    def curve(self, group: str = ALL_GROUP) -> list[Fraction]:
        """Fraction unvaccinated per day for one group"""
        return [row.fraction_unvaccinated for row in self.rows if row.group == group]


def _reachable_days(instance: Instance, alloc: Allocation, model2: bool) -> dict[str, int]:
    """First day on which each agent could have been matched"""
    used_before: Counter[str] = Counter()
    first_day: dict[str, int] = {}
    for day_index in range(1, instance.num_days + 1):
        supply = instance.daily_supply[day_index - 1]
        open_categories = set()
        for category in instance.categories:
            capacity = min(category.daily_quota[day_index - 1], supply)
            if model2 and category.overall_quota is not None:
                capacity = min(capacity, category.overall_quota - used_before[category.id])
            if capacity > 0:
                open_categories.add(category.id)

        for agent in instance.agents:
            if agent.id not in first_day and agent.available_on(day_index) and agent.eligible & open_categories:
                first_day[agent.id] = day_index

        for _, slot in alloc.matched():
            if slot.day == day_index:
                used_before[slot.category] += 1
    return first_day


def compute_metrics(instance: Instance, alloc: Allocation, model2: bool = False) -> MetricsSeries:
    """gamma, eta and the remaining unmatched fraction for every day and group label"""
    reachable = _reachable_days(instance, alloc, model2)
    labels = sorted({agent.group_label for agent in instance.agents if agent.group_label is not None})
    groups = sorted(labels + [ALL_GROUP])

    rows = []
    for day_index in range(1, instance.num_days + 1):
        for group in groups:
            members = [agent for agent in instance.agents if group == ALL_GROUP or agent.group_label == group]
            gamma = sum(1 for agent in members if reachable.get(agent.id, instance.num_days + 1) <= day_index)
            matched_days = {agent.id: alloc.day_of(agent.id) for agent in members}
            eta = sum(1 for day in matched_days.values() if day is not None and day <= day_index)
            today = sum(1 for day in matched_days.values() if day == day_index)
            utility = sum(
                (utility_of(agent.priority, matched_days[agent.id], instance.discount)
                 for agent in members
                 if matched_days[agent.id] is not None and matched_days[agent.id] <= day_index),
                Fraction(0),
            )
            fraction = 1 - Fraction(eta, gamma) if gamma else Fraction(0)
            rows.append(MetricsRow(day=day_index, group=group, gamma=gamma, eta=eta,
                                   fraction_unvaccinated=fraction, matched_today=today,
                                   cumulative_utility=utility))

    logger.debug(f"computed {len(rows)} metric rows for {len(groups)} groups")
    return MetricsSeries(rows=tuple(rows))
