"""Online-versus-offline comparison runs and priority substitution experiments."""
import time
import logging
from fractions import Fraction
from typing import Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field

from rationd import config
from rationd.exceptions import ContractViolation
from rationd.model import total_utility
from rationd.schemas import Allocation, Instance, Rational, TieBreakOrder
from rationd.strategies import run_online

from .metrics import MetricsSeries, compute_metrics
from .ratio import offline_optimum, competitive_bound, utility_ratio

logger = logging.getLogger(__name__)


def remap_priorities(instance: Instance, mapping: Mapping[Fraction, Fraction]) -> Instance:
    """Replace priority values through an order-preserving map, e.g. 0.96 -> 0.1"""
    ordered = sorted(mapping.items())
    for (low, low_image), (high, high_image) in zip(ordered, ordered[1:]):
        if not low_image < high_image:
            raise ContractViolation(f"Priority map does not preserve order: {low}->{low_image}, {high}->{high_image}")
    missing = {agent.priority for agent in instance.agents} - set(mapping)
    if missing:
        raise ContractViolation(f"Priority map misses values {sorted(missing)}")
    return instance.with_priorities({agent.id: mapping[agent.priority] for agent in instance.agents})


class GroupComparison(BaseModel):
    """Days on which the higher-priority group had a larger unmatched fraction"""
    model_config = ConfigDict(frozen=True)

    high_group: str
    low_group: str
    violations: tuple[int, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def compare_groups(series: MetricsSeries, high_group: str, low_group: str) -> GroupComparison:
    """Check the high group's curve stays weakly below the low group's on every day"""
    high, low = series.curve(high_group), series.curve(low_group)
    violations = tuple(day for day, (h, l) in enumerate(zip(high, low), start=1) if h > l)
    return GroupComparison(high_group=high_group, low_group=low_group, violations=violations)


class ComparisonResult(BaseModel):
    """Both allocations of an instance with their metrics and the ratio against the bound"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    online: Allocation
    offline: Allocation
    online_utility: Rational
    offline_utility: Rational
    ratio: Optional[Rational] = Field(title="OPT/ALG, None when ALG is zero and OPT is not")
    bound: Rational
    online_metrics: MetricsSeries
    offline_metrics: MetricsSeries
    online_seconds: float
    offline_seconds: float

    @property
    def tight(self) -> bool:
        """Ratio reaches the bound"""
        return self.ratio is not None and self.ratio == self.bound

    @property
    def within_bound(self) -> bool:
        return self.ratio is not None and 1 <= self.ratio <= self.bound


def run_comparison(instance: Instance, model2: bool = False, order: Optional[TieBreakOrder] = None,
                   adversarial: bool = False, budget: int = config.DEFAULT_ORACLE_BUDGET) -> ComparisonResult:
    """Run online and offline on one instance"""
    start = time.perf_counter()
    online = run_online(instance, model2, order, adversarial)
    online_seconds = time.perf_counter() - start

    start = time.perf_counter()
    offline = offline_optimum(instance, model2, budget)
    offline_seconds = time.perf_counter() - start

    online_utility = total_utility(instance, online)
    offline_utility = total_utility(instance, offline)
    ratio = utility_ratio(offline_utility, online_utility)
    logger.info(f"online {online_utility} vs offline {offline_utility} "
                f"({online_seconds:.2f}s / {offline_seconds:.2f}s)")

    return ComparisonResult(
        online=online,
        offline=offline,
        online_utility=online_utility,
        offline_utility=offline_utility,
        ratio=ratio if isinstance(ratio, Fraction) else None,
        bound=competitive_bound(instance, model2),
        online_metrics=compute_metrics(instance, online, model2),
        offline_metrics=compute_metrics(instance, offline, model2),
        online_seconds=online_seconds,
        offline_seconds=offline_seconds,
    )
