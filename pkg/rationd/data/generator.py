"""Synthetic instances shaped like the hospital vaccination data.

Hospitals are nodes of a seeded random geometric graph; every hospital is a
category and its cluster (hospitals within ``cluster_radius_links`` hops) is
the eligibility set of every agent living there.
"""
import logging
from fractions import Fraction
from typing import Optional

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from rationd import config
from rationd.schemas import Agent, Category, Instance, Rational

logger = logging.getLogger(__name__)


class GroupSpec(BaseModel):
    """Population group: label, sampling weight and priority"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    label: str
    weight: float = Field(title="Population weight", gt=0)
    priority: Rational = Field(title="Priority factor alpha")

    @field_validator("priority")
    @classmethod
    def priority_in_open_unit_interval(cls, priority: Fraction) -> Fraction:
        if not 0 < priority < 1:
            raise ValueError(f"priority {priority} outside (0, 1)")
        return priority


class SupplyModel(BaseModel):
    """Daily quotas uniform on [quota_low, quota_high]; supply a share of their sum"""
    model_config = ConfigDict(frozen=True)

    quota_low: int = Field(title="Smallest daily quota", ge=0, default=1)
    quota_high: int = Field(title="Largest daily quota", ge=0, default=5)
    supply_ratio: float = Field(title="Daily supply over the day's quota total", ge=0, default=0.8)
    overall_quota_ratio: Optional[float] = Field(
        title="Overall quota over the category's quota total (Model 2)", ge=0, le=1, default=None)

    @model_validator(mode="after")
    def check_range(self) -> "SupplyModel":
        if self.quota_low > self.quota_high:
            raise ValueError(f"quota_low {self.quota_low} exceeds quota_high {self.quota_high}")
        return self


def _default_groups() -> tuple[GroupSpec, ...]:
    return tuple(GroupSpec(label=label, weight=1.0, priority=priority) for label, priority in config.DEFAULT_GROUPS)


class GeneratorConfig(BaseModel):
    """Generator parameters; defaults follow the hospital study"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    num_agents: int = Field(title="Number of agents", gt=0, default=10000)
    num_days: int = Field(title="Number of days", gt=0, default=30)
    num_hospitals: int = Field(title="Number of hospitals (categories)", gt=0, default=24)
    cluster_radius_links: int = Field(title="Cluster radius in graph hops", ge=0, default=1)
    connection_radius: float = Field(title="Geometric graph radius in the unit square", gt=0, default=0.25)
    availability_density: float = Field(title="Availability probability per agent-day", ge=0, le=1, default=0.5)
    group_specs: tuple[GroupSpec, ...] = Field(title="Population groups", default_factory=_default_groups)
    discount: Rational = Field(title="Discount factor delta", default=config.DEFAULT_DISCOUNT)
    supply_model: SupplyModel = Field(title="Quota and supply parameters", default_factory=SupplyModel)
    seed: int = Field(title="Random seed", ge=0, lt=2**64, default=0)

    @field_validator("discount")
    @classmethod
    def discount_in_open_unit_interval(cls, discount: Fraction) -> Fraction:
        if not 0 < discount < 1:
            raise ValueError(f"discount {discount} outside (0, 1)")
        return discount

    @field_validator("group_specs")
    @classmethod
    def at_least_one_group(cls, groups: tuple[GroupSpec, ...]) -> tuple[GroupSpec, ...]:
        if not groups:
            raise ValueError("at least one group is required")
        if len({group.label for group in groups}) != len(groups):
            raise ValueError("group labels must be distinct")
        return groups


def hospital_clusters(num_hospitals: int, connection_radius: float, radius_links: int,
                      seed: int) -> list[list[int]]:
    """Hospitals within radius_links hops of each hospital, itself included"""
    graph = nx.random_geometric_graph(num_hospitals, connection_radius, seed=seed)
    return [
        sorted(nx.single_source_shortest_path_length(graph, hospital, cutoff=radius_links))
        for hospital in range(num_hospitals)
    ]


def generate(generator_config: GeneratorConfig) -> Instance:
    """Seeded random instance; identical config gives an identical instance"""
    rng = np.random.default_rng(generator_config.seed)
    num_agents = generator_config.num_agents
    num_days = generator_config.num_days
    num_hospitals = generator_config.num_hospitals
    supply = generator_config.supply_model

    clusters = hospital_clusters(num_hospitals, generator_config.connection_radius,
                                 generator_config.cluster_radius_links, generator_config.seed % 2**32)
    category_ids = [f"h{hospital:0{len(str(num_hospitals - 1))}d}" for hospital in range(num_hospitals)]

    quotas = rng.integers(supply.quota_low, supply.quota_high + 1, size=(num_hospitals, num_days))
    categories = []
    for hospital, category_id in enumerate(category_ids):
        overall = None
        if supply.overall_quota_ratio is not None:
            overall = int(np.floor(supply.overall_quota_ratio * int(quotas[hospital].sum())))
        categories.append(Category(id=category_id, daily_quota=tuple(int(q) for q in quotas[hospital]),
                                   overall_quota=overall))
    daily_supply = tuple(int(np.floor(supply.supply_ratio * int(total))) for total in quotas.sum(axis=0))

    homes = rng.integers(0, num_hospitals, size=num_agents)
    availability = rng.random((num_agents, num_days)) < generator_config.availability_density
    weights = np.array([group.weight for group in generator_config.group_specs], dtype=float)
    group_index = rng.choice(len(generator_config.group_specs), size=num_agents, p=weights / weights.sum())

    width = len(str(num_agents - 1))
    agents = []
    for k in range(num_agents):
        group = generator_config.group_specs[int(group_index[k])]
        agents.append(Agent(
            id=f"a{k:0{width}d}",
            priority=group.priority,
            availability=tuple(bool(bit) for bit in availability[k]),
            eligible=frozenset(category_ids[hospital] for hospital in clusters[int(homes[k])]),
            group_label=group.label,
        ))

    logger.info(f"generated {num_agents} agents, {num_hospitals} hospitals, {num_days} days "
                f"(seed {generator_config.seed})")
    return Instance(agents=tuple(agents), categories=tuple(categories), num_days=num_days,
                    daily_supply=daily_supply, discount=generator_config.discount)


class InstanceBounds(BaseModel):
    """Size limits of the small random instances used for property checks"""
    model_config = ConfigDict(frozen=True)

    max_agents: int = Field(default=6, gt=0)
    max_days: int = Field(default=3, gt=0)
    max_categories: int = Field(default=3, gt=0)
    max_capacity: int = Field(title="Largest supply or quota", default=2, ge=0)
    model2: bool = Field(title="Draw overall quotas", default=False)
    distinct_priorities: bool = Field(title="No two agents share a priority", default=False)
    availability_density: float = Field(default=0.6, ge=0, le=1)
    eligibility_density: float = Field(default=0.6, ge=0, le=1)


PRIORITY_GRID = tuple(Fraction(k, 100) for k in range(1, 100))
DISCOUNT_GRID = (Fraction(1, 2), Fraction(3, 4), Fraction(9, 10), Fraction(19, 20))


def sample_instance(seed: int, bounds: InstanceBounds = InstanceBounds()) -> Instance:
    """Small random instance; exact priorities on a 1/100 grid"""
    rng = np.random.default_rng(seed)
    num_agents = int(rng.integers(1, bounds.max_agents + 1))
    num_days = int(rng.integers(1, bounds.max_days + 1))
    num_categories = int(rng.integers(1, bounds.max_categories + 1))

    categories = []
    for position in range(num_categories):
        daily_quota = tuple(int(q) for q in rng.integers(0, bounds.max_capacity + 1, size=num_days))
        overall = int(rng.integers(0, bounds.max_capacity * num_days + 1)) if bounds.model2 else None
        categories.append(Category(id=f"c{position + 1}", daily_quota=daily_quota, overall_quota=overall))

    if bounds.distinct_priorities:
        picks = rng.choice(len(PRIORITY_GRID), size=num_agents, replace=False)
    else:
        picks = rng.integers(0, len(PRIORITY_GRID), size=num_agents)

    agents = []
    for k in range(num_agents):
        eligible = frozenset(category.id for category in categories if rng.random() < bounds.eligibility_density)
        availability = tuple(bool(bit) for bit in rng.random(num_days) < bounds.availability_density)
        agents.append(Agent(id=f"a{k + 1}", priority=PRIORITY_GRID[int(picks[k])],
                            availability=availability, eligible=eligible))

    daily_supply = tuple(int(s) for s in rng.integers(0, bounds.max_capacity + 1, size=num_days))
    discount = DISCOUNT_GRID[int(rng.integers(0, len(DISCOUNT_GRID)))]
    return Instance(agents=tuple(agents), categories=tuple(categories), num_days=num_days,
                    daily_supply=daily_supply, discount=discount)
