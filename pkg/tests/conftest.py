"""Shared fixtures: the tight example instances and small hand-built instances."""
from fractions import Fraction
from typing import Iterable, Optional

import pytest

from rationd import config
from rationd.data import read_instance
from rationd.schemas import Agent, Category, Instance


def make_agent(agent_id: str, priority: str, availability: Iterable[int], eligible: Iterable[str],
               group_label: Optional[str] = None) -> Agent:
    return Agent(id=agent_id, priority=Fraction(priority), availability=tuple(bool(bit) for bit in availability),
                 eligible=frozenset(eligible), group_label=group_label)


def make_instance(agents: Iterable[Agent], quotas: dict[str, Iterable[int]], supply: Iterable[int],
                  discount: str = "0.95", overall: Optional[dict[str, int]] = None) -> Instance:
    overall = overall or {}
    categories = tuple(
        Category(id=category_id, daily_quota=tuple(daily), overall_quota=overall.get(category_id))
        for category_id, daily in quotas.items()
    )
    supply = tuple(supply)
    return Instance(agents=tuple(agents), categories=categories, num_days=len(supply), daily_supply=supply,
                    discount=Fraction(discount))


@pytest.fixture
def tight_model1() -> Instance:
    """a2 only on day 1 under c2; a1 on both days under c1 or c2; one dose a day"""
    return read_instance(config.FIXTURES_DIR / "tight_model1.json")


@pytest.fixture
def tight_model2() -> Instance:
    """Overall quota of c1 is a single dose, which the adversarial run spends on day 1"""
    return read_instance(config.FIXTURES_DIR / "tight_model2.json")


@pytest.fixture
def two_agent_instance() -> Instance:
    """a1 (0.5) on both days, a2 (0.9) on day 1, one category, one dose a day, delta 0.5"""
    return make_instance(
        agents=[make_agent("a1", "0.5", [1, 1], ["c1"]), make_agent("a2", "0.9", [1, 0], ["c1"])],
        quotas={"c1": [1, 1]},
        supply=[1, 1],
        discount="0.5",
    )


@pytest.fixture
def empty_instance() -> Instance:
    return make_instance(agents=[], quotas={"c1": [1]}, supply=[1])


@pytest.fixture
def single_agent_instance() -> Instance:
    return make_instance(agents=[make_agent("a1", "0.7", [0, 1], ["c1"])], quotas={"c1": [1, 1]}, supply=[1, 1])
