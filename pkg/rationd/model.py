"""Feasibility and utility of allocations."""
import logging
from collections import Counter
from fractions import Fraction
from typing import Optional

from rationd.exceptions import ContractViolation
from rationd.schemas import Allocation, Instance, ValidationReport, Violation, ViolationKind

logger = logging.getLogger(__name__)


def utility_of(priority: Fraction, day_index: int, discount: Fraction) -> Fraction:
    """Utility alpha * delta^(j-1) of matching on 1-based day j"""
    if day_index < 1:
        raise ContractViolation(f"Day index must be at least 1, got {day_index}")
    return Fraction(priority) * Fraction(discount) ** (day_index - 1)


def validate_instance(instance: Instance) -> ValidationReport:
    """Report every structural problem of an instance"""
    violations: list[Violation] = []

    def report(kind: ViolationKind, message: str, *subjects: str) -> None:
        violations.append(Violation(kind=kind, subjects=subjects, message=message))

    if instance.num_days < 1:
        report(ViolationKind.SHAPE, f"num_days must be positive, got {instance.num_days}")
    if len(instance.daily_supply) != instance.num_days:
        report(ViolationKind.SHAPE,
               f"daily_supply has {len(instance.daily_supply)} entries for {instance.num_days} days")
    if any(supply < 0 for supply in instance.daily_supply):
        report(ViolationKind.NEGATIVE, "daily_supply holds a negative entry")
    if not 0 < instance.discount < 1:
        report(ViolationKind.DISCOUNT, f"discount {instance.discount} outside (0, 1)")

    category_ids = Counter(category.id for category in instance.categories)
    for category_id, count in category_ids.items():
        if count > 1:
            report(ViolationKind.DUPLICATE, f"category {category_id} declared {count} times", category_id)

    for category in instance.categories:
        if len(category.daily_quota) != instance.num_days:
            report(ViolationKind.SHAPE,
                   f"category {category.id} has {len(category.daily_quota)} daily quotas "
                   f"for {instance.num_days} days", category.id)
        if any(quota < 0 for quota in category.daily_quota):
            report(ViolationKind.NEGATIVE, f"category {category.id} has a negative daily quota", category.id)
        if category.overall_quota is not None and category.overall_quota < 0:
            report(ViolationKind.NEGATIVE, f"category {category.id} has a negative overall quota", category.id)

    agent_ids = Counter(agent.id for agent in instance.agents)
    for agent_id, count in agent_ids.items():
        if count > 1:
            report(ViolationKind.DUPLICATE, f"agent {agent_id} declared {count} times", agent_id)

    for agent in instance.agents:
        if not 0 < agent.priority < 1:
            report(ViolationKind.PRIORITY, f"agent {agent.id} priority {agent.priority} outside (0, 1)", agent.id)
        if len(agent.availability) != instance.num_days:
            report(ViolationKind.SHAPE,
                   f"agent {agent.id} availability has {len(agent.availability)} entries "
                   f"for {instance.num_days} days", agent.id)
        undeclared = sorted(agent.eligible - set(category_ids))
        if undeclared:
            report(ViolationKind.ELIGIBILITY,
                   f"agent {agent.id} eligible for undeclared categories {undeclared}", agent.id, *undeclared)

    return ValidationReport(violations=tuple(violations))


def check_allocation(instance: Instance, alloc: Allocation, model2: bool = False) -> ValidationReport:
    """Report every constraint the allocation breaks"""
    violations: list[Violation] = []
    supply_used = [0] * instance.num_days
    quota_used: Counter[tuple[str, int]] = Counter()
    overall_used: Counter[str] = Counter()

    for agent_id, slot in alloc.matched():
        if agent_id not in instance.agent_index:
            violations.append(Violation(kind=ViolationKind.UNKNOWN, subjects=(agent_id,),
                                        message=f"agent {agent_id} not in instance"))
            continue
        if slot.category not in instance.category_index:
            violations.append(Violation(kind=ViolationKind.UNKNOWN, subjects=(agent_id, slot.category),
                                        message=f"category {slot.category} not in instance"))
            continue
        if not 1 <= slot.day <= instance.num_days:
            violations.append(Violation(kind=ViolationKind.UNKNOWN, subjects=(agent_id,),
                                        message=f"day {slot.day} outside 1..{instance.num_days}"))
            continue

        agent = instance.agent(agent_id)
        if slot.category not in agent.eligible:
            violations.append(Violation(kind=ViolationKind.ELIGIBILITY, subjects=(agent_id, slot.category),
                                        message=f"agent {agent_id} not eligible for {slot.category}"))
        if not agent.available_on(slot.day):
            violations.append(Violation(kind=ViolationKind.AVAILABILITY, subjects=(agent_id,),
                                        message=f"agent {agent_id} not available on day {slot.day}"))
        supply_used[slot.day - 1] += 1
        quota_used[(slot.category, slot.day)] += 1
        overall_used[slot.category] += 1

    for day_index, used in enumerate(supply_used, start=1):
        supply = instance.daily_supply[day_index - 1]
        if used > supply:
            violations.append(Violation(kind=ViolationKind.SUPPLY, subjects=(str(day_index),),
                                        message=f"day {day_index} uses {used} of supply {supply}"))

    for (category_id, day_index), used in sorted(quota_used.items()):
        quota = instance.category(category_id).daily_quota[day_index - 1]
        if used > quota:
            violations.append(Violation(kind=ViolationKind.DAILY_QUOTA, subjects=(category_id, str(day_index)),
                                        message=f"{category_id} uses {used} of daily quota {quota} on day {day_index}"))

    if model2:
        for category_id, used in sorted(overall_used.items()):
            quota = instance.category(category_id).overall_quota
            if quota is not None and used > quota:
                violations.append(Violation(kind=ViolationKind.OVERALL_QUOTA, subjects=(category_id,),
                                            message=f"{category_id} uses {used} of overall quota {quota}"))

    return ValidationReport(violations=tuple(violations))


def total_utility(instance: Instance, alloc: Allocation) -> Fraction:
    """Sum of alpha * delta^(j-1) over matched agents"""
    report = check_allocation(instance, alloc)
    if not report.ok:
        raise ContractViolation(f"Allocation is infeasible: {report.violations[0].message}")
    return sum(
        (utility_of(instance.agent(agent_id).priority, slot.day, instance.discount)
         for agent_id, slot in alloc.matched()),
        Fraction(0),
    )


def find_addable_agent(instance: Instance, alloc: Allocation,
                       model2: bool = False) -> Optional[tuple[str, str, int]]:
    """First unmatched agent that fits an open eligible slot, or None"""
    supply_used = alloc.per_day_counts(instance.num_days)
    quota_used: Counter[tuple[str, int]] = Counter()
    overall_used: Counter[str] = Counter()
    for _, slot in alloc.matched():
        quota_used[(slot.category, slot.day)] += 1
        overall_used[slot.category] += 1

    for agent in instance.agents:
        if alloc.day_of(agent.id) is not None:
            continue
        for day_index in range(1, instance.num_days + 1):
            if not agent.available_on(day_index) or supply_used[day_index - 1] >= instance.daily_supply[day_index - 1]:
                continue
            for category in instance.categories:
                if category.id not in agent.eligible:
                    continue
                if quota_used[(category.id, day_index)] >= category.daily_quota[day_index - 1]:
                    continue
                if model2 and category.overall_quota is not None and overall_used[category.id] >= category.overall_quota:
                    continue
                return agent.id, category.id, day_index
    return None
