"""Competitive ratio, its bound and empirical efficiency."""
import math
import logging
from fractions import Fraction
from typing import Optional

from rationd import config
from rationd.model import total_utility
from rationd.schemas import Allocation, Instance, TieBreakOrder
from rationd.strategies import run_online, solve_exact_oracle, solve_offline_model1

logger = logging.getLogger(__name__)


def offline_optimum(instance: Instance, model2: bool = False,
                    budget: int = config.DEFAULT_ORACLE_BUDGET) -> Allocation:
    """Flow optimum for Model 1, exact oracle for Model 2"""
    if model2:
        return solve_exact_oracle(instance, model2=True, budget=budget)
    return solve_offline_model1(instance)


def utility_ratio(optimum: Fraction, online: Fraction) -> Fraction | float:
    """OPT/ALG; 1 when both are zero, infinity when only ALG is zero"""
    if online == 0:
        return Fraction(1) if optimum == 0 else math.inf
    return optimum / online


def competitive_ratio(instance: Instance, model2: bool = False, adversarial: bool = False,
                      order: Optional[TieBreakOrder] = None,
                      budget: int = config.DEFAULT_ORACLE_BUDGET) -> Fraction | float:
    """OPT/ALG on one instance"""
    optimum = total_utility(instance, offline_optimum(instance, model2, budget))
    online = total_utility(instance, run_online(instance, model2, order, adversarial))
    ratio = utility_ratio(optimum, online)
    if ratio == math.inf:
        logger.error(f"online utility is zero while the optimum is {optimum}")
    return ratio


def competitive_bound(instance: Instance, model2: bool = False) -> Fraction:
    """1 + delta for Model 1, 1 + delta + (alpha_max / alpha_min) * delta for Model 2"""
    delta = instance.discount
    if not model2:
        return 1 + delta
    priorities = [agent.priority for agent in instance.agents]
    spread = max(priorities) / min(priorities) if priorities else Fraction(1)
    return 1 + delta + spread * delta


def empirical_efficiency(instance: Instance, model2: bool = False, adversarial: bool = False,
                         order: Optional[TieBreakOrder] = None,
                         budget: int = config.DEFAULT_ORACLE_BUDGET) -> Fraction:
    """ALG/OPT, the reverse of the competitive ratio; 1 when OPT is zero"""
    optimum = total_utility(instance, offline_optimum(instance, model2, budget))
    online = total_utility(instance, run_online(instance, model2, order, adversarial))
    return Fraction(1) if optimum == 0 else online / optimum
