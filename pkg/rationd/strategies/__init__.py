"""Strategies for allocating the resource."""
from typing import Optional

from rationd import config
from rationd.exceptions import ConfigurationError
from rationd.schemas import TieBreakOrder
from rationd.solver import AllocationStrategy

# Min-cost-flow reduction, Model 1 offline optimum
from .offline import OfflineFlowStrategy, solve_offline_model1, solve_offline_tiebroken

# Exact enumeration, desk scale
from .oracle import OracleStrategy, solve_exact_oracle

# Daily greedy b-matchings
from .online import OnlineGreedyStrategy, run_online, run_online_trace

ALGORITHMS = ("offline1", "online1", "online2", "oracle", "oracle2")


def build_strategy(algorithm: str, order: Optional[TieBreakOrder] = None, adversarial: bool = False,
                   budget: int = config.DEFAULT_ORACLE_BUDGET) -> AllocationStrategy:
    """Strategy for an algorithm name; the adversarial tie-break only exists for online algorithms"""
    if adversarial and algorithm in ("offline1", "oracle", "oracle2"):
        raise ConfigurationError(f"tie-break 'adversarial' only applies to online algorithms, not {algorithm!r}")
    match algorithm:
        case "offline1":
            return OfflineFlowStrategy(order=order)
        case "online1" | "online2":
            return OnlineGreedyStrategy(model2=algorithm == "online2", order=order, adversarial=adversarial)
        case "oracle" | "oracle2":
            return OracleStrategy(model2=algorithm == "oracle2", budget=budget, order=order)
    raise ValueError(f"Unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
