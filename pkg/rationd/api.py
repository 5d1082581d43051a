"""Main entry points for rationd"""
import logging
from typing import Optional

from rationd import config
from rationd import utils
from rationd.analysis import ComparisonResult, VerificationReport, run_comparison, verify_instance
from rationd.data import GeneratorConfig, InstanceBounds, generate, sample_instance
from rationd.schemas import Allocation, Instance, TieBreakOrder
from rationd.solver import Allocator
from rationd.strategies import build_strategy

logger = logging.getLogger(__name__)


@utils.log_time(logger_name=__name__)
def solve(instance: Instance, algorithm: str, order: Optional[TieBreakOrder] = None, adversarial: bool = False,
          budget: int = config.DEFAULT_ORACLE_BUDGET) -> Allocation:
    """Allocate with one named algorithm"""
    logger.info(f"Solving {len(instance.agents)} agents over {instance.num_days} days with {algorithm}")

    strategy = build_strategy(algorithm, order=order, adversarial=adversarial, budget=budget)
    allocator = Allocator(strategy=strategy)

    return allocator.allocate(instance)


@utils.log_time(logger_name=__name__)
def compare(instance: Instance, model2: bool = False, order: Optional[TieBreakOrder] = None,
            adversarial: bool = False, budget: int = config.DEFAULT_ORACLE_BUDGET) -> ComparisonResult:
    """Online against the offline optimum"""
    logger.info(f"Comparing online and offline on {len(instance.agents)} agents")
    return run_comparison(instance, model2, order, adversarial, budget)


@utils.log_time(logger_name=__name__)
def generate_instance(generator_config: GeneratorConfig) -> Instance:
    """Generated instance for a config"""
    return generate(generator_config)


@utils.log_time(logger_name=__name__)
def verify(instance: Instance, model2: bool = False, order: Optional[TieBreakOrder] = None,
           adversarial: bool = False, allocation: Optional[Allocation] = None, seed: int = 0,
           budget: int = config.DEFAULT_ORACLE_BUDGET, workers: int = 1) -> VerificationReport:
    """Analysis suite on one instance"""
    logger.info(f"Verifying {len(instance.agents)} agents over {instance.num_days} days")
    return verify_instance(instance, model2, order, adversarial, allocation, seed, budget, workers)


@utils.log_time(logger_name=__name__)
def verify_samples(samples: int, seed: int = 0, model2: bool = False,
                   budget: int = config.DEFAULT_ORACLE_BUDGET) -> list[VerificationReport]:
    """Analysis suite on a batch of small sampled instances"""
    if samples < 0:
        raise ValueError(f"Sample count must be non-negative, got {samples}")

    bounds = InstanceBounds(model2=model2)
    reports = []
    for offset in range(samples):
        instance = sample_instance(seed + offset, bounds)
        reports.append(verify_instance(instance, model2=model2, seed=seed + offset, budget=budget,
                                       label=f"sample {seed + offset}"))
    failed = sum(1 for report in reports if not report.ok)
    logger.info(f"{samples - failed} of {samples} sampled instances passed")
    return reports
