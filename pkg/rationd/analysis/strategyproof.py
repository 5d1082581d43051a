"""Deviation testing: can an agent get matched earlier by hiding availability?"""
import math
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Iterator, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from rationd import config
from rationd.schemas import Instance, TieBreakOrder
from rationd.strategies import run_online

logger = logging.getLogger(__name__)

Report = tuple[bool, ...]


class Deviation(BaseModel):
    """Outcome of one misreported availability vector"""
    model_config = ConfigDict(frozen=True)

    reported: Report
    matched_day: Optional[int] = Field(title="Matched day, None if unmatched")


class DeviationReport(BaseModel):
    """Truthful outcome against every tried subset report"""
    model_config = ConfigDict(frozen=True)

    agent: str
    truthful_day: Optional[int]
    deviations: tuple[Deviation, ...]
    exhaustive: bool = Field(title="Every subset of the true availability was tried")

    @property
    def improving(self) -> list[Deviation]:
        """Deviations matched strictly earlier than truthful reporting"""
        return [d for d in self.deviations if _day_key(d.matched_day) < _day_key(self.truthful_day)]

    @property
    def manipulable(self) -> bool:
        return bool(self.improving)


def _day_key(day: Optional[int]) -> float:
    return math.inf if day is None else day


def subset_reports(truth: Report, seed: int = 0,
                   sample_size: int = config.DEVIATION_SAMPLE_SIZE) -> tuple[list[Report], bool]:
    """Proper subsets of a true availability vector; sampled beyond MAX_EXHAUSTIVE_DAYS available days"""
    available = [index for index, bit in enumerate(truth) if bit]

    def to_report(kept: set[int]) -> Report:
        return tuple(index in kept for index in range(len(truth)))

    if len(available) <= config.MAX_EXHAUSTIVE_DAYS:
        reports = [
            to_report(set(kept))
            for size in range(len(available))
            for kept in itertools.combinations(available, size)
        ]
        return reports, True

    rng = np.random.default_rng(seed)
    reports = set()
    while len(reports) < sample_size:
        mask = rng.random(len(available)) < 0.5
        kept = {day for day, keep in zip(available, mask) if keep}
        if len(kept) < len(available):
            reports.add(to_report(kept))
    return sorted(reports), False


def _matched_day(instance: Instance, agent_id: str, model2: bool, order: Optional[TieBreakOrder],
                 adversarial: bool) -> Optional[int]:
    return run_online(instance, model2, order, adversarial).day_of(agent_id)


def _deviate(job: tuple[Instance, str, Report, bool, Optional[TieBreakOrder], bool]) -> Deviation:
    instance, agent_id, reported, model2, order, adversarial = job
    deviated = instance.with_availability(agent_id, reported)
    return Deviation(reported=reported, matched_day=_matched_day(deviated, agent_id, model2, order, adversarial))


def test_strategyproofness(instance: Instance, agent: str, model2: bool = False,
                           order: Optional[TieBreakOrder] = None, adversarial: bool = False,
                           seed: int = 0, workers: int = 1) -> DeviationReport:
    """Rerun the online algorithm for every subset report of one agent"""
    truth = instance.agent(agent).availability
    truthful_day = _matched_day(instance, agent, model2, order, adversarial)
    reports, exhaustive = subset_reports(truth, seed=seed)
    jobs = [(instance, agent, reported, model2, order, adversarial) for reported in reports]

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            deviations = list(pool.map(_deviate, jobs))
    else:
        deviations = [_deviate(job) for job in jobs]

    report = DeviationReport(agent=agent, truthful_day=truthful_day, deviations=tuple(deviations),
                             exhaustive=exhaustive)
    if report.manipulable:
        logger.warning(f"agent {agent} improves by misreporting: {report.improving[0].reported}")
    return report


# not a pytest test despite the name
test_strategyproofness.__test__ = False


def iter_deviation_reports(instance: Instance, model2: bool = False, order: Optional[TieBreakOrder] = None,
                           adversarial: bool = False, seed: int = 0,
                           workers: int = 1) -> Iterator[DeviationReport]:
    """Deviation report of every agent, in input order"""
    for agent in instance.agents:
        yield test_strategyproofness(instance, agent.id, model2, order=order, adversarial=adversarial,
                                     seed=seed, workers=workers)


def deviation_runs(instance: Instance) -> int:
    """Online reruns needed for a full deviation sweep"""
    total = 0
    for agent in instance.agents:
        available = sum(agent.availability)
        if available <= config.MAX_EXHAUSTIVE_DAYS:
            total += 2**available - 1
        else:
            total += config.DEVIATION_SAMPLE_SIZE
    return total
