"""Pass/fail verification of one instance: feasibility, certificates and deviations."""
import logging
from enum import StrEnum
from typing import Optional

from pydantic import BaseModel, ConfigDict

from rationd import config
from rationd.exceptions import OracleBudgetExceeded
from rationd.model import check_allocation, total_utility, validate_instance
from rationd.schemas import Allocation, Instance, TieBreakOrder
from rationd.strategies import run_online_trace

from .charging import build_charging_report
from .checks import is_non_wasteful, verify_daily_maximum
from .ratio import offline_optimum, competitive_bound
from .strategyproof import deviation_runs, iter_deviation_reports

logger = logging.getLogger(__name__)


class CheckStatus(StrEnum):
    PASS = "pass"
    FAIL = "fail"
    SKIP = "skip"


class CheckResult(BaseModel):
    """Outcome of one named check"""
    model_config = ConfigDict(frozen=True)

    name: str
    status: CheckStatus
    detail: str = ""


class VerificationReport(BaseModel):
    """All checks run on one instance"""
    model_config = ConfigDict(frozen=True)

    label: str
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        """No check failed; skipped checks do not count against it"""
        return all(check.status != CheckStatus.FAIL for check in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if check.status == CheckStatus.FAIL]

    def failed(self, name: str) -> bool:
        return any(check.name == name and check.status == CheckStatus.FAIL for check in self.checks)


def _result(name: str, passed: bool, detail: str = "") -> CheckResult:
    return CheckResult(name=name, status=CheckStatus.PASS if passed else CheckStatus.FAIL, detail=detail)


def _skip(name: str, detail: str) -> CheckResult:
    return CheckResult(name=name, status=CheckStatus.SKIP, detail=detail)


def verify_instance(instance: Instance, model2: bool = False, order: Optional[TieBreakOrder] = None,
                    adversarial: bool = False, allocation: Optional[Allocation] = None, seed: int = 0,
                    budget: int = config.DEFAULT_ORACLE_BUDGET, workers: int = 1,
                    label: str = "instance") -> VerificationReport:
    """Run every analysis check that fits the budgets"""
    checks: list[CheckResult] = []

    validation = validate_instance(instance)
    checks.append(_result("instance", validation.ok,
                          "; ".join(violation.message for violation in validation.violations)))
    if not validation.ok:
        return VerificationReport(label=label, checks=tuple(checks))

    if allocation is not None:
        supplied = check_allocation(instance, allocation, model2)
        checks.append(_result("supplied allocation", supplied.ok,
                              "; ".join(violation.message for violation in supplied.violations)))

    trace = run_online_trace(instance, model2, order, adversarial)
    online = trace.allocation
    checks.append(_result("online non-wasteful", is_non_wasteful(instance, online, model2)))
    short_days = [check.day for check in verify_daily_maximum(trace) if not check.ok]
    checks.append(_result("daily maximum", not short_days, f"days {short_days}" if short_days else ""))

    try:
        offline = offline_optimum(instance, model2, budget)
    except OracleBudgetExceeded as error:
        checks.append(_skip("charging certificate", str(error)))
        checks.append(_skip("competitive bound", str(error)))
    else:
        report = build_charging_report(instance, online, offline, model2)
        detail = f"witness day {report.witness_day}" if report.witness_day is not None else ""
        checks.append(_result("charging certificate", report.bound_certified, detail))

        bound = competitive_bound(instance, model2)
        optimum, achieved = total_utility(instance, offline), total_utility(instance, online)
        checks.append(_result("competitive bound", optimum <= bound * achieved,
                              f"OPT {optimum} vs {bound} * ALG {achieved}"))

    if model2:
        checks.append(_skip("strategyproofness", "only asserted without overall quotas"))
    elif (runs := deviation_runs(instance)) > config.MAX_DEVIATION_RUNS:
        checks.append(_skip("strategyproofness", f"{runs} reruns exceed {config.MAX_DEVIATION_RUNS}"))
    else:
        manipulable = [
            deviation.agent
            for deviation in iter_deviation_reports(instance, model2, order, adversarial, seed, workers)
            if deviation.manipulable
        ]
        checks.append(_result("strategyproofness", not manipulable,
                              f"agents {manipulable}" if manipulable else ""))

    verification = VerificationReport(label=label, checks=tuple(checks))
    for failure in verification.failures:
        logger.error(f"{label}: {failure.name} failed {failure.detail}")
    return verification
