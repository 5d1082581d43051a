"""Verification and measurement of allocations."""
from .charging import (ChargeKind, ChargingReport, Decomposition, build_charging_report,
                       decompose_symmetric_difference)
from .checks import is_non_wasteful, verify_daily_maximum
from .experiment import ComparisonResult, compare_groups, remap_priorities, run_comparison
from .metrics import MetricsSeries, compute_metrics
from .ratio import competitive_ratio, empirical_efficiency, offline_optimum, competitive_bound
from .strategyproof import DeviationReport, iter_deviation_reports
from .suite import CheckResult, CheckStatus, VerificationReport, verify_instance
