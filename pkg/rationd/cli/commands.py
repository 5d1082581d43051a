"""Subcommand handlers. Each returns the process exit code."""
import time
import pathlib
import argparse
import logging
from typing import Optional

from rationd import api
from rationd.analysis import CheckStatus, VerificationReport
from rationd.data import read_allocation, read_generator_config, read_instance, write_allocation, write_instance
from rationd.model import validate_instance
from rationd.output import export_metrics, save_metrics_workbook
from rationd.schemas import Instance, TieBreakOrder

from .summary import RunSummary, render_ratio, render_value

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_CERTIFICATE = 4
EXIT_REFUSED = 5

ADVERSARIAL = "adversarial"


def parse_tie_break(value: Optional[str]) -> tuple[Optional[TieBreakOrder], bool]:
    """'adversarial' or a comma-separated agent order"""
    if value is None:
        return None, False
    if value == ADVERSARIAL:
        return None, True
    return TieBreakOrder(order=tuple(part.strip() for part in value.split(",") if part.strip())), False


def _load_valid_instance(path: pathlib.Path) -> Optional[Instance]:
    """Instance from a file, or None after logging its violations"""
    instance = read_instance(path)
    report = validate_instance(instance)
    for violation in report.violations:
        logger.error(f"{path}: {violation.kind}: {violation.message}")
    return instance if report.ok else None


def cmd_generate(args: argparse.Namespace) -> int:
    """Write a generated instance"""
    generator_config = read_generator_config(args.config)
    if args.seed is not None:
        generator_config = generator_config.model_copy(update={"seed": args.seed})

    instance = api.generate_instance(generator_config)
    write_instance(instance, args.out, provenance=generator_config)
    print(f"wrote {len(instance.agents)} agents to {args.out} ({instance.digest()[:16]})")
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    """Solve one instance and print its summary"""
    instance = _load_valid_instance(args.instance)
    if instance is None:
        return EXIT_INVALID
    order, adversarial = parse_tie_break(args.tie_break)

    start = time.perf_counter()
    allocation = api.solve(instance, args.algorithm, order=order, adversarial=adversarial, budget=args.budget)
    summary = RunSummary.from_allocation(instance, args.algorithm, allocation, time.perf_counter() - start)

    if args.out is not None:
        write_allocation(allocation, args.out, solver=args.algorithm, instance=instance)
    print(summary.render(exact=args.exact))
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    """Online against offline, with both metric tables"""
    instance = _load_valid_instance(args.instance)
    if instance is None:
        return EXIT_INVALID
    order, adversarial = parse_tie_break(args.tie_break)

    result = api.compare(instance, model2=args.model2, order=order, adversarial=adversarial, budget=args.budget)
    online_name = "online2" if args.model2 else "online1"
    offline_name = "oracle2" if args.model2 else "offline1"
    online = RunSummary.from_allocation(instance, online_name, result.online, result.online_seconds)
    offline = RunSummary.from_allocation(instance, offline_name, result.offline, result.offline_seconds)

    out_dir = pathlib.Path(args.out)
    export_metrics(result.online_metrics, out_dir / f"{online_name}.csv")
    export_metrics(result.offline_metrics, out_dir / f"{offline_name}.csv")
    if args.xlsx is not None:
        save_metrics_workbook(args.xlsx, {online_name: result.online_metrics,
                                          offline_name: result.offline_metrics})

    print(online.render(exact=args.exact))
    print()
    print(offline.render(exact=args.exact))
    print()
    print(f"ratio:         {render_ratio(result.ratio, args.exact)}")
    print(f"bound:         {render_value(result.bound, args.exact)}")
    if result.tight:
        print("tight")
    if not result.within_bound:
        logger.error(f"ratio {render_ratio(result.ratio, exact=True)} outside [1, {result.bound}]")
        return EXIT_CERTIFICATE
    return EXIT_OK


def _print_report(report: VerificationReport) -> None:
    print(f"{report.label}: {'pass' if report.ok else 'FAIL'}")
    for check in report.checks:
        detail = f"  ({check.detail})" if check.detail else ""
        print(f"  {check.status:<5} {check.name}{detail}")


def cmd_verify(args: argparse.Namespace) -> int:
    """Analysis suite on an instance and/or a sampled batch"""
    order, adversarial = parse_tie_break(args.tie_break)
    reports: list[VerificationReport] = []

    if args.instance is not None:
        instance = read_instance(args.instance)
        allocation = None
        if args.allocation is not None:
            allocation_document = read_allocation(args.allocation)
            if allocation_document.instance_digest != instance.digest():
                logger.warning(f"{args.allocation} was written for another instance")
            allocation = allocation_document.allocation
        report = api.verify(instance, model2=args.model2, order=order, adversarial=adversarial,
                            allocation=allocation, seed=args.seed or 0, budget=args.budget, workers=args.workers)
        reports.append(report.model_copy(update={"label": str(args.instance)}))
        if report.checks[0].status != CheckStatus.PASS:
            _print_report(reports[-1])
            return EXIT_INVALID

    if args.samples:
        reports.extend(api.verify_samples(args.samples, seed=args.seed or 0, model2=args.model2,
                                          budget=args.budget))

    for report in reports:
        _print_report(report)
    failed = sum(1 for report in reports if not report.ok)
    print(f"{len(reports) - failed} of {len(reports)} passed")
    if any(report.failed("supplied allocation") for report in reports):
        return EXIT_INVALID
    return EXIT_OK if failed == 0 else EXIT_CERTIFICATE

