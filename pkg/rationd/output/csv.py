"""CSV export of metric series."""
import os
import logging

import pandas as pd

from rationd import config
from rationd.analysis.metrics import MetricsSeries
from rationd.schemas import format_decimal
from rationd.utils import FileHandlerMixin

logger = logging.getLogger(__name__)

METRICS_COLUMNS = ["day", "group", "gamma", "eta", "fraction_unvaccinated", "matched_today", "cumulative_utility"]


def metrics_frame(series: MetricsSeries) -> pd.DataFrame:
    """One row per (day, group), day ascending then group"""
    records = [
        {
            "day": row.day,
            "group": row.group,
            "gamma": row.gamma,
            "eta": row.eta,
            "fraction_unvaccinated": format_decimal(row.fraction_unvaccinated, config.DECIMAL_PLACES),
            "matched_today": row.matched_today,
            "cumulative_utility": format_decimal(row.cumulative_utility, config.DECIMAL_PLACES),
        }
        for row in series.rows
    ]
    frame = pd.DataFrame.from_records(records, columns=METRICS_COLUMNS)
    return frame.sort_values(["day", "group"], kind="stable").reset_index(drop=True)


class MetricsCsv(FileHandlerMixin):
    """Metric series as a comma-separated table"""

    VALID_EXTENSIONS = [".csv"]

    def __init__(self, file_path: os.PathLike | str) -> None:
        self.file_path = file_path

    def save(self, series: MetricsSeries) -> None:
        """Write the table, header included"""
        self.file_path.parent.mkdir(parents=True, exist_ok=True)
        metrics_frame(series).to_csv(self.file_path, index=False, lineterminator="\n")
        logger.info(f"Saved {len(series.rows)} metric rows to {self.file_path}")


def export_metrics(series: MetricsSeries, path: os.PathLike | str) -> None:
    """Write a metric series to a CSV file"""
    MetricsCsv(path).save(series)
