"""Output package for rationd."""
from .csv import METRICS_COLUMNS, export_metrics, metrics_frame
from .excel import MetricsWorkbook, save_metrics_workbook
