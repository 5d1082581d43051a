"""Excel adapter for metric series."""
import os
import logging

from openpyxl import Workbook, load_workbook
from openpyxl.worksheet.worksheet import Worksheet

from rationd.analysis.metrics import MetricsSeries
from rationd.utils import FileHandlerMixin

from .csv import METRICS_COLUMNS, metrics_frame

logger = logging.getLogger(__name__)

DEFAULT_SHEET = "Sheet"
DECIMAL_COLUMNS = ("fraction_unvaccinated", "cumulative_utility")


class MetricsWorkbook(FileHandlerMixin):
    """Excel adapter for metric series, one sheet per solver."""

    VALID_EXTENSIONS = [".xlsx"]

    # Range
    HEADER_ROW = 1
    FIRST_COLUMN = 1

    def __init__(self, file_path: os.PathLike | str) -> None:
        self.file_path = file_path
        self.workbook = self.file_path

    @property
    def workbook(self) -> Workbook:
        """Workbook instance"""
        return self._workbook

    @workbook.setter
    def workbook(self, file_path: os.PathLike | str) -> None:
        """Open an existing workbook or start an empty one"""
        try:
            self._workbook = load_workbook(filename=file_path)
        except FileNotFoundError:
            self._workbook = Workbook()

    def get_sheet(self, sheet_name: str) -> Worksheet:
        """Get sheet by name or create it if it doesn't exist"""
        try:
            return self.workbook[sheet_name]
        except KeyError:
            return self.workbook.create_sheet(title=sheet_name)

    def write_series(self, solver: str, series: MetricsSeries) -> Worksheet:
        """Replace the solver's sheet with the series"""
        if solver in self.workbook.sheetnames:
            del self.workbook[solver]
        sheet = self.get_sheet(solver)

        for column, name in enumerate(METRICS_COLUMNS, start=self.FIRST_COLUMN):
            sheet.cell(row=self.HEADER_ROW, column=column, value=name)
        frame = metrics_frame(series)
        for row, record in enumerate(frame.itertuples(index=False), start=self.HEADER_ROW + 1):
            for column, (name, value) in enumerate(zip(METRICS_COLUMNS, record), start=self.FIRST_COLUMN):
                sheet.cell(row=row, column=column, value=_cell_value(name, value))

        logger.debug(f"wrote {len(frame)} rows to sheet {solver!r}")
        return sheet

    def save_workbook(self) -> None:
        """Save workbook to file"""
        # a fresh workbook carries an empty default sheet
        if DEFAULT_SHEET in self.workbook.sheetnames and len(self.workbook.sheetnames) > 1:
            default = self.workbook[DEFAULT_SHEET]
            if default.max_row == 1 and default.max_column == 1 and default.cell(1, 1).value is None:
                del self.workbook[DEFAULT_SHEET]
        self.file_path.parent.mkdir(parents=True, exist_ok=True)
        self.workbook.save(self.file_path)
        logger.info(f"Saved workbook {self.file_path}")


def _cell_value(column: str, value: object) -> object:
    """Plain Python scalars; decimal columns become numbers"""
    if column in DECIMAL_COLUMNS:
        return float(value)
    if hasattr(value, "item"):
        return value.item()
    return value


def save_metrics_workbook(path: os.PathLike | str, series_by_solver: dict[str, MetricsSeries]) -> None:
    """Write one sheet per solver and save"""
    workbook = MetricsWorkbook(path)
    for solver, series in series_by_solver.items():
        workbook.write_series(solver, series)
    workbook.save_workbook()
