import pandas as pd
import pytest
from openpyxl import load_workbook

from rationd.analysis import MetricsSeries, compute_metrics
from rationd.exceptions import WrongFileExtension
from rationd.output import METRICS_COLUMNS, MetricsWorkbook, export_metrics, save_metrics_workbook
from rationd.strategies import run_online, solve_offline_model1

from .conftest import make_agent, make_instance


@pytest.fixture
def series():
    agents = [make_agent(f"a{k}", "0.5", [1, 1], ["c1"], group_label="g") for k in range(4)]
    instance = make_instance(agents, {"c1": [1, 2]}, supply=[1, 2])
    return compute_metrics(instance, run_online(instance))


class TestExportMetrics:

    def test_header_only_when_empty(self, tmp_path):
        path = tmp_path / "empty.csv"
        export_metrics(MetricsSeries(), path)
        assert path.read_text() == ",".join(METRICS_COLUMNS) + "\n"

    def test_one_row_per_day_and_group(self, series, tmp_path):
        path = tmp_path / "metrics.csv"
        export_metrics(series, path)
        frame = pd.read_csv(path, dtype=str)
        assert list(frame.columns) == METRICS_COLUMNS
        assert list(zip(frame["day"], frame["group"])) == [("1", "all"), ("1", "g"), ("2", "all"), ("2", "g")]
        assert frame.loc[2, "fraction_unvaccinated"] == "0.250000"

    def test_wrong_extension(self, series, tmp_path):
        with pytest.raises(WrongFileExtension):
            export_metrics(series, tmp_path / "metrics.txt")


class TestMetricsWorkbook:

    def test_one_sheet_per_solver(self, series, tmp_path):
        path = tmp_path / "metrics.xlsx"
        save_metrics_workbook(path, {"online1": series, "offline1": series})
        workbook = load_workbook(path)
        assert workbook.sheetnames == ["online1", "offline1"]
        sheet = workbook["online1"]
        assert [cell.value for cell in sheet[1]] == METRICS_COLUMNS
        assert sheet.cell(row=4, column=5).value == pytest.approx(0.25)

    def test_rewrites_an_existing_sheet(self, series, tmp_path):
        path = tmp_path / "metrics.xlsx"
        save_metrics_workbook(path, {"online1": series})
        workbook = MetricsWorkbook(path)
        workbook.write_series("online1", MetricsSeries())
        workbook.save_workbook()
        assert load_workbook(path)["online1"].max_row == 1

    def test_offline_series(self, tmp_path):
        agents = [make_agent("a1", "0.5", [1, 1], ["c1"], group_label="g")]
        instance = make_instance(agents, {"c1": [1, 1]}, supply=[1, 1])
        path = tmp_path / "offline.xlsx"
        save_metrics_workbook(path, {"offline1": compute_metrics(instance, solve_offline_model1(instance))})
        assert load_workbook(path)["offline1"].max_row == 5
