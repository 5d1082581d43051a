import json

import pytest

from rationd import config
from rationd.cli import main
from rationd.data import read_allocation, read_instance, write_allocation, write_generator_config, GeneratorConfig
from rationd.schemas import Allocation

TIGHT_MODEL1 = str(config.FIXTURES_DIR / "tight_model1.json")
TIGHT_MODEL2 = str(config.FIXTURES_DIR / "tight_model2.json")


@pytest.fixture(autouse=True)
def keep_test_logging(monkeypatch):
    """Leave logging to pytest"""
    monkeypatch.setattr(config, "configure_logging", lambda: None)


@pytest.fixture
def small_generator(tmp_path):
    path = tmp_path / "generator.json"
    write_generator_config(GeneratorConfig(num_agents=40, num_days=5, num_hospitals=4, seed=3), path)
    return path


class TestGenerate:

    def test_writes_an_instance(self, small_generator, tmp_path):
        out = tmp_path / "instance.json"
        assert main(["generate", str(small_generator), str(out)]) == 0
        assert len(read_instance(out).agents) == 40

    def test_same_seed_same_file(self, small_generator, tmp_path):
        first, second = tmp_path / "first.json", tmp_path / "second.json"
        main(["generate", str(small_generator), str(first), "--seed", "9"])
        main(["generate", str(small_generator), str(second), "--seed", "9"])
        assert first.read_bytes() == second.read_bytes()

    def test_invalid_config(self, tmp_path, caplog):
        path = tmp_path / "generator.json"
        path.write_text(json.dumps({"schema_version": 1, "kind": "generator_config",
                                    "generator": {"availability_density": 2}}))
        assert main(["generate", str(path), str(tmp_path / "out.json")]) == 3
        assert "availability_density" in caplog.text


class TestSolve:

    def test_online_adversarial(self, capsys):
        assert main(["solve", TIGHT_MODEL1, "online1", "--tie-break", "adversarial", "--exact"]) == 0
        assert "utility:       0.5\n" in capsys.readouterr().out

    def test_offline(self, capsys, tmp_path):
        out = tmp_path / "allocation.json"
        assert main(["solve", TIGHT_MODEL1, "offline1", "--out", str(out)]) == 0
        assert "utility:       0.975000" in capsys.readouterr().out
        assert read_allocation(out).solver == "offline1"

    def test_explicit_order(self, capsys):
        assert main(["solve", TIGHT_MODEL1, "online1", "--tie-break", "a1,a2", "--exact"]) == 0
        assert "utility:       0.5\n" in capsys.readouterr().out

    def test_model2_algorithm_needs_overall_quotas(self):
        assert main(["solve", TIGHT_MODEL1, "online2"]) == 5

    def test_adversarial_tie_break_for_offline(self, caplog):
        assert main(["solve", TIGHT_MODEL1, "offline1", "--tie-break", "adversarial"]) == 5
        assert "only applies to online algorithms" in caplog.text

    def test_oracle_budget(self):
        assert main(["solve", TIGHT_MODEL2, "oracle2", "--budget", "2"]) == 5

    def test_unknown_algorithm(self):
        with pytest.raises(SystemExit) as error:
            main(["solve", TIGHT_MODEL1, "simplex"])
        assert error.value.code == 2

    def test_empty_instance(self, capsys, tmp_path):
        path = tmp_path / "empty.json"
        document = json.loads(open(TIGHT_MODEL1).read())
        document["instance"]["agents"] = []
        path.write_text(json.dumps(document))
        assert main(["solve", str(path), "online1"]) == 0
        out = capsys.readouterr().out
        assert "matched:       0" in out and "utility:       0.000000" in out

    def test_invalid_instance(self, tmp_path):
        path = tmp_path / "bad.json"
        document = json.loads(open(TIGHT_MODEL1).read())
        document["instance"]["discount"] = "1"
        path.write_text(json.dumps(document))
        assert main(["solve", str(path), "online1"]) == 3


class TestCompare:

    def test_tight_model1(self, capsys, tmp_path):
        assert main(["compare", TIGHT_MODEL1, "--tie-break", "adversarial", "--exact", "--out", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert "ratio:         1.95" in out and "bound:         1.95" in out and "tight" in out
        assert (tmp_path / "online1.csv").exists() and (tmp_path / "offline1.csv").exists()

    def test_tight_model2_with_workbook(self, capsys, tmp_path):
        xlsx = tmp_path / "metrics.xlsx"
        args = ["compare", TIGHT_MODEL2, "--model2", "--tie-break", "adversarial", "--exact",
                "--out", str(tmp_path), "--xlsx", str(xlsx)]
        assert main(args) == 0
        assert "ratio:         2.5" in capsys.readouterr().out
        assert xlsx.exists()

    def test_generated_instance_is_within_bound(self, tmp_path):
        generator = tmp_path / "generator.json"
        write_generator_config(GeneratorConfig(num_agents=200, num_days=6, num_hospitals=6, seed=1), generator)
        instance = tmp_path / "instance.json"
        assert main(["generate", str(generator), str(instance)]) == 0
        assert main(["compare", str(instance), "--out", str(tmp_path)]) == 0


class TestVerify:

    def test_tight_fixtures(self, capsys):
        assert main(["verify", TIGHT_MODEL1]) == 0
        assert main(["verify", TIGHT_MODEL2, "--model2", "--tie-break", "adversarial"]) == 0
        assert "FAIL" not in capsys.readouterr().out

    def test_sample_batch(self, capsys):
        assert main(["verify", "--samples", "10", "--seed", "4"]) == 0
        assert "10 of 10 passed" in capsys.readouterr().out

    def test_corrupted_allocation(self, capsys, tmp_path):
        instance = read_instance(TIGHT_MODEL1)
        path = tmp_path / "allocation.json"
        corrupted = Allocation.from_matches(instance, {"a1": ("c1", 1), "a2": ("c2", 1)})
        write_allocation(corrupted, path, solver="online1", instance=instance)
        assert main(["verify", TIGHT_MODEL1, "--allocation", str(path)]) == 3
        assert "fail  supplied allocation" in capsys.readouterr().out

    def test_needs_something_to_verify(self):
        with pytest.raises(SystemExit) as error:
            main(["verify"])
        assert error.value.code == 2

    def test_missing_file(self, tmp_path):
        assert main(["verify", str(tmp_path / "absent.json")]) == 1
