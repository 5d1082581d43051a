import time
from fractions import Fraction

import pytest

from rationd import api, config
from rationd.analysis import compare_groups, compute_metrics, empirical_efficiency
from rationd.data import read_generator_config
from rationd.exceptions import ConfigurationError
from rationd.model import total_utility


def test_solve(tight_model1):
    alloc = api.solve(tight_model1, "offline1")
    assert total_utility(tight_model1, alloc) == Fraction("0.975")


def test_solve_refuses_model2_without_quotas(tight_model1):
    with pytest.raises(ConfigurationError):
        api.solve(tight_model1, "oracle2")


def test_compare(tight_model2):
    result = api.compare(tight_model2, model2=True, adversarial=True)
    assert result.ratio == Fraction(5, 2)
    assert result.tight and result.within_bound


def test_verify(tight_model1):
    assert api.verify(tight_model1).ok


def test_verify_samples():
    reports = api.verify_samples(4, seed=7, model2=True)
    assert [report.label for report in reports] == ["sample 7", "sample 8", "sample 9", "sample 10"]
    assert all(report.ok for report in reports)


def test_negative_samples():
    with pytest.raises(ValueError):
        api.verify_samples(-1)


@pytest.mark.slow
def test_generated_population():
    instance = api.generate_instance(read_generator_config(config.FIXTURES_DIR / "generator.json"))

    start = time.perf_counter()
    online = api.solve(instance, "online1")
    assert time.perf_counter() - start < 60

    assert empirical_efficiency(instance) >= Fraction("0.95")
    assert compare_groups(compute_metrics(instance, online), "60+", "18-45").ok
