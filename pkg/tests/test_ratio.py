import math
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from rationd.analysis import competitive_ratio, empirical_efficiency, competitive_bound, verify_daily_maximum
from rationd.analysis.checks import is_non_wasteful
from rationd.analysis.ratio import utility_ratio
from rationd.data import InstanceBounds, sample_instance
from rationd.model import total_utility
from rationd.strategies import run_online_trace, solve_exact_oracle, solve_offline_model1


class TestCompetitiveRatio:

    def test_tight_model1(self, tight_model1):
        assert competitive_ratio(tight_model1, adversarial=True) == Fraction("1.95")
        assert competitive_bound(tight_model1) == Fraction("1.95")

    def test_tight_model2(self, tight_model2):
        ratio = competitive_ratio(tight_model2, model2=True, adversarial=True)
        assert ratio == Fraction("2.5")
        assert ratio == competitive_bound(tight_model2, model2=True)

    def test_single_agent(self, single_agent_instance):
        assert competitive_ratio(single_agent_instance) == 1

    def test_empty_instance(self, empty_instance):
        assert competitive_ratio(empty_instance) == 1

    def test_zero_online_utility(self):
        assert utility_ratio(Fraction(1), Fraction(0)) == math.inf

    def test_efficiency_is_the_reciprocal(self, tight_model1):
        assert empirical_efficiency(tight_model1, adversarial=True) == 1 / Fraction("1.95")


@settings(max_examples=1000, deadline=None, derandomize=True)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_model1_bound_and_daily_maximum(seed):
    instance = sample_instance(seed, InstanceBounds(max_agents=10, max_days=4))
    trace = run_online_trace(instance)
    optimum = total_utility(instance, solve_offline_model1(instance))
    assert optimum <= (1 + instance.discount) * total_utility(instance, trace.allocation)
    assert all(check.ok for check in verify_daily_maximum(trace))
    assert is_non_wasteful(instance, trace.allocation)


@settings(max_examples=300, deadline=None, derandomize=True)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_model2_bound(seed):
    instance = sample_instance(seed, InstanceBounds(max_agents=6, max_days=3, model2=True))
    trace = run_online_trace(instance, model2=True)
    optimum = total_utility(instance, solve_exact_oracle(instance, model2=True))
    assert optimum <= competitive_bound(instance, model2=True) * total_utility(instance, trace.allocation)
    assert is_non_wasteful(instance, trace.allocation, model2=True)
