import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from models.allocation import Allocation
from models.environment import Environment
from models.ga_settings import GaSettings
from models.optimization_problem import OptimizationProblem
from models.transmitter_config import TransmitterConfig
from services import allocator_service
from services.exceptions import InfeasibleAllocationError, ThermodynamicDomainError

SEEDS = (0, 1, 2, 3, 4)


def _problem(users, e_total=4e-16, threshold=1.0):
    return OptimizationProblem(users, Environment(), e_total, threshold)


def _median_rho(problem, seeds=SEEDS):
    results = [allocator_service.optimize_ga(problem, GaSettings(seed=seed)) for seed in seeds]
    return np.median([allocation.get_rho() for allocation, _ in results], axis=0), results


@pytest.fixture(scope="module")
def fig5_runs():
    users = [TransmitterConfig(n, n, 0.5, 50001) for n in (300_000_000, 600_000_000, 900_000_000)]
    return _median_rho(_problem(users))


@pytest.fixture(scope="module")
def identical_pair_runs():
    user = TransmitterConfig(600_000_000, 600_000_000, 0.5, 40001)
    return _median_rho(_problem([user, user]))


def test_zero_energies_feasible_only_with_loose_threshold(default_user, env, e_total):
    for threshold, expected in ((0.5, True), (0.4, False)):
        problem = OptimizationProblem([default_user, default_user], env, e_total, threshold)
        allocation = allocator_service.evaluate_allocation(problem, [0.0, 0.0])
        is_feasible, violations = allocator_service.feasible(problem, allocation)
        assert is_feasible is expected
        assert len(violations) == (0 if expected else 2)


def test_budget_violation_is_reported(default_problem, e_total):
    allocation = allocator_service.evaluate_allocation(default_problem, [0.505 * e_total, 0.505 * e_total])
    is_feasible, violations = allocator_service.feasible(default_problem, allocation)
    assert not is_feasible
    assert any(v.startswith("budget") for v in violations)


def test_even_split_is_feasible(default_problem, e_total):
    allocation = allocator_service.evaluate_allocation(default_problem, [0.5 * e_total, 0.5 * e_total])
    assert allocator_service.feasible(default_problem, allocation) == (True, [])
    assert allocation.get_total_ber() == pytest.approx(sum(allocation.get_per_user_ber()), abs=1e-12)


def test_negative_energy_is_reported(default_problem):
    allocation = Allocation([-1e-17, 1e-16], [-0.025, 0.25], [0.5, 0.1], 0.6)
    is_feasible, violations = allocator_service.feasible(default_problem, allocation)
    assert not is_feasible
    assert any("negative energy" in v for v in violations)


def test_refine_rho_finds_parabola_minimum():
    rho = allocator_service.refine_rho(lambda x: (x - 0.3004) ** 2, 0.299, 0.300, 0.301)
    assert rho == pytest.approx(0.3004, abs=1e-6)


@pytest.mark.parametrize("lower,middle,upper", [(0.001, 0.001, 0.002), (0.2, 0.3, 0.4)])
def test_refine_rho_keeps_grid_point_without_bracket(lower, middle, upper):
    # a grid-edge bracket and a flat objective are both rejected
    assert allocator_service.refine_rho(lambda x: 1.0, lower, middle, upper) == middle


def test_identical_users_split_evenly(default_problem, e_total):
    allocation = allocator_service.optimize_two_user(default_problem)
    assert allocation.get_rho()[0] == pytest.approx(0.5, abs=1e-3)
    assert sum(allocation.get_energies()) == pytest.approx(e_total, rel=1e-12)
    assert allocator_service.derivative_brackets_minimum(default_problem, allocation.get_rho()[0])


def test_larger_user_gets_more_energy(fig4_problem):
    allocation = allocator_service.optimize_two_user(fig4_problem)
    assert allocation.get_rho()[0] < 0.5


def test_swapping_users_mirrors_rho(fig4_problem):
    forward = allocator_service.optimize_two_user(fig4_problem)
    swapped = allocator_service.optimize_two_user(fig4_problem.with_users(fig4_problem.get_users()[::-1]))
    assert swapped.get_rho()[0] == pytest.approx(1.0 - forward.get_rho()[0], abs=2e-6)


def test_two_user_needs_two_users(fig5_problem):
    with pytest.raises(ValueError):
        allocator_service.optimize_two_user(fig5_problem)


def test_unreachable_threshold_is_infeasible(default_user, env, e_total):
    problem = OptimizationProblem([default_user, default_user], env, e_total, 1e-6)
    with pytest.raises(InfeasibleAllocationError):
        allocator_service.optimize_two_user(problem)


def test_whole_interval_outside_domain(env, e_total):
    tiny = TransmitterConfig(100, 100, 0.5, 11)
    with pytest.raises(ThermodynamicDomainError):
        allocator_service.optimize_two_user(OptimizationProblem([tiny, tiny], env, e_total))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(min_value=-2.0, max_value=2.0), min_size=2, max_size=10))
def test_repair_lands_on_simplex(values):
    repaired = allocator_service.repair(np.array(values))
    assert np.all(repaired >= 0.0)
    assert math.fsum(repaired) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(min_value=0.01, max_value=1.0), min_size=2, max_size=10))
def test_repair_is_idempotent(values):
    feasible_point = np.array(values) / math.fsum(values)
    once = allocator_service.repair(feasible_point)
    np.testing.assert_allclose(once, feasible_point, rtol=0, atol=1e-12)
    np.testing.assert_allclose(allocator_service.repair(once), once, rtol=0, atol=1e-12)


def test_ga_best_fitness_never_increases(identical_pair_runs):
    _, results = identical_pair_runs
    for _, trace in results:
        assert list(trace.columns) == ["generation", "best", "mean"]
        assert np.all(np.diff(trace["best"].to_numpy()) <= 0.0)


def test_ga_spends_whole_budget(identical_pair_runs):
    _, results = identical_pair_runs
    for allocation, _ in results:
        assert sum(allocation.get_energies()) == pytest.approx(4e-16, rel=1e-12)
        assert min(allocation.get_energies()) >= 0.0


def test_ga_splits_identical_users_evenly(identical_pair_runs):
    median, _ = identical_pair_runs
    assert median[0] == pytest.approx(0.5, abs=0.02)


def test_ga_agrees_with_golden_section(identical_pair_runs, default_problem):
    _, results = identical_pair_runs
    best = allocator_service.optimize_two_user(default_problem).get_total_ber()
    gaps = [allocation.get_total_ber() - best for allocation, _ in results]
    assert np.median(gaps) <= 1e-4


def test_ga_is_deterministic(default_problem):
    first, trace1 = allocator_service.optimize_ga(default_problem, GaSettings(seed=7, generations=20))
    second, trace2 = allocator_service.optimize_ga(default_problem, GaSettings(seed=7, generations=20))
    assert first.to_dict() == second.to_dict()
    assert trace1.equals(trace2)


def test_ga_reproduces_three_user_reservoir_split(fig5_runs):
    median, _ = fig5_runs
    np.testing.assert_allclose(median, [0.20, 0.34, 0.45], atol=0.05)


def test_ga_reproduces_three_user_release_split(fig6_problem):
    median, _ = _median_rho(fig6_problem)
    np.testing.assert_allclose(median, [0.49, 0.29, 0.22], atol=0.05)


def test_ga_permutation_equivariance(fig5_runs, fig5_problem):
    median, _ = fig5_runs
    reversed_median, _ = _median_rho(fig5_problem.with_users(fig5_problem.get_users()[::-1]))
    np.testing.assert_allclose(reversed_median[::-1], median, atol=0.02)


def test_ga_unreachable_threshold_is_infeasible(default_user, env, e_total):
    problem = OptimizationProblem([default_user, default_user], env, e_total, 1e-6)
    with pytest.raises(InfeasibleAllocationError):
        allocator_service.optimize_ga(problem, GaSettings(generations=5))


def test_ga_rejects_invalid_settings(default_problem):
    with pytest.raises(ThermodynamicDomainError):
        allocator_service.optimize_ga(default_problem, GaSettings(population_size=3))
