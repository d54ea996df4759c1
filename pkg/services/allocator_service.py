"""
Energy allocation across K transmitters sharing one budget.

Two users: coarse grid over rho, golden-section refinement, and a sign check
of the closed-form derivative when both users allow it. Any K: a real-coded
genetic algorithm over the simplex of allocation fractions.
"""

import logging
import math
from typing import Callable, List, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import minimize_scalar

from models.allocation import Allocation
from models.ga_settings import GaSettings
from models.optimization_problem import OptimizationProblem
from services import ber_service, thermo_service
from services.exceptions import InfeasibleAllocationError, ThermodynamicDomainError

logger = logging.getLogger(__name__)

GRID_STEP = 1e-3
RHO_TOLERANCE = 1e-6
THRESHOLD_PENALTY = 1e3
CROSSCHECK_DELTA = 1e-3
STAGNATION_TOLERANCE = 1e-9
BUDGET_TOLERANCE = 1e-12

TRACE_COLUMNS = ["generation", "best", "mean"]


def _require_problem(problem: OptimizationProblem) -> None:
    is_valid, error_msg = problem.validate()
    if not is_valid:
        raise ThermodynamicDomainError(error_msg)


def evaluate_allocation(problem: OptimizationProblem, energies: List[float]) -> Allocation:
    """
    Per-user and total BER of an energy assignment.

    Raises:
        ThermodynamicDomainError: if any energy is outside its user's domain
    """
    if len(energies) != problem.get_user_count():
        raise ValueError("One energy per user is required")
    env = problem.get_env()
    per_user = [
        ber_service.transmitter_ber(user, env, energy).get_ber()
        for user, energy in zip(problem.get_users(), energies)
    ]
    e_total = problem.get_e_total()
    return Allocation(
        energies=energies,
        rho=[energy / e_total for energy in energies],
        per_user_ber=per_user,
        total_ber=math.fsum(per_user)
    )


def feasible(problem: OptimizationProblem, allocation: Allocation) -> Tuple[bool, List[str]]:
    """
    Check an allocation against every constraint of the problem.

    Args:
        problem: The allocation problem
        allocation: Candidate allocation

    Returns:
        tuple: (is_feasible: bool, violations: list of messages with margins)
    """
    if allocation.get_user_count() != problem.get_user_count():
        raise ValueError("Allocation and problem disagree on the number of users")

    violations = []
    e_total = problem.get_e_total()
    energies = allocation.get_energies()

    excess = math.fsum(energies) - e_total
    if excess > BUDGET_TOLERANCE * e_total:
        violations.append(f"budget: energies exceed e_total by {excess:.6g} J")

    threshold = problem.get_ber_threshold()
    for index, (user, energy, ber) in enumerate(
            zip(problem.get_users(), energies, allocation.get_per_user_ber()), start=1):
        if energy < 0:
            violations.append(f"user {index}: negative energy {energy:.6g} J")
            continue
        try:
            thermo_service.moved_from_energy(user, problem.get_env(), energy)
        except ThermodynamicDomainError as exc:
            violations.append(f"user {index}: energy domain: {exc}")
        if ber > threshold:
            violations.append(
                f"user {index}: BER {ber:.6g} exceeds threshold {threshold:.6g} by {ber - threshold:.6g}"
            )

    return len(violations) == 0, violations


def refine_rho(f: Callable[[float], float], lower: float, middle: float, upper: float,
               tol: float = RHO_TOLERANCE) -> float:
    """
    Golden-section refinement of a grid minimum.

    f(middle) must lie strictly below f(lower) and f(upper); otherwise the
    bracket is rejected and middle comes back unchanged.
    """
    try:
        # scipy's golden tolerance is relative to |x|; rho < 1 keeps it absolute
        result = minimize_scalar(f, bracket=(lower, middle, upper), method="golden",
                                 options={"xtol": tol / 2})
    except ValueError as exc:
        logger.debug("No golden-section bracket around rho=%.4f: %s", middle, exc)
        return middle
    if not f(result.x) <= f(middle):
        return middle
    return float(result.x)


def _two_user_objective(problem: OptimizationProblem) -> Callable[[float], float]:
    cfg1, cfg2 = problem.get_users()
    env = problem.get_env()
    e_total = problem.get_e_total()
    threshold = problem.get_ber_threshold()

    def objective(rho: float) -> float:
        try:
            ber1 = ber_service.transmitter_ber(cfg1, env, rho * e_total).get_ber()
            ber2 = ber_service.transmitter_ber(cfg2, env, (1.0 - rho) * e_total).get_ber()
        except ThermodynamicDomainError:
            return math.inf
        excess = max(0.0, ber1 - threshold) + max(0.0, ber2 - threshold)
        return ber1 + ber2 + THRESHOLD_PENALTY * excess

    return objective


def derivative_brackets_minimum(problem: OptimizationProblem, rho: float,
                                delta: float = CROSSCHECK_DELTA) -> bool:
    """
    True when g changes sign from negative to positive across [rho - delta,
    rho + delta]. Only defined when both users are in the symmetric regime.
    """
    cfg1, cfg2 = problem.get_users()
    env = problem.get_env()
    e_total = problem.get_e_total()
    left = ber_service.two_user_ber_derivative(max(rho - delta, delta), e_total, cfg1, cfg2, env)
    right = ber_service.two_user_ber_derivative(min(rho + delta, 1.0 - delta), e_total, cfg1, cfg2, env)
    return left <= 0.0 <= right


def optimize_two_user(problem: OptimizationProblem) -> Allocation:
    """
    Minimise f(rho) = P_e,u1(rho E) + P_e,u2((1 - rho) E) for two users.

    A grid with step 1e-3 brackets the minimum, golden-section search refines
    it to 1e-6. The BER threshold enters as a penalty and is enforced on the
    result.

    Args:
        problem: Two-user allocation problem

    Returns:
        Allocation: the optimal split of the full budget

    Raises:
        ThermodynamicDomainError: if no rho in the grid is physically valid
        InfeasibleAllocationError: if the optimum violates the BER threshold
    """
    _require_problem(problem)
    if problem.get_user_count() != 2:
        raise ValueError("optimize_two_user needs exactly two users")

    objective = _two_user_objective(problem)
    grid = np.arange(1, round(1.0 / GRID_STEP)) * GRID_STEP
    values = np.array([objective(rho) for rho in grid])
    if not np.isfinite(values).any():
        raise ThermodynamicDomainError("Every allocation coefficient is outside the energy domain")

    best = int(np.argmin(values))
    lower = float(grid[max(best - 1, 0)])
    upper = float(grid[min(best + 1, len(grid) - 1)])
    rho = refine_rho(objective, lower, float(grid[best]), upper)
    logger.debug("Grid minimum at rho=%.4f refined to rho=%.8f", grid[best], rho)

    cfg1, cfg2 = problem.get_users()
    if ber_service.is_symmetric_regime(cfg1) and ber_service.is_symmetric_regime(cfg2):
        try:
            if derivative_brackets_minimum(problem, rho):
                logger.info("g(rho) changes sign across rho*=%.6f", rho)
            else:
                logger.warning("g(rho) does not change sign across rho*=%.6f", rho)
        except ThermodynamicDomainError as exc:
            logger.warning("Derivative cross-check skipped: %s", exc)

    e_total = problem.get_e_total()
    allocation = evaluate_allocation(problem, [rho * e_total, (1.0 - rho) * e_total])
    is_feasible, violations = feasible(problem, allocation)
    if not is_feasible:
        raise InfeasibleAllocationError("; ".join(violations))
    return allocation


def repair(fractions: np.ndarray) -> np.ndarray:
    """
    Euclidean projection onto the simplex {rho >= 0, sum(rho) = 1}.

    Sort-based: with u sorted descending, theta is fixed by the largest j
    such that u_j > (sum(u_1..u_j) - 1) / j.
    """
    x = np.asarray(fractions, dtype=float)
    u = np.sort(x)[::-1]
    css = np.cumsum(u)
    j = np.arange(1, len(x) + 1)
    support = np.nonzero(u - (css - 1.0) / j > 0)[0][-1]
    theta = (css[support] - 1.0) / (support + 1)
    return np.maximum(x - theta, 0.0)


def _fitness(problem: OptimizationProblem, fractions: np.ndarray, penalty: float) -> float:
    """Total BER plus penalised threshold excess; domain failures rank last."""
    try:
        allocation = evaluate_allocation(problem, list(fractions * problem.get_e_total()))
    except ThermodynamicDomainError:
        return problem.get_user_count() * (1.0 + penalty) + 1.0
    threshold = problem.get_ber_threshold()
    excess = sum(max(0.0, ber - threshold) for ber in allocation.get_per_user_ber())
    return allocation.get_total_ber() + penalty * excess


def _tournament(rng: np.random.Generator, fitness: np.ndarray, size: int) -> int:
    contestants = rng.integers(0, len(fitness), size=size)
    return int(contestants[np.argmin(fitness[contestants])])


def _blend_crossover(rng: np.random.Generator, parent1: np.ndarray, parent2: np.ndarray,
                     alpha: float = 0.5) -> np.ndarray:
    """BLX-alpha: each gene uniform on the parents' range widened by alpha on both sides."""
    lo = np.minimum(parent1, parent2)
    hi = np.maximum(parent1, parent2)
    spread = hi - lo
    return rng.uniform(lo - alpha * spread, hi + alpha * spread)


def _mutate(rng: np.random.Generator, chromosome: np.ndarray, rate: float, sigma: float) -> np.ndarray:
    mask = rng.random(len(chromosome)) < rate
    return chromosome + mask * rng.normal(0.0, sigma, len(chromosome))


def _make_child(population: np.ndarray, fitness: np.ndarray, settings: GaSettings,
                generation: int, index: int) -> np.ndarray:
    # one substream per (generation, individual) keeps runs schedule-independent
    rng = np.random.default_rng([settings.get_seed(), generation, index])
    parent1 = population[_tournament(rng, fitness, settings.get_tournament_size())]
    parent2 = population[_tournament(rng, fitness, settings.get_tournament_size())]
    if rng.random() < settings.get_crossover_rate():
        child = _blend_crossover(rng, parent1, parent2)
    else:
        child = parent1.copy()
    child = _mutate(rng, child, settings.get_mutation_rate(), settings.get_mutation_sigma())
    return repair(child)


def optimize_ga(problem: OptimizationProblem, settings: GaSettings) -> Tuple[Allocation, pd.DataFrame]:
    """
    Genetic algorithm for the K-user energy split.

    Chromosomes are allocation fractions on the simplex (the whole budget is
    always spent). Each generation keeps the elite unchanged and fills the
    rest by tournament selection, blend crossover and Gaussian mutation,
    repairing every child by projection onto the simplex.

    Args:
        problem: Allocation problem with K >= 2 users
        settings: GA knobs and seed

    Returns:
        tuple: (best allocation, trace DataFrame with generation, best, mean)

    Raises:
        ThermodynamicDomainError: if the problem or settings are invalid
        InfeasibleAllocationError: if the best individual violates a constraint
    """
    _require_problem(problem)
    is_valid, error_msg = settings.validate()
    if not is_valid:
        raise ThermodynamicDomainError(error_msg)

    k = problem.get_user_count()
    size = settings.get_population_size()
    penalty = settings.get_penalty_weight()
    window = settings.get_stagnation_window()

    population = np.array([
        np.random.default_rng([settings.get_seed(), 0, i]).dirichlet(np.ones(k))
        for i in range(size)
    ])
    fitness = np.array([_fitness(problem, individual, penalty) for individual in population])
    trace = [(0, float(fitness.min()), float(fitness.mean()))]

    reason = "generation cap"
    for generation in range(1, settings.get_generations() + 1):
        order = np.argsort(fitness, kind="stable")
        elite = order[:settings.get_elite_count()]

        children = [
            _make_child(population, fitness, settings, generation, index)
            for index in range(len(elite), size)
        ]
        child_fitness = [_fitness(problem, child, penalty) for child in children]

        population = np.vstack([population[elite]] + children) if children else population[elite]
        fitness = np.concatenate([fitness[elite], child_fitness])
        trace.append((generation, float(fitness.min()), float(fitness.mean())))
        logger.debug("Generation %d: best=%.10g mean=%.10g", *trace[-1])

        if generation >= window and trace[generation - window][1] - trace[-1][1] < STAGNATION_TOLERANCE:
            reason = f"no improvement over {window} generations"
            break

    best = population[int(np.argmin(fitness))]
    logger.info("GA stopped after %d generations (%s)", len(trace) - 1, reason)

    allocation = evaluate_allocation(problem, list(best * problem.get_e_total()))
    is_feasible, violations = feasible(problem, allocation)
    if not is_feasible:
        raise InfeasibleAllocationError("; ".join(violations))
    return allocation, pd.DataFrame(trace, columns=TRACE_COLUMNS)
