import pytest

from models.environment import Environment
from models.optimization_problem import OptimizationProblem
from models.transmitter_config import TransmitterConfig


@pytest.fixture()
def env():
    return Environment()


@pytest.fixture()
def default_user():
    # 6e8 molecules per reservoir, N_m = 4e4 made odd
    return TransmitterConfig(600_000_000, 600_000_000, 0.5, 40001)


@pytest.fixture()
def e_total():
    return 4e-16


@pytest.fixture()
def default_problem(default_user, env, e_total):
    return OptimizationProblem([default_user, default_user], env, e_total)


@pytest.fixture()
def fig4_problem(env, e_total):
    small = TransmitterConfig(600_000_000, 600_000_000, 0.5, 40001)
    large = TransmitterConfig(800_000_000, 800_000_000, 0.5, 40001)
    return OptimizationProblem([small, large], env, e_total)


@pytest.fixture()
def fig5_problem(env, e_total):
    users = [TransmitterConfig(n, n, 0.5, 50001) for n in (300_000_000, 600_000_000, 900_000_000)]
    return OptimizationProblem(users, env, e_total)


@pytest.fixture()
def fig6_problem(env, e_total):
    users = [TransmitterConfig(300_000_000, 300_000_000, 0.5, n) for n in (20001, 40001, 60001)]
    return OptimizationProblem(users, env, e_total)


@pytest.fixture()
def scaled_user():
    return TransmitterConfig(200_000, 200_000, 0.5, 2001)
