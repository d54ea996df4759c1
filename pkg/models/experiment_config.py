"""Experiment configuration entity classes."""

from typing import List, Optional, Tuple

import numpy as np

from models.environment import Environment
from models.ga_settings import GaSettings
from models.optimization_problem import OptimizationProblem
from models.transmitter_config import TransmitterConfig

SWEEP_VARIABLES = ("rho", "energy")
SERIES_VARIABLES = ("n_release", "n_reservoir")


class SweepSpec:
    """Uniform grid over rho (ber-curve) or per-user energy (simulate)."""

    def __init__(self, variable: str, start: float, stop: float, step: float):
        """
        Initialize a SweepSpec instance.

        Args:
            variable: "rho" or "energy"
            start: First grid value
            stop: Last grid value (inclusive)
            step: Grid spacing
        """
        self.__variable = variable
        self.__start = float(start)
        self.__stop = float(stop)
        self.__step = float(step)

    def get_variable(self) -> str:
        return self.__variable

    def get_start(self) -> float:
        return self.__start

    def get_stop(self) -> float:
        return self.__stop

    def get_step(self) -> float:
        return self.__step

    def values(self) -> np.ndarray:
        """
        Grid values from start to stop inclusive.

        Values are built as start + i * step and rounded to 12 significant
        decimals relative to the step so that reruns produce identical rows.
        """
        if self.__stop == self.__start:
            return np.array([self.__start])
        count = int(np.floor((self.__stop - self.__start) / self.__step + 1e-9)) + 1
        grid = self.__start + self.__step * np.arange(count)
        decimals = 12 - int(np.floor(np.log10(abs(self.__step))))
        return np.round(grid, decimals)

    def validate(self) -> Tuple[bool, str]:
        if self.__variable not in SWEEP_VARIABLES:
            return False, f"Sweep variable must be one of {', '.join(SWEEP_VARIABLES)}"
        if self.__stop < self.__start:
            return False, "Sweep stop must not be below start"
        if self.__stop > self.__start and not self.__step > 0:
            return False, "Sweep step must be positive"
        if self.__variable == "rho" and not (0 < self.__start and self.__stop < 1):
            return False, "rho sweep must stay inside (0, 1)"
        if self.__variable == "energy" and self.__start < 0:
            return False, "energy sweep must be non-negative"
        return True, "Sweep is valid"

    def to_dict(self) -> dict:
        return {
            'variable': self.__variable,
            'start': self.__start,
            'stop': self.__stop,
            'step': self.__step
        }


class SeriesSpec:
    """Repeat a sweep for several values of one transmitter parameter."""

    def __init__(self, variable: str, values: List[int]):
        self.__variable = variable
        self.__values = [int(v) for v in values]

    def get_variable(self) -> str:
        return self.__variable

    def get_values(self) -> List[int]:
        return list(self.__values)

    def apply(self, users: List[TransmitterConfig], value: int) -> List[TransmitterConfig]:
        """Return the user list with the series parameter set to value."""
        if self.__variable == "n_release":
            return [user.with_n_release(value) for user in users]
        return [user.with_reservoirs(value, value) for user in users]

    def label(self, value: int) -> str:
        return f"{self.__variable}={value}"

    def validate(self) -> Tuple[bool, str]:
        if self.__variable not in SERIES_VARIABLES:
            return False, f"Series variable must be one of {', '.join(SERIES_VARIABLES)}"
        if not self.__values:
            return False, "Series needs at least one value"
        return True, "Series is valid"

    def to_dict(self) -> dict:
        return {'variable': self.__variable, 'values': list(self.__values)}


class ExperimentConfig:
    """Everything one CLI run needs: physics, users, budget, sweep and solver knobs."""

    def __init__(self, env: Environment, users: List[TransmitterConfig],
                 e_total: float, ber_threshold: float = 1.0,
                 sweep: Optional[SweepSpec] = None,
                 series: Optional[SeriesSpec] = None,
                 ga_settings: Optional[GaSettings] = None,
                 seed: Optional[int] = None, n_trials: int = 1_000_000,
                 output: Optional[str] = None, source: str = "<defaults>"):
        """
        Initialize an ExperimentConfig instance.

        Args:
            env: Physical constants
            users: Transmitter configs in user order
            e_total: Total energy budget (J)
            ber_threshold: Per-user BER cap
            sweep: Grid for ber-curve / simulate
            series: Optional parameter series repeated over the sweep
            ga_settings: Genetic algorithm settings
            seed: Seed from the config file, if any
            n_trials: Monte Carlo trials per point
            output: Output path from the config file, if any
            source: Where the config came from (path or preset name)
        """
        self.__env = env
        self.__users = list(users)
        self.__e_total = float(e_total)
        self.__ber_threshold = float(ber_threshold)
        self.__sweep = sweep
        self.__series = series
        self.__ga_settings = ga_settings or GaSettings()
        self.__seed = seed
        self.__n_trials = int(n_trials)
        self.__output = output
        self.__source = source

    def get_env(self) -> Environment:
        return self.__env

    def get_users(self) -> List[TransmitterConfig]:
        return list(self.__users)

    def get_e_total(self) -> float:
        return self.__e_total

    def get_ber_threshold(self) -> float:
        return self.__ber_threshold

    def get_sweep(self) -> Optional[SweepSpec]:
        return self.__sweep

    def get_series(self) -> Optional[SeriesSpec]:
        return self.__series

    def get_ga_settings(self) -> GaSettings:
        return self.__ga_settings

    def get_seed(self) -> Optional[int]:
        return self.__seed

    def get_n_trials(self) -> int:
        return self.__n_trials

    def get_output(self) -> Optional[str]:
        return self.__output

    def get_source(self) -> str:
        return self.__source

    def to_problem(self, users: Optional[List[TransmitterConfig]] = None) -> OptimizationProblem:
        """Build the allocation problem described by this config."""
        return OptimizationProblem(
            users if users is not None else self.__users,
            self.__env,
            self.__e_total,
            self.__ber_threshold
        )

    def to_dict(self) -> dict:
        return {
            'env': self.__env.to_dict(),
            'users': [user.to_dict() for user in self.__users],
            'e_total': self.__e_total,
            'ber_threshold': self.__ber_threshold,
            'sweep': self.__sweep.to_dict() if self.__sweep else None,
            'series': self.__series.to_dict() if self.__series else None,
            'ga': self.__ga_settings.to_dict(),
            'seed': self.__seed,
            'trials': self.__n_trials,
            'output': self.__output
        }

    def __str__(self) -> str:
        return f"ExperimentConfig({self.__source}, K={len(self.__users)}, E_total={self.__e_total:g} J)"
