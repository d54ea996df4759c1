"""Experiment runs behind the CLI commands: sweeps, optimisation, validation and simulation."""

import logging
import math
import os
import sys
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from models.allocation import Allocation
from models.experiment_config import ExperimentConfig, SweepSpec
from models.transmitter_config import TransmitterConfig
from services import allocator_service, ber_service, oracle_service, thermo_service
from services.exceptions import ConfigError, ThermodynamicDomainError

logger = logging.getLogger(__name__)

SEED_ENV_VAR = "MOSK_ALLOC_SEED"

CURVE_COLUMNS = ["rho", "ber_user1", "ber_user2", "total_ber", "valid_flag"]
SERIES_COLUMN = "series"
REPORT_COLUMNS = ["user", "n_low", "n_high", "c_init", "n_release", "energy", "rho", "ber"]
SIMULATE_COLUMNS = ["energy", "analytic_ber", "empirical_ber", "ci_halfwidth", "n_trials"]
CHECK_COLUMNS = ["check", "passed", "measured", "limit"]


def resolve_seed(cli_seed: Optional[int], config: ExperimentConfig) -> int:
    """
    Seed precedence: --seed, then the config's seed key, then the
    MOSK_ALLOC_SEED environment variable, then 0.

    Raises:
        ConfigError: if the environment variable is not a non-negative integer
    """
    if cli_seed is not None:
        return cli_seed
    if config.get_seed() is not None:
        return config.get_seed()
    raw = os.getenv(SEED_ENV_VAR)
    if raw is None or raw.strip() == "":
        return 0
    try:
        seed = int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got '{raw}'")
    if seed < 0:
        raise ConfigError(f"{SEED_ENV_VAR} must be non-negative")
    return seed


def write_csv(df: pd.DataFrame, path: Optional[str]) -> None:
    """Write with a fixed header and shortest round-trip floats; stdout when no path."""
    if path is None:
        df.to_csv(sys.stdout, index=False, lineterminator="\n")
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, lineterminator="\n")
    logger.info("Wrote %d rows to %s", len(df), path)


class ExperimentService:
    """Runs CLI commands against one loaded experiment config."""

    def __init__(self, config: ExperimentConfig, seed: int = 0, out: Optional[str] = None,
                 n_trials: Optional[int] = None, workers: int = 1):
        """
        Initialize ExperimentService.

        Args:
            config: Validated experiment config
            seed: Resolved root seed
            out: Output path (overrides the config's output key)
            n_trials: Monte Carlo trials (overrides the config's trials key)
            workers: Threads for Monte Carlo blocks
        """
        self._config = config
        self._seed = seed
        self._out = out if out is not None else config.get_output()
        self._n_trials = n_trials if n_trials is not None else config.get_n_trials()
        self._workers = workers

    def _sweep(self, variable: str, fallback: SweepSpec) -> SweepSpec:
        sweep = self._config.get_sweep()
        if sweep is not None and sweep.get_variable() == variable:
            return sweep
        logger.info("No %s sweep in %s, using %s..%s step %s", variable,
                    self._config.get_source(), fallback.get_start(),
                    fallback.get_stop(), fallback.get_step())
        return fallback

    def _require_two_users(self, command: str) -> Tuple[TransmitterConfig, TransmitterConfig]:
        users = self._config.get_users()
        if len(users) != 2:
            raise ConfigError(f"{command} needs exactly two users, got {len(users)}",
                              self._config.get_source())
        return users[0], users[1]

    def cmd_ber_curve(self) -> pd.DataFrame:
        """
        Total BER of two users over a grid of rho, one block of rows per series value.

        Points outside the energy domain are kept with valid_flag = 0. A
        trailing series column labels the blocks when a series is configured.
        """
        self._require_two_users("ber-curve")
        sweep = self._sweep("rho", SweepSpec("rho", 0.01, 0.99, 0.01))
        series = self._config.get_series()
        env = self._config.get_env()
        e_total = self._config.get_e_total()

        if series is None:
            blocks = [(None, self._config.get_users())]
        else:
            blocks = [(series.label(value), series.apply(self._config.get_users(), value))
                      for value in series.get_values()]

        rows = []
        for label, (cfg1, cfg2) in blocks:
            for rho in sweep.values():
                try:
                    ber1 = ber_service.transmitter_ber(cfg1, env, rho * e_total).get_ber()
                    ber2 = ber_service.transmitter_ber(cfg2, env, (1.0 - rho) * e_total).get_ber()
                    rows.append((rho, ber1, ber2, ber1 + ber2, 1, label))
                except ThermodynamicDomainError as exc:
                    logger.debug("rho=%s outside the energy domain: %s", rho, exc)
                    rows.append((rho, math.nan, math.nan, math.nan, 0, label))

        df = pd.DataFrame(rows, columns=CURVE_COLUMNS + [SERIES_COLUMN])
        if series is None:
            df = df.drop(columns=SERIES_COLUMN)
        write_csv(df, self._out)
        return df

    def cmd_optimize(self, force_ga: bool = False) -> Tuple[Allocation, Optional[pd.DataFrame]]:
        """
        Optimal energy split: golden-section path for two users, GA otherwise.

        Writes the allocation table to the output path and the GA trace next
        to it as <out>.trace.csv.
        """
        problem = self._config.to_problem()
        trace = None
        if problem.get_user_count() == 2 and not force_ga:
            method = "golden-section"
            allocation = allocator_service.optimize_two_user(problem)
        else:
            method = "genetic algorithm"
            settings = self._config.get_ga_settings().with_seed(self._seed)
            allocation, trace = allocator_service.optimize_ga(problem, settings)

        rows = []
        for index, (user, energy, rho, ber) in enumerate(zip(
                problem.get_users(), allocation.get_energies(),
                allocation.get_rho(), allocation.get_per_user_ber()), start=1):
            rows.append((index, user.get_n_low(), user.get_n_high(), user.get_c_init(),
                         user.get_n_release(), energy, rho, ber))
        report = pd.DataFrame(rows, columns=REPORT_COLUMNS)

        print("=" * 60)
        print(f"OPTIMAL ENERGY ALLOCATION ({method})")
        print("=" * 60)
        for row in rows:
            print(f"User {row[0]}: rho={row[6]:.6f}  E={row[5]:.6e} J  BER={row[7]:.6e}")
        print(f"Total BER: {allocation.get_total_ber():.6e}")
        if trace is not None:
            print(f"Generations: {int(trace['generation'].iloc[-1])}")

        if self._out is not None:
            write_csv(report, self._out)
            if trace is not None:
                write_csv(trace, f"{self._out}.trace.csv")
        return allocation, trace

    def _validation_checks(self) -> List[Tuple[str, bool, float, float]]:
        env = self._config.get_env()
        users = self._config.get_users()
        e_total = self._config.get_e_total()
        cfg = users[0]
        checks = []

        # every user must be evaluable at its equal share
        for user in users:
            ber_service.transmitter_ber(user, env, e_total / len(users))

        worst_taylor = 0.0
        worst_conservation = 0.0
        for e in np.geomspace(2.5e-3 * e_total, 0.75 * e_total, 8):
            m = thermo_service.moved_from_energy(cfg, env, e)
            fractions = thermo_service.fractions_after_move(cfg, env, m)
            roundtrip = thermo_service.energy_cost_exact(cfg, env, m)
            worst_taylor = max(worst_taylor, abs(roundtrip - e) / e / fractions.get_beta() ** 2)
            k2 = fractions.get_c_low() * cfg.get_n_low() + fractions.get_c_high() * cfg.get_n_high()
            expected = cfg.get_c_init() * cfg.get_n_total()
            worst_conservation = max(worst_conservation, abs(k2 - expected) / expected)
        checks.append(("taylor roundtrip (error / beta^2)", worst_taylor <= 1.0, worst_taylor, 1.0))
        checks.append(("k2 conservation (relative)", worst_conservation <= 1e-12, worst_conservation, 1e-12))

        state = oracle_service.build_state(cfg, env, e_total / 2)
        is_valid, _ = state.validate(cfg)
        checks.append(("integer state conservation", is_valid, 0.0 if is_valid else 1.0, 0.0))

        scaled = TransmitterConfig(200_000, 200_000, 0.5, 2001)
        scaled_fractions = thermo_service.fractions_after_move(scaled, env, 2000)
        scaled_state = oracle_service.state_after_move(scaled, 2000)
        gap0 = abs(ber_service.p_correct_bit0(scaled, scaled_fractions)
                   - oracle_service.hypergeom_tail_bit0(scaled_state, scaled))
        gap1 = abs(ber_service.p_correct_bit1(scaled, scaled_fractions)
                   - oracle_service.hypergeom_tail_bit1(scaled_state, scaled))
        checks.append(("analytic vs exact tail, bit 0", gap0 <= 1e-2, gap0, 1e-2))
        checks.append(("analytic vs exact tail, bit 1", gap1 <= 1e-2, gap1, 1e-2))

        tiny = TransmitterConfig(20, 20, 0.5, 5)
        exhaustive = abs(oracle_service.hypergeom_tail_bit0(oracle_service.state_after_move(tiny, 2), tiny)
                         - 10912 / 15504)
        checks.append(("exhaustive small instance", exhaustive <= 1e-12, exhaustive, 1e-12))

        for label, energy in (("monte carlo at E/2", e_total / 2), ("monte carlo at zero energy", 0.0)):
            analytic = ber_service.transmitter_ber(cfg, env, energy).get_ber()
            report = oracle_service.run_trials(oracle_service.build_state(cfg, env, energy), cfg,
                                               self._n_trials, self._seed, self._workers)
            sigma = math.sqrt(analytic * (1.0 - analytic) / self._n_trials)
            z_score = abs(report.get_ber() - analytic) / sigma if sigma > 0 else 0.0
            checks.append((f"{label} (sigmas)", z_score <= 3.0, z_score, 3.0))

        zero = abs(ber_service.transmitter_ber(cfg, env, 0.0).get_ber() - 0.5)
        checks.append(("zero-energy coin flip", zero <= 1e-10, zero, 1e-10))

        if len(users) >= 2 and all(ber_service.is_symmetric_regime(u) for u in users[:2]):
            worst = 0.0
            step = 1e-5
            for rho in (0.2, 0.35, 0.65, 0.8):
                g = ber_service.two_user_ber_derivative(rho, e_total, users[0], users[1], env)
                fd = (ber_service.two_user_total_ber(rho + step, e_total, users[0], users[1], env)
                      - ber_service.two_user_total_ber(rho - step, e_total, users[0], users[1], env)) / (2 * step)
                worst = max(worst, abs(g - fd) / max(abs(fd), 1e-6))
            checks.append(("g(rho) vs finite differences (relative)", worst <= 1e-6, worst, 1e-6))

        return checks

    def cmd_validate(self) -> Tuple[bool, pd.DataFrame]:
        """
        Run the cross-check battery on the config's physics.

        Returns:
            tuple: (all checks passed, DataFrame of check, passed, measured, limit)

        Raises:
            ThermodynamicDomainError: if the config's energies are outside the domain
        """
        checks = self._validation_checks()
        print("=" * 60)
        print(f"VALIDATION: {self._config.get_source()} (seed {self._seed})")
        print("=" * 60)
        for index, (name, passed, measured, limit) in enumerate(checks, start=1):
            print(f"[CHECK {index}] {name}: {'PASS' if passed else 'FAIL'} "
                  f"(measured {measured:.3e}, limit {limit:.3e})")
        n_passed = sum(1 for check in checks if check[1])
        print("=" * 60)
        print(f"{n_passed}/{len(checks)} checks passed")

        df = pd.DataFrame(checks, columns=CHECK_COLUMNS)
        if self._out is not None:
            write_csv(df, self._out)
        return n_passed == len(checks), df

    def cmd_simulate(self) -> pd.DataFrame:
        """
        Analytic against Monte Carlo BER for the first user over a grid of energies.

        Point i uses root seed seed + i.
        """
        cfg = self._config.get_users()[0]
        env = self._config.get_env()
        e_total = self._config.get_e_total()
        sweep = self._sweep("energy", SweepSpec("energy", 0.0, e_total / 2, e_total / 8))

        rows = []
        for index, energy in enumerate(sweep.values()):
            analytic = ber_service.transmitter_ber(cfg, env, energy).get_ber()
            state = oracle_service.build_state(cfg, env, energy)
            report = oracle_service.run_trials(state, cfg, self._n_trials, self._seed + index, self._workers)
            if abs(report.get_ber() - analytic) > report.get_halfwidth_ber():
                logger.warning("E=%s: empirical BER %.6g outside the 99%% interval of %.6g",
                               energy, report.get_ber(), analytic)
            rows.append((energy, analytic, report.get_ber(), report.get_halfwidth_ber(), self._n_trials))

        df = pd.DataFrame(rows, columns=SIMULATE_COLUMNS)
        write_csv(df, self._out)
        return df
