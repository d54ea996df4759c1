"""Experiment config files: flat key=value text with dotted prefixes."""

import io
import logging
import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from dotenv.parser import parse_stream

from models.environment import BOLTZMANN_CONSTANT, ROOM_TEMPERATURE, Environment
from models.experiment_config import ExperimentConfig, SeriesSpec, SweepSpec
from models.ga_settings import GaSettings
from models.transmitter_config import TransmitterConfig
from services.exceptions import ConfigError

logger = logging.getLogger(__name__)

PRESET_DIR = Path(__file__).resolve().parent.parent / "DATA" / "presets"
PRESETS = ("defaults", "fig3", "fig4", "fig5", "fig6", "reservoir_sizes")

DEFAULT_E_TOTAL = 4e-16
DEFAULT_TRIALS = 1_000_000
MIN_USERS = 2

USER_KEY = re.compile(r"^users\.(\d+)\.(n_low|n_high|c_init|n_release)$")
USER_FIELDS = ("n_low", "n_high", "c_init", "n_release")

FLOAT_KEYS = {
    "env.boltzmann_constant", "env.temperature", "e_total", "ber_threshold",
    "sweep.start", "sweep.stop", "sweep.step",
    "ga.crossover_rate", "ga.mutation_sigma", "ga.mutation_rate", "ga.penalty_weight",
}
INT_KEYS = {
    "ga.population_size", "ga.generations", "ga.elite_count", "ga.tournament_size",
    "ga.stagnation_window", "seed", "trials",
}
TEXT_KEYS = {"sweep.variable", "sweep.series.variable", "sweep.series.values", "output"}
SWEEP_KEYS = ("sweep.variable", "sweep.start", "sweep.stop", "sweep.step")


class ConfigLoader:
    """Reads and validates one experiment config file."""

    def __init__(self, path: str):
        """
        Initialize ConfigLoader.

        Args:
            path: Path to the config file
        """
        self._path = Path(path)

    @classmethod
    def for_preset(cls, name: str) -> 'ConfigLoader':
        """Loader for one of the bundled presets."""
        if name not in PRESETS:
            raise ConfigError(f"Unknown preset '{name}' (choose from {', '.join(PRESETS)})")
        return cls(str(PRESET_DIR / f"{name}.cfg"))

    def load(self) -> ExperimentConfig:
        """
        Parse and validate the file.

        Returns:
            ExperimentConfig: Validated experiment description

        Raises:
            ConfigError: with the file path and offending line
        """
        try:
            text = self._path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc.strerror}", str(self._path))
        config = parse_config(text, str(self._path))
        logger.info("Loaded %s", config)
        return config


def _read_bindings(text: str, source: str) -> Dict[str, Tuple[str, int]]:
    values = {}
    for binding in parse_stream(io.StringIO(text)):
        line = binding.original.line
        if binding.error:
            raise ConfigError("cannot parse line", source, line)
        if binding.key is None:
            continue
        key = binding.key
        if key not in FLOAT_KEYS | INT_KEYS | TEXT_KEYS and not USER_KEY.match(key):
            raise ConfigError(f"unknown key '{key}'", source, line)
        if binding.value is None or binding.value.strip() == "":
            raise ConfigError(f"missing value for '{key}'", source, line)
        if key in values:
            raise ConfigError(f"duplicate key '{key}' (first set on line {values[key][1]})", source, line)
        values[key] = (binding.value.strip(), line)
    return values


def _as_float(key: str, entry: Tuple[str, int], source: str) -> float:
    raw, line = entry
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"'{key}' must be a number, got '{raw}'", source, line)


def _as_int(key: str, entry: Tuple[str, int], source: str) -> int:
    raw, line = entry
    number = _as_float(key, entry, source)
    if not number.is_integer():
        raise ConfigError(f"'{key}' must be a whole number, got '{raw}'", source, line)
    return int(number)


class _Reader:
    """Typed access to parsed bindings, remembering lines for errors."""

    def __init__(self, values: Dict[str, Tuple[str, int]], source: str):
        self.values = values
        self.source = source

    def has(self, key: str) -> bool:
        return key in self.values

    def line(self, key: str) -> Optional[int]:
        entry = self.values.get(key)
        return entry[1] if entry else None

    def get_float(self, key: str, default: float) -> float:
        if key not in self.values:
            return default
        return _as_float(key, self.values[key], self.source)

    def get_int(self, key: str, default: int) -> int:
        if key not in self.values:
            return default
        return _as_int(key, self.values[key], self.source)

    def text(self, key: str) -> str:
        return self.values[key][0]

    def fail(self, message: str, key: Optional[str] = None) -> ConfigError:
        return ConfigError(message, self.source, self.line(key) if key else None)


def _read_users(reader: _Reader) -> List[TransmitterConfig]:
    fields: Dict[int, Dict[str, str]] = {}
    for key in reader.values:
        match = USER_KEY.match(key)
        if match:
            fields.setdefault(int(match.group(1)), {})[match.group(2)] = key

    if not fields:
        raise reader.fail("no users defined (expected users.1.n_low=...)")
    expected = list(range(1, len(fields) + 1))
    if sorted(fields) != expected:
        raise reader.fail(f"user indices must be 1..{len(fields)}, got {sorted(fields)}")
    if len(fields) < MIN_USERS:
        raise reader.fail(f"at least {MIN_USERS} users are required, got {len(fields)}",
                          min(fields[1].values(), key=reader.line))

    users = []
    for index in expected:
        keys = fields[index]
        first_key = min(keys.values(), key=reader.line)
        missing = [name for name in USER_FIELDS if name not in keys]
        if missing:
            raise reader.fail(f"user {index} is missing {', '.join(missing)}", first_key)
        user = TransmitterConfig(
            n_low=reader.get_int(keys["n_low"], 0),
            n_high=reader.get_int(keys["n_high"], 0),
            c_init=reader.get_float(keys["c_init"], 0.0),
            n_release=reader.get_int(keys["n_release"], 0)
        )
        is_valid, error_msg = user.validate()
        if not is_valid:
            raise reader.fail(f"user {index}: {error_msg}", first_key)
        users.append(user)
    return users


def _read_sweep(reader: _Reader) -> Optional[SweepSpec]:
    present = [key for key in SWEEP_KEYS if reader.has(key)]
    if not present:
        return None
    missing = [key for key in SWEEP_KEYS if not reader.has(key)]
    if missing:
        raise reader.fail(f"incomplete sweep, missing {', '.join(missing)}", present[0])
    sweep = SweepSpec(
        variable=reader.text("sweep.variable"),
        start=reader.get_float("sweep.start", 0.0),
        stop=reader.get_float("sweep.stop", 0.0),
        step=reader.get_float("sweep.step", 0.0)
    )
    is_valid, error_msg = sweep.validate()
    if not is_valid:
        raise reader.fail(error_msg, "sweep.variable")
    return sweep


def _read_series(reader: _Reader, users: List[TransmitterConfig]) -> Optional[SeriesSpec]:
    keys = ("sweep.series.variable", "sweep.series.values")
    present = [key for key in keys if reader.has(key)]
    if not present:
        return None
    if len(present) != 2:
        raise reader.fail("sweep.series needs both variable and values", present[0])
    raw_values = [item.strip() for item in reader.text("sweep.series.values").split(",")]
    entry_line = reader.line("sweep.series.values")
    values = [_as_int("sweep.series.values", (item, entry_line), reader.source) for item in raw_values]
    series = SeriesSpec(reader.text("sweep.series.variable"), values)
    is_valid, error_msg = series.validate()
    if not is_valid:
        raise reader.fail(error_msg, "sweep.series.variable")
    for value in series.get_values():
        for index, user in enumerate(series.apply(users, value), start=1):
            is_valid, error_msg = user.validate()
            if not is_valid:
                raise reader.fail(f"{series.label(value)}, user {index}: {error_msg}", "sweep.series.values")
    return series


def _read_ga(reader: _Reader) -> GaSettings:
    defaults = GaSettings()
    settings = GaSettings(
        population_size=reader.get_int("ga.population_size", defaults.get_population_size()),
        generations=reader.get_int("ga.generations", defaults.get_generations()),
        crossover_rate=reader.get_float("ga.crossover_rate", defaults.get_crossover_rate()),
        mutation_sigma=reader.get_float("ga.mutation_sigma", defaults.get_mutation_sigma()),
        mutation_rate=reader.get_float("ga.mutation_rate", defaults.get_mutation_rate()),
        elite_count=reader.get_int("ga.elite_count", defaults.get_elite_count()),
        tournament_size=reader.get_int("ga.tournament_size", defaults.get_tournament_size()),
        stagnation_window=reader.get_int("ga.stagnation_window", defaults.get_stagnation_window()),
        penalty_weight=reader.get_float("ga.penalty_weight", defaults.get_penalty_weight())
    )
    is_valid, error_msg = settings.validate()
    if not is_valid:
        ga_keys = sorted((key for key in reader.values if key.startswith("ga.")), key=reader.line)
        raise reader.fail(error_msg, ga_keys[0] if ga_keys else None)
    return settings


def parse_config(text: str, source: str = "<string>") -> ExperimentConfig:
    """
    Parse config text into a validated ExperimentConfig.

    Args:
        text: File contents
        source: Name used in error messages

    Raises:
        ConfigError: on unknown, duplicate, malformed or invalid entries
    """
    reader = _Reader(_read_bindings(text, source), source)

    env = Environment(
        boltzmann_constant=reader.get_float("env.boltzmann_constant", BOLTZMANN_CONSTANT),
        temperature=reader.get_float("env.temperature", ROOM_TEMPERATURE)
    )
    is_valid, error_msg = env.validate()
    if not is_valid:
        raise reader.fail(error_msg, "env.temperature" if reader.has("env.temperature") else "env.boltzmann_constant")

    users = _read_users(reader)

    e_total = reader.get_float("e_total", DEFAULT_E_TOTAL)
    if not e_total > 0:
        raise reader.fail("e_total must be positive", "e_total")
    ber_threshold = reader.get_float("ber_threshold", 1.0)
    if not 0 < ber_threshold <= 1:
        raise reader.fail("ber_threshold must lie in (0, 1]", "ber_threshold")

    n_trials = reader.get_int("trials", DEFAULT_TRIALS)
    if n_trials < 1:
        raise reader.fail("trials must be at least 1", "trials")

    seed = reader.get_int("seed", 0) if reader.has("seed") else None
    if seed is not None and seed < 0:
        raise reader.fail("seed must be non-negative", "seed")

    return ExperimentConfig(
        env=env,
        users=users,
        e_total=e_total,
        ber_threshold=ber_threshold,
        sweep=_read_sweep(reader),
        series=_read_series(reader, users),
        ga_settings=_read_ga(reader),
        seed=seed,
        n_trials=n_trials,
        output=reader.text("output") if reader.has("output") else None,
        source=source
    )
