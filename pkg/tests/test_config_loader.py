import pytest

from services.config_loader import PRESETS, ConfigLoader, parse_config
from services.exceptions import ConfigError

TWO_USERS = """\
users.1.n_low=600000000
users.1.n_high=600000000
users.1.c_init=0.5
users.1.n_release=40001
users.2.n_low=6e8
users.2.n_high=6e8
users.2.c_init=0.5
users.2.n_release=40001
"""


def _write(tmp_path, text):
    path = tmp_path / "experiment.cfg"
    path.write_text(text, encoding="utf-8")
    return path


def _error_for(tmp_path, text):
    path = _write(tmp_path, text)
    with pytest.raises(ConfigError) as excinfo:
        ConfigLoader(str(path)).load()
    return str(path), excinfo.value


def test_minimal_config_uses_defaults():
    config = parse_config(TWO_USERS)
    assert config.get_e_total() == 4e-16
    assert config.get_ber_threshold() == 1.0
    assert config.get_env().get_temperature() == 298.15
    assert config.get_env().get_boltzmann_constant() == 1.3807e-23
    assert config.get_n_trials() == 1_000_000
    assert config.get_seed() is None
    assert config.get_sweep() is None
    assert config.get_ga_settings().get_population_size() == 50
    assert [u.get_n_low() for u in config.get_users()] == [600_000_000, 600_000_000]


def test_comments_and_overrides():
    text = "# two users\n" + TWO_USERS + "e_total=2e-16  # half budget\nseed=42\nga.generations=10\n"
    config = parse_config(text)
    assert config.get_e_total() == 2e-16
    assert config.get_seed() == 42
    assert config.get_ga_settings().get_generations() == 10


@pytest.mark.parametrize("name", PRESETS)
def test_presets_load(name):
    config = ConfigLoader.for_preset(name).load()
    assert config.get_e_total() == 4e-16
    assert all(user.validate()[0] for user in config.get_users())


def test_fig3_preset_contents():
    config = ConfigLoader.for_preset("fig3").load()
    assert [u.to_dict() for u in config.get_users()] == [
        {'n_low': 600_000_000, 'n_high': 600_000_000, 'c_init': 0.5, 'n_release': 20001}
    ] * 2
    assert config.get_sweep().to_dict() == {'variable': 'rho', 'start': 0.01, 'stop': 0.99, 'step': 0.01}
    assert config.get_series().to_dict() == {'variable': 'n_release', 'values': [20001, 40001]}


def test_fig4_preset_contents():
    config = ConfigLoader.for_preset("fig4").load()
    assert [u.get_n_total() for u in config.get_users()] == [1_200_000_000, 1_600_000_000]
    assert {u.get_n_release() for u in config.get_users()} == {40001}
    assert config.get_series().to_dict() == {'variable': 'n_release', 'values': [20001, 40001]}


def test_fig5_preset_contents():
    config = ConfigLoader.for_preset("fig5").load()
    assert [u.get_n_total() for u in config.get_users()] == [600_000_000, 1_200_000_000, 1_800_000_000]
    assert {u.get_n_release() for u in config.get_users()} == {50001}


def test_fig6_preset_contents():
    config = ConfigLoader.for_preset("fig6").load()
    assert {u.get_n_total() for u in config.get_users()} == {600_000_000}
    assert [u.get_n_release() for u in config.get_users()] == [20001, 40001, 60001]


def test_reservoir_sizes_preset_contents():
    config = ConfigLoader.for_preset("reservoir_sizes").load()
    assert {u.get_n_release() for u in config.get_users()} == {50001}
    assert config.get_series().to_dict() == {
        'variable': 'n_reservoir', 'values': [300_000_000, 600_000_000, 900_000_000]
    }


def test_defaults_preset_contents():
    config = ConfigLoader.for_preset("defaults").load()
    assert [u.to_dict() for u in config.get_users()] == [
        {'n_low': 600_000_000, 'n_high': 600_000_000, 'c_init': 0.5, 'n_release': 40001}
    ] * 2
    assert config.get_sweep().get_variable() == "energy"
    assert config.get_n_trials() == 1_000_000


def test_unknown_preset():
    with pytest.raises(ConfigError):
        ConfigLoader.for_preset("fig7")


def test_unknown_key_is_anchored(tmp_path):
    path, error = _error_for(tmp_path, TWO_USERS + "e_totl=4e-16\n")
    assert str(error) == f"{path}:9: unknown key 'e_totl'"


def test_duplicate_key(tmp_path):
    path, error = _error_for(tmp_path, TWO_USERS + "seed=1\nseed=2\n")
    assert str(error).startswith(f"{path}:10: duplicate key 'seed'")


def test_unparsable_line(tmp_path):
    path, error = _error_for(tmp_path, TWO_USERS + "=5\n")
    assert error.line == 9


def test_non_numeric_value(tmp_path):
    path, error = _error_for(tmp_path, TWO_USERS + "e_total=lots\n")
    assert str(error).startswith(f"{path}:9:")


def test_fractional_count(tmp_path):
    text = TWO_USERS.replace("users.2.n_release=40001", "users.2.n_release=400.5")
    path, error = _error_for(tmp_path, text)
    assert str(error).startswith(f"{path}:8:")


def test_even_release_size(tmp_path):
    text = TWO_USERS.replace("users.2.n_release=40001", "users.2.n_release=40000")
    _, error = _error_for(tmp_path, text)
    assert "odd" in str(error)
    assert error.line == 5


def test_missing_user_field(tmp_path):
    text = TWO_USERS.replace("users.2.c_init=0.5\n", "")
    _, error = _error_for(tmp_path, text)
    assert "missing c_init" in str(error)


def test_gap_in_user_indices(tmp_path):
    _, error = _error_for(tmp_path, TWO_USERS.replace("users.2.", "users.3."))
    assert "1..2" in str(error)


def test_incomplete_sweep(tmp_path):
    path, error = _error_for(tmp_path, TWO_USERS + "sweep.variable=rho\nsweep.start=0.1\n")
    assert str(error).startswith(f"{path}:9: incomplete sweep")


def test_rho_sweep_must_stay_inside_unit_interval(tmp_path):
    text = TWO_USERS + "sweep.variable=rho\nsweep.start=0\nsweep.stop=1\nsweep.step=0.1\n"
    _, error = _error_for(tmp_path, text)
    assert error.line == 9


def test_invalid_threshold(tmp_path):
    _, error = _error_for(tmp_path, TWO_USERS + "ber_threshold=1.5\n")
    assert error.line == 9


def test_no_users():
    with pytest.raises(ConfigError):
        parse_config("e_total=4e-16\n")


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        ConfigLoader(str(tmp_path / "absent.cfg")).load()


def test_single_user_is_rejected(tmp_path):
    one_user = "\n".join(TWO_USERS.splitlines()[:4]) + "\n"
    path, error = _error_for(tmp_path, one_user)
    assert str(error) == f"{path}:1: at least 2 users are required, got 1"


def test_series_with_even_release_size_is_rejected(tmp_path):
    text = TWO_USERS + "sweep.series.variable=n_release\nsweep.series.values=20001,20000\n"
    path, error = _error_for(tmp_path, text)
    assert str(error).startswith(f"{path}:10: n_release=20000, user 1:")
    assert "odd" in str(error)


def test_series_with_reservoir_below_release_size_is_rejected(tmp_path):
    text = TWO_USERS + "sweep.series.variable=n_reservoir\nsweep.series.values=100\n"
    _, error = _error_for(tmp_path, text)
    assert error.line == 10
    assert "smaller reservoir" in str(error)
