import pandas as pd
import pytest

import main
from services import ber_service
from services.config_loader import ConfigLoader, parse_config
from services.exceptions import ConfigError, ThermodynamicDomainError
from services.experiment_service import SEED_ENV_VAR, ExperimentService, resolve_seed

USERS = """\
users.1.n_low=600000000
users.1.n_high=600000000
users.1.c_init=0.5
users.1.n_release=40001
users.2.n_low=600000000
users.2.n_high=600000000
users.2.c_init=0.5
users.2.n_release=40001
"""

BROKEN = """\
users.1.n_low=10000
users.1.n_high=10000
users.1.c_init=0.5
users.1.n_release=101
users.2.n_low=10000
users.2.n_high=10000
users.2.c_init=0.5
users.2.n_release=101
"""


def _service(name, tmp_path, filename="out.csv", **kwargs):
    config = ConfigLoader.for_preset(name).load()
    return ExperimentService(config, out=str(tmp_path / filename), **kwargs)


def test_fig3_curves_are_minimised_at_half(tmp_path):
    df = _service("fig3", tmp_path).cmd_ber_curve()
    assert list(df.columns) == ["rho", "ber_user1", "ber_user2", "total_ber", "valid_flag", "series"]
    assert sorted(df["series"].unique()) == ["n_release=20001", "n_release=40001"]
    for _, curve in df.groupby("series"):
        assert len(curve) == 99
        assert curve.loc[curve["total_ber"].idxmin(), "rho"] == pytest.approx(0.5)
    with open(tmp_path / "out.csv", encoding="utf-8") as handle:
        assert handle.readline() == "rho,ber_user1,ber_user2,total_ber,valid_flag,series\n"


def test_fig4_curves_are_minimised_below_half(tmp_path):
    df = _service("fig4", tmp_path).cmd_ber_curve()
    curves = {label: curve.set_index("rho")["total_ber"] for label, curve in df.groupby("series")}
    assert sorted(curves) == ["n_release=20001", "n_release=40001"]
    for curve in curves.values():
        assert curve.idxmin() < 0.5
    # more released molecules give the lower curve
    assert (curves["n_release=40001"] < curves["n_release=20001"]).all()


def test_smaller_reservoirs_give_lower_curves(tmp_path):
    df = _service("reservoir_sizes", tmp_path).cmd_ber_curve()
    assert (df["valid_flag"] == 1).all()
    curves = [df[df["series"] == f"n_reservoir={n}"].set_index("rho")["total_ber"]
              for n in (300_000_000, 600_000_000, 900_000_000)]
    for smaller, larger in zip(curves, curves[1:]):
        assert len(smaller) == 99
        assert (smaller < larger).all()
    for curve in curves:
        assert curve.idxmin() == pytest.approx(0.5)


def test_single_point_sweep_matches_total_ber(tmp_path):
    config = parse_config(USERS + "sweep.variable=rho\nsweep.start=0.5\nsweep.stop=0.5\nsweep.step=0.01\n")
    df = ExperimentService(config, out=str(tmp_path / "one.csv")).cmd_ber_curve()
    users = config.get_users()
    assert len(df) == 1
    assert df["total_ber"].iloc[0] == ber_service.two_user_total_ber(
        0.5, 4e-16, users[0], users[1], config.get_env())
    assert list(df.columns) == ["rho", "ber_user1", "ber_user2", "total_ber", "valid_flag"]


def test_ber_curve_needs_two_users(tmp_path):
    with pytest.raises(ConfigError):
        _service("fig5", tmp_path).cmd_ber_curve()


def test_ber_curve_flags_invalid_points(tmp_path):
    config = parse_config(BROKEN + "sweep.variable=rho\nsweep.start=0.1\nsweep.stop=0.9\nsweep.step=0.4\n")
    df = ExperimentService(config, out=str(tmp_path / "broken.csv")).cmd_ber_curve()
    assert df["valid_flag"].tolist() == [0, 0, 0]
    assert df["total_ber"].isna().all()


def test_optimize_two_user_report(tmp_path, capsys):
    allocation, trace = _service("defaults", tmp_path, "report.csv").cmd_optimize()
    assert trace is None
    assert allocation.get_rho()[0] == pytest.approx(0.5, abs=1e-3)
    report = pd.read_csv(tmp_path / "report.csv")
    assert list(report.columns) == ["user", "n_low", "n_high", "c_init", "n_release", "energy", "rho", "ber"]
    assert report["user"].tolist() == [1, 2]
    assert not (tmp_path / "report.csv.trace.csv").exists()
    assert "golden-section" in capsys.readouterr().out


def test_forced_ga_agrees_with_two_user_path(tmp_path):
    direct, _ = _service("defaults", tmp_path, "direct.csv").cmd_optimize()
    genetic, trace = _service("defaults", tmp_path, "ga.csv").cmd_optimize(force_ga=True)
    assert abs(genetic.get_total_ber() - direct.get_total_ber()) <= 1e-4
    saved = pd.read_csv(tmp_path / "ga.csv.trace.csv")
    assert list(saved.columns) == ["generation", "best", "mean"]
    assert len(saved) == len(trace)


def test_optimize_is_byte_identical(tmp_path):
    for filename in ("a.csv", "b.csv"):
        _service("fig6", tmp_path, filename, seed=3).cmd_optimize()
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.csv.trace.csv").read_bytes() == (tmp_path / "b.csv.trace.csv").read_bytes()


def test_validate_defaults_pass_and_repeat(tmp_path, capsys):
    outputs = []
    for filename in ("v1.csv", "v2.csv"):
        all_passed, checks = _service("defaults", tmp_path, filename, seed=8, n_trials=200_000).cmd_validate()
        assert all_passed, checks[~checks["passed"]]
        outputs.append((tmp_path / filename).read_bytes())
    assert outputs[0] == outputs[1]
    printed = capsys.readouterr().out
    assert "[CHECK 1]" in printed and "FAIL" not in printed


def test_validate_broken_config_raises_domain_error(tmp_path):
    config = parse_config(BROKEN)
    with pytest.raises(ThermodynamicDomainError):
        ExperimentService(config, out=str(tmp_path / "v.csv")).cmd_validate()


def test_simulate_rows(tmp_path):
    df = _service("defaults", tmp_path, "sim.csv", seed=4, n_trials=100_000).cmd_simulate()
    assert list(df.columns) == ["energy", "analytic_ber", "empirical_ber", "ci_halfwidth", "n_trials"]
    assert df["energy"].tolist() == pytest.approx([0.0, 5e-17, 1e-16, 1.5e-16, 2e-16])
    assert df["analytic_ber"].iloc[0] == pytest.approx(0.5, abs=1e-10)
    assert (df["n_trials"] == 100_000).all()
    # 99% intervals: allow a little slack over five points
    assert ((df["empirical_ber"] - df["analytic_ber"]).abs() <= 1.5 * df["ci_halfwidth"]).all()


def test_seed_precedence(monkeypatch):
    config = parse_config(USERS)
    monkeypatch.delenv(SEED_ENV_VAR, raising=False)
    assert resolve_seed(None, config) == 0
    monkeypatch.setenv(SEED_ENV_VAR, "12")
    assert resolve_seed(None, config) == 12
    assert resolve_seed(None, parse_config(USERS + "seed=5\n")) == 5
    assert resolve_seed(9, parse_config(USERS + "seed=5\n")) == 9
    monkeypatch.setenv(SEED_ENV_VAR, "twelve")
    with pytest.raises(ConfigError):
        resolve_seed(None, config)


def test_cli_exit_codes(tmp_path):
    broken = tmp_path / "broken.cfg"
    broken.write_text(BROKEN, encoding="utf-8")
    assert main.main(["validate", "--config", str(broken)]) == main.EXIT_DOMAIN_ERROR

    unknown = tmp_path / "unknown.cfg"
    unknown.write_text(USERS + "colour=blue\n", encoding="utf-8")
    assert main.main(["optimize", "--config", str(unknown)]) == main.EXIT_CONFIG_ERROR

    strict = tmp_path / "strict.cfg"
    strict.write_text(USERS + "ber_threshold=1e-6\n", encoding="utf-8")
    assert main.main(["optimize", "--config", str(strict)]) == main.EXIT_INFEASIBLE

    out = tmp_path / "curve.csv"
    assert main.main(["ber-curve", "--preset", "fig4", "--out", str(out)]) == main.EXIT_OK
    assert out.exists()

    one_user = tmp_path / "one_user.cfg"
    one_user.write_text("\n".join(USERS.splitlines()[:4]) + "\n", encoding="utf-8")
    assert main.main(["optimize", "--config", str(one_user)]) == main.EXIT_CONFIG_ERROR
