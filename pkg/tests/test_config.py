# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
Tests for environment-driven settings.
"""

from pathlib import Path

import pytest

from polyrelax import relaxation_proxy


def test_defaults(reload_config):
    """Test the values used when nothing is set."""
    cfg = reload_config()
    assert cfg.EPSILON == 1e-4
    assert cfg.COVERING == "equal:9"
    assert cfg.MAX_ITERATIONS == 10_000
    assert cfg.TIME_BUDGET == 60.0
    assert cfg.SEED == 0
    assert cfg.WORKERS == 1
    assert cfg.LOG_LEVEL == "WARNING"
    assert cfg.LP_DUMP_DIR is None
    assert cfg.OUTPUT_DIR == cfg.PROJECT_ROOT / "bench_results"


def test_overrides(reload_config, monkeypatch, tmp_path):
    """Test values read from the environment."""
    monkeypatch.setenv("POLYRELAX_EPSILON", "1e-6")
    monkeypatch.setenv("POLYRELAX_COVERING", " tol:1e-3 ")
    monkeypatch.setenv("POLYRELAX_MAX_ITERATIONS", "50")
    monkeypatch.setenv("POLYRELAX_WORKERS", "4")
    monkeypatch.setenv("POLYRELAX_LOG_LEVEL", "debug")
    monkeypatch.setenv("POLYRELAX_LP_DUMP_DIR", str(tmp_path))
    cfg = reload_config()
    assert cfg.EPSILON == 1e-6
    assert cfg.COVERING == "tol:1e-3"
    assert cfg.MAX_ITERATIONS == 50
    assert cfg.WORKERS == 4
    assert cfg.LOG_LEVEL == "DEBUG"
    assert cfg.LP_DUMP_DIR == Path(tmp_path)


def test_zero_time_budget_disables_it(reload_config, monkeypatch):
    """Test POLYRELAX_TIME_BUDGET=0."""
    monkeypatch.setenv("POLYRELAX_TIME_BUDGET", "0")
    assert reload_config().TIME_BUDGET is None


@pytest.mark.parametrize("name, raw, attribute, default", [
    ("POLYRELAX_EPSILON", "tiny", "EPSILON", 1e-4),
    ("POLYRELAX_EPSILON", "-1", "EPSILON", 1e-4),
    ("POLYRELAX_MAX_ITERATIONS", "0", "MAX_ITERATIONS", 10_000),
    ("POLYRELAX_WORKERS", "many", "WORKERS", 1),
])
def test_invalid_values_fall_back(reload_config, monkeypatch, capsys, name, raw, attribute, default):
    """Test that a bad value warns on stderr and keeps the default."""
    monkeypatch.setenv(name, raw)
    cfg = reload_config()
    assert getattr(cfg, attribute) == default
    assert f"Warning: invalid {name}={raw!r}" in capsys.readouterr().err


def test_solver_follows_settings(reload_config, monkeypatch):
    """Test that the proxy builds its solver from the current settings."""
    monkeypatch.setenv("POLYRELAX_MAX_ITERATIONS", "7")
    monkeypatch.setenv("POLYRELAX_TIME_BUDGET", "0")
    reload_config()
    solver = relaxation_proxy.get_solver()
    assert solver.max_iterations == 7
    assert solver.time_budget is None
    assert relaxation_proxy.get_solver(max_iterations=3).max_iterations == 3
    assert str(relaxation_proxy.resolve_covering(None)) == "equal:9"


def test_experiment_defaults_follow_settings(reload_config, monkeypatch):
    """Test the benchmark defaults taken from the settings."""
    monkeypatch.setenv("POLYRELAX_SEED", "7")
    monkeypatch.setenv("POLYRELAX_COVERING", "tol:1e-3")
    monkeypatch.setenv("POLYRELAX_TIME_BUDGET", "0")
    reload_config()
    defaults = relaxation_proxy.experiment_defaults()
    assert defaults["seed"] == 7
    assert str(defaults["covering"]) == "tol:0.001"
    assert defaults["time_budget"] is None
    assert defaults["epsilon"] == 1e-4
    assert defaults["workers"] == 1
