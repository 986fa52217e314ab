# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
Tests for the width experiments: ν, box-plot statistics, configs and output files.
"""

import itertools
import json
from dataclasses import replace

import numpy as np
import pytest

from polyrelax import bench
from polyrelax.bench import (
    CSV_COLUMNS,
    ExperimentConfig,
    ExperimentRunner,
    boxplot_stats,
    combination_label,
    nu,
    results_csv,
    run_experiment,
    sample_coefficients,
    singleton_width,
    width_bound,
    write_results,
)
from polyrelax.core.exceptions import ConfigurationError, DegenerateInstanceError, ParameterError, SolverError
from polyrelax.core.oracle import OracleConfig
from polyrelax.core.patterns import PatternFamily, add_pattern, generate_patterns, ml_pattern
from polyrelax.core.poly import SparsePolynomial
from polyrelax.core.separation import CoveringSpec
from polyrelax.exponent_sets import SHIPPED_SETS

A2_LIKE = SHIPPED_SETS["a2-like"].exponents


def _small_config(**kwargs):
    defaults = {
        "exponent_set": "a2-like",
        "combinations": ("single", "ML"),
        "samples": 3,
        "reference": False,
        "time_budget": None,
    }
    return ExperimentConfig(**{**defaults, **kwargs})

# --- Sampling And Widths ---

def test_sample_coefficients_deterministic():
    """Test the same seed gives the same uniform [−1, 1] draws."""
    first = sample_coefficients(A2_LIKE, 7, 4)
    second = sample_coefficients(A2_LIKE, 7, 4)
    assert first.shape == (4, 5)
    np.testing.assert_array_equal(first, second)
    assert np.all(np.abs(first) <= 1.0)
    assert not np.array_equal(first, sample_coefficients(A2_LIKE, 8, 4))


def test_sample_coefficients_errors():
    """Test an empty set and a negative count are rejected."""
    with pytest.raises(ParameterError):
        sample_coefficients([], 0, 1)
    with pytest.raises(ParameterError):
        sample_coefficients(A2_LIKE, 0, -1)


def test_singleton_width(unit_square):
    """Test Σ|f_α|·width(x^α) for f = x₁x₂ − 2x₁² on [0,1]²."""
    f = SparsePolynomial(2, {(1, 1): 1.0, (2, 0): -2.0})
    assert singleton_width([(1, 1), (2, 0)], f, unit_square) == 3.0


def test_mccormick_width(unit_square):
    """Test the width of x₁x₂ over the McCormick hull is 1."""
    family = add_pattern(PatternFamily(), ml_pattern((1, 1)))
    result = width_bound(family, [(1, 1)], SparsePolynomial(2, {(1, 1): 1.0}), unit_square)
    assert result.width == pytest.approx(1.0, abs=1e-8)
    assert result.lower == pytest.approx(0.0, abs=1e-8)
    assert result.upper == pytest.approx(1.0, abs=1e-8)
    assert not result.timed_out


def test_ml_on_diagonal_set_is_singleton_width(unit_square):
    """Test ν = 1 for ML patterns on the diagonal set, which connect no exponents."""
    family = generate_patterns(A2_LIKE, "ML")
    for row in sample_coefficients(A2_LIKE, 0, 5):
        f = SparsePolynomial.from_coefficients(A2_LIKE, row)
        assert nu(family, A2_LIKE, f, unit_square) == pytest.approx(1.0, abs=1e-9)


def test_nu_degenerate(unit_square):
    """Test ν is undefined for the zero polynomial."""
    with pytest.raises(DegenerateInstanceError):
        nu(generate_patterns(A2_LIKE, "ML"), A2_LIKE, SparsePolynomial(2, {}), unit_square)


def test_width_bound_requires_cover(unit_square):
    """Test that A must lie in Ā."""
    family = add_pattern(PatternFamily(), ml_pattern((1, 1)))
    with pytest.raises(ParameterError, match="not covered"):
        width_bound(family, [(1, 1), (2, 2)], SparsePolynomial(2, {(1, 1): 1.0}), unit_square)

# --- Box-Plot Statistics ---

def test_boxplot_stats_uniform():
    """Test quartiles and whiskers on 0..100."""
    stats = boxplot_stats(range(101))
    assert (stats.q1, stats.median, stats.q3) == (25.0, 50.0, 75.0)
    assert (stats.whisker_low, stats.whisker_high) == (0.0, 100.0)
    assert stats.outliers == ()


def test_boxplot_stats_outlier():
    """Test values beyond 1.5·IQR become outliers."""
    stats = boxplot_stats([1, 2, 3, 4, 100])
    assert (stats.q1, stats.median, stats.q3) == (2.0, 3.0, 4.0)
    assert (stats.whisker_low, stats.whisker_high) == (1.0, 4.0)
    assert stats.outliers == (100.0,)
    assert stats.to_bxp("ML")["fliers"] == [100.0]


def test_boxplot_stats_empty():
    """Test that statistics need data."""
    with pytest.raises(ParameterError):
        boxplot_stats([])

# --- Configuration ---

@pytest.mark.parametrize("combination, label", [
    ("single", "single"),
    ("ml+ch", "ML+CH"),
    (["CH", "ML"], "CH+ML"),
])
def test_combination_label(combination, label):
    """Test combination normalization."""
    assert combination_label(combination) == label


def test_config_from_shipped_file(data_dir):
    """Test loading a shipped experiment."""
    cfg = ExperimentConfig.from_file(data_dir / "experiments" / "a2_like.json")
    assert cfg.exponent_set == "a2-like"
    assert cfg.combinations == ("single", "ML", "CH", "ML+AC+CH+SC")
    assert str(cfg.covering) == "tol:0.0001"
    assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg


@pytest.mark.parametrize("data, message", [
    ({"colour": "red"}, "Unknown experiment keys"),
    ({"samples": 0}, "at least 1"),
    ({"covering": "grid:3"}, "Invalid experiment config"),
    ({"combinations": ["ML", "XX"]}, "Unknown pattern type"),
    ({"epsilon": -1}, "must be positive"),
    ([1, 2], "JSON object"),
])
def test_config_errors(data, message):
    """Test that bad experiment configs raise ConfigurationError."""
    with pytest.raises(ConfigurationError, match=message):
        ExperimentConfig.from_dict(data)


def test_config_defaults_fill_missing_keys():
    """Test that defaults apply only to keys the file leaves out."""
    defaults = {"seed": 7, "epsilon": 1e-3, "covering": CoveringSpec("equal", 4), "time_budget": None}
    cfg = ExperimentConfig.from_dict({"set": "a2-like", "epsilon": 1e-2}, defaults)
    assert cfg.seed == 7
    assert cfg.epsilon == 1e-2
    assert cfg.covering == CoveringSpec("equal", 4)
    assert cfg.time_budget is None
    assert ExperimentConfig.from_dict({}).seed == 0


def test_config_missing_file(tmp_path):
    """Test a missing experiment file."""
    with pytest.raises(ConfigurationError, match="File not found"):
        ExperimentConfig.from_file(tmp_path / "missing.json")


def test_config_box_dimension():
    """Test that the box must match the set's dimension."""
    runner_cfg = _small_config(box=((0.0, 1.0),))
    with pytest.raises(ConfigurationError, match="dimension"):
        ExperimentRunner(runner_cfg)

# --- Runs ---

def test_run_experiment_records():
    """Test one record per instance and combination, ordered by instance."""
    result = run_experiment(_small_config())
    assert [(r.instance_id, r.combination) for r in result.records] == [
        (i, c) for i in range(3) for c in ("single", "ML")
    ]
    assert all(r.nu == pytest.approx(1.0, abs=1e-9) for r in result.records)
    assert set(result.stats) == {"single", "ML"}
    assert result.reference_stats is None
    assert result.failures == ()


def test_run_experiment_reference_ratio():
    """Test ν_ref lies in (0, 1] for the diagonal set."""
    result = run_experiment(_small_config(samples=2, reference=True, oracle=OracleConfig(grid=51, restarts=2)))
    refs = [r.nu_ref for r in result.records]
    assert all(ref is not None and 0.0 < ref <= 1.0 + 1e-9 for ref in refs)
    assert result.reference_stats is not None


def test_csv_is_deterministic():
    """Test two runs with the same seed give byte-identical CSV."""
    cfg = _small_config(combinations=("single", "CH"), covering=CoveringSpec("equal", 5))
    assert results_csv(run_experiment(cfg)) == results_csv(run_experiment(cfg))


def test_workers_give_identical_csv():
    """Test that threaded instances do not change the output."""
    cfg = _small_config(combinations=("ML+AC+CH+SC",))
    assert results_csv(run_experiment(cfg)) == results_csv(run_experiment(replace(cfg, workers=3)))


def test_csv_layout():
    """Test the header and the empty wall_ms cell when timing is off."""
    lines = results_csv(run_experiment(_small_config(samples=1))).splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[1].startswith("0,a2-like,single,1.0,,0,0,0,")
    assert lines[1].endswith(",")


def test_wall_time_uses_runner_clock():
    """Test wall_ms comes from the injected clock when timing is on."""
    cfg = _small_config(combinations=("single",), samples=2, record_wall_time=True)
    result = ExperimentRunner(cfg, clock=itertools.count(0.0, 0.5).__next__).run()
    assert [r.wall_ms for r in result.records] == [500.0, 500.0]


@pytest.mark.slow
@pytest.mark.parametrize("exponent_set", ["a2-like", "a5-like", "bivariate-sparse"])
def test_all_types_never_worse_than_one_type(exponent_set):
    """Test ν(ML+AC+CH+SC) ≤ ν(single type) per instance on every shipped set."""
    single_types = ("ML", "AC", "CH", "SC")
    cfg = _small_config(exponent_set=exponent_set, combinations=single_types + ("ML+AC+CH+SC",), samples=10)
    result = run_experiment(cfg)
    assert result.failures == ()
    for i in range(cfg.samples):
        by_label = {r.combination: r.nu for r in result.records if r.instance_id == i}
        for label in single_types:
            assert by_label["ML+AC+CH+SC"] <= by_label[label] + 1e-6


@pytest.mark.slow
def test_all_types_median_on_dense_set():
    """Test median ν(ML+AC+CH+SC) ≤ median ν(ML) on ℕ²₅."""
    cfg = _small_config(exponent_set="dense:2:5", combinations=("ML", "ML+AC+CH+SC"), samples=10, seed=1)
    result = run_experiment(cfg)
    assert result.failures == ()
    assert result.stats["ML+AC+CH+SC"].median <= result.stats["ML"].median


def test_failed_instances_are_recorded(monkeypatch):
    """Test that a solver failure marks the record instead of aborting the run."""
    def broken(*args, **kwargs):
        raise SolverError("pivot trouble", status="pivot_limit")

    monkeypatch.setattr(bench, "width_bound", broken)
    result = run_experiment(_small_config(samples=2))
    failed = result.failures
    assert [(r.instance_id, r.combination) for r in failed] == [(0, "ML"), (1, "ML")]
    assert failed[0].error == "SolverError: (Status pivot_limit) pivot trouble"
    assert "ML" not in result.stats
    assert len(result.metadata()["failures"]) == 2

# --- Output Files ---

def test_write_results(tmp_path):
    """Test results.csv, stats.json and the SVG plots."""
    result = run_experiment(_small_config())
    paths = write_results(result, tmp_path / "out")
    assert paths["csv"].read_text(encoding="utf-8") == results_csv(result)
    stats = json.loads(paths["stats"].read_text(encoding="utf-8"))
    assert stats["prng"].startswith("numpy.random.PCG64")
    assert stats["quantile_method"] == "linear"
    assert stats["set"] == "a2-like"
    assert stats["stats"]["ML"]["median"] == pytest.approx(1.0)
    for key in ("plot:single", "plot:ML", "plot:all"):
        assert paths[key].read_text(encoding="utf-8").lstrip().startswith("<?xml")


def test_write_results_without_plots(tmp_path):
    """Test --no-plots writes only the data files."""
    paths = write_results(run_experiment(_small_config(samples=1)), tmp_path, plots=False)
    assert set(paths) == {"csv", "stats"}
    assert sorted(p.name for p in tmp_path.iterdir()) == ["results.csv", "stats.json"]
