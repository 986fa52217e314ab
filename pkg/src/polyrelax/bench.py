# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
Width experiments.

For each sampled objective f with coefficients uniform in [−1, 1]^A the
harness computes

    ν = ω(family, f) / ω(singletons, f),

the relaxation width of f under a pattern family divided by the width of the
plain box relaxation, for several pattern-type combinations. A reference
ratio ν_ref uses the oracle's width estimate in the numerator. Results go to
a CSV (one row per instance and combination), a JSON file with box-plot
statistics and run metadata, and SVG box plots.
"""

from __future__ import annotations

import csv
import io
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, ClassVar, Mapping, Sequence

import numpy as np

from .core.cutting_plane import CuttingPlaneSolver, RelaxationInstance, TerminationReason
from .core.exceptions import ConfigurationError, DegenerateInstanceError, ParameterError, PolyRelaxError
from .core.oracle import OracleConfig, width_ref
from .core.patterns import PatternFamily, generate_patterns, parse_type_order
from .core.poly import BoxDomain, Exponent, SparsePolynomial, monomial_bounds
from .core.separation import DEFAULT_COVERING, CoveringSpec
from .exponent_sets import ExponentSet, resolve_set
from .problem_files import read_json, write_json

logger = logging.getLogger(__name__)

SINGLE = "single"
CSV_COLUMNS = (
    "instance_id", "set_name", "combination", "nu", "nu_ref",
    "iterations_min", "iterations_max", "cuts", "wall_ms",
)
QUANTILE_METHOD = "linear"


def sample_coefficients(exponents: Sequence[Exponent], seed: int, count: int) -> np.ndarray:
    """`count` rows of i.i.d. uniform [−1, 1] coefficients from default_rng(seed) (PCG64)."""
    if not exponents:
        raise ParameterError("Cannot sample coefficients for an empty exponent set.")
    if count < 0:
        raise ParameterError(f"Sample count must be non-negative, got {count}.")
    rng = np.random.default_rng(seed)
    return rng.uniform(-1.0, 1.0, size=(count, len(exponents)))


def singleton_width(exponents: Sequence[Exponent], f: SparsePolynomial, box: BoxDomain) -> float:
    """Width of f over the box relaxation: Σ |f_α|·(x^α_max − x^α_min)."""
    return float(sum(abs(f.coefficient(alpha)) * monomial_bounds(alpha, box).width for alpha in exponents))


@dataclass(frozen=True)
class WidthResult:
    width: float
    lower: float
    upper: float
    iterations: tuple[int, int]
    cuts: int
    timed_out: bool = False


def width_bound(
    family: PatternFamily,
    exponents: Sequence[Exponent],
    f: SparsePolynomial,
    box: BoxDomain,
    epsilon: float = 1e-4,
    covering: CoveringSpec = DEFAULT_COVERING,
    solver: CuttingPlaneSolver | None = None,
) -> WidthResult:
    """
    Relaxation width: (−bound of −f) − (bound of f).

    Raises:
        ParameterError: If A is not contained in Ā or supp(f) not in A.
    """
    missing = [alpha for alpha in exponents if alpha not in family.cover]
    outside = [alpha for alpha in f.support if alpha not in set(exponents)]
    if missing or outside:
        raise ParameterError(f"Exponent set not covered by the family ({missing}) or f outside A ({outside}).")
    solver = solver or CuttingPlaneSolver()
    instance = RelaxationInstance(f, family, box, epsilon, covering)
    low = solver.run(instance)
    high = solver.run(instance.with_objective(-f))
    upper = -high.lower_bound
    timed_out = TerminationReason.TIME_BUDGET in (low.reason, high.reason)
    return WidthResult(
        width=upper - low.lower_bound,
        lower=low.lower_bound,
        upper=upper,
        iterations=(low.iterations, high.iterations),
        cuts=low.cuts_added + high.cuts_added,
        timed_out=timed_out,
    )


def nu(
    family: PatternFamily,
    exponents: Sequence[Exponent],
    f: SparsePolynomial,
    box: BoxDomain,
    epsilon: float = 1e-4,
    covering: CoveringSpec = DEFAULT_COVERING,
    solver: CuttingPlaneSolver | None = None,
) -> float:
    """
    ω(family, f) / ω(singletons, f).

    Raises:
        DegenerateInstanceError: If the singleton width is zero.
    """
    denominator = singleton_width(exponents, f, box)
    if denominator <= 0.0:
        raise DegenerateInstanceError("Singleton width is zero; ν is undefined for a constant objective.")
    return width_bound(family, exponents, f, box, epsilon, covering, solver).width / denominator


@dataclass(frozen=True)
class BoxplotStats:
    q1: float
    median: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...] = ()

    def to_dict(self) -> dict:
        return {
            "q1": self.q1,
            "median": self.median,
            "q3": self.q3,
            "whisker_low": self.whisker_low,
            "whisker_high": self.whisker_high,
            "outliers": list(self.outliers),
        }

    def to_bxp(self, label: str) -> dict:
        """Input record for matplotlib's Axes.bxp."""
        return {
            "label": label,
            "q1": self.q1,
            "med": self.median,
            "q3": self.q3,
            "whislo": self.whisker_low,
            "whishi": self.whisker_high,
            "fliers": list(self.outliers),
        }


def boxplot_stats(values: Sequence[float]) -> BoxplotStats:
    """
    Quartiles by linear interpolation. The lower whisker is the smallest
    value ≥ q1 − 1.5·IQR, the upper whisker the largest value ≤ q3 + 1.5·IQR;
    everything beyond the whiskers is an outlier.
    """
    data = np.sort(np.asarray(list(values), dtype=float))
    if data.size == 0:
        raise ParameterError("boxplot_stats needs at least one value.")
    q1, median, q3 = (float(q) for q in np.quantile(data, [0.25, 0.5, 0.75], method=QUANTILE_METHOD))
    iqr = q3 - q1
    low = float(data[data >= q1 - 1.5 * iqr].min())
    high = float(data[data <= q3 + 1.5 * iqr].max())
    outliers = tuple(float(x) for x in data if x < low or x > high)
    return BoxplotStats(q1, median, q3, low, high, outliers)


def combination_label(combination: str | Sequence[str]) -> str:
    if isinstance(combination, str) and combination.strip().lower() == SINGLE:
        return SINGLE
    return "+".join(parse_type_order(combination))


@dataclass(frozen=True)
class ExperimentConfig:
    """
    One benchmark run. `combinations` holds pattern-type orders such as
    "ML", "CH+ML" or "single".
    """

    exponent_set: str | dict = "a2-like"
    combinations: tuple[str, ...] = (SINGLE, "ML", "AC", "CH", "SC", "ML+AC+CH+SC")
    samples: int = 100
    seed: int = 0
    epsilon: float = 1e-4
    covering: CoveringSpec = DEFAULT_COVERING
    box: tuple[tuple[float, float], ...] | None = None
    oracle: OracleConfig = field(default_factory=OracleConfig)
    reference: bool = True
    time_budget: float | None = 60.0
    workers: int = 1
    record_wall_time: bool = False
    allow_large: bool = False

    DEFAULT_SAMPLES: ClassVar[int] = 100

    def __post_init__(self):
        if self.samples < 1:
            raise ConfigurationError(f"Sample count must be at least 1, got {self.samples}.")
        if not self.epsilon > 0:
            raise ConfigurationError(f"ε must be positive, got {self.epsilon}.")
        if self.workers < 1:
            raise ConfigurationError(f"Worker count must be at least 1, got {self.workers}.")
        if not self.combinations:
            raise ConfigurationError("At least one pattern-type combination is required.")
        try:
            labels = tuple(combination_label(c) for c in self.combinations)
        except ParameterError as exc:
            raise ConfigurationError(str(exc)) from exc
        object.__setattr__(self, "combinations", labels)

    @classmethod
    def from_dict(cls, data: dict[str, Any], defaults: Mapping[str, Any] | None = None) -> ExperimentConfig:
        """
        Builds a config from its JSON form. Keys: set, combinations, samples,
        seed, epsilon, covering, box, oracle {grid, polish_steps, restarts, seed},
        reference, time_budget, workers, record_wall_time, allow_large.

        `defaults` holds field values (e.g. from the settings) used for keys
        the file leaves out.

        Raises:
            ConfigurationError: On unknown keys or invalid values.
        """
        if not isinstance(data, dict):
            raise ConfigurationError("An experiment config must be a JSON object.")
        known = {
            "set", "combinations", "samples", "seed", "epsilon", "covering", "box", "oracle",
            "reference", "time_budget", "workers", "record_wall_time", "allow_large",
        }
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError(f"Unknown experiment keys: {', '.join(unknown)}.")
        try:
            kwargs: dict[str, Any] = dict(defaults or {})
            if "set" in data:
                kwargs["exponent_set"] = data["set"]
            if "combinations" in data:
                kwargs["combinations"] = tuple(data["combinations"])
            for key in ("samples", "seed", "workers"):
                if key in data:
                    kwargs[key] = int(data[key])
            if "epsilon" in data:
                kwargs["epsilon"] = float(data["epsilon"])
            if "covering" in data:
                kwargs["covering"] = CoveringSpec.parse(data["covering"])
            if data.get("box") is not None:
                kwargs["box"] = tuple((float(a), float(b)) for a, b in data["box"])
            if "oracle" in data:
                kwargs["oracle"] = OracleConfig(**data["oracle"])
            if "time_budget" in data:
                kwargs["time_budget"] = None if data["time_budget"] in (None, 0) else float(data["time_budget"])
            for key in ("reference", "record_wall_time", "allow_large"):
                if key in data:
                    kwargs[key] = bool(data[key])
            return cls(**kwargs)
        except ConfigurationError:
            raise
        except (ParameterError, TypeError, ValueError) as exc:
            raise ConfigurationError(f"Invalid experiment config: {exc}") from exc

    @classmethod
    def from_file(cls, path: str | Path, defaults: Mapping[str, Any] | None = None) -> ExperimentConfig:
        try:
            data = read_json(path)
        except ParameterError as exc:
            raise ConfigurationError(str(exc)) from exc
        return cls.from_dict(data, defaults)

    def resolve_set(self) -> ExponentSet:
        try:
            return resolve_set(self.exponent_set, allow_large=self.allow_large)
        except ParameterError as exc:
            raise ConfigurationError(str(exc)) from exc

    def resolve_box(self, n: int) -> BoxDomain:
        if self.box is None:
            return BoxDomain.unit(n)
        box = BoxDomain.from_pairs(self.box)
        if box.dimension != n:
            raise ConfigurationError(f"Box has dimension {box.dimension} but the set has n = {n}.")
        return box

    def to_dict(self) -> dict:
        return {
            "set": self.exponent_set,
            "combinations": list(self.combinations),
            "samples": self.samples,
            "seed": self.seed,
            "epsilon": self.epsilon,
            "covering": str(self.covering),
            "box": [list(p) for p in self.box] if self.box is not None else None,
            "oracle": {
                "grid": self.oracle.grid,
                "polish_steps": self.oracle.polish_steps,
                "restarts": self.oracle.restarts,
                "seed": self.oracle.seed,
            },
            "reference": self.reference,
            "time_budget": self.time_budget,
            "workers": self.workers,
            "record_wall_time": self.record_wall_time,
            "allow_large": self.allow_large,
        }


@dataclass(frozen=True)
class InstanceRecord:
    instance_id: int
    set_name: str
    combination: str
    nu: float | None
    nu_ref: float | None
    iterations_min: int | None = None
    iterations_max: int | None = None
    cuts: int | None = None
    wall_ms: float | None = None
    timed_out: bool = False
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    exponent_set: ExponentSet
    records: tuple[InstanceRecord, ...]
    stats: dict[str, BoxplotStats]
    reference_stats: BoxplotStats | None
    families: dict[str, PatternFamily]

    @property
    def failures(self) -> tuple[InstanceRecord, ...]:
        return tuple(r for r in self.records if r.failed)

    def metadata(self) -> dict:
        return {
            "prng": "numpy.random.PCG64 (default_rng)",
            "seed": self.config.seed,
            "quantile_method": QUANTILE_METHOD,
            "set": self.exponent_set.name,
            "authoritative": self.exponent_set.authoritative,
            "exponents": [list(alpha) for alpha in self.exponent_set.exponents],
            "config": self.config.to_dict(),
            "families": {label: fam.to_list() for label, fam in self.families.items()},
            "stats": {label: s.to_dict() for label, s in self.stats.items()},
            "reference_stats": self.reference_stats.to_dict() if self.reference_stats else None,
            "failures": [
                {"instance_id": r.instance_id, "combination": r.combination, "error": r.error}
                for r in self.failures
            ],
            "timeouts": [
                {"instance_id": r.instance_id, "combination": r.combination}
                for r in self.records if r.timed_out
            ],
            "wall_ms": [
                {"instance_id": r.instance_id, "combination": r.combination, "wall_ms": r.wall_ms}
                for r in self.records if r.wall_ms is not None
            ],
        }


class ExperimentRunner:
    """Executes an ExperimentConfig; instances may run on a thread pool."""

    def __init__(self, config: ExperimentConfig, max_iterations: int | None = None, clock=time.perf_counter):
        self.config = config
        self.exponent_set = config.resolve_set()
        self.box = config.resolve_box(self.exponent_set.dimension)
        self.max_iterations = max_iterations
        self._clock = clock
        self.families: dict[str, PatternFamily] = {}
        for label in config.combinations:
            if label != SINGLE:
                self.families[label] = generate_patterns(self.exponent_set.exponents, label)

    def _solver(self) -> CuttingPlaneSolver:
        return CuttingPlaneSolver(max_iterations=self.max_iterations, time_budget=self.config.time_budget)

    def _instance(self, instance_id: int, coefficients: np.ndarray) -> list[InstanceRecord]:
        cfg, exps = self.config, self.exponent_set.exponents
        f = SparsePolynomial.from_coefficients(exps, coefficients)
        name = self.exponent_set.name
        denominator = singleton_width(exps, f, self.box)
        nu_ref = None
        if cfg.reference and denominator > 0.0:
            try:
                nu_ref = width_ref(f, self.box, cfg.oracle) / denominator
            except PolyRelaxError as exc:
                logger.warning("instance %d: reference width failed: %s", instance_id, exc)

        records = []
        for label in cfg.combinations:
            started = self._clock()
            try:
                if denominator <= 0.0:
                    raise DegenerateInstanceError("Singleton width is zero.")
                if label == SINGLE:
                    value, iters, cuts, timed_out = 1.0, (0, 0), 0, False
                else:
                    result = width_bound(
                        self.families[label], exps, f, self.box, cfg.epsilon, cfg.covering, self._solver()
                    )
                    value, iters, cuts, timed_out = result.width / denominator, result.iterations, result.cuts, result.timed_out
                wall = (self._clock() - started) * 1000.0 if cfg.record_wall_time else None
                records.append(InstanceRecord(
                    instance_id, name, label, value, nu_ref, min(iters), max(iters), cuts, wall, timed_out,
                ))
            except PolyRelaxError as exc:
                logger.warning("instance %d, %s failed: %s", instance_id, label, exc)
                records.append(InstanceRecord(instance_id, name, label, None, nu_ref, error=f"{type(exc).__name__}: {exc}"))
        return records

    def run(self) -> ExperimentResult:
        cfg = self.config
        coefficients = sample_coefficients(self.exponent_set.exponents, cfg.seed, cfg.samples)
        logger.info(
            "experiment on %s: %d instances, combinations %s",
            self.exponent_set.name, cfg.samples, ", ".join(cfg.combinations),
        )
        if cfg.workers > 1:
            with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                chunks = list(pool.map(self._instance, range(cfg.samples), coefficients))
        else:
            chunks = [self._instance(i, row) for i, row in enumerate(coefficients)]
        records = tuple(sorted((r for chunk in chunks for r in chunk), key=lambda r: r.instance_id))

        stats = {}
        for label in cfg.combinations:
            values = [r.nu for r in records if r.combination == label and r.nu is not None]
            if values:
                stats[label] = boxplot_stats(values)
        refs = {r.instance_id: r.nu_ref for r in records if r.nu_ref is not None}
        reference_stats = boxplot_stats(list(refs.values())) if refs else None
        return ExperimentResult(cfg, self.exponent_set, records, stats, reference_stats, self.families)


def run_experiment(config: ExperimentConfig, max_iterations: int | None = None) -> ExperimentResult:
    return ExperimentRunner(config, max_iterations=max_iterations).run()


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def results_csv(result: ExperimentResult) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in result.records:
        writer.writerow([_cell(getattr(r, column)) for column in CSV_COLUMNS])
    return buffer.getvalue()


def write_results(result: ExperimentResult, out_dir: str | Path, plots: bool = True) -> dict[str, Path]:
    """Writes results.csv, stats.json and (optionally) SVG box plots into out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {"csv": out_dir / "results.csv"}
    paths["csv"].write_text(results_csv(result), encoding="utf-8")
    paths["stats"] = write_json(result.metadata(), out_dir / "stats.json")
    if plots and result.stats:
        from .plotting import write_boxplots

        paths.update(write_boxplots(result, out_dir))
    return paths
