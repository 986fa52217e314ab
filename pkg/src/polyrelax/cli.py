# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
Command line interface.

    polyrelax relax problem.json [--types ML,CH] [--epsilon 1e-4] [--covering equal:9]
    polyrelax patterns a2-like --types ML,AC,CH,SC
    polyrelax separate pattern.json point.json
    polyrelax bench experiment.json --out results/
    polyrelax serve

Exit codes: 0 success, 1 solver failure or failed bench instances,
2 invalid arguments or configuration.
"""

import json
import logging
import sys
from contextlib import contextmanager
from dataclasses import replace
from pathlib import Path
from typing import Iterator, Optional

import typer

from . import config
from .bench import ExperimentConfig, run_experiment, write_results
from .core.exceptions import ParameterError, PolyRelaxError, UnsupportedPatternError
from .core.patterns import generate_patterns
from .exponent_sets import resolve_set
from .problem_files import load_problem, parse_pattern, parse_point, read_json
from .relaxation_proxy import build_instance, experiment_defaults, get_solver, resolve_covering

logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_USAGE = 2

app = typer.Typer(help="Pattern relaxations and cutting-plane lower bounds for polynomial optimization.", no_args_is_help=True)


@app.callback()
def main(
    log_level: str = typer.Option(config.LOG_LEVEL, "--log-level", help="Logging level for messages on stderr."),
) -> None:
    level = getattr(logging, log_level.upper(), None)
    if not isinstance(level, int):
        typer.echo(f"Unknown log level {log_level!r}.", err=True)
        raise typer.Exit(EXIT_USAGE)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True)


@contextmanager
def _guard() -> Iterator[None]:
    try:
        yield
    except (ParameterError, UnsupportedPatternError) as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(EXIT_USAGE)
    except PolyRelaxError as e:
        typer.echo(f"{type(e).__name__}: {e}", err=True)
        raise typer.Exit(EXIT_FAILURE)


def _json_arg(value: str) -> object:
    """A JSON file path or an inline JSON document."""
    if value.lstrip().startswith(("{", "[")):
        try:
            return json.loads(value)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"Inline JSON is malformed: {exc.msg}.") from exc
    return read_json(value)


def _print_report(report, show_point: bool) -> None:
    typer.echo(f"lower bound: {report.lower_bound!r}")
    typer.echo(f"termination: {report.reason.value} after {report.iterations} iterations, {report.cuts_added} cuts")
    typer.echo("iteration  bound                    max distance  cuts")
    for entry in report.trace:
        typer.echo(f"{entry.iteration:>9}  {entry.bound:<23.16g}  {entry.max_distance:<12.4g}  {entry.cuts}")
    if show_point:
        for alpha, value in report.point.as_dict().items():
            typer.echo(f"v{list(alpha)} = {value!r}")


@app.command()
def relax(
    problem: Path = typer.Argument(..., help="Problem JSON file."),
    types: Optional[str] = typer.Option(None, "--types", help="Pattern types, e.g. ML,AC,CH,SC."),
    epsilon: Optional[float] = typer.Option(None, "--epsilon", help="Termination tolerance ε."),
    covering: Optional[str] = typer.Option(None, "--covering", help="equal:N or tol:EPS."),
    max_iterations: Optional[int] = typer.Option(None, "--max-iterations"),
    time_budget: Optional[float] = typer.Option(None, "--time-budget", help="Seconds; 0 disables."),
    dump_lp: Optional[Path] = typer.Option(None, "--dump-lp", help="Directory for the final master LP."),
    sweep: Optional[str] = typer.Option(None, "--sweep", help="Comma separated ε values to run in turn."),
    as_json: bool = typer.Option(False, "--json", help="Print the report as JSON."),
    show_point: bool = typer.Option(False, "--point", help="Also print the final moment point."),
) -> None:
    """Lower bound for min f over the box, with the iteration trace."""
    with _guard():
        instance = build_instance(load_problem(problem), types, epsilon, covering)
        solver = get_solver(max_iterations, time_budget, dump_lp)
        if sweep:
            try:
                epsilons = [float(e) for e in sweep.split(",") if e.strip()]
            except ValueError as exc:
                raise ParameterError(f"Malformed --sweep value {sweep!r}.") from exc
            reports = solver.epsilon_sweep(instance, epsilons)
        else:
            epsilons = [instance.epsilon]
            reports = [solver.run(instance)]
    for eps, report in zip(epsilons, reports):
        if as_json:
            typer.echo(json.dumps({"epsilon": eps, **report.to_dict(include_point=show_point)}, indent=2))
        else:
            if len(reports) > 1:
                typer.echo(f"--- ε = {eps!r}")
            _print_report(report, show_point)


@app.command()
def patterns(
    exponent_set: str = typer.Argument(..., help="Set name (a2-like, dense:2:5, random:2:8:6:0, ...) or set JSON file."),
    types: Optional[str] = typer.Option(None, "--types", help="Pattern types in order, e.g. ML,AC,CH,SC."),
    allow_large: bool = typer.Option(False, "--allow-large", help="Permit dense sets beyond the default size cap."),
    as_json: bool = typer.Option(False, "--json", help="Print the family as JSON."),
) -> None:
    """Generates and prints the pattern family for an exponent set."""
    with _guard():
        exps = resolve_set(exponent_set, allow_large=allow_large)
        family = generate_patterns(exps.exponents, types)
    if as_json:
        typer.echo(json.dumps(family.to_list(), indent=2))
        return
    typer.echo(f"{exps.name}: {len(family)} patterns, |Ā| = {len(family.cover)}")
    for pattern in family:
        typer.echo(f"  {pattern.label}  ({len(pattern)} elements)")


@app.command()
def separate(
    pattern: str = typer.Argument(..., help="Pattern JSON file or inline JSON."),
    point: str = typer.Argument(..., help="Point JSON file or inline JSON."),
    covering: Optional[str] = typer.Option(None, "--covering", help="equal:N or tol:EPS."),
) -> None:
    """Runs one separation oracle and prints the cut, if any."""
    from .core.separation import separate as separate_pattern

    with _guard():
        parsed = parse_pattern(_json_arg(pattern))
        moment_point, box = parse_point(_json_arg(point))
        cut = separate_pattern(parsed, moment_point, box, resolve_covering(covering))
    if cut is None:
        typer.echo("no violated cut")
    else:
        typer.echo(json.dumps(cut.to_dict(), indent=2))


@app.command()
def bench(
    experiment: Path = typer.Argument(..., help="Experiment JSON file."),
    out: Optional[Path] = typer.Option(None, "--out", help="Output directory."),
    seed: Optional[int] = typer.Option(None, "--seed"),
    epsilon: Optional[float] = typer.Option(None, "--epsilon"),
    covering: Optional[str] = typer.Option(None, "--covering", help="equal:N or tol:EPS."),
    samples: Optional[int] = typer.Option(None, "--samples"),
    workers: Optional[int] = typer.Option(None, "--workers"),
    timing: bool = typer.Option(False, "--timing", help="Record wall_ms in the CSV."),
    plots: bool = typer.Option(True, "--plots/--no-plots", help="Write SVG box plots."),
) -> None:
    """Runs a width experiment and writes results.csv, stats.json and box plots."""
    with _guard():
        cfg = ExperimentConfig.from_file(experiment, experiment_defaults())
        overrides = {}
        if seed is not None:
            overrides["seed"] = seed
        if epsilon is not None:
            overrides["epsilon"] = epsilon
        if covering is not None:
            overrides["covering"] = resolve_covering(covering)
        if samples is not None:
            overrides["samples"] = samples
        if workers is not None:
            overrides["workers"] = workers
        if timing:
            overrides["record_wall_time"] = True
        cfg = replace(cfg, **overrides)
        result = run_experiment(cfg, max_iterations=config.MAX_ITERATIONS)
        paths = write_results(result, out or config.OUTPUT_DIR, plots=plots)
    for key, path in paths.items():
        typer.echo(f"{key}: {path}")
    if result.failures:
        typer.echo(f"{len(result.failures)} instance(s) failed; see stats.json.", err=True)
        raise typer.Exit(EXIT_FAILURE)


@app.command()
def serve() -> None:
    """Runs the MCP server on stdio."""
    import asyncio

    from .main import main_async_runner

    asyncio.run(main_async_runner())


if __name__ == "__main__":
    app()
