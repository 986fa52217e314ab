# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
Glue between the settings, the file formats and the core library.

The command line calls the synchronous helpers; the tool server awaits the
async wrappers, which push the solver work onto a worker thread.
"""

from __future__ import annotations

import asyncio
import logging
from pathlib import Path
from typing import Any, Sequence

from . import config
from .bench import singleton_width, width_bound
from .core.cutting_plane import CuttingPlaneSolver, RelaxationInstance, SolveReport
from .core.exceptions import DegenerateInstanceError
from .core.patterns import PatternFamily, add_pattern, generate_patterns, singleton_pattern
from .core.poly import zero_exponent
from .core.separation import Cut, CoveringSpec, separate
from .problem_files import Problem, parse_pattern, parse_point

logger = logging.getLogger(__name__)


def get_solver(
    max_iterations: int | None = None,
    time_budget: float | None = None,
    lp_dump_dir: str | Path | None = None,
) -> CuttingPlaneSolver:
    """Solver configured from the settings; explicit arguments win."""
    return CuttingPlaneSolver(
        max_iterations=max_iterations if max_iterations is not None else config.MAX_ITERATIONS,
        time_budget=time_budget if time_budget is not None else config.TIME_BUDGET,
        workers=config.WORKERS,
        lp_dump_dir=lp_dump_dir if lp_dump_dir is not None else config.LP_DUMP_DIR,
    )


def resolve_covering(covering: str | CoveringSpec | None) -> CoveringSpec:
    if isinstance(covering, CoveringSpec):
        return covering
    return CoveringSpec.parse(covering if covering is not None else config.COVERING)


def experiment_defaults() -> dict[str, Any]:
    """ExperimentConfig fields taken from the settings when an experiment file omits them."""
    return {
        "seed": config.SEED,
        "epsilon": config.EPSILON,
        "covering": resolve_covering(None),
        "workers": config.WORKERS,
        "time_budget": config.TIME_BUDGET,
    }


def family_for(problem: Problem, types: str | Sequence[str] | None = None) -> PatternFamily:
    """
    The problem's own family (topped up with singletons for uncovered
    monomials) or one generated from supp(f).
    """
    support = problem.objective.support or (zero_exponent(problem.objective.dimension),)
    if problem.family is not None and types is None:
        family = problem.family
        for alpha in support:
            if alpha not in family.cover:
                family = add_pattern(family, singleton_pattern(alpha))
        return family
    return generate_patterns(support, types)


def build_instance(
    problem: Problem,
    types: str | Sequence[str] | None = None,
    epsilon: float | None = None,
    covering: str | CoveringSpec | None = None,
) -> RelaxationInstance:
    return RelaxationInstance(
        problem.objective,
        family_for(problem, types),
        problem.box,
        epsilon if epsilon is not None else config.EPSILON,
        resolve_covering(covering),
    )


def solve_problem(
    problem: Problem,
    types: str | Sequence[str] | None = None,
    epsilon: float | None = None,
    covering: str | CoveringSpec | None = None,
    solver: CuttingPlaneSolver | None = None,
) -> SolveReport:
    instance = build_instance(problem, types, epsilon, covering)
    return (solver or get_solver()).run(instance)


def separate_from_data(
    pattern_data: dict[str, Any], point_data: dict[str, Any], covering: str | CoveringSpec | None = None
) -> Cut | None:
    pattern = parse_pattern(pattern_data)
    point, box = parse_point(point_data)
    return separate(pattern, point, box, resolve_covering(covering))


def width_report(
    problem: Problem,
    types: str | Sequence[str] | None = None,
    epsilon: float | None = None,
    covering: str | CoveringSpec | None = None,
) -> dict[str, float]:
    """Relaxation width, singleton width and ν for the problem's objective."""
    instance = build_instance(problem, types, epsilon, covering)
    exps = tuple(problem.objective.support)
    denominator = singleton_width(exps, instance.objective, instance.box)
    if denominator <= 0.0:
        raise DegenerateInstanceError("Singleton width is zero; ν is undefined for a constant objective.")
    result = width_bound(
        instance.family, exps, instance.objective, instance.box, instance.epsilon, instance.covering, get_solver()
    )
    return {"width": result.width, "singleton_width": denominator, "nu": result.width / denominator}


async def relax_polynomial(
    problem_data: dict[str, Any],
    types: Sequence[str] | None = None,
    epsilon: float | None = None,
    covering: str | None = None,
) -> dict[str, Any]:
    """
    Solves the relaxation of a problem given in its JSON form.

    Raises:
        ParameterError: For malformed problems or options.
        SolverError, InternalError: If the cutting-plane loop fails.
    """
    problem = Problem.from_dict(problem_data)
    kwargs = {}
    if types is not None:
        kwargs["types"] = types
    if epsilon is not None:
        kwargs["epsilon"] = float(epsilon)
    if covering is not None:
        kwargs["covering"] = covering
    report = await asyncio.to_thread(solve_problem, problem, **kwargs)
    return report.to_dict()


async def generate_family(exponents: Sequence[Sequence[int]], types: Sequence[str] | None = None) -> list[dict]:
    family = await asyncio.to_thread(generate_patterns, exponents, types)
    return family.to_list()


async def separate_point(
    pattern_data: dict[str, Any], point_data: dict[str, Any], covering: str | None = None
) -> dict[str, Any]:
    cut = await asyncio.to_thread(separate_from_data, pattern_data, point_data, covering)
    return {"cut": cut.to_dict() if cut is not None else None}


async def width_ratio(
    problem_data: dict[str, Any],
    types: Sequence[str] | None = None,
    epsilon: float | None = None,
    covering: str | None = None,
) -> dict[str, float]:
    problem = Problem.from_dict(problem_data)
    kwargs = {}
    if types is not None:
        kwargs["types"] = types
    if epsilon is not None:
        kwargs["epsilon"] = float(epsilon)
    if covering is not None:
        kwargs["covering"] = covering
    return await asyncio.to_thread(width_report, problem, **kwargs)
