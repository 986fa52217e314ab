# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
Cutting-plane solver for pattern relaxations.

The master problem is min ⟨f, v⟩ over v ∈ ℝ^Ā subject to the singleton box
bounds and every cut found so far. Each round separates the current point
against every pattern of the family, keeps the cuts whose distance exceeds
ε, and re-solves the master from scratch. The returned bound is a lower
bound on min_{x∈K} f(x) up to the ε-slack.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Callable, ClassVar, NamedTuple, Sequence

import numpy as np

from .exceptions import InternalError, ParameterError, SolverError
from .lp import LinearProgram, LpStatus, Relation, Sense, solve_lp, write_lp
from .patterns import PatternFamily
from .poly import BoxDomain, Exponent, Interval, MomentPoint, SparsePolynomial, monomial_bounds, zero_exponent
from .separation import DEFAULT_COVERING, Cut, CoveringSpec, PatternSeparator

logger = logging.getLogger(__name__)


class TerminationReason(str, Enum):
    CONVERGED = "converged"
    ITERATION_CAP = "iteration_cap"
    TIME_BUDGET = "time_budget"


@dataclass(frozen=True)
class RelaxationInstance:
    """
    Objective, pattern family and box of one relaxation.

    Raises:
        ParameterError: If supp(f) is not contained in Ā, dimensions differ or ε ≤ 0.
    """

    objective: SparsePolynomial
    family: PatternFamily
    box: BoxDomain
    epsilon: float = 1e-4
    covering: CoveringSpec = DEFAULT_COVERING

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ParameterError(f"Termination tolerance must be positive, got {self.epsilon}.")
        if not self.family.cover:
            raise ParameterError("The pattern family is empty.")
        if self.family.dimension != self.box.dimension or self.objective.dimension != self.box.dimension:
            raise ParameterError(
                f"Dimension mismatch: objective {self.objective.dimension}, "
                f"family {self.family.dimension}, box {self.box.dimension}."
            )
        missing = [alpha for alpha in self.objective.support if alpha not in self.family.cover]
        if missing:
            msg = f"Objective monomials {missing} are not covered by the pattern family."
            logger.error(msg)
            raise ParameterError(msg)

    @property
    def index(self) -> tuple[Exponent, ...]:
        return self.family.index

    def with_objective(self, objective: SparsePolynomial) -> RelaxationInstance:
        return replace(self, objective=objective)


class TraceEntry(NamedTuple):
    iteration: int
    bound: float
    max_distance: float
    cuts: int


@dataclass(frozen=True, eq=False)
class SolveReport:
    lower_bound: float
    point: MomentPoint
    iterations: int
    cuts_added: int
    trace: tuple[TraceEntry, ...]
    reason: TerminationReason
    wall_time: float = 0.0
    cuts: tuple[Cut, ...] = field(default=(), repr=False)

    @property
    def converged(self) -> bool:
        return self.reason is TerminationReason.CONVERGED

    def to_dict(self, include_point: bool = True) -> dict:
        data = {
            "lower_bound": self.lower_bound,
            "iterations": self.iterations,
            "cuts_added": self.cuts_added,
            "reason": self.reason.value,
            "wall_time": self.wall_time,
            "trace": [entry._asdict() for entry in self.trace],
        }
        if include_point:
            data["point"] = self.point.to_dict()
        return data


class AmbientCut(NamedTuple):
    """⟨coefficients, v⟩ ≥ offset over ℝ^Ā."""

    coefficients: np.ndarray
    offset: float


def lift_cut(cut: Cut, index: Sequence[Exponent]) -> AmbientCut:
    """
    Embeds a pattern cut into ℝ^Ā with zeros outside the pattern.

    Raises:
        InternalError: If the cut mentions an exponent outside Ā.
    """
    positions = {alpha: i for i, alpha in enumerate(index)}
    lifted = np.zeros(len(positions))
    for alpha, c in zip(cut.elements, cut.coefficients):
        if alpha not in positions:
            raise InternalError(f"Cut element {alpha} lies outside the master index set.")
        lifted[positions[alpha]] += c
    return AmbientCut(lifted, cut.offset)


def initial_master(
    objective: SparsePolynomial, index: Sequence[Exponent], box: BoxDomain
) -> tuple[MomentPoint, tuple[Interval, ...]]:
    """
    Singleton relaxation in closed form.

    Each coordinate sits at its lower bound when f_α ≥ 0 and at its upper
    bound otherwise; the returned intervals are the starting constraints.
    """
    index = tuple(index)
    missing = [alpha for alpha in objective.support if alpha not in set(index)]
    if missing:
        raise ParameterError(f"Objective monomials {missing} are not in the index set.")
    bounds = tuple(monomial_bounds(alpha, box) for alpha in index)
    values = [b.lo if objective.coefficient(alpha) >= 0 else b.hi for alpha, b in zip(index, bounds)]
    return MomentPoint(index, np.array(values, dtype=float)), bounds


def _variable_name(alpha: Exponent) -> str:
    return "v_" + "_".join(str(a) for a in alpha)


class CuttingPlaneSolver:
    """
    Runs the cutting-plane loop on relaxation instances.

    Separation across patterns runs on a thread pool when `workers` > 1;
    cuts are still collected in pattern order.
    """

    DEFAULT_MAX_ITERATIONS: ClassVar[int] = 10_000
    DEFAULT_TIME_BUDGET: ClassVar[float | None] = None
    MIN_WORKERS: ClassVar[int] = 1

    def __init__(
        self,
        max_iterations: int | None = None,
        time_budget: float | None = None,
        workers: int = 1,
        lp_dump_dir: str | Path | None = None,
        clock: Callable[[], float] = time.perf_counter,
    ):
        self.max_iterations = self.DEFAULT_MAX_ITERATIONS if max_iterations is None else max_iterations
        self.time_budget = self.DEFAULT_TIME_BUDGET if time_budget is None else time_budget
        if self.max_iterations < 0:
            raise ParameterError(f"Iteration cap must be non-negative, got {self.max_iterations}.")
        if self.time_budget is not None and self.time_budget <= 0:
            self.time_budget = None
        if workers < self.MIN_WORKERS:
            raise ParameterError(f"Worker count must be at least {self.MIN_WORKERS}, got {workers}.")
        self.workers = workers
        self.lp_dump_dir = Path(lp_dump_dir) if lp_dump_dir else None
        self._clock = clock
        self._dumps = 0

    def _solve_master(
        self,
        index: tuple[Exponent, ...],
        fvec: np.ndarray,
        bounds: tuple[Interval, ...],
        rows: list[AmbientCut],
    ) -> np.ndarray:
        """
        Solves min f·v s.t. Gv ≥ h, lo ≤ v ≤ hi through its dual

            max hᵀy + loᵀz⁺ − hiᵀz⁻  s.t.  Gᵀy + z⁺ − z⁻ = f,  y, z± ≥ 0

        and reads v off the dual's shadow prices. v_𝟘 is fixed to 1 beforehand.
        """
        n = len(index)
        zero = zero_exponent(len(index[0]))
        zero_pos = index.index(zero) if zero in index else None
        free = np.array([i for i in range(n) if i != zero_pos], dtype=np.int64)
        lo = np.array([b.lo for b in bounds])
        hi = np.array([b.hi for b in bounds])
        v = np.empty(n)
        if zero_pos is not None:
            v[zero_pos] = 1.0
        if free.size == 0:
            return v

        g = np.array([r.coefficients for r in rows]).reshape(len(rows), n)
        h = np.array([r.offset for r in rows], dtype=float)
        if zero_pos is not None:
            h = h - g[:, zero_pos]
        g = g[:, free]
        p, m = free.size, len(rows)
        eye = np.eye(p)
        dual = LinearProgram(
            objective=np.concatenate([h, lo[free], -hi[free]]),
            matrix=np.hstack([g.T, eye, -eye]),
            relations=(Relation.EQ,) * p,
            rhs=fvec[free],
            lower=np.zeros(m + 2 * p),
            upper=np.full(m + 2 * p, np.inf),
            sense=Sense.MAXIMIZE,
        )
        outcome = solve_lp(dual)
        if outcome.status is LpStatus.UNBOUNDED:
            raise InternalError("Master LP is infeasible; a cut excluded the moment body.")
        if not outcome.is_optimal:
            raise SolverError("Master LP did not reach optimality.", status=outcome.status.value,
                              diagnostics={"cuts": m, "variables": p})
        v[free] = np.clip(outcome.duals, lo[free], hi[free])
        logger.debug("master: %d cuts over %d variables, %d pivots", m, p, outcome.pivots)
        return v

    def _dump_master(self, index, fvec, bounds, rows: list[AmbientCut]) -> None:
        lp = LinearProgram.build(
            fvec,
            [(r.coefficients, Relation.GE, r.offset) for r in rows],
            lower=[b.lo for b in bounds],
            upper=[b.hi for b in bounds],
            names=[_variable_name(alpha) for alpha in index],
        )
        self._dumps += 1
        path = write_lp(lp, self.lp_dump_dir / f"master_{self._dumps:04d}.lp")
        logger.info("wrote master LP to %s", path)

    def run(self, instance: RelaxationInstance) -> SolveReport:
        """
        Runs the loop until no pattern is violated by more than ε.

        Raises:
            InternalError: If the master LP becomes infeasible.
            SolverError: If an LP cannot be solved reliably.
        """
        started = self._clock()
        index = instance.index
        fvec = instance.objective.coefficient_vector(index)
        point, bounds = initial_master(instance.objective, index, instance.box)
        v = point.values.copy()
        positions = {alpha: i for i, alpha in enumerate(index)}
        separators = [
            PatternSeparator(pattern, instance.box, instance.covering, k)
            for k, pattern in enumerate(instance.family.patterns)
        ]
        slots = [np.array([positions[alpha] for alpha in s.pattern.elements]) for s in separators]
        logger.info(
            "cutting-plane run: %d patterns, |Ā| = %d, ε = %g", len(separators), len(index), instance.epsilon
        )

        rows: list[AmbientCut] = []
        kept: list[Cut] = []
        trace: list[TraceEntry] = []
        iteration = 0
        pool = ThreadPoolExecutor(max_workers=self.workers) if self.workers > 1 and len(separators) > 1 else None
        try:
            while True:
                bound = float(fvec @ v)
                if pool is None:
                    found = [s.separate(v[slot]) for s, slot in zip(separators, slots)]
                else:
                    found = list(pool.map(lambda pair: pair[0].separate(v[pair[1]]), zip(separators, slots)))
                cuts = [cut for cut in found if cut is not None]
                max_distance = max((cut.distance for cut in cuts), default=0.0)
                trace.append(TraceEntry(iteration, bound, max_distance, len(kept)))
                logger.debug("iteration %d: bound %.10g, max distance %.3g", iteration, bound, max_distance)

                violated = [cut for cut in cuts if cut.distance > instance.epsilon]
                if not violated:
                    reason = TerminationReason.CONVERGED
                    break
                if iteration >= self.max_iterations:
                    reason = TerminationReason.ITERATION_CAP
                    logger.warning("iteration cap %d reached; bound %.10g is valid but loose", iteration, bound)
                    break
                if self.time_budget is not None and self._clock() - started > self.time_budget:
                    reason = TerminationReason.TIME_BUDGET
                    logger.warning("time budget of %gs exhausted after %d iterations", self.time_budget, iteration)
                    break
                kept.extend(violated)
                rows.extend(lift_cut(cut, index) for cut in violated)
                v = self._solve_master(index, fvec, bounds, rows)
                iteration += 1
        finally:
            if pool is not None:
                pool.shutdown()

        if self.lp_dump_dir is not None:
            self._dump_master(index, fvec, bounds, rows)
        elapsed = self._clock() - started
        report = SolveReport(
            lower_bound=bound,
            point=MomentPoint(index, v),
            iterations=iteration,
            cuts_added=len(kept),
            trace=tuple(trace),
            reason=reason,
            wall_time=elapsed,
            cuts=tuple(kept),
        )
        logger.info(
            "run finished (%s): bound %.10g after %d iterations, %d cuts", reason.value, bound, iteration, len(kept)
        )
        return report

    def epsilon_sweep(self, instance: RelaxationInstance, epsilons: Sequence[float]) -> list[SolveReport]:
        """Runs the same instance once per ε, in the given order."""
        return [self.run(replace(instance, epsilon=float(eps))) for eps in epsilons]


def run(instance: RelaxationInstance, **solver_options) -> SolveReport:
    return CuttingPlaneSolver(**solver_options).run(instance)


def epsilon_sweep(instance: RelaxationInstance, epsilons: Sequence[float], **solver_options) -> list[SolveReport]:
    return CuttingPlaneSolver(**solver_options).epsilon_sweep(instance, epsilons)
