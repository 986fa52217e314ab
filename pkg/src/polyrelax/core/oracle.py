# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
Brute-force reference computations used to check relaxation bounds.

`grid_min` returns an upper bound on the true minimum of a polynomial over a
box (grid search followed by coordinate descent), so a relaxation bound that
lies below it is consistent. `hull_membership` gives an l₁ projection
distance independent of the separation oracles.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import ClassVar, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .exceptions import ParameterError, SizeLimitError, SolverError
from .lp import LinearProgram, Relation, solve_lp
from .poly import BoxDomain, SparsePolynomial

logger = logging.getLogger(__name__)

MEMBERSHIP_TOL = 1e-8


@dataclass(frozen=True)
class OracleConfig:
    grid: int = 201
    polish_steps: int = 100
    restarts: int = 20
    seed: int = 0

    MAX_DIMENSION: ClassVar[int] = 4
    MAX_GRID_POINTS: ClassVar[int] = 1 << 24

    def __post_init__(self):
        if self.grid < 2:
            raise ParameterError(f"Oracle grid needs at least 2 points per axis, got {self.grid}.")
        if self.restarts < 0 or self.polish_steps < 0:
            raise ParameterError("Oracle restarts and polish steps must be non-negative.")


def _axis_count(cfg: OracleConfig, n: int) -> int:
    count = cfg.grid
    if count ** n <= cfg.MAX_GRID_POINTS:
        return count
    reduced = int(round(cfg.MAX_GRID_POINTS ** (1.0 / n)))
    while reduced ** n > cfg.MAX_GRID_POINTS:
        reduced -= 1
    logger.warning("oracle grid %d^%d exceeds %d points; using %d per axis", count, n, cfg.MAX_GRID_POINTS, reduced)
    return reduced


def _grid_search(f: SparsePolynomial, box: BoxDomain, count: int) -> tuple[float, np.ndarray]:
    n = box.dimension
    axes = [np.linspace(a, b, count) for a, b in zip(box.lower, box.upper)]
    total = count ** n
    best_value, best_point = np.inf, None
    chunk = 1 << 16
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total))
        # C order: first axis slowest, so flat order is lexicographic order on points
        coords = np.unravel_index(flat, (count,) * n)
        points = np.column_stack([axes[i][coords[i]] for i in range(n)])
        values = f.evaluate_many(points)
        k = int(np.argmin(values))
        if values[k] < best_value:
            best_value, best_point = float(values[k]), points[k].copy()
    return best_value, best_point


def _coordinate_descent(f: SparsePolynomial, box: BoxDomain, start: np.ndarray, steps: int) -> tuple[float, np.ndarray]:
    x = np.clip(np.asarray(start, dtype=float), box.lower, box.upper)
    value = f.evaluate(x)
    for _ in range(steps):
        before = value
        for i, (a, b) in enumerate(zip(box.lower, box.upper)):
            def along(t, i=i):
                trial = x.copy()
                trial[i] = t
                return f.evaluate(trial)

            result = minimize_scalar(along, bounds=(a, b), method="bounded", options={"xatol": 1e-10})
            for t in (float(result.x), a, b):
                candidate = along(t)
                if candidate < value:
                    value = candidate
                    x[i] = t
        if before - value <= 1e-15 * max(1.0, abs(value)):
            break
    return value, x


def _better(value: float, point: np.ndarray, best_value: float, best_point: np.ndarray | None) -> bool:
    if best_point is None or value < best_value:
        return True
    return value == best_value and tuple(point) < tuple(best_point)


def grid_min(f: SparsePolynomial, box: BoxDomain, cfg: OracleConfig | None = None) -> tuple[float, np.ndarray]:
    """
    Approximates min_{x∈K} f(x) from above.

    The tensor grid's best point and `cfg.restarts` seeded random points are
    polished by coordinate-wise bounded line searches.

    Returns:
        The best value found and its argmin (ties broken lexicographically).

    Raises:
        SizeLimitError: If the box has more than four dimensions.
    """
    cfg = cfg or OracleConfig()
    if f.dimension != box.dimension:
        raise ParameterError(f"Polynomial has dimension {f.dimension} but the box has {box.dimension}.")
    n = box.dimension
    if n > cfg.MAX_DIMENSION:
        msg = f"Oracle grid search supports at most {cfg.MAX_DIMENSION} dimensions, got {n}."
        logger.error(msg)
        raise SizeLimitError(msg)

    best_value, best_point = _grid_search(f, box, _axis_count(cfg, n))
    rng = np.random.default_rng(cfg.seed)
    starts = [best_point, *box.sample(rng, cfg.restarts)]
    for start in starts:
        value, point = _coordinate_descent(f, box, start, cfg.polish_steps)
        if _better(value, point, best_value, best_point):
            best_value, best_point = value, point
    return float(best_value), best_point


def width_ref(f: SparsePolynomial, box: BoxDomain, cfg: OracleConfig | None = None) -> float:
    """max f − min f over the box as seen by the oracle; under-estimates the true width."""
    upper, _ = grid_min(-f, box, cfg)
    lower, _ = grid_min(f, box, cfg)
    return -upper - lower


def hull_membership(points: Sequence[Sequence[float]], v: Sequence[float]) -> tuple[bool, float]:
    """
    l₁ distance from v to conv(points), via

        min Σ(e⁺ + e⁻)  s.t.  Σ λᵢpᵢ + e⁺ − e⁻ = v,  Σ λᵢ = 1,  λ, e± ≥ 0.

    Raises:
        ParameterError: If points is empty or dimensions differ.
        SolverError: If the LP cannot be solved.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    v = np.asarray(v, dtype=float).reshape(-1)
    if pts.size == 0:
        raise ParameterError("hull_membership needs at least one point.")
    if pts.shape[1] != v.shape[0]:
        raise ParameterError(f"Points have dimension {pts.shape[1]} but v has {v.shape[0]}.")
    k, p = pts.shape
    eye = np.eye(p)
    matrix = np.vstack([
        np.hstack([pts.T, eye, -eye]),
        np.concatenate([np.ones(k), np.zeros(2 * p)])[None, :],
    ])
    lp = LinearProgram(
        objective=np.concatenate([np.zeros(k), np.ones(2 * p)]),
        matrix=matrix,
        relations=(Relation.EQ,) * (p + 1),
        rhs=np.concatenate([v, [1.0]]),
        lower=np.zeros(k + 2 * p),
        upper=np.full(k + 2 * p, np.inf),
    )
    outcome = solve_lp(lp)
    if not outcome.is_optimal:
        raise SolverError("Hull membership LP did not reach optimality.", status=outcome.status.value)
    distance = max(float(outcome.objective), 0.0)
    return distance <= MEMBERSHIP_TOL, distance
