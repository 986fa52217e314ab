# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
Embedded linear-programming backend.

A dense two-phase tableau simplex. Entering columns follow Dantzig's rule
until a run of degenerate pivots is detected, after which Bland's rule takes
over for the rest of the phase. Ratio-test ties go to the smallest basic
variable index. The final basic solution is recomputed from the original
standard-form columns to shed accumulated round-off and must then satisfy
every row and bound within FEASIBILITY_TOL, relative to the row activity;
otherwise a SolverError is raised. Shadow prices are reported for every row.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exceptions import ParameterError, SolverError

logger = logging.getLogger(__name__)

FEASIBILITY_TOL = 1e-9
OPTIMALITY_TOL = 1e-9
PIVOT_TOL = 1e-9
INFEASIBILITY_TOL = 1e-7
DEGENERATE_LIMIT = 50


class Sense(str, Enum):
    MINIMIZE = "min"
    MAXIMIZE = "max"


class Relation(str, Enum):
    LE = "<="
    GE = ">="
    EQ = "="


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """
    optimize objective·x  s.t.  matrix[i]·x (relation[i]) rhs[i],  lower ≤ x ≤ upper.

    Bounds may be infinite. Use `build` for row-by-row construction.
    """

    objective: np.ndarray
    matrix: np.ndarray
    relations: tuple[Relation, ...]
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    sense: Sense = Sense.MINIMIZE
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        objective = np.asarray(self.objective, dtype=float).reshape(-1)
        n = objective.shape[0]
        if n == 0:
            raise ParameterError("A linear program needs at least one variable.")
        matrix = np.asarray(self.matrix, dtype=float)
        matrix = matrix.reshape(-1, n) if matrix.size else np.zeros((0, n))
        relations = tuple(Relation(r) for r in self.relations)
        rhs = np.asarray(self.rhs, dtype=float).reshape(-1)
        lower = np.asarray(self.lower, dtype=float).reshape(-1)
        upper = np.asarray(self.upper, dtype=float).reshape(-1)
        if not (matrix.shape[0] == len(relations) == rhs.shape[0]):
            raise ParameterError("Row coefficients, relations and right-hand sides differ in count.")
        if lower.shape[0] != n or upper.shape[0] != n:
            raise ParameterError("Variable bounds must have one entry per variable.")
        if not (np.isfinite(objective).all() and np.isfinite(matrix).all() and np.isfinite(rhs).all()):
            raise ParameterError("Objective, row coefficients and right-hand sides must be finite.")
        if np.isnan(lower).any() or np.isnan(upper).any() or (lower > upper).any():
            raise ParameterError("Variable bounds must satisfy lower <= upper.")
        if (lower == np.inf).any() or (upper == -np.inf).any():
            raise ParameterError("Variable bounds exclude every value.")
        names = tuple(self.names) if self.names is not None else tuple(f"x{j}" for j in range(n))
        if len(names) != n:
            raise ParameterError("Variable names must have one entry per variable.")
        object.__setattr__(self, "objective", objective)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "relations", relations)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "sense", Sense(self.sense))
        object.__setattr__(self, "names", names)

    @classmethod
    def build(
        cls,
        objective: Sequence[float],
        rows: Iterable[tuple[Sequence[float], Relation | str, float]] = (),
        *,
        lower: Sequence[float] | float | None = None,
        upper: Sequence[float] | float | None = None,
        sense: Sense | str = Sense.MINIMIZE,
        names: Sequence[str] | None = None,
    ) -> LinearProgram:
        """Builds a program from (coefficients, relation, rhs) rows; bounds default to [0, ∞)."""
        objective = np.asarray(objective, dtype=float).reshape(-1)
        n = objective.shape[0]
        rows = list(rows)
        matrix = np.array([r[0] for r in rows], dtype=float).reshape(len(rows), n)
        lower = np.zeros(n) if lower is None else np.broadcast_to(np.asarray(lower, dtype=float), (n,))
        upper = np.full(n, np.inf) if upper is None else np.broadcast_to(np.asarray(upper, dtype=float), (n,))
        return cls(
            objective,
            matrix,
            tuple(r[1] for r in rows),
            np.array([r[2] for r in rows], dtype=float),
            np.array(lower),
            np.array(upper),
            Sense(sense),
            tuple(names) if names is not None else None,
        )

    @property
    def num_variables(self) -> int:
        return self.objective.shape[0]

    @property
    def num_rows(self) -> int:
        return self.matrix.shape[0]

    def max_violation(self, x: np.ndarray) -> float:
        """Largest absolute row or bound violation of x."""
        worst = 0.0
        if self.num_rows:
            activity = self.matrix @ x
            for relation, act, rhs in zip(self.relations, activity, self.rhs):
                if relation is Relation.LE:
                    worst = max(worst, act - rhs)
                elif relation is Relation.GE:
                    worst = max(worst, rhs - act)
                else:
                    worst = max(worst, abs(act - rhs))
        worst = max(worst, float(np.max(self.lower - x, initial=0.0)), float(np.max(x - self.upper, initial=0.0)))
        return worst

    def to_lp_text(self) -> str:
        """Renders the program in CPLEX LP text format."""

        def linear(coeffs: np.ndarray) -> str:
            parts = []
            for name, c in zip(self.names, coeffs):
                if c != 0.0:
                    parts.append(f"{'-' if c < 0 else '+'} {float(abs(c))!r} {name}")
            if not parts:
                return f"0 {self.names[0]}"
            text = " ".join(parts)
            return text[2:] if text.startswith("+ ") else text

        lines = ["\\ generated by polyrelax", "Maximize" if self.sense is Sense.MAXIMIZE else "Minimize"]
        lines.append(f" obj: {linear(self.objective)}")
        lines.append("Subject To")
        for i, (row, relation, rhs) in enumerate(zip(self.matrix, self.relations, self.rhs)):
            lines.append(f" c{i}: {linear(row)} {relation.value} {float(rhs)!r}")
        lines.append("Bounds")
        for name, lo, hi in zip(self.names, self.lower, self.upper):
            if lo == -np.inf and hi == np.inf:
                lines.append(f" {name} free")
            elif lo == hi:
                lines.append(f" {name} = {float(lo)!r}")
            else:
                lo_text = "-inf" if lo == -np.inf else repr(float(lo))
                hi_text = "+inf" if hi == np.inf else repr(float(hi))
                lines.append(f" {lo_text} <= {name} <= {hi_text}")
        lines.append("End")
        return "\n".join(lines) + "\n"


def write_lp(lp: LinearProgram, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(lp.to_lp_text(), encoding="utf-8")
    logger.debug("wrote LP with %d rows to %s", lp.num_rows, path)
    return path


@dataclass(frozen=True, eq=False)
class LpOutcome:
    """
    Result of solve_lp. `duals` holds ∂objective/∂rhsᵢ for each row of the
    original program (zero for rows dropped as redundant).
    """

    status: LpStatus
    x: np.ndarray | None = None
    objective: float | None = None
    duals: np.ndarray | None = None
    pivots: int = 0

    @property
    def is_optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


@dataclass
class _StandardForm:
    matrix: np.ndarray
    rhs: np.ndarray
    relations: list[Relation]
    cost: np.ndarray
    transform: np.ndarray
    offset: np.ndarray
    sense_sign: float


def _standardize(lp: LinearProgram) -> _StandardForm:
    """Maps lp to min cost·y, A y (rel) b, y ≥ 0 with x = offset + transform·y."""
    n = lp.num_variables
    offset = np.zeros(n)
    placements: list[tuple[int, int, float]] = []
    upper_rows: list[tuple[int, float]] = []
    width = 0
    for j in range(n):
        lo, hi = lp.lower[j], lp.upper[j]
        if math.isfinite(lo) and math.isfinite(hi) and hi <= lo:
            offset[j] = lo
        elif math.isfinite(lo):
            offset[j] = lo
            placements.append((j, width, 1.0))
            if math.isfinite(hi):
                upper_rows.append((width, hi - lo))
            width += 1
        elif math.isfinite(hi):
            offset[j] = hi
            placements.append((j, width, -1.0))
            width += 1
        else:
            placements.append((j, width, 1.0))
            placements.append((j, width + 1, -1.0))
            width += 2
    transform = np.zeros((n, width))
    for j, col, sign in placements:
        transform[j, col] = sign
    matrix = lp.matrix @ transform
    rhs = lp.rhs - lp.matrix @ offset
    relations = list(lp.relations)
    if upper_rows:
        bound_rows = np.zeros((len(upper_rows), width))
        for k, (col, _) in enumerate(upper_rows):
            bound_rows[k, col] = 1.0
        matrix = np.vstack([matrix, bound_rows])
        rhs = np.concatenate([rhs, [bound for _, bound in upper_rows]])
        relations += [Relation.LE] * len(upper_rows)
    sense_sign = 1.0 if lp.sense is Sense.MINIMIZE else -1.0
    return _StandardForm(matrix, rhs, relations, sense_sign * (lp.objective @ transform), transform, offset, sense_sign)


def _pivot(tableau: np.ndarray, row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    nonzero = np.flatnonzero(factors)
    if nonzero.size:
        tableau[nonzero] -= np.outer(factors[nonzero], tableau[row])
    tableau[:, col] = 0.0
    tableau[row, col] = 1.0


class _Simplex:
    """Tableau state shared by both phases."""

    def __init__(self, tableau: np.ndarray, basis: np.ndarray, max_pivots: int, tol: float):
        self.tableau = tableau
        self.basis = basis
        self.max_pivots = max_pivots
        self.tol = tol
        self.pivots = 0

    def iterate(self, allowed: int, phase: int) -> LpStatus:
        tableau, basis, tol = self.tableau, self.basis, self.tol
        m = basis.shape[0]
        bland = False
        degenerate_run = 0
        while True:
            reduced = tableau[-1, :allowed]
            if bland:
                candidates = np.flatnonzero(reduced < -tol)
                if candidates.size == 0:
                    return LpStatus.OPTIMAL
                col = int(candidates[0])
            else:
                col = int(np.argmin(reduced)) if allowed else 0
                if not allowed or reduced[col] >= -tol:
                    return LpStatus.OPTIMAL
            column = tableau[:m, col]
            positive = np.flatnonzero(column > PIVOT_TOL)
            if positive.size == 0:
                return LpStatus.UNBOUNDED
            ratios = np.maximum(tableau[positive, -1], 0.0) / column[positive]
            best = ratios.min()
            ties = positive[ratios <= best + 1e-12 * max(1.0, abs(best))]
            row = int(ties[np.argmin(basis[ties])])
            _pivot(tableau, row, col)
            basis[row] = col
            self.pivots += 1
            if best <= tol:
                degenerate_run += 1
                if not bland and degenerate_run > DEGENERATE_LIMIT:
                    logger.debug("phase %d: switching to Bland's rule after %d degenerate pivots", phase, degenerate_run)
                    bland = True
            else:
                degenerate_run = 0
            if self.pivots > self.max_pivots:
                raise SolverError(
                    "Pivot limit exceeded.",
                    status="pivot_limit",
                    diagnostics={"phase": phase, "pivots": self.pivots, "rows": m, "columns": tableau.shape[1] - 1},
                )


def _residual_scale(lp: LinearProgram, x: np.ndarray) -> float:
    """1 + the largest row activity |A|·|x|, right-hand side or |x| entry."""
    activity = np.abs(lp.matrix) @ np.abs(x) if lp.num_rows else np.zeros(0)
    return 1.0 + max(
        float(np.max(activity, initial=0.0)),
        float(np.max(np.abs(lp.rhs), initial=0.0)),
        float(np.max(np.abs(x), initial=0.0)),
    )


def solve_lp(lp: LinearProgram, *, tol: float = OPTIMALITY_TOL, max_pivots: int | None = None) -> LpOutcome:
    """
    Solves a linear program with the two-phase dense simplex.

    Args:
        lp: The program.
        tol: Feasibility and optimality tolerance on reduced costs and ratios.
        max_pivots: Total pivot budget; defaults to 50·(rows + columns) + 1000.

    Returns:
        LpOutcome with status, and solution/objective/duals when optimal.

    Raises:
        SolverError: If the pivot budget is exhausted or the final solution
            violates a row or bound by more than FEASIBILITY_TOL (relative
            to the row activity).
    """
    std = _standardize(lp)
    m, width = std.matrix.shape
    row_sign = np.where(std.rhs < 0.0, -1.0, 1.0)
    matrix = std.matrix * row_sign[:, None]
    rhs = std.rhs * row_sign
    relations = []
    for relation, sign in zip(std.relations, row_sign):
        if sign < 0 and relation is not Relation.EQ:
            relation = Relation.GE if relation is Relation.LE else Relation.LE
        relations.append(relation)

    n_logical = sum(1 for r in relations if r is not Relation.EQ)
    art_rows = [i for i, r in enumerate(relations) if r is not Relation.LE]
    art_start = width + n_logical
    total = art_start + len(art_rows)
    full = np.zeros((m, total))
    full[:, :width] = matrix
    basis = np.empty(m, dtype=int)
    k = width
    for i, relation in enumerate(relations):
        if relation is Relation.LE:
            full[i, k] = 1.0
            basis[i] = k
            k += 1
        elif relation is Relation.GE:
            full[i, k] = -1.0
            k += 1
    for i in art_rows:
        full[i, k] = 1.0
        basis[i] = k
        k += 1

    tableau = np.zeros((m + 1, total + 1))
    tableau[:m, :total] = full
    tableau[:m, -1] = rhs
    budget = max_pivots if max_pivots is not None else 50 * (m + total) + 1000
    simplex = _Simplex(tableau, basis, budget, tol)
    kept = np.arange(m)

    if art_rows:
        tableau[-1, :art_start] = -full[art_rows, :art_start].sum(axis=0)
        tableau[-1, -1] = -rhs[art_rows].sum()
        simplex.iterate(art_start, phase=1)
        infeasibility = -tableau[-1, -1]
        if infeasibility > INFEASIBILITY_TOL * (1.0 + float(np.max(np.abs(rhs), initial=0.0))):
            logger.debug("phase 1 ended with infeasibility %.3e", infeasibility)
            return LpOutcome(LpStatus.INFEASIBLE, pivots=simplex.pivots)
        redundant = []
        for i in range(m):
            if basis[i] < art_start:
                continue
            row = np.abs(tableau[i, :art_start])
            j = int(np.argmax(row)) if art_start else 0
            if art_start and row[j] > PIVOT_TOL:
                _pivot(tableau, i, j)
                basis[i] = j
            else:
                redundant.append(i)
        if redundant:
            logger.debug("dropping %d redundant row(s)", len(redundant))
            keep = np.array([i for i in range(m) if i not in set(redundant)], dtype=int)
            tableau = tableau[np.append(keep, m)]
            basis = basis[keep]
            kept = kept[keep]
        tableau = np.hstack([tableau[:, :art_start], tableau[:, -1:]])
        simplex.tableau, simplex.basis = tableau, basis

    cost = np.zeros(art_start)
    cost[:width] = std.cost
    tableau[-1, :-1] = cost
    tableau[-1, -1] = 0.0
    for i, j in enumerate(basis):
        if cost[j] != 0.0:
            tableau[-1] -= cost[j] * tableau[i]
    status = simplex.iterate(art_start, phase=2)
    if status is LpStatus.UNBOUNDED:
        return LpOutcome(LpStatus.UNBOUNDED, pivots=simplex.pivots)
    if not np.isfinite(tableau).all():
        raise SolverError("Non-finite entries in the final tableau.", status="numerical",
                          diagnostics={"rows": m, "columns": total, "pivots": simplex.pivots})

    y = np.zeros(art_start)
    y[basis] = tableau[:-1, -1]
    duals_std = np.zeros(m)
    if basis.size:
        base_matrix = full[np.ix_(kept, basis)]
        try:
            refined = np.linalg.solve(base_matrix, rhs[kept])
            if refined.min() >= -1e-7 * (1.0 + float(np.abs(rhs).max())):
                y[basis] = refined
            duals_std[kept] = np.linalg.solve(base_matrix.T, cost[basis])
        except np.linalg.LinAlgError as exc:
            logger.debug("basis refinement skipped: %s", exc)
            duals_std[kept] = 0.0
    y = np.maximum(y, 0.0)

    x = std.offset + std.transform @ y[:width]
    violation = lp.max_violation(x)
    if violation > FEASIBILITY_TOL * _residual_scale(lp, x):
        raise SolverError(
            f"Solution violates the constraints by {violation:.3e}.",
            status="residual",
            diagnostics={"violation": violation, "rows": lp.num_rows, "variables": lp.num_variables,
                         "pivots": simplex.pivots},
        )
    duals = std.sense_sign * row_sign[: lp.num_rows] * duals_std[: lp.num_rows]
    objective = float(lp.objective @ x)
    logger.debug("LP %dx%d solved in %d pivots, objective %.12g", lp.num_rows, lp.num_variables,
                 simplex.pivots, objective)
    return LpOutcome(LpStatus.OPTIMAL, x=x, objective=objective, duals=duals, pivots=simplex.pivots)
