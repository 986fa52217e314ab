# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
polyrelax.core

Pattern relaxations of polynomial moment bodies and a cutting-plane solver
that turns them into lower bounds for box-constrained polynomial
minimization.
"""

import logging

__version__ = "0.1.0"

from .cutting_plane import (
    CuttingPlaneSolver,
    RelaxationInstance,
    SolveReport,
    TerminationReason,
    TraceEntry,
    epsilon_sweep,
    initial_master,
    lift_cut,
    run,
)
from .exceptions import (
    ConfigurationError,
    DegenerateInstanceError,
    InternalError,
    ParameterError,
    PolyRelaxError,
    SizeLimitError,
    SolverError,
    UnsupportedPatternError,
)
from .lp import LinearProgram, LpOutcome, LpStatus, Relation, Sense, solve_lp, write_lp
from .oracle import OracleConfig, grid_min, hull_membership, width_ref
from .patterns import (
    Pattern,
    PatternFamily,
    PatternKind,
    add_pattern,
    chain_pattern,
    find_axis_chains,
    find_chains,
    find_multilinear,
    find_shifted_chains,
    generate_patterns,
    ml_pattern,
    shifted_chain_pattern,
    singleton_family,
    singleton_pattern,
    truncated_submonoid_pattern,
    ts_reparametrize,
)
from .poly import BoxDomain, Interval, MomentPoint, SparsePolynomial, eval_poly, moment_map, monomial_bounds
from .separation import (
    Covering,
    CoveringSpec,
    Cut,
    PatternSeparator,
    covering_equal,
    covering_for_tolerance,
    delta_vertices,
    ml_vertex_set,
    phi_matrix,
    separate,
    separate_chain,
    separate_multilinear,
    separate_shifted_chain,
    separate_singleton,
)

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "BoxDomain",
    "ConfigurationError",
    "Covering",
    "CoveringSpec",
    "Cut",
    "CuttingPlaneSolver",
    "DegenerateInstanceError",
    "Interval",
    "InternalError",
    "LinearProgram",
    "LpOutcome",
    "LpStatus",
    "MomentPoint",
    "OracleConfig",
    "ParameterError",
    "Pattern",
    "PatternFamily",
    "PatternKind",
    "PatternSeparator",
    "PolyRelaxError",
    "Relation",
    "RelaxationInstance",
    "Sense",
    "SizeLimitError",
    "SolveReport",
    "SolverError",
    "SparsePolynomial",
    "TerminationReason",
    "TraceEntry",
    "UnsupportedPatternError",
    "add_pattern",
    "chain_pattern",
    "covering_equal",
    "covering_for_tolerance",
    "delta_vertices",
    "epsilon_sweep",
    "eval_poly",
    "find_axis_chains",
    "find_chains",
    "find_multilinear",
    "find_shifted_chains",
    "generate_patterns",
    "grid_min",
    "hull_membership",
    "initial_master",
    "lift_cut",
    "ml_pattern",
    "ml_vertex_set",
    "moment_map",
    "monomial_bounds",
    "phi_matrix",
    "run",
    "separate",
    "separate_chain",
    "separate_multilinear",
    "separate_shifted_chain",
    "separate_singleton",
    "shifted_chain_pattern",
    "singleton_family",
    "singleton_pattern",
    "solve_lp",
    "truncated_submonoid_pattern",
    "ts_reparametrize",
    "width_ref",
    "write_lp",
    "__version__",
]
