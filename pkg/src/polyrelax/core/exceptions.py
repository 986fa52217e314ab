# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
Custom exceptions for the polyrelax core library.
"""

from typing import Any


class PolyRelaxError(Exception):
    """Base exception for all polyrelax specific errors."""
    pass


class ParameterError(ValueError, PolyRelaxError):
    """
    Raised when invalid arguments are passed to a library function.
    Inherits from ValueError so generic argument checks keep working.
    """
    pass


class SizeLimitError(ParameterError):
    """
    Raised when an input is well-formed but too large for the requested
    computation (multilinear support above 20, oracle dimension above 4,
    dense exponent sets beyond the configured cap).
    """
    pass


class ConfigurationError(ParameterError):
    """Raised for invalid experiment or settings values."""
    pass


class UnsupportedPatternError(PolyRelaxError):
    """
    Raised when a pattern can be constructed but has no separation oracle,
    i.e. truncated submonoids with more than one generator column.
    """
    pass


class DegenerateInstanceError(PolyRelaxError):
    """Raised when a width ratio is requested for a polynomial whose singleton width is zero."""
    pass


class SolverError(PolyRelaxError):
    """
    Raised when the LP backend cannot produce a trustworthy answer.

    Carries the solver status reached before the failure and a dictionary of
    diagnostics (pivot counts, residuals, problem size) for debugging.
    """
    def __init__(
        self,
        message: str,
        status: str | None = None,
        diagnostics: dict[str, Any] | None = None,
        original_error: Exception | None = None,
    ):
        super().__init__(message)
        self.status = status
        self.diagnostics = dict(diagnostics or {})
        self.original_error = original_error

    def __str__(self):
        if self.status:
            return f"(Status {self.status}) {super().__str__()}"
        return super().__str__()


class InternalError(PolyRelaxError):
    """
    Raised when an internal consistency check fails, e.g. a cut refers to an
    exponent outside the master index set or the master LP became infeasible.
    These indicate a bug rather than bad input.
    """
    pass
