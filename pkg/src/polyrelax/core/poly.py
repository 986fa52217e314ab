# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
Sparse polynomials over exponent vectors, box domains, monomial ranges and
the moment vector map.

Exponent vectors are plain tuples of non-negative ints. Tuples order
lexicographically, hash cheaply and are what every other module uses as map
keys, so there is no wrapper class; the helpers below validate and combine
them.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import reduce
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exceptions import ParameterError

logger = logging.getLogger(__name__)

Exponent = tuple[int, ...]

_EVAL_CHUNK = 65536


def exponent(entries: Iterable[int]) -> Exponent:
    """
    Validates and normalizes an exponent vector.

    Args:
        entries: Non-negative integers, one per variable.

    Returns:
        The exponent as a tuple of Python ints.

    Raises:
        ParameterError: If an entry is negative, not an integer or the vector is empty.
    """
    values = tuple(entries)
    if not values:
        raise ParameterError("Exponent vectors must have at least one entry.")
    normalized = []
    for entry in values:
        if isinstance(entry, bool) or not isinstance(entry, (int, np.integer)):
            raise ParameterError(f"Exponent entries must be integers, got {entry!r}.")
        if entry < 0:
            raise ParameterError(f"Exponent entries must be non-negative, got {entry}.")
        normalized.append(int(entry))
    return tuple(normalized)


def zero_exponent(n: int) -> Exponent:
    return (0,) * n


def unit_exponent(n: int, axis: int, scale: int = 1) -> Exponent:
    """Returns scale * e^axis in dimension n (axis is 0-based)."""
    entries = [0] * n
    entries[axis] = scale
    return tuple(entries)


def support(alpha: Exponent) -> tuple[int, ...]:
    return tuple(i for i, a in enumerate(alpha) if a)


def degree(alpha: Exponent) -> int:
    return sum(alpha)


def exponent_gcd(alpha: Exponent) -> int:
    """gcd of the entries; 0 for the zero vector."""
    return math.gcd(*alpha)


def is_zero(alpha: Exponent) -> bool:
    return not any(alpha)


def add_exponents(alpha: Exponent, beta: Exponent) -> Exponent:
    return tuple(a + b for a, b in zip(alpha, beta))


def scale_exponent(t: int, alpha: Exponent) -> Exponent:
    return tuple(t * a for a in alpha)


def hadamard(alpha: Exponent, omega: Sequence[int]) -> Exponent:
    """Entry-wise product α∘ω."""
    return tuple(a * w for a, w in zip(alpha, omega))


def _check_dimension(expected: int, got: int, what: str) -> None:
    if expected != got:
        msg = f"Dimension mismatch for {what}: expected {expected}, got {got}."
        logger.error(msg)
        raise ParameterError(msg)


@dataclass(frozen=True)
class Interval:
    """Closed real interval [lo, hi]."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not lo <= hi:
            raise ParameterError(f"Interval lower end {lo} exceeds upper end {hi}.")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, value: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= value <= self.hi + tol

    def __mul__(self, other: Interval) -> Interval:
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(products), max(products))


@dataclass(frozen=True)
class BoxDomain:
    """The box K = [a₁,b₁]×…×[aₙ,bₙ] with aᵢ < bᵢ."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        lower = tuple(float(a) for a in self.lower)
        upper = tuple(float(b) for b in self.upper)
        if not lower:
            raise ParameterError("A box needs at least one coordinate.")
        _check_dimension(len(lower), len(upper), "box bounds")
        for i, (a, b) in enumerate(zip(lower, upper)):
            if not (math.isfinite(a) and math.isfinite(b)):
                raise ParameterError(f"Box bounds must be finite, got [{a}, {b}] on axis {i}.")
            if not a < b:
                raise ParameterError(f"Box bounds must satisfy a < b, got [{a}, {b}] on axis {i}.")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def unit(cls, n: int) -> BoxDomain:
        return cls((0.0,) * n, (1.0,) * n)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[float]]) -> BoxDomain:
        pairs = [tuple(p) for p in pairs]
        if any(len(p) != 2 for p in pairs):
            raise ParameterError("Box bounds must be given as [a, b] pairs.")
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    @property
    def dimension(self) -> int:
        return len(self.lower)

    def as_pairs(self) -> list[list[float]]:
        return [[a, b] for a, b in zip(self.lower, self.upper)]

    def contains(self, x: Sequence[float], tol: float = 0.0) -> bool:
        _check_dimension(self.dimension, len(x), "point")
        return all(a - tol <= xi <= b + tol for a, xi, b in zip(self.lower, x, self.upper))

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Uniform samples from K as a (count, n) array."""
        return rng.uniform(np.asarray(self.lower), np.asarray(self.upper), size=(count, self.dimension))


@dataclass(frozen=True)
class SparsePolynomial:
    """
    Polynomial f = Σ f_α x^α stored as a map from exponents to non-zero
    coefficients. Keys are kept in lexicographic order.
    """

    dimension: int
    terms: Mapping[Exponent, float] = field(default_factory=dict)

    def __post_init__(self):
        if isinstance(self.dimension, bool) or not isinstance(self.dimension, int) or self.dimension < 1:
            raise ParameterError(f"Polynomial dimension must be a positive integer, got {self.dimension!r}.")
        cleaned: dict[Exponent, float] = {}
        for key, coef in self.terms.items():
            alpha = exponent(key)
            _check_dimension(self.dimension, len(alpha), f"monomial {alpha}")
            value = float(coef)
            if not math.isfinite(value):
                raise ParameterError(f"Coefficient of {alpha} must be finite, got {value}.")
            if value != 0.0:
                cleaned[alpha] = value
        object.__setattr__(self, "terms", MappingProxyType(dict(sorted(cleaned.items()))))

    @classmethod
    def from_terms(cls, dimension: int, pairs: Iterable[tuple[Sequence[int], float]]) -> SparsePolynomial:
        """Builds a polynomial from (exponent, coefficient) pairs, summing repeated exponents."""
        merged: dict[Exponent, float] = {}
        for key, coef in pairs:
            alpha = exponent(key)
            merged[alpha] = merged.get(alpha, 0.0) + float(coef)
        return cls(dimension, merged)

    @classmethod
    def from_coefficients(cls, index: Sequence[Exponent], coefficients: Sequence[float]) -> SparsePolynomial:
        if len(index) != len(coefficients):
            raise ParameterError("Exponent index and coefficient vector differ in length.")
        if not index:
            raise ParameterError("Cannot infer the dimension of a polynomial from an empty index.")
        return cls(len(index[0]), dict(zip(index, coefficients)))

    @property
    def support(self) -> tuple[Exponent, ...]:
        return tuple(self.terms)

    def coefficient(self, alpha: Exponent) -> float:
        return self.terms.get(tuple(alpha), 0.0)

    def coefficient_vector(self, index: Sequence[Exponent]) -> np.ndarray:
        return np.array([self.terms.get(alpha, 0.0) for alpha in index], dtype=float)

    def evaluate(self, x: Sequence[float]) -> float:
        _check_dimension(self.dimension, len(x), "evaluation point")
        total = 0.0
        for alpha, coef in self.terms.items():
            total += coef * math.prod(float(x[i]) ** a for i, a in enumerate(alpha) if a)
        return total

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Evaluates f at each row of a (m, n) array, in chunks."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        _check_dimension(self.dimension, points.shape[1], "evaluation points")
        if not self.terms:
            return np.zeros(points.shape[0])
        exponents = np.array(list(self.terms), dtype=float)
        coefficients = np.array(list(self.terms.values()))
        out = np.empty(points.shape[0])
        for start in range(0, points.shape[0], _EVAL_CHUNK):
            block = points[start:start + _EVAL_CHUNK]
            monomials = np.prod(block[:, None, :] ** exponents[None, :, :], axis=2)
            out[start:start + _EVAL_CHUNK] = monomials @ coefficients
        return out

    def __neg__(self) -> SparsePolynomial:
        return SparsePolynomial(self.dimension, {alpha: -coef for alpha, coef in self.terms.items()})

    def to_dict(self) -> dict:
        return {
            "n": self.dimension,
            "terms": [{"exp": list(alpha), "coef": coef} for alpha, coef in self.terms.items()],
        }


@dataclass(frozen=True, eq=False)
class MomentPoint:
    """A vector v ∈ ℝ^Ā indexed by an ordered exponent set."""

    index: tuple[Exponent, ...]
    values: np.ndarray

    def __post_init__(self):
        index = tuple(tuple(alpha) for alpha in self.index)
        values = np.array(self.values, dtype=float).reshape(-1)
        if len(index) != values.shape[0]:
            raise ParameterError(f"MomentPoint has {len(index)} exponents but {values.shape[0]} values.")
        positions = {alpha: i for i, alpha in enumerate(index)}
        if len(positions) != len(index):
            raise ParameterError("MomentPoint index contains repeated exponents.")
        values.setflags(write=False)
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_positions", positions)

    @classmethod
    def from_mapping(cls, mapping: Mapping[Sequence[int], float]) -> MomentPoint:
        items = sorted((exponent(k), float(v)) for k, v in mapping.items())
        return cls(tuple(k for k, _ in items), np.array([v for _, v in items]))

    def __len__(self) -> int:
        return len(self.index)

    def __contains__(self, alpha: object) -> bool:
        return alpha in self._positions

    def __getitem__(self, alpha: Exponent) -> float:
        try:
            return float(self.values[self._positions[tuple(alpha)]])
        except KeyError:
            raise ParameterError(f"Exponent {tuple(alpha)} is not part of this moment point.") from None

    def positions(self, subset: Iterable[Exponent]) -> np.ndarray:
        try:
            return np.array([self._positions[tuple(alpha)] for alpha in subset], dtype=int)
        except KeyError as exc:
            raise ParameterError(f"Exponent {exc.args[0]} is not part of this moment point.") from None

    def restrict(self, subset: Sequence[Exponent]) -> MomentPoint:
        """Coordinate projection onto subset, in the order given."""
        subset = tuple(tuple(alpha) for alpha in subset)
        return MomentPoint(subset, self.values[self.positions(subset)])

    def as_dict(self) -> dict[Exponent, float]:
        return {alpha: float(value) for alpha, value in zip(self.index, self.values)}

    def to_dict(self) -> list[dict]:
        return [{"exp": list(alpha), "value": float(value)} for alpha, value in zip(self.index, self.values)]


def eval_poly(f: SparsePolynomial, x: Sequence[float]) -> float:
    """Evaluates Σ f_α x^α at x."""
    return f.evaluate(x)


def moment_map(exponents: Sequence[Exponent], x: Sequence[float]) -> MomentPoint:
    """
    Computes m^A(x) = (x^α)_{α∈A}.

    Raises:
        ParameterError: If an exponent's length differs from len(x).
    """
    index = tuple(tuple(alpha) for alpha in exponents)
    for alpha in index:
        _check_dimension(len(x), len(alpha), f"exponent {alpha}")
    values = [math.prod(float(x[i]) ** a for i, a in enumerate(alpha) if a) for alpha in index]
    return MomentPoint(index, np.array(values, dtype=float))


def power_interval(a: float, b: float, k: int) -> Interval:
    """Exact range of t ↦ t^k over [a, b]."""
    if k == 0:
        return Interval(1.0, 1.0)
    lo_val, hi_val = float(a) ** k, float(b) ** k
    if k % 2 == 0 and a < 0.0 < b:
        return Interval(0.0, max(lo_val, hi_val))
    return Interval(min(lo_val, hi_val), max(lo_val, hi_val))


def monomial_bounds(alpha: Exponent, box: BoxDomain) -> Interval:
    """
    Returns [x^α_min, x^α_max] over the box by folding per-coordinate power
    ranges with interval products, in coordinate order. Exact because the
    factors are independent.
    """
    _check_dimension(box.dimension, len(alpha), f"exponent {tuple(alpha)}")
    factors = (power_interval(a, b, k) for a, b, k in zip(box.lower, box.upper, alpha))
    return reduce(Interval.__mul__, factors, Interval(1.0, 1.0))
