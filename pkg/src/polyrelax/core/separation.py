# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
Separation oracles for pattern moment bodies.

Every oracle solves the separation problem

    max  δ − ⟨c, v⟩   s.t.  ⟨c, w⟩ ≥ δ  for every vertex w,  c ∈ [−1, 1]^P

whose optimal value is the l₁ distance from v to the convex hull of the
vertices. Singleton bodies are intervals and need no LP. Multilinear bodies
are polytopes spanned by images of box vertices. Chains and shifted chains
use the outer approximation by unions of Δ polytopes over a covering of the
generator's range; their vertices are produced on demand and added to the LP
by row generation, so very fine coverings stay cheap.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .exceptions import ParameterError, SizeLimitError, SolverError, UnsupportedPatternError
from .lp import LinearProgram, Relation, Sense, solve_lp
from .patterns import Pattern, PatternKind, chain_pattern, ml_pattern, shifted_chain_pattern, ts_as_chain
from .poly import BoxDomain, Exponent, Interval, MomentPoint, exponent, monomial_bounds, power_interval, support

logger = logging.getLogger(__name__)

SEPARATION_TOL = 1e-9
MAX_ML_SUPPORT = 20
DENSE_SEGMENT_LIMIT = 2048
SEED_SEGMENTS = 32
ROWS_PER_ROUND = 4
MAX_ROW_ROUNDS = 500
_CHUNK = 1 << 18


@dataclass(frozen=True, eq=False)
class Cut:
    """
    Valid inequality ⟨c, v_P⟩ ≥ δ for a pattern's body, aligned with the
    pattern's element order.
    """

    pattern_index: int
    elements: tuple[Exponent, ...]
    coefficients: np.ndarray
    offset: float
    distance: float

    @property
    def coeffs(self) -> dict[Exponent, float]:
        return {alpha: float(c) for alpha, c in zip(self.elements, self.coefficients)}

    def evaluate(self, values: np.ndarray) -> float:
        return float(self.coefficients @ np.asarray(values, dtype=float))

    def to_dict(self) -> dict:
        return {
            "pattern_index": self.pattern_index,
            "coeffs": [
                {"exp": list(alpha), "value": float(c)}
                for alpha, c in zip(self.elements, self.coefficients)
                if c != 0.0
            ],
            "offset": self.offset,
            "distance": self.distance,
        }


@dataclass(frozen=True)
class Covering:
    """`count` equal-width segments covering [lower, upper]."""

    lower: float
    upper: float
    count: int

    def __post_init__(self):
        if not float(self.lower) < float(self.upper):
            raise ParameterError(f"Covering needs lower < upper, got [{self.lower}, {self.upper}].")
        if isinstance(self.count, bool) or not isinstance(self.count, (int, np.integer)) or self.count < 1:
            raise ParameterError(f"Covering segment count must be a positive integer, got {self.count!r}.")
        object.__setattr__(self, "lower", float(self.lower))
        object.__setattr__(self, "upper", float(self.upper))
        object.__setattr__(self, "count", int(self.count))

    def __len__(self) -> int:
        return self.count

    @property
    def fineness(self) -> float:
        return (self.upper - self.lower) / self.count

    def endpoints(self, indices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        indices = np.asarray(indices, dtype=np.int64)
        h = self.fineness
        lefts = self.lower + indices * h
        rights = np.where(indices == self.count - 1, self.upper, self.lower + (indices + 1) * h)
        return lefts, rights

    @property
    def segments(self) -> tuple[Interval, ...]:
        lefts, rights = self.endpoints(np.arange(self.count))
        return tuple(Interval(lo, hi) for lo, hi in zip(lefts, rights))


def covering_equal(a: float, b: float, count: int) -> Covering:
    return Covering(a, b, count)


def covering_for_tolerance(a: float, b: float, d: int, eps: float) -> Covering:
    """
    Equal covering fine enough that the Δ-hull lies within eps of the moment
    body: fineness ≤ C*·eps with C* = d⁻²·max(|b| + |b − a|, 1)⁻ᵈ.
    """
    if not eps > 0:
        raise ParameterError(f"Covering tolerance must be positive, got {eps}.")
    if d < 1:
        raise ParameterError(f"Chain degree must be at least 1, got {d}.")
    c_star = d ** -2 * max(abs(b) + abs(b - a), 1.0) ** -d
    count = max(1, math.ceil((b - a) / (c_star * eps)))
    return Covering(a, b, count)


@dataclass(frozen=True)
class CoveringSpec:
    """How to cover a chain's range: `equal:N` or `tol:EPS`."""

    mode: str = "equal"
    count: int = 9
    tolerance: float | None = None

    def __post_init__(self):
        if self.mode not in ("equal", "tol"):
            raise ParameterError(f"Unknown covering mode {self.mode!r}; use 'equal' or 'tol'.")
        if self.mode == "equal" and (not isinstance(self.count, int) or self.count < 1):
            raise ParameterError(f"Covering count must be a positive integer, got {self.count!r}.")
        if self.mode == "tol" and not (self.tolerance is not None and self.tolerance > 0):
            raise ParameterError(f"Covering tolerance must be positive, got {self.tolerance!r}.")

    @classmethod
    def parse(cls, text: str) -> CoveringSpec:
        mode, _, value = str(text).strip().partition(":")
        try:
            if mode == "equal":
                return cls("equal", int(value))
            if mode == "tol":
                return cls("tol", tolerance=float(value))
        except ValueError as exc:
            raise ParameterError(f"Malformed covering {text!r}.") from exc
        raise ParameterError(f"Malformed covering {text!r}; expected equal:N or tol:EPS.")

    def build(self, a: float, b: float, d: int) -> Covering:
        if self.mode == "equal":
            return covering_equal(a, b, self.count)
        return covering_for_tolerance(a, b, d, self.tolerance)

    def __str__(self) -> str:
        return f"equal:{self.count}" if self.mode == "equal" else f"tol:{self.tolerance!r}"


DEFAULT_COVERING = CoveringSpec()


def phi_matrix(l: float, u: float, d: int) -> np.ndarray:
    """Φ^{[l,u]} with entries C(k,j)·l^{k−j}·(u−l)^j for j ≤ k, using 0⁰ = 1."""
    if not l < u:
        raise ParameterError(f"phi_matrix needs l < u, got [{l}, {u}].")
    l, width = float(l), float(u) - float(l)
    phi = np.zeros((d + 1, d + 1))
    for k in range(d + 1):
        for j in range(k + 1):
            phi[k, j] = math.comb(k, j) * l ** (k - j) * width ** j
    return phi


def delta_vertices(l: float, u: float, d: int) -> np.ndarray:
    """Rows are Φ^{[l,u]}·uⁱ for i = 0..d; row 0 is m(l) and row d is m(u)."""
    return np.cumsum(phi_matrix(l, u, d), axis=1).T


def _taylor_tables(c: np.ndarray) -> list[np.ndarray]:
    # coefficient vectors of p_c^{(j)}/j!, j = 0..d
    d = c.shape[0] - 1
    return [np.array([math.comb(k, j) * c[k] for k in range(j, d + 1)]) for j in range(d + 1)]


def _vertex_values(tables: list[np.ndarray], lefts: np.ndarray, widths: np.ndarray) -> np.ndarray:
    """⟨c, Φ^{[l,u]}uⁱ⟩ = Σ_{j≤i} (u−l)^j p_c^{(j)}(l)/j! for every segment and i."""
    terms = np.empty((lefts.shape[0], len(tables)))
    for j, table in enumerate(tables):
        terms[:, j] = widths ** j * npoly.polyval(lefts, table)
    return np.cumsum(terms, axis=1)


def _real_roots(coefficients: np.ndarray) -> np.ndarray:
    trimmed = np.trim_zeros(np.asarray(coefficients, dtype=float), "b")
    if trimmed.shape[0] <= 1:
        return np.empty(0)
    roots = npoly.polyroots(trimmed)
    keep = np.abs(roots.imag) <= 1e-6 * (1.0 + np.abs(roots.real))
    return np.sort(roots.real[keep])


def _candidate_segments(c: np.ndarray, covering: Covering, d: int) -> np.ndarray:
    """
    Segment indices that may hold the minimum vertex of ⟨c, ·⟩.

    Every vertex value of segment k lies within D = ‖c‖∞·h·d²·η^d of
    p_c(l_k), and p_c(l_k) itself is a vertex value, so the minimum lives in
    a segment with p_c(l_k) ≤ m + D for any attained value m.
    """
    a, b, count, h = covering.lower, covering.upper, covering.count, covering.fineness
    critical = [t for t in _real_roots(npoly.polyder(c)) if a <= t <= b]
    guesses = {0, count - 1}
    for t in critical:
        base = int(math.floor((t - a) / h))
        guesses.update(range(base - 2, base + 3))
    guesses = np.array(sorted(k for k in guesses if 0 <= k < count), dtype=np.int64)
    lefts, _ = covering.endpoints(guesses)
    attained = float(npoly.polyval(lefts, c).min())
    eta = max(max(abs(a), abs(b)) + h, 1.0)
    spread = float(np.abs(c).max()) * h * d * d * eta ** d
    threshold = attained + spread * (1.0 + 1e-9) + 1e-12 * (1.0 + abs(attained))

    shifted = c.copy()
    shifted[0] -= threshold
    crossings = [t for t in _real_roots(shifted) if a - h <= t <= b + h]
    breaks = sorted({a, b, *critical, *(min(max(t, a), b) for t in crossings)})
    margin = 3 + int(math.ceil(1e-7 * max(1.0, b - a) / h))
    ranges = [guesses]
    for t0, t1 in zip(breaks[:-1], breaks[1:]):
        if npoly.polyval(0.5 * (t0 + t1), shifted) <= 0.0:
            k0 = max(int(math.floor((t0 - a) / h)) - margin, 0)
            k1 = min(int(math.ceil((t1 - a) / h)) + margin, count - 1)
            ranges.append(np.arange(k0, k1 + 1, dtype=np.int64))
    for t in crossings:
        base = int(math.floor((t - a) / h))
        ranges.append(np.arange(max(base - margin, 0), min(base + margin, count - 1) + 1, dtype=np.int64))
    return np.unique(np.concatenate(ranges))


class _FiniteHull:
    """Hull of an explicit vertex list; the LP sees every vertex up front."""

    def __init__(self, vertices: np.ndarray):
        self.vertices = np.asarray(vertices, dtype=float)

    def seed(self) -> tuple[np.ndarray, set]:
        return self.vertices, set(range(self.vertices.shape[0]))

    def violated(self, c: np.ndarray, threshold: float, known: set) -> tuple[np.ndarray, list]:
        return np.empty((0, self.vertices.shape[1])), []


class _ChainHull:
    """
    Union of scaled Δ polytopes σ·Δ^I over the segments I of a covering.

    Chains use the single scale 1; shifted chains use x^η_min and x^η_max.
    """

    def __init__(self, covering: Covering, d: int, scales: Sequence[float]):
        self.covering = covering
        self.d = d
        self.scales = tuple(dict.fromkeys(float(s) for s in scales))

    def _vertex(self, scale_idx: int, segment: int, i: int) -> np.ndarray:
        scale = self.scales[scale_idx]
        if scale == 0.0:
            return np.zeros(self.d + 1)
        l, u = self.covering.endpoints(np.array([segment]))
        return scale * delta_vertices(float(l[0]), float(u[0]), self.d)[i]

    def seed(self) -> tuple[np.ndarray, set]:
        count = self.covering.count
        if count <= SEED_SEGMENTS:
            segments = range(count)
        else:
            segments = sorted(set(np.linspace(0, count - 1, SEED_SEGMENTS).round().astype(int).tolist()))
        keys, rows = set(), []
        for s_idx, scale in enumerate(self.scales):
            if scale == 0.0:
                keys.add((s_idx, 0, 0))
                rows.append(np.zeros(self.d + 1))
                continue
            for seg in segments:
                l, u = self.covering.endpoints(np.array([seg]))
                for i, vertex in enumerate(delta_vertices(float(l[0]), float(u[0]), self.d)):
                    keys.add((s_idx, seg, i))
                    rows.append(scale * vertex)
        return np.array(rows), keys

    def _lowest(self, c: np.ndarray, limit: int) -> list[tuple[float, int, int]]:
        """The `limit` smallest ⟨c, Φᴵuⁱ⟩ over all segments, as (value, segment, i)."""
        if not np.any(c[1:]):
            return [(float(c[0]), 0, 0)]
        if self.covering.count <= DENSE_SEGMENT_LIMIT:
            segments = np.arange(self.covering.count, dtype=np.int64)
        else:
            segments = _candidate_segments(c, self.covering, self.d)
        tables = _taylor_tables(c)
        best: list[tuple[float, int, int]] = []
        for start in range(0, segments.shape[0], _CHUNK):
            block = segments[start:start + _CHUNK]
            lefts, rights = self.covering.endpoints(block)
            values = _vertex_values(tables, lefts, rights - lefts).ravel()
            take = min(limit, values.shape[0])
            picks = np.argpartition(values, take - 1)[:take]
            width = self.d + 1
            best.extend((float(values[p]), int(block[p // width]), int(p % width)) for p in picks)
            best = sorted(best)[:limit]
        return best

    def violated(self, c: np.ndarray, threshold: float, known: set) -> tuple[np.ndarray, list]:
        found = []
        for s_idx, scale in enumerate(self.scales):
            if scale == 0.0:
                if 0.0 < threshold and (s_idx, 0, 0) not in known:
                    found.append((0.0, (s_idx, 0, 0)))
                continue
            direction = c if scale > 0 else -c
            for value, seg, i in self._lowest(direction, ROWS_PER_ROUND + len(known)):
                scaled = abs(scale) * value
                if scaled < threshold and (s_idx, seg, i) not in known:
                    found.append((scaled, (s_idx, seg, i)))
        found.sort()
        keys = [key for _, key in found[:ROWS_PER_ROUND]]
        if not keys:
            return np.empty((0, self.d + 1)), []
        return np.array([self._vertex(*key) for key in keys]), keys


def _support_lp(vertices: np.ndarray, values: np.ndarray) -> tuple[np.ndarray, float, float]:
    """Solves max δ − ⟨c,v⟩ s.t. ⟨c,w⟩ ≥ δ for the given rows w, c ∈ [−1,1]."""
    k, p = vertices.shape
    lp = LinearProgram(
        objective=np.concatenate([-values, [1.0]]),
        matrix=np.hstack([vertices, -np.ones((k, 1))]),
        relations=(Relation.GE,) * k,
        rhs=np.zeros(k),
        lower=np.concatenate([-np.ones(p), [-np.inf]]),
        upper=np.concatenate([np.ones(p), [np.inf]]),
        sense=Sense.MAXIMIZE,
    )
    outcome = solve_lp(lp)
    if not outcome.is_optimal:
        raise SolverError("Separation LP did not reach optimality.", status=outcome.status.value,
                          diagnostics={"rows": k, "columns": p + 1})
    return outcome.x[:p], float(outcome.x[p]), float(outcome.objective)


def _separate_hull(hull: _FiniteHull | _ChainHull, values: np.ndarray) -> tuple[np.ndarray, float, float] | None:
    rows, known = hull.seed()
    for round_no in range(MAX_ROW_ROUNDS):
        c, delta, value = _support_lp(rows, values)
        if value <= SEPARATION_TOL:
            return None
        extra, keys = hull.violated(c, delta - SEPARATION_TOL * max(1.0, abs(delta)), known)
        if not keys:
            if round_no:
                logger.debug("row generation settled after %d round(s) with %d rows", round_no, rows.shape[0])
            return c, delta, value
        known.update(keys)
        rows = np.vstack([rows, extra])
    raise SolverError("Row generation did not settle.", status="row_generation",
                      diagnostics={"rounds": MAX_ROW_ROUNDS, "rows": rows.shape[0]})


def ml_vertex_set(alpha: Sequence[int], box: BoxDomain) -> np.ndarray:
    """
    Images m^{{0,1}^s}(w) of the vertices w of ×_{i∈supp α}[x^{αᵢeⁱ}_min, x^{αᵢeⁱ}_max].

    Row r is the vertex choosing the upper end on support coordinate b when
    bit b of r is set; columns follow ML(α)'s element order.

    Raises:
        SizeLimitError: If |supp(α)| > 20.
    """
    alpha = exponent(alpha)
    if len(alpha) != box.dimension:
        raise ParameterError("Exponent and box differ in dimension.")
    supp = support(alpha)
    s = len(supp)
    if s > MAX_ML_SUPPORT:
        raise SizeLimitError(f"Multilinear support {s} exceeds the limit of {MAX_ML_SUPPORT}.")
    size = 1 << s
    rows = np.arange(size)[:, None]
    cols = np.arange(size)[None, :]
    table = np.ones((size, size))
    for bit, i in enumerate(supp):
        rng = power_interval(box.lower[i], box.upper[i], alpha[i])
        factor = np.where((rows >> bit) & 1, rng.hi, rng.lo)
        table = np.where((cols >> bit) & 1, table * factor, table)
    return table


def _make_cut(pattern_index: int, elements: tuple[Exponent, ...], c: np.ndarray, delta: float, value: float) -> Cut:
    return Cut(pattern_index, elements, np.asarray(c, dtype=float), float(delta), float(value))


def separate_singleton(alpha: Sequence[int], value: float, box: BoxDomain, pattern_index: int = 0) -> Cut | None:
    """Interval test; the violated bound becomes the cut ±v_α ≥ ±bound."""
    alpha = exponent(alpha)
    bounds = monomial_bounds(alpha, box)
    if value > bounds.hi + SEPARATION_TOL:
        return _make_cut(pattern_index, (alpha,), np.array([-1.0]), -bounds.hi, value - bounds.hi)
    if value < bounds.lo - SEPARATION_TOL:
        return _make_cut(pattern_index, (alpha,), np.array([1.0]), bounds.lo, bounds.lo - value)
    return None


class PatternSeparator:
    """
    Separation oracle for one pattern over a fixed box.

    Vertex sets and coverings are built once, so the cutting-plane driver
    keeps one separator per pattern for the whole run.

    Raises:
        UnsupportedPatternError: For truncated submonoids with two or more columns.
    """

    def __init__(
        self,
        pattern: Pattern,
        box: BoxDomain,
        covering: Covering | CoveringSpec | None = None,
        pattern_index: int = 0,
    ):
        covering = covering or DEFAULT_COVERING
        if pattern.dimension != box.dimension:
            raise ParameterError("Pattern and box differ in dimension.")
        self.pattern = pattern
        self.box = box
        self.pattern_index = pattern_index
        self._interval: Interval | None = None
        self._hull: _FiniteHull | _ChainHull | None = None

        kind = pattern.kind
        if kind is PatternKind.TRUNCATED_SUBMONOID:
            if len(pattern.columns) != 1:
                raise UnsupportedPatternError(
                    f"No separation oracle for {pattern.label} with {len(pattern.columns)} columns."
                )
            chain = ts_as_chain(pattern)
            self._hull = self._chain_hull(chain.generator, chain.length, covering, (1.0,))
        elif kind is PatternKind.SINGLETON:
            self._interval = monomial_bounds(pattern.generator, box)
        elif kind is PatternKind.MULTILINEAR:
            self._hull = _FiniteHull(ml_vertex_set(pattern.generator, box))
        elif kind is PatternKind.CHAIN:
            self._hull = self._chain_hull(pattern.generator, pattern.length, covering, (1.0,))
        else:
            shift = monomial_bounds(pattern.shift, box)
            self._hull = self._chain_hull(pattern.generator, pattern.length, covering, (shift.lo, shift.hi))

    def _chain_hull(
        self, gamma: Exponent, d: int, covering: Covering | CoveringSpec, scales: Sequence[float]
    ) -> _ChainHull:
        rng = monomial_bounds(gamma, self.box)
        if not rng.lo < rng.hi:
            raise ParameterError(f"Degenerate range [{rng.lo}, {rng.hi}] for generator {gamma}.")
        if isinstance(covering, CoveringSpec):
            return _ChainHull(covering.build(rng.lo, rng.hi, d), d, scales)
        # an explicit covering must span the generator's range
        if abs(covering.lower - rng.lo) > 1e-12 or abs(covering.upper - rng.hi) > 1e-12:
            raise ParameterError(f"Covering [{covering.lower}, {covering.upper}] does not span [{rng.lo}, {rng.hi}].")
        return _ChainHull(covering, d, scales)

    @property
    def covering(self) -> Covering | None:
        return self._hull.covering if isinstance(self._hull, _ChainHull) else None

    def separate(self, values: Sequence[float]) -> Cut | None:
        """Separates the pattern coordinates `values` (aligned with the pattern's elements)."""
        values = np.asarray(values, dtype=float).reshape(-1)
        if values.shape[0] != len(self.pattern):
            raise ParameterError(
                f"{self.pattern.label} has {len(self.pattern)} elements but {values.shape[0]} values were given."
            )
        if self._interval is not None:
            return separate_singleton(self.pattern.generator, float(values[0]), self.box, self.pattern_index)
        result = _separate_hull(self._hull, values)
        if result is None:
            return None
        return _make_cut(self.pattern_index, self.pattern.elements, *result)


def separate_multilinear(alpha: Sequence[int], values: Sequence[float], box: BoxDomain) -> Cut | None:
    return PatternSeparator(ml_pattern(alpha), box).separate(values)


def separate_chain(
    gamma: Sequence[int],
    d: int,
    values: Sequence[float],
    box: BoxDomain,
    covering: Covering | CoveringSpec | None = None,
) -> Cut | None:
    return PatternSeparator(chain_pattern(gamma, d), box, covering).separate(values)


def separate_shifted_chain(
    eta: Sequence[int],
    gamma: Sequence[int],
    d: int,
    values: Sequence[float],
    box: BoxDomain,
    covering: Covering | CoveringSpec | None = None,
) -> Cut | None:
    return PatternSeparator(shifted_chain_pattern(eta, gamma, d), box, covering).separate(values)


def separate(
    pattern: Pattern,
    point: MomentPoint | Sequence[float],
    box: BoxDomain,
    covering: Covering | CoveringSpec | None = None,
    pattern_index: int = 0,
) -> Cut | None:
    """
    Dispatches to the oracle for the pattern's kind.

    `point` is either a MomentPoint containing the pattern's elements or a
    vector aligned with them.
    """
    if isinstance(point, MomentPoint):
        values = point.restrict(pattern.elements).values
    else:
        values = np.asarray(point, dtype=float)
    return PatternSeparator(pattern, box, covering, pattern_index).separate(values)
