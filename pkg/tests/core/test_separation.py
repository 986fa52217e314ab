# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
Unit tests for the separation oracles, coverings and the Φ/Δ machinery.
"""

import math

import numpy as np
import pytest

from polyrelax.core.exceptions import ParameterError, SizeLimitError, UnsupportedPatternError
from polyrelax.core.oracle import hull_membership
from polyrelax.core.patterns import chain_pattern, ml_pattern, shifted_chain_pattern, singleton_pattern
from polyrelax.core.patterns import truncated_submonoid_pattern
from polyrelax.core.poly import BoxDomain, MomentPoint, moment_map
from polyrelax.core.separation import (
    Covering,
    CoveringSpec,
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

UNIT_INTERVAL = BoxDomain.unit(1)
"""[0, 1]."""


def _moment_curve(t, d):
    return np.array([t ** k for k in range(d + 1)])


def _check_cut(cut, values):
    """A returned cut separates v by exactly its distance and keeps ‖c‖∞ ≤ 1."""
    assert np.abs(cut.coefficients).max() <= 1.0 + 1e-12
    assert cut.distance > 0.0
    assert cut.offset - cut.evaluate(values) == pytest.approx(cut.distance, abs=1e-9)

# --- Singletons ---

@pytest.mark.parametrize("alpha, pairs, value", [
    ((2, 0), [(0.0, 1.0), (0.0, 1.0)], 0.5),
    ((1, 1), [(-1.0, 2.0), (-1.0, 3.0)], -3.0),
])
def test_singleton_inside(alpha, pairs, value):
    """Test values inside (or on the boundary of) the monomial range."""
    assert separate_singleton(alpha, value, BoxDomain.from_pairs(pairs)) is None


def test_singleton_violation(unit_square):
    """Test v = 1.3 for x₁² on [0,1]² gives −v ≥ −1 with distance 0.3."""
    cut = separate_singleton((2, 0), 1.3, unit_square)
    assert cut.coefficients.tolist() == [-1.0]
    assert cut.offset == -1.0
    assert cut.distance == pytest.approx(0.3)


def test_singleton_lower_violation(unit_square):
    """Test a value below the range gives v ≥ lo."""
    cut = separate_singleton((1, 1), -0.25, unit_square)
    assert cut.coefficients.tolist() == [1.0]
    assert cut.offset == 0.0
    assert cut.distance == pytest.approx(0.25)

# --- Multilinear ---

def test_ml_vertex_set_unit_square(unit_square):
    """Test the McCormick vertices of ML((1,1)) on [0,1]²."""
    expected = [[1, 0, 0, 0], [1, 1, 0, 0], [1, 0, 1, 0], [1, 1, 1, 1]]
    np.testing.assert_array_equal(ml_vertex_set((1, 1), unit_square), expected)


def test_ml_vertex_set_univariate(unit_square):
    """Test ML((2,0)) has the two vertices (1,0) and (1,1)."""
    np.testing.assert_array_equal(ml_vertex_set((2, 0), unit_square), [[1, 0], [1, 1]])


def test_ml_vertex_set_signed_box():
    """Test the corner products on [−1,1]²."""
    table = ml_vertex_set((1, 1), BoxDomain.from_pairs([(-1.0, 1.0), (-1.0, 1.0)]))
    np.testing.assert_array_equal(table, [[1, -1, -1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, 1, 1, 1]])


def test_ml_vertex_set_size_limit():
    """Test that supports above 20 are rejected."""
    n = 21
    with pytest.raises(SizeLimitError, match="exceeds the limit"):
        ml_vertex_set((1,) * n, BoxDomain.unit(n))


@pytest.mark.parametrize("values", [
    (1.0, 0.5, 0.5, 0.0),
    (1.0, 0.0, 0.0, 0.0),
])
def test_multilinear_inside(unit_square, values):
    """Test points on the McCormick hull."""
    assert separate_multilinear((1, 1), values, unit_square) is None


def test_multilinear_violation(unit_square):
    """Test v₁₁ = −0.1 below the McCormick facet gives distance 0.1."""
    values = np.array([1.0, 0.5, 0.5, -0.1])
    cut = separate_multilinear((1, 1), values, unit_square)
    assert cut.distance == pytest.approx(0.1, abs=1e-9)
    _check_cut(cut, values)
    for vertex in ml_vertex_set((1, 1), unit_square):
        assert cut.evaluate(vertex) >= cut.offset - 1e-9


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(100))
def test_multilinear_distance_is_projection_distance(seed):
    """Test the LP value against an independent l₁ projection onto the vertex hull."""
    rng = np.random.default_rng(seed)
    box = BoxDomain.from_pairs([(-1.0, 0.5), (0.5, 2.0), (-2.0, 1.0)])
    alpha = (1, 2, 1)
    vertices = ml_vertex_set(alpha, box)
    values = vertices.mean(axis=0) + rng.normal(scale=1.5, size=vertices.shape[1])
    values[0] = 1.0
    _, expected = hull_membership(vertices, values)
    cut = separate_multilinear(alpha, values, box)
    if expected <= 1e-9:
        assert cut is None
    else:
        assert cut.distance == pytest.approx(expected, abs=1e-7)
        _check_cut(cut, values)

# --- Φ And Δ ---

def test_phi_matrix_identity_on_unit_interval():
    """Test Φ^{[0,1]} = I."""
    np.testing.assert_array_equal(phi_matrix(0.0, 1.0, 4), np.eye(5))


def test_phi_matrix_small():
    """Test Φ^{[1,2]} for d = 1 and its action on the moment curve."""
    phi = phi_matrix(1.0, 2.0, 1)
    np.testing.assert_array_equal(phi, [[1.0, 0.0], [1.0, 1.0]])
    np.testing.assert_allclose(phi @ _moment_curve(0.3, 1), _moment_curve(1.3, 1))


def test_phi_matrix_maps_moment_curve(rng):
    """Test Φ^{[l,u]} m(t) = m((1−t)l + tu) for random l < u and d ≤ 6."""
    cases = 0
    while cases < 1000:
        l, u = np.sort(rng.uniform(-2.0, 2.0, 2))
        if u - l < 1e-3:
            continue
        cases += 1
        d, t = int(rng.integers(1, 7)), float(rng.uniform())
        mapped = phi_matrix(l, u, d) @ _moment_curve(t, d)
        target = _moment_curve((1 - t) * l + t * u, d)
        assert np.abs(mapped - target).max() <= 1e-10 * max(1.0, np.abs(target).max())


@pytest.mark.parametrize("l, u, expected", [
    (0.0, 1.0, [[1, 0, 0], [1, 1, 0], [1, 1, 1]]),
    (0.0, 0.5, [[1, 0, 0], [1, 0.5, 0], [1, 0.5, 0.25]]),
])
def test_delta_vertices_examples(l, u, expected):
    """Test Δ vertices for d = 2."""
    np.testing.assert_allclose(delta_vertices(l, u, 2), expected)


def test_delta_vertices_endpoints(rng):
    """Test that the first and last Δ vertices are m(l) and m(u)."""
    for _ in range(100):
        l, u = np.sort(rng.uniform(-2.0, 2.0, 2))
        d = int(rng.integers(1, 7))
        vertices = delta_vertices(l, u, d)
        np.testing.assert_allclose(vertices[0], _moment_curve(l, d), atol=1e-10)
        np.testing.assert_allclose(vertices[-1], _moment_curve(u, d), atol=1e-10)


@pytest.mark.slow
def test_delta_contains_moment_curve(rng):
    """Test that m(t) lies in the Δ polytope of the segment holding t."""
    covering = covering_equal(-1.0, 2.0, 5)
    for _ in range(1000):
        t = float(rng.uniform(-1.0, 2.0))
        segment = next(s for s in covering.segments if s.contains(t))
        inside, distance = hull_membership(delta_vertices(segment.lo, segment.hi, 3), _moment_curve(t, 3))
        assert inside, distance


def test_delta_diameter_bound(rng):
    """Test diam(Δ^{[l,u]}) ≤ |u − l|·d²·η^d with η = max(|l| + |u − l|, 1)."""
    for _ in range(1000):
        l, u = np.sort(rng.uniform(-2.0, 2.0, 2))
        d = int(rng.integers(1, 6))
        vertices = delta_vertices(l, u, d)[:, 1:]
        diam = max(np.abs(a - b).sum() for a in vertices for b in vertices)
        eta = max(abs(l) + abs(u - l), 1.0)
        assert diam <= (u - l) * d * d * eta ** d + 1e-12

# --- Coverings ---

@pytest.mark.parametrize("a, b, count, widths", [
    (0.0, 1.0, 9, [1 / 9] * 9),
    (0.0, 1.0, 1, [1.0]),
    (-1.0, 2.0, 3, [1.0, 1.0, 1.0]),
])
def test_covering_equal(a, b, count, widths):
    """Test equal coverings and their contiguity."""
    covering = covering_equal(a, b, count)
    segments = covering.segments
    assert [s.width for s in segments] == pytest.approx(widths)
    assert segments[0].lo == a and segments[-1].hi == b
    for left, right in zip(segments, segments[1:]):
        assert abs(left.hi - right.lo) <= 1e-12


@pytest.mark.parametrize("a, b, d, eps, count", [
    (0.0, 1.0, 2, 0.1, 160),
    (0.0, 1.0, 1, 1.0, 2),
    (0.0, 1.0, 3, 1e9, 1),
])
def test_covering_for_tolerance(a, b, d, eps, count):
    """Test count = ceil((b − a)/(C*·ε′))."""
    assert covering_for_tolerance(a, b, d, eps).count == count


@pytest.mark.parametrize("text, expected", [
    ("equal:9", CoveringSpec("equal", 9)),
    ("tol:1e-4", CoveringSpec("tol", tolerance=1e-4)),
])
def test_covering_parse(text, expected):
    """Test parsing of covering strings."""
    parsed = CoveringSpec.parse(text)
    assert parsed == expected
    assert CoveringSpec.parse(str(parsed)) == parsed


@pytest.mark.parametrize("text", ["equal:0", "equal:x", "tol:-1", "grid:3", "tol"])
def test_covering_rejects(text):
    """Test malformed covering strings."""
    with pytest.raises(ParameterError):
        CoveringSpec.parse(text)

# --- Chains ---

@pytest.mark.parametrize("values", [
    (1.0, 0.5, 0.5),
    (1.0, 0.3, 0.09),
])
@pytest.mark.parametrize("covering", [CoveringSpec("equal", 1), CoveringSpec("equal", 9), CoveringSpec("tol", tolerance=1e-3)])
def test_chain_inside(values, covering):
    """Test a chord point and a moment-curve point for several coverings."""
    assert separate_chain((1,), 2, values, UNIT_INTERVAL, covering) is None


def test_chain_violation_above_chord():
    """Test v = (1, 0.5, 0.6) above the chord v₂ = v₁ gives distance 0.1."""
    values = np.array([1.0, 0.5, 0.6])
    cut = separate_chain((1,), 2, values, UNIT_INTERVAL)
    assert cut.distance == pytest.approx(0.1, abs=1e-9)
    _check_cut(cut, values)


def test_chain_cut_is_valid(rng):
    """Test ⟨c, m^P(x)⟩ ≥ δ on random x for cuts of a bivariate chain."""
    box = BoxDomain.from_pairs([(-1.0, 1.0), (0.0, 2.0)])
    pattern = chain_pattern((1, 1), 3)
    separator = PatternSeparator(pattern, box)
    xs = box.sample(rng, 1000)
    for _ in range(5):
        values = rng.normal(size=len(pattern))
        values[0] = 1.0
        cut = separator.separate(values)
        if cut is None:
            continue
        _check_cut(cut, values)
        for x in xs:
            assert cut.evaluate(moment_map(pattern.elements, x).values) >= cut.offset - 1e-8


def test_chain_distance_converges_with_covering():
    """Test that the Δ-hull distance under tol:ε′ lies in [δ* − ε′, δ*]."""
    eps = 1e-2
    values = np.array([1.0, 0.5, 0.1])
    samples = np.array([_moment_curve(t, 2) for t in np.linspace(0.0, 1.0, 2001)])
    _, reference = hull_membership(samples, values)
    cut = separate_chain((1,), 2, values, UNIT_INTERVAL, CoveringSpec("tol", tolerance=eps))
    assert reference == pytest.approx(0.15, abs=1e-6)
    assert reference - eps - 1e-6 <= cut.distance <= reference + 1e-9


def test_chain_with_large_covering_matches_reference():
    """Test the pruned vertex search on a covering with 160000 segments."""
    values = np.array([1.0, 0.5, 0.1])
    cut = separate_chain((1,), 2, values, UNIT_INTERVAL, CoveringSpec("tol", tolerance=1e-4))
    assert cut.distance == pytest.approx(0.15, abs=1e-4)
    _check_cut(cut, values)


def test_chain_explicit_covering_must_span_range():
    """Test that an explicit covering must match [x^γ_min, x^γ_max]."""
    with pytest.raises(ParameterError, match="does not span"):
        separate_chain((1,), 2, (1.0, 0.5, 0.5), UNIT_INTERVAL, Covering(0.0, 2.0, 4))
    assert separate_chain((1,), 2, (1.0, 0.5, 0.5), UNIT_INTERVAL, Covering(0.0, 1.0, 4)) is None

# --- Shifted Chains ---

def test_shifted_chain_violation(unit_square):
    """Test (v₁₀, v₁₁) = (0.5, 0.75) is at distance 0.25 from conv{(0,0),(1,0),(1,1)}."""
    values = np.array([0.5, 0.75])
    cut = separate_shifted_chain((1, 0), (0, 1), 1, values, unit_square)
    assert cut.distance == pytest.approx(0.25, abs=1e-9)
    _check_cut(cut, values)


def test_shifted_chain_inside(unit_square):
    """Test a point inside the triangle."""
    assert separate_shifted_chain((1, 0), (0, 1), 1, (0.5, 0.25), unit_square) is None


def test_shifted_chain_negative_shift_range(rng):
    """Test cut validity when x^η ranges over negative values."""
    box = BoxDomain.from_pairs([(-2.0, -0.5), (0.0, 1.5)])
    pattern = shifted_chain_pattern((1, 0), (0, 1), 2)
    values = np.array([0.0, 3.0, -4.0])
    cut = separate(pattern, values, box)
    _check_cut(cut, values)
    for x in box.sample(rng, 1000):
        assert cut.evaluate(moment_map(pattern.elements, x).values) >= cut.offset - 1e-8

# --- Dispatch ---

def test_dispatch_singleton_from_moment_point(unit_square):
    """Test dispatch on a singleton pattern with a full moment point."""
    point = MomentPoint.from_mapping({(0, 0): 1.0, (2, 0): 1.3, (1, 1): 0.2})
    cut = separate(singleton_pattern((2, 0)), point, unit_square, pattern_index=3)
    assert cut.pattern_index == 3
    assert cut.distance == pytest.approx(0.3)
    assert cut.to_dict() == {"pattern_index": 3, "coeffs": [{"exp": [2, 0], "value": -1.0}],
                             "offset": -1.0, "distance": cut.distance}


def test_dispatch_multilinear(unit_square):
    """Test that dispatch matches the direct oracle."""
    values = (1.0, 0.5, 0.5, -0.1)
    cut = separate(ml_pattern((1, 1)), values, unit_square)
    assert cut.distance == pytest.approx(separate_multilinear((1, 1), values, unit_square).distance)


def test_dispatch_one_column_truncated_submonoid():
    """Test that TS with one column behaves like the matching chain."""
    pattern = truncated_submonoid_pattern([(1,)], (2,))
    cut = separate(pattern, (1.0, 0.5, 0.6), UNIT_INTERVAL)
    assert cut.distance == pytest.approx(0.1, abs=1e-9)


def test_dispatch_truncated_submonoid_two_columns(unit_square):
    """Test that TS with k = 2 has no oracle."""
    pattern = truncated_submonoid_pattern([(1, 0), (0, 1)], (2, 2))
    with pytest.raises(UnsupportedPatternError, match="No separation oracle"):
        separate(pattern, np.zeros(len(pattern)), unit_square)


def test_separator_rejects_wrong_length(unit_square):
    """Test that values must align with the pattern."""
    with pytest.raises(ParameterError, match="elements but"):
        PatternSeparator(ml_pattern((1, 1)), unit_square).separate([1.0, 0.0])


def test_separator_reports_covering():
    """Test that chain separators expose the covering they built."""
    separator = PatternSeparator(chain_pattern((1,), 3), BoxDomain.from_pairs([(-1.0, 2.0)]))
    covering = separator.covering
    assert (covering.lower, covering.upper, covering.count) == (-1.0, 2.0, 9)
    assert math.isclose(covering.fineness, 1 / 3)
