# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
Tests for the JSON problem, pattern and point formats.
"""

import json

import pytest

from polyrelax.core.exceptions import ParameterError
from polyrelax.core.patterns import PatternKind
from polyrelax.problem_files import (
    Problem,
    load_pattern,
    load_point,
    load_problem,
    parse_point,
    read_json,
    write_json,
)


def test_load_problem(data_dir):
    """Test the parabola problem with its own family."""
    problem = load_problem(data_dir / "problems" / "parabola.json")
    assert problem.name == "parabola"
    assert dict(problem.objective.terms) == {(1,): -1.0, (2,): 1.0}
    assert problem.box.as_pairs() == [[0.0, 1.0]]
    assert [p.label for p in problem.family] == ["CH((1),2)"]


def test_problem_defaults_to_unit_box():
    """Test a problem without box or family."""
    problem = Problem.from_dict({"n": 2, "terms": [{"exp": [1, 1], "coef": 2.0}, {"exp": [1, 1], "coef": 1.0}]})
    assert problem.box.as_pairs() == [[0.0, 1.0], [0.0, 1.0]]
    assert problem.family is None
    assert problem.objective.coefficient((1, 1)) == 3.0


def test_problem_dict_form(data_dir):
    """Test that to_dict feeds back into from_dict."""
    problem = load_problem(data_dir / "problems" / "bilinear.json")
    again = Problem.from_dict(problem.to_dict())
    assert again.objective == problem.objective
    assert again.box == problem.box
    assert again.family.element_sets() == problem.family.element_sets()


@pytest.mark.parametrize("data, message", [
    ({"terms": []}, "needs 'n' and 'terms'"),
    ({"n": 1, "terms": [{"exp": [1]}]}, "'exp' and 'coef'"),
    ({"n": 1, "terms": [], "box": [[0.0, 1.0], [0.0, 1.0]]}, "dimension 2"),
    ({"n": 1, "terms": [], "box": "unit"}, r"\[a, b\] pairs"),
    ({"n": 1, "terms": [{"exp": [-1], "coef": 1.0}]}, "non-negative"),
])
def test_problem_errors(data, message):
    """Test malformed problems."""
    with pytest.raises(ParameterError, match=message):
        Problem.from_dict(data)


def test_load_pattern_and_point(data_dir):
    """Test the shipped pattern and point files."""
    pattern = load_pattern(data_dir / "patterns" / "chain_x.json")
    assert pattern.kind is PatternKind.CHAIN
    point, box = load_point(data_dir / "points" / "below_parabola.json")
    assert point.index == ((0,), (1,), (2,))
    assert point.values.tolist() == [1.0, 0.5, 0.0]
    assert box.as_pairs() == [[0.0, 1.0]]


@pytest.mark.parametrize("data, message", [
    ({}, "'point' list"),
    ({"point": []}, "empty"),
    ({"point": [{"exp": [1]}]}, "'exp' and 'value'"),
])
def test_point_errors(data, message):
    """Test malformed points."""
    with pytest.raises(ParameterError, match=message):
        parse_point(data)


def test_read_json_errors(tmp_path):
    """Test missing files and invalid JSON."""
    with pytest.raises(ParameterError, match="File not found"):
        read_json(tmp_path / "nothing.json")
    broken = tmp_path / "broken.json"
    broken.write_text('{"n": 1,', encoding="utf-8")
    with pytest.raises(ParameterError, match="not valid JSON"):
        read_json(broken)


def test_read_json_accepts_bom(tmp_path):
    """Test UTF-8 files saved with a byte-order mark."""
    path = tmp_path / "bom.json"
    path.write_text('{"a": 1}', encoding="utf-8-sig")
    assert read_json(path) == {"a": 1}


def test_write_json(tmp_path):
    """Test sorted, indented output in a created directory."""
    path = write_json({"b": 1, "a": [1, 2]}, tmp_path / "nested" / "out.json")
    text = path.read_text(encoding="utf-8")
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": [1, 2], "b": 1}
