# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
JSON file formats.

problem:   {"n": 2, "box": [[a, b], ...], "terms": [{"exp": [..], "coef": c}, ...],
            "family": [pattern, ...]}                          (box, family optional)
set:       {"name": .., "n": 2, "exponents": [[..], ...], "authoritative": false}
pattern:   {"kind": "chain", "parameters": {...}}
point:     {"box": [[a, b], ...], "point": [{"exp": [..], "value": v}, ...]}   (box optional)
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .core.exceptions import ParameterError
from .core.patterns import Pattern, PatternFamily
from .core.poly import BoxDomain, MomentPoint, SparsePolynomial, exponent
from .exponent_sets import ExponentSet

logger = logging.getLogger(__name__)


def read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8-sig") as f:
            return json.load(f)
    except FileNotFoundError as exc:
        msg = f"File not found: {path}"
        logger.error(msg)
        raise ParameterError(msg) from exc
    except json.JSONDecodeError as exc:
        msg = f"{path} is not valid JSON: {exc.msg} (line {exc.lineno})"
        logger.error(msg)
        raise ParameterError(msg) from exc


def parse_box(data: Any, n: int) -> BoxDomain:
    if data is None:
        return BoxDomain.unit(n)
    try:
        box = BoxDomain.from_pairs(data)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"Malformed box {data!r}.") from exc
    if box.dimension != n:
        raise ParameterError(f"Box has dimension {box.dimension} but the problem has n = {n}.")
    return box


@dataclass(frozen=True)
class Problem:
    objective: SparsePolynomial
    box: BoxDomain
    family: PatternFamily | None = None
    name: str = ""

    @classmethod
    def from_dict(cls, data: dict[str, Any], name: str = "") -> Problem:
        if not isinstance(data, dict) or "n" not in data or "terms" not in data:
            raise ParameterError("A problem needs 'n' and 'terms'.")
        n = data["n"]
        try:
            pairs = [(term["exp"], term["coef"]) for term in data["terms"]]
        except (KeyError, TypeError) as exc:
            raise ParameterError("Each term needs 'exp' and 'coef'.") from exc
        objective = SparsePolynomial.from_terms(n, pairs)
        family = PatternFamily.from_list(data["family"]) if data.get("family") else None
        return cls(objective, parse_box(data.get("box"), n), family, str(data.get("name", name)))

    def to_dict(self) -> dict:
        data = {**self.objective.to_dict(), "box": self.box.as_pairs()}
        if self.family is not None:
            data["family"] = self.family.to_list()
        return data


def load_problem(path: str | Path) -> Problem:
    return Problem.from_dict(read_json(path), name=Path(path).stem)


def load_exponent_set(path: str | Path) -> ExponentSet:
    return ExponentSet.from_dict(read_json(path), default_name=Path(path).stem)


def parse_pattern(data: Any) -> Pattern:
    if not isinstance(data, dict):
        raise ParameterError("A pattern must be a JSON object with 'kind' and 'parameters'.")
    return Pattern.from_dict(data)


def load_pattern(path: str | Path) -> Pattern:
    return parse_pattern(read_json(path))


def parse_point(data: Any) -> tuple[MomentPoint, BoxDomain]:
    """Returns the moment point and its box (the unit box when none is given)."""
    if not isinstance(data, dict) or "point" not in data:
        raise ParameterError("A point file needs a 'point' list.")
    try:
        mapping = {exponent(entry["exp"]): float(entry["value"]) for entry in data["point"]}
    except (KeyError, TypeError) as exc:
        raise ParameterError("Each point entry needs 'exp' and 'value'.") from exc
    if not mapping:
        raise ParameterError("The point is empty.")
    point = MomentPoint.from_mapping(mapping)
    return point, parse_box(data.get("box"), len(point.index[0]))


def load_point(path: str | Path) -> tuple[MomentPoint, BoxDomain]:
    return parse_point(read_json(path))


def write_json(data: Any, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
