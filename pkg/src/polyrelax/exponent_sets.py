# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
Exponent sets used by the benchmark: the shipped sets, dense sets ℕⁿ_d and
seeded random sparse sets.

Set names accepted by `resolve_set`:
    bivariate-sparse, a2-like, a5-like shipped sets
    dense:N:D                          {α ∈ ℕᴺ : |α|₁ ≤ D}
    random:N:SIZE:DEGREE:SEED          SIZE distinct non-zero exponents with |α|₁ ≤ DEGREE
    <path>.json                        exponent-set file
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .core.exceptions import ParameterError, SizeLimitError
from .core.poly import Exponent, exponent

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExponentSet:
    name: str
    exponents: tuple[Exponent, ...]
    authoritative: bool = False
    description: str = ""

    def __post_init__(self):
        cleaned = tuple(sorted({exponent(alpha) for alpha in self.exponents}))
        if not cleaned:
            raise ParameterError(f"Exponent set {self.name!r} is empty.")
        if len({len(alpha) for alpha in cleaned}) != 1:
            raise ParameterError(f"Exponent set {self.name!r} mixes dimensions.")
        object.__setattr__(self, "exponents", cleaned)

    @property
    def dimension(self) -> int:
        return len(self.exponents[0])

    def __len__(self) -> int:
        return len(self.exponents)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n": self.dimension,
            "exponents": [list(alpha) for alpha in self.exponents],
            "authoritative": self.authoritative,
            "description": self.description,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any], default_name: str = "inline") -> ExponentSet:
        if not isinstance(data, dict) or "exponents" not in data:
            raise ParameterError("An exponent set needs an 'exponents' list.")
        exps = [exponent(alpha) for alpha in data["exponents"]]
        n = data.get("n")
        if n is not None and any(len(alpha) != n for alpha in exps):
            raise ParameterError(f"Exponent set declares n = {n} but holds exponents of another length.")
        return cls(
            name=str(data.get("name", default_name)),
            exponents=tuple(exps),
            authoritative=bool(data.get("authoritative", False)),
            description=str(data.get("description", "")),
        )


SHIPPED_SETS: dict[str, ExponentSet] = {
    "bivariate-sparse": ExponentSet(
        "bivariate-sparse",
        ((0, 2), (1, 1), (2, 3), (2, 4), (4, 0), (5, 5)),
        authoritative=True,
        description="Sparse bivariate support mixing axis, diagonal and off-diagonal monomials.",
    ),
    "a2-like": ExponentSet(
        "a2-like",
        tuple((k, k) for k in range(1, 6)),
        description="Diagonal multiples of (1,1); no two exponents are multilinearly connected.",
    ),
    "a5-like": ExponentSet(
        "a5-like",
        tuple((i, j) for i in (3, 4) for j in range(i + 1)),
        description="Two columns of exponents with first entry 3 or 4.",
    ),
}


MAX_DENSE_DEGREE_3D = 7


def dense_set(n: int, d: int, allow_large: bool = False) -> ExponentSet:
    """
    ℕⁿ_d = {α : |α|₁ ≤ d}, including 𝟘.

    Raises:
        SizeLimitError: For n ≥ 3 and d > 7 unless allow_large is set.
    """
    if n < 1 or d < 0:
        raise ParameterError(f"Dense set needs n ≥ 1 and d ≥ 0, got n={n}, d={d}.")
    if n >= 3 and d > MAX_DENSE_DEGREE_3D:
        if not allow_large:
            msg = f"dense:{n}:{d} exceeds degree {MAX_DENSE_DEGREE_3D}; pass allow_large to run it anyway."
            logger.error(msg)
            raise SizeLimitError(msg)
        logger.warning("dense:%d:%d is large; expect long runtimes", n, d)
    exps = tuple(alpha for alpha in itertools.product(range(d + 1), repeat=n) if sum(alpha) <= d)
    return ExponentSet(f"dense:{n}:{d}", exps, authoritative=True, description=f"All exponents of degree at most {d}.")


def random_set(n: int, size: int, degree: int, seed: int) -> ExponentSet:
    """SIZE distinct non-zero exponents with |α|₁ ≤ degree drawn with default_rng(seed)."""
    if n < 1 or size < 1 or degree < 1:
        raise ParameterError(f"Random set needs positive n, size and degree, got {n}, {size}, {degree}.")
    available = sum(1 for alpha in itertools.product(range(degree + 1), repeat=n) if 0 < sum(alpha) <= degree)
    if size > available:
        raise ParameterError(f"Only {available} non-zero exponents have degree ≤ {degree} in {n} variables.")
    rng = np.random.default_rng(seed)
    chosen: dict[Exponent, None] = {}
    while len(chosen) < size:
        alpha = tuple(int(a) for a in rng.integers(0, degree + 1, size=n))
        if 0 < sum(alpha) <= degree:
            chosen.setdefault(alpha)
    return ExponentSet(
        f"random:{n}:{size}:{degree}:{seed}",
        tuple(chosen),
        description="Seeded random sparse set.",
    )


def _ints(parts: Sequence[str], text: str) -> list[int]:
    try:
        return [int(p) for p in parts]
    except ValueError as exc:
        raise ParameterError(f"Malformed exponent-set name {text!r}.") from exc


def resolve_set(source: str | Path | dict | Iterable, allow_large: bool = False) -> ExponentSet:
    """
    Turns a set name, a file path, an inline object or a list of exponents
    into an ExponentSet.

    Raises:
        ParameterError: If the name is unknown or the set is malformed.
    """
    if isinstance(source, ExponentSet):
        return source
    if isinstance(source, dict):
        return ExponentSet.from_dict(source)
    if isinstance(source, Path) or (isinstance(source, str) and source.endswith(".json")):
        from .problem_files import load_exponent_set

        return load_exponent_set(source)
    if not isinstance(source, str):
        return ExponentSet("inline", tuple(exponent(alpha) for alpha in source))

    text = source.strip()
    if text.lower() in SHIPPED_SETS:
        return SHIPPED_SETS[text.lower()]
    kind, *parts = text.split(":")
    if kind == "dense" and len(parts) == 2:
        return dense_set(*_ints(parts, text), allow_large=allow_large)
    if kind == "random" and len(parts) == 4:
        return random_set(*_ints(parts, text))
    msg = f"Unknown exponent set {text!r}; expected one of {', '.join(SHIPPED_SETS)}, dense:N:D or random:N:SIZE:DEGREE:SEED."
    logger.error(msg)
    raise ParameterError(msg)
