# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
Pattern taxonomy and the pattern generation routines.

A pattern is a finite exponent set whose moment body has a tractable
separation problem. Families of patterns jointly relax the moment body of the
full exponent set; their union Ā is the index set of the master problem.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

from .exceptions import ParameterError
from .poly import (
    BoxDomain,
    Exponent,
    add_exponents,
    exponent,
    exponent_gcd,
    hadamard,
    is_zero,
    monomial_bounds,
    scale_exponent,
    support,
    unit_exponent,
)

logger = logging.getLogger(__name__)


class PatternKind(str, Enum):
    SINGLETON = "singleton"
    MULTILINEAR = "multilinear"
    CHAIN = "chain"
    SHIFTED_CHAIN = "shifted_chain"
    TRUNCATED_SUBMONOID = "truncated_submonoid"


def _fmt(alpha: Exponent) -> str:
    return "(" + ",".join(str(a) for a in alpha) + ")"


@dataclass(frozen=True)
class Pattern:
    """
    A pattern with its eagerly computed element set.

    Which parameters are set depends on the kind: `generator` is α for
    singleton and multilinear patterns and γ for chains; `length` is d;
    `shift` is η; `columns` and `box_upper` describe TS(Γ, B) with
    B = {α : 0 ≤ α ≤ box_upper}.
    """

    kind: PatternKind
    elements: tuple[Exponent, ...]
    generator: Exponent | None = None
    length: int | None = None
    shift: Exponent | None = None
    columns: tuple[Exponent, ...] | None = None
    box_upper: Exponent | None = None
    element_set: frozenset[Exponent] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "element_set", frozenset(self.elements))

    @property
    def dimension(self) -> int:
        return len(self.elements[0])

    def __len__(self) -> int:
        return len(self.elements)

    def is_subset_of(self, other: Pattern) -> bool:
        return self.element_set <= other.element_set

    @property
    def label(self) -> str:
        if self.kind is PatternKind.SINGLETON:
            return f"{{{_fmt(self.generator)}}}"
        if self.kind is PatternKind.MULTILINEAR:
            return f"ML({_fmt(self.generator)})"
        if self.kind is PatternKind.CHAIN:
            return f"CH({_fmt(self.generator)},{self.length})"
        if self.kind is PatternKind.SHIFTED_CHAIN:
            return f"{_fmt(self.shift)}+CH({_fmt(self.generator)},{self.length})"
        cols = ",".join(_fmt(c) for c in self.columns)
        return f"TS([{cols}],{_fmt(self.box_upper)})"

    def parameters(self) -> dict:
        if self.kind in (PatternKind.SINGLETON, PatternKind.MULTILINEAR):
            return {"alpha": list(self.generator)}
        if self.kind is PatternKind.CHAIN:
            return {"generator": list(self.generator), "length": self.length}
        if self.kind is PatternKind.SHIFTED_CHAIN:
            return {"shift": list(self.shift), "generator": list(self.generator), "length": self.length}
        return {"columns": [list(c) for c in self.columns], "box": list(self.box_upper)}

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "parameters": self.parameters()}

    @classmethod
    def from_dict(cls, data: dict) -> Pattern:
        """Rebuilds a pattern from its JSON form; element sets are recomputed."""
        try:
            kind = PatternKind(data["kind"])
            params = data.get("parameters", {})
            if kind is PatternKind.SINGLETON:
                return singleton_pattern(params["alpha"])
            if kind is PatternKind.MULTILINEAR:
                return ml_pattern(params["alpha"])
            if kind is PatternKind.CHAIN:
                return chain_pattern(params["generator"], params["length"])
            if kind is PatternKind.SHIFTED_CHAIN:
                return shifted_chain_pattern(params["shift"], params["generator"], params["length"])
            return truncated_submonoid_pattern(params["columns"], params["box"])
        except (KeyError, TypeError) as exc:
            raise ParameterError(f"Malformed pattern description {data!r}: {exc}") from exc
        except ValueError as exc:
            if isinstance(exc, ParameterError):
                raise
            raise ParameterError(f"Unknown pattern kind in {data!r}.") from exc


def _check_length(d: int) -> int:
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise ParameterError(f"Chain length must be a positive integer, got {d!r}.")
    return d


def singleton_pattern(alpha: Sequence[int]) -> Pattern:
    alpha = exponent(alpha)
    return Pattern(PatternKind.SINGLETON, (alpha,), generator=alpha)


def ml_pattern(alpha: Sequence[int]) -> Pattern:
    """
    ML(α) = {α∘ω : ω ∈ {0,1}ⁿ}.

    Elements are ordered by the bit mask over supp(α), lowest support
    coordinate as least significant bit; vertex vectors from the separation
    module use the same order.
    """
    alpha = exponent(alpha)
    supp = support(alpha)
    elements = []
    for mask in range(1 << len(supp)):
        omega = [0] * len(alpha)
        for bit, i in enumerate(supp):
            if mask >> bit & 1:
                omega[i] = 1
        elements.append(hadamard(alpha, omega))
    return Pattern(PatternKind.MULTILINEAR, tuple(elements), generator=alpha)


def chain_pattern(gamma: Sequence[int], d: int) -> Pattern:
    """CH(γ, d) = {iγ : i = 0..d}, ordered by i."""
    gamma = exponent(gamma)
    if is_zero(gamma):
        raise ParameterError("Chain generator must be non-zero.")
    _check_length(d)
    elements = tuple(scale_exponent(i, gamma) for i in range(d + 1))
    return Pattern(PatternKind.CHAIN, elements, generator=gamma, length=d)


def shifted_chain_pattern(eta: Sequence[int], gamma: Sequence[int], d: int) -> Pattern:
    """η + CH(γ, d), ordered by i; requires disjoint non-empty supports."""
    eta, gamma = exponent(eta), exponent(gamma)
    if len(eta) != len(gamma):
        raise ParameterError("Shift and generator must have the same dimension.")
    if is_zero(gamma) or is_zero(eta):
        raise ParameterError("Shifted chains need a non-zero shift and a non-zero generator.")
    if set(support(eta)) & set(support(gamma)):
        raise ParameterError(f"Shift {eta} and generator {gamma} have overlapping supports.")
    _check_length(d)
    elements = tuple(add_exponents(eta, scale_exponent(i, gamma)) for i in range(d + 1))
    return Pattern(PatternKind.SHIFTED_CHAIN, elements, generator=gamma, length=d, shift=eta)


def _validate_columns(columns: Iterable[Sequence[int]], box_upper: Sequence[int]) -> tuple[tuple[Exponent, ...], Exponent]:
    cols = tuple(exponent(c) for c in columns)
    beta = exponent(box_upper)
    if not cols:
        raise ParameterError("A truncated submonoid needs at least one column.")
    seen: set[int] = set()
    for col in cols:
        if len(col) != len(beta):
            raise ParameterError(f"Column {col} does not match the dimension of B.")
        if is_zero(col):
            raise ParameterError("Truncated submonoid columns must be non-zero.")
        if any(c > b for c, b in zip(col, beta)):
            raise ParameterError(f"Column {col} is not contained in B.")
        supp = set(support(col))
        if supp & seen:
            raise ParameterError("Truncated submonoid columns must have pairwise disjoint supports.")
        seen |= supp
    return cols, beta


def _multiplier_caps(cols: tuple[Exponent, ...], beta: Exponent) -> list[int]:
    # with disjoint supports Γω ≤ β splits into one bound per column
    return [min(beta[j] // col[j] for j in support(col)) for col in cols]


def _multiplier_grid(caps: Sequence[int]) -> list[tuple[int, ...]]:
    # first coordinate varies fastest
    return [tuple(reversed(w)) for w in itertools.product(*(range(c + 1) for c in reversed(caps)))]


def truncated_submonoid_pattern(columns: Iterable[Sequence[int]], box_upper: Sequence[int]) -> Pattern:
    """TS(Γ, B) = Λ⁺(Γ) ∩ B for B = {α : 0 ≤ α ≤ box_upper}."""
    cols, beta = _validate_columns(columns, box_upper)
    n = len(beta)
    elements = []
    for omega in _multiplier_grid(_multiplier_caps(cols, beta)):
        point = (0,) * n
        for w, col in zip(omega, cols):
            point = add_exponents(point, scale_exponent(w, col))
        elements.append(point)
    return Pattern(PatternKind.TRUNCATED_SUBMONOID, tuple(elements), columns=cols, box_upper=beta)


def ts_reparametrize(
    columns: Iterable[Sequence[int]], box_upper: Sequence[int], box: BoxDomain
) -> tuple[tuple[tuple[int, ...], ...], BoxDomain]:
    """
    Represents TS(Γ, B) as a k-variate moment body.

    Returns:
        (P̃, K̃) with P̃ = {ω ∈ ℕᵏ : Γω ∈ B} and K̃ = ×ᵢ [x^{γⁱ}_min, x^{γⁱ}_max].
    """
    cols, beta = _validate_columns(columns, box_upper)
    if len(beta) != box.dimension:
        raise ParameterError("B and the box K differ in dimension.")
    reparam = tuple(_multiplier_grid(_multiplier_caps(cols, beta)))
    ranges = [monomial_bounds(col, box) for col in cols]
    return reparam, BoxDomain(tuple(r.lo for r in ranges), tuple(r.hi for r in ranges))


def ts_as_chain(pattern: Pattern) -> Pattern:
    """A one-column truncated submonoid TS([γ], B) is the chain CH(γ, m) with m the largest multiple in B."""
    if pattern.kind is not PatternKind.TRUNCATED_SUBMONOID or len(pattern.columns) != 1:
        raise ParameterError("Only one-column truncated submonoids reduce to chains.")
    cap = _multiplier_caps(pattern.columns, pattern.box_upper)[0]
    return chain_pattern(pattern.columns[0], cap)


@dataclass(frozen=True)
class PatternFamily:
    """
    Ordered patterns together with the running index set Ā.

    During generation Ā may still hold exponents of A that no pattern covers
    yet; `generate_patterns` closes that gap so its result has Ā = ∪ᵢ Pᵢ.
    """

    patterns: tuple[Pattern, ...] = ()
    cover: frozenset[Exponent] = frozenset()

    def __post_init__(self):
        cover = frozenset(self.cover).union(*(p.element_set for p in self.patterns))
        dims = {len(alpha) for alpha in cover}
        if len(dims) > 1:
            raise ParameterError(f"Mixed exponent dimensions in family: {sorted(dims)}.")
        object.__setattr__(self, "patterns", tuple(self.patterns))
        object.__setattr__(self, "cover", cover)

    @classmethod
    def from_exponents(cls, exponents: Iterable[Sequence[int]]) -> PatternFamily:
        return cls((), frozenset(exponent(alpha) for alpha in exponents))

    @classmethod
    def from_list(cls, items: Iterable[dict]) -> PatternFamily:
        family = cls()
        for item in items:
            family = add_pattern(family, Pattern.from_dict(item))
        return family

    def to_list(self) -> list[dict]:
        return [p.to_dict() for p in self.patterns]

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self):
        return iter(self.patterns)

    @property
    def dimension(self) -> int:
        if not self.cover:
            raise ParameterError("An empty family has no dimension.")
        return len(next(iter(self.cover)))

    @property
    def index(self) -> tuple[Exponent, ...]:
        """Ā in lexicographic order."""
        return tuple(sorted(self.cover))

    def covered(self) -> frozenset[Exponent]:
        return frozenset().union(*(p.element_set for p in self.patterns))

    def element_sets(self) -> frozenset[frozenset[Exponent]]:
        return frozenset(p.element_set for p in self.patterns)


def add_pattern(family: PatternFamily, pattern: Pattern) -> PatternFamily:
    """
    Adds a pattern unless it is contained in a stored one.

    Stored patterns that are strict subsets of the new pattern are absorbed,
    so no stored pattern is ever a subset of another.
    """
    for existing in family.patterns:
        if pattern.element_set <= existing.element_set:
            return family
    kept = tuple(p for p in family.patterns if not p.element_set < pattern.element_set)
    if len(kept) != len(family.patterns):
        logger.debug("%s absorbed %d stored pattern(s)", pattern.label, len(family.patterns) - len(kept))
    return PatternFamily(kept + (pattern,), family.cover | pattern.element_set)


def _as_family(source: PatternFamily | Iterable[Sequence[int]]) -> PatternFamily:
    if isinstance(source, PatternFamily):
        return source
    return PatternFamily.from_exponents(source)


def find_multilinear(source: PatternFamily | Iterable[Sequence[int]]) -> PatternFamily:
    family = _as_family(source)
    for alpha in sorted(family.cover):
        family = add_pattern(family, ml_pattern(alpha))
    return family


def find_chains(source: PatternFamily | Iterable[Sequence[int]]) -> PatternFamily:
    """Adds CH(gβ, s/g) for every primitive direction β present in Ā."""
    family = _as_family(source)
    multiples: dict[Exponent, set[int]] = {}
    for alpha in sorted(family.cover):
        if is_zero(alpha):
            continue
        g = exponent_gcd(alpha)
        multiples.setdefault(tuple(a // g for a in alpha), set()).add(g)
    for beta in sorted(multiples):
        ts = multiples[beta]
        s, g = max(ts), math.gcd(*ts)
        family = add_pattern(family, chain_pattern(scale_exponent(g, beta), s // g))
    return family


def find_shifted_chains(source: PatternFamily | Iterable[Sequence[int]]) -> PatternFamily:
    """
    Adds α̃ + CH(g·eⁱ, s/g) for every axis i and projected class of Ā.

    A class whose shift α̃ is zero yields the axis chain CH(g·eⁱ, s/g).
    """
    family = _as_family(source)
    n = family.dimension
    for axis in range(n):
        classes: dict[Exponent, list[int]] = {}
        for alpha in sorted(family.cover):
            classes.setdefault(alpha[:axis] + alpha[axis + 1:], []).append(alpha[axis])
        for rest in sorted(classes):
            values = [v for v in classes[rest] if v > 0]
            if not values:
                continue
            s, g = max(values), math.gcd(*values)
            shift = rest[:axis] + (0,) + rest[axis:]
            step = unit_exponent(n, axis, g)
            if is_zero(shift):
                pattern = chain_pattern(step, s // g)
            else:
                pattern = shifted_chain_pattern(shift, step, s // g)
            family = add_pattern(family, pattern)
    return family


def find_axis_chains(source: PatternFamily | Iterable[Sequence[int]]) -> PatternFamily:
    family = _as_family(source)
    n = family.dimension
    for axis in range(n):
        values = [alpha[axis] for alpha in sorted(family.cover) if support(alpha) == (axis,)]
        if not values:
            continue
        s, g = max(values), math.gcd(*values)
        family = add_pattern(family, chain_pattern(unit_exponent(n, axis, g), s // g))
    return family


PATTERN_TYPES: dict[str, Callable[[PatternFamily], PatternFamily]] = {
    "ML": find_multilinear,
    "AC": find_axis_chains,
    "CH": find_chains,
    "SC": find_shifted_chains,
}

DEFAULT_TYPE_ORDER: tuple[str, ...] = ("ML", "AC", "CH", "SC")


def parse_type_order(types: str | Sequence[str] | None) -> tuple[str, ...]:
    """
    Normalizes a type order given as "ML,AC", "ML+AC" or a list of tags.

    Raises:
        ParameterError: On an unknown tag.
    """
    if types is None:
        return DEFAULT_TYPE_ORDER
    if isinstance(types, str):
        tags = [t for t in types.replace("+", ",").split(",") if t.strip()]
    else:
        tags = list(types)
    order = []
    for tag in tags:
        key = str(tag).strip().upper()
        if key not in PATTERN_TYPES:
            msg = f"Unknown pattern type {tag!r}; expected one of {', '.join(PATTERN_TYPES)}."
            logger.error(msg)
            raise ParameterError(msg)
        order.append(key)
    return tuple(order)


def singleton_family(exponents: Iterable[Sequence[int]]) -> PatternFamily:
    family = PatternFamily()
    for alpha in sorted({exponent(a) for a in exponents}):
        family = add_pattern(family, singleton_pattern(alpha))
    return family


def generate_patterns(
    exponents: Iterable[Sequence[int]], type_order: str | Sequence[str] | None = DEFAULT_TYPE_ORDER
) -> PatternFamily:
    """
    Runs the find routines in the given order, threading Ā through them.

    Exponents of A left uncovered by every routine are added as singleton
    patterns so the result satisfies A ⊆ Ā = ∪ᵢ Pᵢ.

    Raises:
        ParameterError: If A is empty, has mixed dimensions or a tag is unknown.
    """
    base = sorted({exponent(alpha) for alpha in exponents})
    if not base:
        raise ParameterError("Pattern generation needs a non-empty exponent set.")
    order = parse_type_order(type_order)
    family = PatternFamily.from_exponents(base)
    for tag in order:
        family = PATTERN_TYPES[tag](family)
        logger.debug("after %s: %d patterns, |Ā| = %d", tag, len(family), len(family.cover))
    for alpha in sorted(set(base) - family.covered()):
        family = add_pattern(family, singleton_pattern(alpha))
    logger.info(
        "generated %d patterns over %d exponents (order %s)", len(family), len(family.cover), "+".join(order) or "-"
    )
    return family
