"""Satisficing requirement checks, conjunctive filtering and relaxation.

Four requirement kinds exist, two numeric and two textual:

* ``max``   passes when value <  bound (strictly),
* ``min``   passes when value >  bound (strictly),
* ``equals`` passes on exact text match,
* ``oneOf`` passes on membership in a text set.

An alternative missing the checked attribute fails the requirement
(fail-closed). Filtering is conjunctive; when nothing passes, the
filter relaxes by allowing one violated requirement, then two, and so
on, taking at each level every alternative that violates at most that
many requirements, until survivors exist or every requirement may be
dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Mapping, Protocol, Sequence

from .errors import ParseError, TypeMismatch, ValidationError


class Alternative(Protocol):
    """Anything with an id and typed attribute lookups (image or service)."""

    id: str

    def numeric_value(self, key: str) -> float | None: ...

    def text_value(self, key: str) -> str | None: ...


class RequirementKind(str, Enum):
    MAX = "max"
    MIN = "min"
    EQUALS = "equals"
    ONE_OF = "oneOf"


@dataclass(frozen=True)
class Requirement:
    """One satisficing constraint on a single attribute."""

    attribute_key: str
    kind: RequirementKind
    numeric_bound: float | None = None
    text_value: str | None = None
    text_set: frozenset[str] | None = None

    def __post_init__(self) -> None:
        numeric = self.kind in (RequirementKind.MAX, RequirementKind.MIN)
        if numeric:
            if self.numeric_bound is None or self.text_value is not None or self.text_set is not None:
                raise ValidationError(f"{self.kind.value} requirement carries a numeric bound only")
        elif self.kind is RequirementKind.EQUALS:
            if self.text_value is None or self.numeric_bound is not None or self.text_set is not None:
                raise ValidationError("equals requirement carries a text value only")
        else:
            if not self.text_set or self.numeric_bound is not None or self.text_value is not None:
                raise ValidationError("oneOf requirement carries a non-empty text set only")

    @classmethod
    def maximum(cls, attribute_key: str, bound: float) -> "Requirement":
        return cls(attribute_key, RequirementKind.MAX, numeric_bound=float(bound))

    @classmethod
    def minimum(cls, attribute_key: str, bound: float) -> "Requirement":
        return cls(attribute_key, RequirementKind.MIN, numeric_bound=float(bound))

    @classmethod
    def equals(cls, attribute_key: str, value: str) -> "Requirement":
        return cls(attribute_key, RequirementKind.EQUALS, text_value=value)

    @classmethod
    def one_of(cls, attribute_key: str, values: Iterable[str]) -> "Requirement":
        return cls(attribute_key, RequirementKind.ONE_OF, text_set=frozenset(values))


@dataclass(frozen=True)
class FilterOutcome:
    """Result of conjunctive filtering with relaxation.

    ``candidates`` lists every alternative id that was considered,
    ``survivors`` the ids passing at ``relaxation_level`` (sorted by id),
    and ``dropped`` maps each survivor to the indices of the
    requirements it violates (empty at level 0).
    """

    candidates: tuple[str, ...]
    survivors: tuple[str, ...]
    relaxation_level: int
    dropped: Mapping[str, tuple[int, ...]]


def check(requirement: Requirement, alternative: Alternative) -> bool:
    """Evaluate one requirement against one alternative."""
    key = requirement.attribute_key
    if requirement.kind in (RequirementKind.MAX, RequirementKind.MIN):
        value = alternative.numeric_value(key)
        if value is None:
            if alternative.text_value(key) is not None:
                raise TypeMismatch(
                    f"numeric requirement on text attribute {key!r} of {alternative.id!r}"
                )
            return False
        if requirement.kind is RequirementKind.MAX:
            return value < requirement.numeric_bound  # type: ignore[operator]
        return value > requirement.numeric_bound  # type: ignore[operator]

    text = alternative.text_value(key)
    if text is None:
        if alternative.numeric_value(key) is not None:
            raise TypeMismatch(
                f"text requirement on numeric attribute {key!r} of {alternative.id!r}"
            )
        return False
    if requirement.kind is RequirementKind.EQUALS:
        return text == requirement.text_value
    return text in requirement.text_set  # type: ignore[operator]


def violations(requirements: Sequence[Requirement], alternative: Alternative) -> tuple[int, ...]:
    """Indices of the requirements the alternative violates."""
    return tuple(i for i, req in enumerate(requirements) if not check(req, alternative))


def filter_alternatives(
    requirements: Sequence[Requirement],
    alternatives: Sequence[Alternative],
    max_level: int | None = None,
) -> FilterOutcome:
    """Conjunctive filter with level-wise relaxation.

    Level k keeps alternatives violating at most k requirements; the
    smallest non-empty level wins. ``max_level`` caps the relaxation
    (0 disables it entirely); by default it runs up to the number of
    requirements, at which point everything survives.
    """
    candidates = tuple(sorted(a.id for a in alternatives))
    by_id = {a.id: a for a in alternatives}
    if len(by_id) != len(alternatives):
        raise ValidationError("duplicate alternative ids passed to filter")

    counts = {a.id: violations(requirements, a) for a in alternatives}
    limit = len(requirements) if max_level is None else min(max_level, len(requirements))
    level = 0
    survivors: tuple[str, ...] = ()
    for level in range(limit + 1):
        survivors = tuple(i for i in candidates if len(counts[i]) <= level)
        if survivors:
            break
    return FilterOutcome(
        candidates=candidates,
        survivors=survivors,
        relaxation_level=level,
        dropped={i: counts[i] for i in survivors},
    )


def parse_requirement(doc: Mapping[str, Any]) -> Requirement:
    """Parse the ``{attr, kind, value | values[]}`` document form."""
    if not isinstance(doc, Mapping):
        raise ParseError("requirement must be an object")
    attr = doc.get("attr")
    if not isinstance(attr, str) or not attr:
        raise ParseError("requirement needs a non-empty 'attr'")
    kind = doc.get("kind")
    try:
        parsed_kind = RequirementKind(kind)
    except ValueError:
        raise ParseError(f"unknown requirement kind {kind!r}") from None

    if parsed_kind in (RequirementKind.MAX, RequirementKind.MIN):
        value = doc.get("value")
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParseError(f"{parsed_kind.value} requirement on {attr!r} needs a numeric 'value'")
        return Requirement(attr, parsed_kind, numeric_bound=float(value))
    if parsed_kind is RequirementKind.EQUALS:
        value = doc.get("value")
        if not isinstance(value, str):
            raise ParseError(f"equals requirement on {attr!r} needs a text 'value'")
        return Requirement(attr, parsed_kind, text_value=value)
    values = doc.get("values")
    if not isinstance(values, list) or not values or not all(isinstance(v, str) for v in values):
        raise ParseError(f"oneOf requirement on {attr!r} needs a non-empty 'values' list")
    return Requirement(attr, parsed_kind, text_set=frozenset(values))


def requirement_to_doc(requirement: Requirement) -> dict[str, Any]:
    doc: dict[str, Any] = {"attr": requirement.attribute_key, "kind": requirement.kind.value}
    if requirement.numeric_bound is not None:
        doc["value"] = requirement.numeric_bound
    elif requirement.text_value is not None:
        doc["value"] = requirement.text_value
    else:
        doc["values"] = sorted(requirement.text_set or ())
    return doc
