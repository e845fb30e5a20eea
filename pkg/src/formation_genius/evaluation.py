"""Scoring of images and services over requirement-surviving alternatives.

Each surviving alternative gets a raw value from the multiplicative
index: the weighted sum of its normalized positive-influence criteria
divided by the weighted sum of its normalized negative-influence
criteria. Criterion values are normalized distributively across the
survivors, so rescaling one attribute by a positive constant never
changes the ranking.

Alternatives that failed the requirements check score exactly 0. The
surviving raw values are rescaled by their maximum so the best
alternative reports 1.0 and everything is comparable on a [0, 1]
scale.

Degenerate negative denominators (an alternative whose normalized
negative criteria all vanish) are floored at 1 / (survivors * 1e6)
instead of dividing by zero; this keeps zero-cost alternatives ranked
by their numerators and is flagged per alternative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .ahp import CriteriaHierarchy, normalize_criterion
from .catalog import Catalog, Influence
from .errors import EmptyRanking, ValidationError
from .requirements import Alternative, FilterOutcome


@dataclass(frozen=True)
class ScoredAlternative:
    """One alternative with raw and rescaled values plus provenance."""

    alternative_id: str
    raw_score: float
    score: float
    requirement_ok: bool
    relaxation_level: int
    warnings: tuple[str, ...] = ()


def _score_pool(
    pool: Mapping[str, Alternative],
    outcome: FilterOutcome,
    hierarchy: CriteriaHierarchy,
    weights: Mapping[str, float],
) -> list[ScoredAlternative]:
    leaves = hierarchy.leaves()
    for leaf in leaves:
        if leaf.id not in weights:
            raise ValidationError(f"no global weight supplied for criterion {leaf.id!r}")

    survivors = [pool[i] for i in outcome.survivors]
    has_negative = any(leaf.influence is Influence.NEGATIVE for leaf in leaves)
    floor = 1.0 / (len(survivors) * 1e6) if survivors else 0.0

    # Distributive normalization per criterion across survivors holding
    # the attribute; absent values contribute nothing and are flagged.
    norms: dict[str, dict[str, float]] = {}
    missing: dict[str, list[str]] = {alt.id: [] for alt in survivors}
    for leaf in leaves:
        present = []
        for alt in survivors:
            value = alt.numeric_value(leaf.attribute_key)
            if value is None:
                missing[alt.id].append(leaf.attribute_key)
            else:
                present.append((alt.id, value))
        norms[leaf.id] = normalize_criterion(present) if present else {}

    scored: list[ScoredAlternative] = []
    raw_by_id: dict[str, float] = {}
    degenerate: set[str] = set()
    for alt in survivors:
        positive = 0.0
        negative = 0.0
        for leaf in leaves:
            norm = norms[leaf.id].get(alt.id, 0.0)
            if leaf.influence is Influence.POSITIVE:
                positive += weights[leaf.id] * norm
            else:
                negative += weights[leaf.id] * norm
        if not has_negative:
            raw = positive
        elif negative == 0.0:
            raw = positive / floor
            degenerate.add(alt.id)
        else:
            raw = positive / negative
        raw_by_id[alt.id] = raw

    max_raw = max(raw_by_id.values(), default=0.0)
    for alt in survivors:
        alt_warnings = [f"missing attribute {key!r}" for key in missing[alt.id]]
        if alt.id in degenerate:
            alt_warnings.append("negative-criteria denominator degenerated to the floor value")
        raw = raw_by_id[alt.id]
        scored.append(
            ScoredAlternative(
                alternative_id=alt.id,
                raw_score=raw,
                score=raw / max_raw if max_raw > 0 else 0.0,
                requirement_ok=True,
                relaxation_level=outcome.relaxation_level,
                warnings=tuple(alt_warnings),
            )
        )

    survivor_ids = set(outcome.survivors)
    for alt_id in outcome.candidates:
        if alt_id not in survivor_ids:
            scored.append(
                ScoredAlternative(
                    alternative_id=alt_id,
                    raw_score=0.0,
                    score=0.0,
                    requirement_ok=False,
                    relaxation_level=outcome.relaxation_level,
                )
            )

    scored.sort(key=lambda s: (-s.score, s.alternative_id))
    return scored


def evaluate_images(
    catalog: Catalog,
    outcome: FilterOutcome,
    hierarchy: CriteriaHierarchy,
    weights: Mapping[str, float],
) -> list[ScoredAlternative]:
    """Rank the filtered image candidates, best first."""
    pool = {i: catalog.image(i) for i in outcome.candidates}
    return _score_pool(pool, outcome, hierarchy, weights)


def evaluate_services(
    catalog: Catalog,
    outcome: FilterOutcome,
    hierarchy: CriteriaHierarchy,
    weights: Mapping[str, float],
) -> list[ScoredAlternative]:
    """Rank the filtered service candidates, best first."""
    pool = {s: catalog.service(s) for s in outcome.candidates}
    return _score_pool(pool, outcome, hierarchy, weights)


def best(ranked: Sequence[ScoredAlternative]) -> ScoredAlternative:
    """First element of a non-empty ranking (ties already broken by id)."""
    if not ranked:
        raise EmptyRanking("cannot pick the best of an empty ranking")
    return ranked[0]
