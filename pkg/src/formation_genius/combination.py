"""Feasible (image, service) pairs, network cost deltas, combined values.

A pair is feasible when the image is deployable on the service and,
for every already-committed neighbor of the component under migration,
the two images are compatible and the two services are compatible.
Infeasible pairs keep a combined score of exactly 0, so they can never
outrank a feasible pair.

The network delta of a candidate service sums, over the committed
neighbors, the local receive+send costs when provider and location
match the neighbor's service, and the internet receive+send costs
otherwise. A component with no committed neighbors has delta 0.

Deltas are normalized distributively over all enumerated pairs; exact
zeros are floored at 1 / (pairs * 1e6) so the division below stays
total while zero-cost pairs keep the strongest boost, and an all-zero
delta map normalizes to 1 everywhere (no effect on the ranking).

Combined raw values use the compensatory sum
(image_weight * image_score + service_weight * service_score) or the
balance-seeking product of the two scores, divided by the normalized
delta when the policy applies network costs. Scores are rescaled by
the maximum raw value, descending, ties broken by (image id,
service id).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .ahp import CriteriaHierarchy, normalize_criterion
from .catalog import Catalog, CloudService, Influence
from .errors import NoFeasibleCombination, ValidationError
from .evaluation import ScoredAlternative
from .formation import Formation, related_committed
from .requirements import FilterOutcome

Pair = tuple[str, str]


class CombineOperator(str, Enum):
    SUM = "sum"
    PRODUCT = "product"


@dataclass(frozen=True)
class CombinationPolicy:
    """How image and service values merge into one combined value."""

    operator: CombineOperator = CombineOperator.SUM
    image_weight: float = 0.5
    service_weight: float = 0.5
    apply_network_delta: bool = True

    def __post_init__(self) -> None:
        if self.image_weight <= 0 or self.service_weight <= 0:
            raise ValidationError("image and service weights must both be positive")
        if abs(self.image_weight + self.service_weight - 1.0) > 1e-9:
            raise ValidationError("image and service weights must sum to 1")


@dataclass(frozen=True)
class CombinedSolution:
    image_id: str
    service_id: str
    image_score: float | None
    service_score: float | None
    network_delta: float
    normalized_delta: float
    combined_raw: float
    combined_score: float
    feasible: bool


def network_delta(
    formation: Formation,
    component_id: str,
    candidate_service: CloudService,
    catalog: Catalog,
) -> float:
    """Expected extra traffic cost the candidate adds to the formation."""
    total = 0.0
    for solution, traffic in related_committed(formation, component_id):
        neighbor_service = catalog.service(solution.service_id)
        if (
            candidate_service.provider_id == neighbor_service.provider_id
            and candidate_service.location_country == neighbor_service.location_country
        ):
            total += traffic.local_receive + traffic.local_send
        else:
            total += traffic.internet_receive + traffic.internet_send
    return total


def normalize_deltas(deltas: Mapping[Pair, float]) -> dict[Pair, float]:
    """Distributive normalization of a pair -> delta map with a zero floor."""
    if not deltas:
        return {}
    for pair, delta in deltas.items():
        if delta < 0:
            raise ValidationError(f"network delta for {pair!r} is negative")
    total = sum(deltas.values())
    if total == 0:
        return {pair: 1.0 for pair in deltas}
    floor = 1.0 / (len(deltas) * 1e6)
    return {pair: (delta / total if delta > 0 else floor) for pair, delta in deltas.items()}


def pair_feasibility(
    catalog: Catalog,
    formation: Formation,
    component_id: str,
    image_ids: Sequence[str],
    service_ids: Sequence[str],
) -> dict[Pair, bool]:
    """Deployability plus compatibility against every committed neighbor."""
    neighbors = related_committed(formation, component_id)
    compat = catalog.compat
    out: dict[Pair, bool] = {}
    for image_id in image_ids:
        image_ok = all(
            compat.images_compatible(image_id, solution.image_id) for solution, _ in neighbors
        )
        for service_id in service_ids:
            feasible = (
                image_ok
                and compat.deployable(image_id, service_id)
                and all(
                    compat.services_compatible(service_id, solution.service_id)
                    for solution, _ in neighbors
                )
            )
            out[(image_id, service_id)] = feasible
    return out


def pair_deltas(
    formation: Formation,
    component_id: str,
    services: Sequence[CloudService],
    image_ids: Sequence[str],
    catalog: Catalog,
) -> dict[Pair, float]:
    """Network delta per enumerated pair (constant across a service's pairs)."""
    per_service = {
        service.id: network_delta(formation, component_id, service, catalog)
        for service in services
    }
    return {
        (image_id, service_id): delta
        for service_id, delta in per_service.items()
        for image_id in image_ids
    }


def assemble_combinations(
    image_ranking: Sequence[ScoredAlternative],
    service_ranking: Sequence[ScoredAlternative],
    feasibility: Mapping[Pair, bool],
    deltas: Mapping[Pair, float],
    normalized: Mapping[Pair, float],
    policy: CombinationPolicy,
) -> list[CombinedSolution]:
    """Merge the per-side rankings into ranked combined solutions."""
    solutions: list[CombinedSolution] = []
    raw_values: list[float] = []
    for image in image_ranking:
        for service in service_ranking:
            pair = (image.alternative_id, service.alternative_id)
            feasible = feasibility[pair]
            if feasible:
                if policy.operator is CombineOperator.SUM:
                    raw = policy.image_weight * image.score + policy.service_weight * service.score
                else:
                    raw = image.score * service.score
                if policy.apply_network_delta:
                    raw /= normalized[pair]
            else:
                raw = 0.0
            raw_values.append(raw)
            solutions.append(
                CombinedSolution(
                    image_id=pair[0],
                    service_id=pair[1],
                    image_score=image.score,
                    service_score=service.score,
                    network_delta=deltas[pair],
                    normalized_delta=normalized[pair],
                    combined_raw=raw,
                    combined_score=0.0,
                    feasible=feasible,
                )
            )
    if not any(s.feasible for s in solutions):
        raise NoFeasibleCombination("every image/service pair is infeasible")

    max_raw = max(raw_values, default=0.0)
    if max_raw > 0:
        solutions = [
            CombinedSolution(
                image_id=s.image_id,
                service_id=s.service_id,
                image_score=s.image_score,
                service_score=s.service_score,
                network_delta=s.network_delta,
                normalized_delta=s.normalized_delta,
                combined_raw=s.combined_raw,
                combined_score=s.combined_raw / max_raw,
                feasible=s.feasible,
            )
            for s in solutions
        ]
    solutions.sort(key=lambda s: (-s.combined_score, s.image_id, s.service_id))
    return solutions


def combine(
    image_ranking: Sequence[ScoredAlternative],
    service_ranking: Sequence[ScoredAlternative],
    formation: Formation,
    component_id: str,
    catalog: Catalog,
    policy: CombinationPolicy,
) -> list[CombinedSolution]:
    """Enumerate and rank every image x service pair for one component."""
    if not image_ranking or not service_ranking:
        raise NoFeasibleCombination("no candidate images or services to combine")
    image_ids = [i.alternative_id for i in image_ranking]
    service_ids = [s.alternative_id for s in service_ranking]
    services = [catalog.service(s) for s in service_ids]
    feasibility = pair_feasibility(catalog, formation, component_id, image_ids, service_ids)
    deltas = pair_deltas(formation, component_id, services, image_ids, catalog)
    normalized = normalize_deltas(deltas)
    return assemble_combinations(
        image_ranking, service_ranking, feasibility, deltas, normalized, policy
    )


def best_combination(combined: Sequence[CombinedSolution]) -> CombinedSolution:
    """Highest-scoring feasible solution (input is already ranked)."""
    for solution in combined:
        if solution.feasible:
            return solution
    raise NoFeasibleCombination("no feasible solution in the ranking")


def integrated_evaluate(
    catalog: Catalog,
    image_outcome: FilterOutcome,
    service_outcome: FilterOutcome,
    hierarchy: CriteriaHierarchy,
    weights: Mapping[str, float],
    formation: Formation,
    component_id: str,
    apply_network_delta: bool = True,
) -> list[CombinedSolution]:
    """Single-hierarchy variant: feasible pairs are the alternatives.

    Each feasible pair inherits the image's values for image-attribute
    leaves and the service's for service-attribute leaves, then the
    same multiplicative index and delta division apply. Per-side scores
    are not computed in this mode. Pairs whose image or service failed
    its requirements are excluded along with infeasible pairs.
    """
    leaves = hierarchy.leaves()
    for leaf in leaves:
        if leaf.id not in weights:
            raise ValidationError(f"no global weight supplied for criterion {leaf.id!r}")

    images = [catalog.image(i) for i in image_outcome.survivors]
    services = [catalog.service(s) for s in service_outcome.survivors]
    feasibility = pair_feasibility(
        catalog, formation, component_id,
        [i.id for i in images], [s.id for s in services],
    )
    pairs = [
        (image, service)
        for image in images
        for service in services
        if feasibility[(image.id, service.id)]
    ]
    if not pairs:
        raise NoFeasibleCombination("every image/service pair is infeasible")

    deltas = pair_deltas(formation, component_id, services, [i.id for i in images], catalog)
    pair_ids = [(image.id, service.id) for image, service in pairs]
    normalized = normalize_deltas({pair: deltas[pair] for pair in pair_ids})

    # Image leaves read from the image half of a pair, everything else
    # from the service half; lookups falling back across both halves
    # keep custom single-sided hierarchies usable.
    def leaf_value(image, service, key: str) -> float | None:
        value = image.numeric_value(key)
        return value if value is not None else service.numeric_value(key)

    norms: dict[str, dict[Pair, float]] = {}
    for leaf in leaves:
        present = []
        for (image, service), pair in zip(pairs, pair_ids):
            value = leaf_value(image, service, leaf.attribute_key)
            if value is not None:
                present.append((pair, value))
        norms[leaf.id] = normalize_criterion(present) if present else {}

    has_negative = any(leaf.influence is Influence.NEGATIVE for leaf in leaves)
    floor = 1.0 / (len(pairs) * 1e6)
    raw_by_pair: dict[Pair, float] = {}
    for pair in pair_ids:
        positive = 0.0
        negative = 0.0
        for leaf in leaves:
            norm = norms[leaf.id].get(pair, 0.0)
            if leaf.influence is Influence.POSITIVE:
                positive += weights[leaf.id] * norm
            else:
                negative += weights[leaf.id] * norm
        if not has_negative:
            raw = positive
        elif negative == 0.0:
            raw = positive / floor
        else:
            raw = positive / negative
        if apply_network_delta:
            raw /= normalized[pair]
        raw_by_pair[pair] = raw

    max_raw = max(raw_by_pair.values(), default=0.0)
    solutions = [
        CombinedSolution(
            image_id=pair[0],
            service_id=pair[1],
            image_score=None,
            service_score=None,
            network_delta=deltas[pair],
            normalized_delta=normalized[pair],
            combined_raw=raw_by_pair[pair],
            combined_score=raw_by_pair[pair] / max_raw if max_raw > 0 else 0.0,
            feasible=True,
        )
        for pair in pair_ids
    ]
    solutions.sort(key=lambda s: (-s.combined_score, s.image_id, s.service_id))
    return solutions
