"""Multi-component IT system formation and its migration state.

A formation is the set of software components under migration, the
unordered interconnection pairs between them, the expected traffic cost
per link, and the solutions already committed component by component.
Traffic costs carry four figures per link: local-network receive/send
and internet receive/send; which pair applies is decided later, when a
candidate service's provider and location are compared against a
committed neighbor's.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping

from .errors import ParseError, UnknownComponent, ValidationError


@dataclass(frozen=True)
class Component:
    id: str
    software_feature: str


@dataclass(frozen=True)
class TrafficCostEstimate:
    """Expected traffic cost for one interconnection, all four directions."""

    from_component: str
    to_component: str
    local_receive: float = 0.0
    local_send: float = 0.0
    internet_receive: float = 0.0
    internet_send: float = 0.0

    def __post_init__(self) -> None:
        for name in ("local_receive", "local_send", "internet_receive", "internet_send"):
            if getattr(self, name) < 0:
                raise ValidationError(
                    f"traffic estimate {self.from_component!r}-{self.to_component!r}: "
                    f"{name} must be >= 0"
                )


ZERO_TRAFFIC = TrafficCostEstimate("", "")


@dataclass(frozen=True)
class CommittedSolution:
    """An (image, service) pair accepted for one component."""

    component_id: str
    image_id: str
    service_id: str
    score: float


def _norm_pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass
class Formation:
    """Components, links, traffic estimates and committed solutions."""

    components: tuple[Component, ...]
    interconnections: frozenset[tuple[str, str]]
    traffic: Mapping[tuple[str, str], TrafficCostEstimate]
    committed: dict[str, CommittedSolution] = field(default_factory=dict)
    warnings: tuple[str, ...] = field(default=(), compare=False, repr=False)

    def component(self, component_id: str) -> Component:
        for component in self.components:
            if component.id == component_id:
                return component
        raise UnknownComponent(f"unknown component {component_id!r}")

    def has_component(self, component_id: str) -> bool:
        return any(c.id == component_id for c in self.components)

    def neighbors(self, component_id: str) -> list[str]:
        """Ids of components linked to ``component_id``, sorted."""
        out = []
        for a, b in self.interconnections:
            if a == component_id:
                out.append(b)
            elif b == component_id:
                out.append(a)
        return sorted(out)

    def traffic_for(self, a: str, b: str) -> TrafficCostEstimate:
        return self.traffic.get(_norm_pair(a, b), ZERO_TRAFFIC)


def define_formation(
    components: Iterable[Component],
    interconnections: Iterable[tuple[str, str]] = (),
    traffic: Iterable[TrafficCostEstimate] = (),
) -> Formation:
    """Validate and assemble a formation with an empty committed map.

    Interconnection endpoints must resolve, traffic entries are only
    accepted for interconnected pairs, and a link without an estimate
    defaults to all-zero costs (surfaced as a warning).
    """
    components = tuple(components)
    if not components:
        raise ValidationError("formation needs at least one component")
    seen: set[str] = set()
    for component in components:
        if not component.id:
            raise ValidationError("component id must be non-empty")
        if component.id in seen:
            raise ValidationError(f"duplicate component id {component.id!r}")
        if not component.software_feature:
            raise ValidationError(f"component {component.id!r}: software feature must be non-empty")
        seen.add(component.id)

    links: set[tuple[str, str]] = set()
    for a, b in interconnections:
        if a == b:
            raise ValidationError(f"interconnection ({a!r}, {b!r}) links a component to itself")
        for end in (a, b):
            if end not in seen:
                raise ValidationError(f"interconnection references unknown component {end!r}")
        links.add(_norm_pair(a, b))

    traffic_map: dict[tuple[str, str], TrafficCostEstimate] = {}
    for estimate in traffic:
        key = _norm_pair(estimate.from_component, estimate.to_component)
        if key not in links:
            raise ValidationError(
                f"traffic estimate for ({estimate.from_component!r}, "
                f"{estimate.to_component!r}) has no matching interconnection"
            )
        if key in traffic_map:
            raise ValidationError(f"duplicate traffic estimate for link {key!r}")
        traffic_map[key] = estimate

    warnings = tuple(
        f"link ({a!r}, {b!r}) has no traffic estimate; assuming zero costs"
        for a, b in sorted(links)
        if (a, b) not in traffic_map
    )
    return Formation(
        components=components,
        interconnections=frozenset(links),
        traffic=traffic_map,
        warnings=warnings,
    )


def related_committed(
    formation: Formation, component_id: str
) -> list[tuple[CommittedSolution, TrafficCostEstimate]]:
    """Committed neighbors of ``component_id`` with their traffic estimates.

    Only components that are both interconnected with ``component_id``
    and already committed count; the result is sorted by neighbor id.
    """
    if not formation.has_component(component_id):
        raise UnknownComponent(f"unknown component {component_id!r}")
    out = []
    for neighbor_id in formation.neighbors(component_id):
        solution = formation.committed.get(neighbor_id)
        if solution is not None:
            out.append((solution, formation.traffic_for(component_id, neighbor_id)))
    return out


def formation_from_doc(doc: Mapping[str, Any]) -> Formation:
    """Build a formation from its JSON document form."""
    if not isinstance(doc, Mapping):
        raise ParseError("formation document must be a JSON object")
    components = []
    for entry in doc.get("components", []):
        if not isinstance(entry, Mapping):
            raise ParseError("components[]: expected objects with id and feature")
        components.append(Component(id=str(entry.get("id", "")), software_feature=str(entry.get("feature", ""))))

    links: list[tuple[str, str]] = []
    estimates: list[TrafficCostEstimate] = []
    for entry in doc.get("links", []):
        if not isinstance(entry, Mapping):
            raise ParseError("links[]: expected objects with a and b")
        a, b = str(entry.get("a", "")), str(entry.get("b", ""))
        links.append((a, b))
        costs = entry.get("costs")
        if costs is not None:
            if not isinstance(costs, Mapping):
                raise ParseError(f"link ({a!r}, {b!r}): costs must be an object")
            estimates.append(
                TrafficCostEstimate(
                    from_component=a,
                    to_component=b,
                    local_receive=float(costs.get("localRecv", 0.0)),
                    local_send=float(costs.get("localSend", 0.0)),
                    internet_receive=float(costs.get("inetRecv", 0.0)),
                    internet_send=float(costs.get("inetSend", 0.0)),
                )
            )
    return define_formation(components, links, estimates)


def load_formation(path: str | Path) -> Formation:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read formation file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed formation JSON in {path}: {exc}") from exc
    return formation_from_doc(doc)


def serialize_formation(formation: Formation) -> dict[str, Any]:
    """Render a formation into its JSON document form (stable order)."""
    links = []
    for a, b in sorted(formation.interconnections):
        estimate = formation.traffic_for(a, b)
        links.append(
            {
                "a": a,
                "b": b,
                "costs": {
                    "localRecv": estimate.local_receive,
                    "localSend": estimate.local_send,
                    "inetRecv": estimate.internet_receive,
                    "inetSend": estimate.internet_send,
                },
            }
        )
    return {
        "components": [{"id": c.id, "feature": c.software_feature} for c in formation.components],
        "links": links,
    }
