"""Session orchestration for the component-wise migration loop.

A session owns one formation and walks it component by component:
select a pending component, state preferences, evaluate, inspect,
re-evaluate as often as desired, then commit an (image, service) pair
and move on. Every step appends one event to an ordered log, so a
recorded session can be replayed against the same catalog and must
reproduce identical results.

Event types: ``defineFormation``, ``selectComponent``,
``setPreferences``, ``evaluate``, ``commit``. Payloads hold document
forms only, never in-memory objects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping

from . import combination as comb
from . import evaluation as ev
from .ahp import global_weights
from .catalog import Catalog
from .errors import (
    AlreadyCommitted,
    InfeasibleSelection,
    NotEvaluated,
    ParseError,
    UnknownComponent,
    ValidationError,
)
from .formation import CommittedSolution, Formation, formation_from_doc
from .profiles import EvaluationMode, PreferenceProfile, parse_profile, profile_to_doc
from .requirements import filter_alternatives

Clock = Callable[[], str]


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


@dataclass(frozen=True)
class HistoryEntry:
    component_id: str
    solution: CommittedSolution
    at: str


@dataclass
class EvaluationRun:
    """The last evaluation of the pending component, kept for commit checks."""

    component_id: str
    mode: EvaluationMode
    image_ranking: list[ev.ScoredAlternative]
    service_ranking: list[ev.ScoredAlternative]
    combined: list[comb.CombinedSolution]
    result_doc: dict[str, Any]


@dataclass
class SessionState:
    """One engineer's in-progress migration."""

    session_id: str
    catalog: Catalog
    formation: Formation
    pending_component: str | None = None
    pending_candidates: tuple[str, ...] = ()
    last_results: EvaluationRun | None = None
    history: list[HistoryEntry] = field(default_factory=list)
    preferences: dict[str, PreferenceProfile] = field(default_factory=dict)
    events: list[dict[str, Any]] = field(default_factory=list)
    run_log: list[dict[str, Any]] = field(default_factory=list)
    clock: Clock = _utc_now

    def _record(self, event_type: str, payload: Mapping[str, Any], at: str | None = None) -> None:
        self.events.append(
            {"type": event_type, "payload": dict(payload), "at": at or self.clock()}
        )


def create_session(
    catalog: Catalog,
    formation_doc: Mapping[str, Any],
    session_id: str,
    clock: Clock = _utc_now,
    at: str | None = None,
) -> SessionState:
    """Start a session from a formation document (records defineFormation)."""
    session = SessionState(
        session_id=session_id,
        catalog=catalog,
        formation=formation_from_doc(formation_doc),
        clock=clock,
    )
    session._record(
        "defineFormation",
        {"sessionId": session_id, "formation": dict(formation_doc)},
        at=at,
    )
    return session


def redefine_formation(
    session: SessionState, formation_doc: Mapping[str, Any], at: str | None = None
) -> SessionState:
    """Replace the formation; only allowed before any commitment exists."""
    if session.history or session.formation.committed:
        raise ValidationError("formation cannot be redefined after a commit")
    session.formation = formation_from_doc(formation_doc)
    session.pending_component = None
    session.pending_candidates = ()
    session.last_results = None
    session._record(
        "defineFormation",
        {"sessionId": session.session_id, "formation": dict(formation_doc)},
        at=at,
    )
    return session


def select_component(session: SessionState, component_id: str, at: str | None = None) -> SessionState:
    """Make a component pending and pre-filter images by its feature."""
    component = session.formation.component(component_id)
    if component_id in session.formation.committed:
        raise AlreadyCommitted(f"component {component_id!r} already has a committed solution")
    candidates = session.catalog.images_with_feature(component.software_feature)
    session.pending_component = component_id
    session.pending_candidates = tuple(sorted(i.id for i in candidates))
    session.last_results = None
    session._record("selectComponent", {"component": component_id}, at=at)
    return session


def set_preferences(
    session: SessionState,
    component_id: str,
    profile_doc: Mapping[str, Any] | None,
    at: str | None = None,
) -> SessionState:
    """Parse and store a preference profile for a component."""
    if not session.formation.has_component(component_id):
        raise UnknownComponent(f"unknown component {component_id!r}")
    session.preferences[component_id] = parse_profile(profile_doc)
    session._record(
        "setPreferences",
        {"component": component_id, "preferences": dict(profile_doc) if profile_doc else None},
        at=at,
    )
    return session


def evaluate_pending(
    session: SessionState,
    profile: PreferenceProfile | None = None,
    at: str | None = None,
) -> EvaluationRun:
    """Run the full pipeline for the pending component and store the results.

    Repeating the call with unchanged inputs reproduces the identical
    run; the session is not otherwise modified.
    """
    if session.pending_component is None:
        raise UnknownComponent("no component selected for evaluation")
    component_id = session.pending_component
    if profile is None:
        profile = session.preferences.get(component_id)
        if profile is None:
            raise NotEvaluated(f"no preferences stated for component {component_id!r}")
    else:
        # Record the profile as its own event, otherwise a replayed log
        # would evaluate with whatever preferences were stored before.
        session.preferences[component_id] = profile
        session._record(
            "setPreferences",
            {"component": component_id, "preferences": profile_to_doc(profile)},
            at=at,
        )

    run = _run_pipeline(session.catalog, session.formation, component_id,
                        session.pending_candidates, profile)
    session.last_results = run
    session.run_log.append(run.result_doc)
    session._record("evaluate", {"component": component_id}, at=at)
    return run


def _run_pipeline(
    catalog: Catalog,
    formation: Formation,
    component_id: str,
    candidate_image_ids: Iterable[str],
    profile: PreferenceProfile,
) -> EvaluationRun:
    images = [catalog.image(i) for i in candidate_image_ids]
    services = list(catalog.services)

    image_outcome = filter_alternatives(profile.image.requirements, images)
    service_outcome = filter_alternatives(
        profile.service.requirements, services,
        max_level=None if profile.service.relax else 0,
    )

    warnings = list(profile.consistency_warnings())
    if not images:
        warnings.append("no catalog image matches the component's software feature")

    if profile.mode is EvaluationMode.INTEGRATED:
        hierarchy = profile.integrated_hierarchy()
        weights = global_weights(hierarchy, profile.integrated_matrices())
        combined = comb.integrated_evaluate(
            catalog, image_outcome, service_outcome, hierarchy, weights,
            formation, component_id,
            apply_network_delta=profile.policy.apply_network_delta,
        )
        image_ranking: list[ev.ScoredAlternative] = []
        service_ranking: list[ev.ScoredAlternative] = []
    else:
        image_ranking = ev.evaluate_images(
            catalog, image_outcome, profile.image.hierarchy, profile.image.global_weights()
        )
        service_ranking = ev.evaluate_services(
            catalog, service_outcome, profile.service.hierarchy, profile.service.global_weights()
        )
        combined = comb.combine(
            image_ranking, service_ranking, formation, component_id, catalog, profile.policy
        )

    result_doc = build_result_doc(
        component_id, profile, image_outcome, service_outcome,
        image_ranking, service_ranking, combined, warnings,
    )
    return EvaluationRun(
        component_id=component_id,
        mode=profile.mode,
        image_ranking=image_ranking,
        service_ranking=service_ranking,
        combined=combined,
        result_doc=result_doc,
    )


def _ranking_doc(ranking: list[ev.ScoredAlternative]) -> list[dict[str, Any]]:
    return [
        {
            "id": s.alternative_id,
            "score": s.score,
            "raw": s.raw_score,
            "relaxationLevel": s.relaxation_level,
            "warnings": list(s.warnings),
        }
        for s in ranking
    ]


def build_result_doc(
    component_id: str,
    profile: PreferenceProfile,
    image_outcome,
    service_outcome,
    image_ranking,
    service_ranking,
    combined,
    warnings: list[str],
) -> dict[str, Any]:
    """Canonical evaluation result document (stable field order)."""
    return {
        "component": component_id,
        "mode": profile.mode.value,
        "policy": {
            "operator": profile.policy.operator.value,
            "imageWeight": profile.policy.image_weight,
            "serviceWeight": profile.policy.service_weight,
            "applyNetworkDelta": profile.policy.apply_network_delta,
        },
        "relaxation": {
            "image": image_outcome.relaxation_level,
            "service": service_outcome.relaxation_level,
        },
        "images": {"alternatives": _ranking_doc(image_ranking)},
        "services": {"alternatives": _ranking_doc(service_ranking)},
        "combinations": [
            {
                "image": c.image_id,
                "service": c.service_id,
                "score": c.combined_score,
                "raw": c.combined_raw,
                "imageScore": c.image_score,
                "serviceScore": c.service_score,
                "delta": c.network_delta,
                "feasible": c.feasible,
            }
            for c in combined
        ],
        "warnings": warnings,
    }


def commit(
    session: SessionState, image_id: str, service_id: str, at: str | None = None
) -> SessionState:
    """Accept a feasible pair from the last results for the pending component."""
    if session.last_results is None or session.pending_component is None:
        raise NotEvaluated("commit requires an evaluation of a pending component first")
    run = session.last_results
    match = next(
        (
            c
            for c in run.combined
            if c.image_id == image_id and c.service_id == service_id
        ),
        None,
    )
    if match is None or not match.feasible:
        raise InfeasibleSelection(
            f"pair ({image_id!r}, {service_id!r}) is not a feasible solution "
            "in the last evaluation"
        )
    timestamp = at or session.clock()
    solution = CommittedSolution(
        component_id=run.component_id,
        image_id=image_id,
        service_id=service_id,
        score=match.combined_score,
    )
    session.formation.committed[run.component_id] = solution
    session.history.append(HistoryEntry(run.component_id, solution, timestamp))
    session.pending_component = None
    session.pending_candidates = ()
    session.last_results = None
    session._record(
        "commit",
        {"component": solution.component_id, "image": image_id, "service": service_id},
        at=timestamp,
    )
    return session


def replay(catalog: Catalog, events: Iterable[Mapping[str, Any]]) -> SessionState:
    """Re-execute a recorded event log; results must come out identical."""
    session: SessionState | None = None
    for event in events:
        event_type = event.get("type")
        payload = event.get("payload", {})
        at = event.get("at")
        if event_type == "defineFormation":
            if session is None:
                session = create_session(
                    catalog, payload["formation"],
                    session_id=payload.get("sessionId", "replayed"),
                    at=at,
                )
            else:
                redefine_formation(session, payload["formation"], at=at)
            continue
        if session is None:
            raise ParseError("event log must start with defineFormation")
        if event_type == "selectComponent":
            select_component(session, payload["component"], at=at)
        elif event_type == "setPreferences":
            set_preferences(session, payload["component"], payload.get("preferences"), at=at)
        elif event_type == "evaluate":
            evaluate_pending(session, at=at)
        elif event_type == "commit":
            commit(session, payload["image"], payload["service"], at=at)
        else:
            raise ParseError(f"unknown event type {event_type!r}")
    if session is None:
        raise ParseError("event log is empty")
    return session


def save_event_log(session: SessionState, path: str | Path) -> None:
    from .jsonio import canonical_line

    with open(path, "w", encoding="utf-8") as handle:
        for event in session.events:
            handle.write(canonical_line(event) + "\n")


def load_event_log(path: str | Path) -> list[dict[str, Any]]:
    events = []
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if line:
                    events.append(json.loads(line))
    except OSError as exc:
        raise ParseError(f"cannot read event log {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed event log {path}: {exc}") from exc
    return events


def history_doc(session: SessionState) -> list[dict[str, Any]]:
    return [
        {
            "component": entry.component_id,
            "image": entry.solution.image_id,
            "service": entry.solution.service_id,
            "score": entry.solution.score,
            "at": entry.at,
        }
        for entry in session.history
    ]
