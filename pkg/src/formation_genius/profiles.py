"""Per-component preference profiles and their JSON document form.

A profile bundles everything an engineer states for one component:
requirements for images and services, the (possibly pruned or custom)
criteria hierarchies with one pairwise matrix per internal node, the
image-versus-service importance, the combination policy and the
evaluation mode. Documents omit what they leave at the defaults:
missing matrices mean all-equal comparisons, a missing hierarchy means
the built-in one.

Matrix entries coming from documents must sit on the discrete judgment
scale (integers 1..9 and their reciprocals); reciprocity itself is
enforced by the matrix type.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Mapping

from . import ahp
from . import catalog as cat
from .combination import CombinationPolicy, CombineOperator
from .errors import ParseError, ValidationError
from .requirements import Requirement, parse_requirement, requirement_to_doc

_SCALE_TOL = 1e-6


class EvaluationMode(str, Enum):
    STEPWISE = "stepwise"
    INTEGRATED = "integrated"


@dataclass(frozen=True)
class SidePreferences:
    """Requirements, hierarchy and comparisons for one side (image or service)."""

    requirements: tuple[Requirement, ...]
    hierarchy: ahp.CriteriaHierarchy
    matrices: Mapping[str, ahp.PairwiseMatrix]
    relax: bool = True

    def global_weights(self) -> dict[str, float]:
        return ahp.global_weights(self.hierarchy, self.matrices)


@dataclass(frozen=True)
class PreferenceProfile:
    image: SidePreferences
    service: SidePreferences
    policy: CombinationPolicy = field(default_factory=CombinationPolicy)
    mode: EvaluationMode = EvaluationMode.STEPWISE

    def integrated_hierarchy(self) -> ahp.CriteriaHierarchy:
        return ahp.integrated_hierarchy(self.image.hierarchy, self.service.hierarchy)

    def integrated_matrices(self) -> dict[str, ahp.PairwiseMatrix]:
        """Side matrices plus a top-level comparison from the policy weights."""
        ratio = self.policy.image_weight / self.policy.service_weight
        ratio = min(max(ratio, ahp.SAATY_MIN), ahp.SAATY_MAX)
        top = ahp.PairwiseMatrix.from_rows([[1.0, ratio], [1.0 / ratio, 1.0]])
        merged: dict[str, ahp.PairwiseMatrix] = {"combined-value": top}
        merged.update(self.image.matrices)
        merged.update(self.service.matrices)
        return merged

    def consistency_warnings(self) -> list[str]:
        merged = dict(self.image.matrices)
        merged.update(self.service.matrices)
        return ahp.consistency_warnings(merged)


def default_profile() -> PreferenceProfile:
    """No requirements, built-in hierarchies, all-equal comparisons."""
    image_h = ahp.default_image_hierarchy()
    service_h = ahp.default_service_hierarchy()
    return PreferenceProfile(
        image=SidePreferences((), image_h, ahp.equal_matrices(image_h)),
        service=SidePreferences((), service_h, ahp.equal_matrices(service_h)),
    )


def _check_scale(rows: list[list[float]], node_id: str) -> None:
    for row in rows:
        for value in row:
            if not any(abs(value - scale) <= _SCALE_TOL for scale in ahp.SAATY_SCALE):
                raise ValidationError(
                    f"matrix for {node_id!r}: entry {value!r} is not on the judgment scale "
                    "(1..9 or a reciprocal)"
                )


def _parse_matrices(doc: Mapping[str, Any], hierarchy: ahp.CriteriaHierarchy) -> dict[str, ahp.PairwiseMatrix]:
    matrices = ahp.equal_matrices(hierarchy)
    raw = doc.get("matrices", {})
    if not isinstance(raw, Mapping):
        raise ParseError("'matrices' must map node ids to row-major arrays")
    known = {node.id for node in hierarchy.internal_nodes()}
    for node_id, rows in raw.items():
        if node_id not in known:
            raise ValidationError(f"matrix supplied for unknown hierarchy node {node_id!r}")
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise ParseError(f"matrix for {node_id!r} must be a row-major array of arrays")
        parsed = [[float(v) for v in r] for r in rows]
        _check_scale(parsed, node_id)
        matrices[node_id] = ahp.PairwiseMatrix.from_rows(parsed)
    return matrices


_INFLUENCE_BY_KEY: dict[str, cat.Influence] = {}
for _specs in cat.builtin_attribute_specs():
    for _spec in _specs.numerical:
        _INFLUENCE_BY_KEY.setdefault(_spec.key, _spec.influence)


def _parse_tree(node_doc: Mapping[str, Any]) -> ahp.GoalNode | ahp.CriterionLeaf:
    if not isinstance(node_doc, Mapping) or "id" not in node_doc:
        raise ParseError("hierarchy nodes need an 'id'")
    node_id = str(node_doc["id"])
    if "attr" in node_doc:
        attr = str(node_doc["attr"])
        influence_doc = node_doc.get("influence")
        if influence_doc is not None:
            influence = cat.Influence(str(influence_doc))
        else:
            influence = _INFLUENCE_BY_KEY.get(attr, cat.Influence.NONE)
        return ahp.CriterionLeaf(id=node_id, attribute_key=attr, influence=influence)
    children_doc = node_doc.get("children")
    if not isinstance(children_doc, list) or not children_doc:
        raise ParseError(f"goal node {node_id!r} needs a non-empty 'children' list")
    return ahp.GoalNode(node_id, tuple(_parse_tree(c) for c in children_doc))


def _parse_side(
    doc: Mapping[str, Any] | None,
    default_hierarchy: ahp.CriteriaHierarchy,
    side: str,
) -> SidePreferences:
    if doc is None:
        return SidePreferences((), default_hierarchy, ahp.equal_matrices(default_hierarchy))
    if not isinstance(doc, Mapping):
        raise ParseError(f"'{side}' preferences must be an object")

    requirements = tuple(parse_requirement(r) for r in doc.get("requirements", []))

    hierarchy = default_hierarchy
    if "hierarchy" in doc:
        root = _parse_tree(doc["hierarchy"])
        if isinstance(root, ahp.CriterionLeaf):
            raise ParseError(f"'{side}' hierarchy root must be a goal node")
        hierarchy = ahp.CriteriaHierarchy(root)
    if "select" in doc:
        select = doc["select"]
        if not isinstance(select, list):
            raise ParseError(f"'{side}' select must be a list of node ids")
        hierarchy = hierarchy.prune(str(s) for s in select)

    relax = doc.get("relax", True)
    if not isinstance(relax, bool):
        raise ParseError(f"'{side}' relax must be a boolean")
    return SidePreferences(requirements, hierarchy, _parse_matrices(doc, hierarchy), relax)


def _parse_policy(doc: Mapping[str, Any] | None) -> CombinationPolicy:
    if doc is None:
        return CombinationPolicy()
    if not isinstance(doc, Mapping):
        raise ParseError("'combination' must be an object")
    policy = CombinationPolicy()
    if "comparison" in doc:
        rows = doc["comparison"]
        if not isinstance(rows, list):
            raise ParseError("'comparison' must be a 2x2 row-major array")
        parsed = [[float(v) for v in r] for r in rows]
        _check_scale(parsed, "combination")
        matrix = ahp.PairwiseMatrix.from_rows(parsed)
        if matrix.order != 2:
            raise ValidationError("image-versus-service comparison must have order 2")
        image_weight, service_weight = ahp.derive_weights(matrix)
        policy = replace(policy, image_weight=image_weight, service_weight=service_weight)
    elif "imageWeight" in doc:
        image_weight = float(doc["imageWeight"])
        service_weight = float(doc.get("serviceWeight", 1.0 - image_weight))
        policy = replace(policy, image_weight=image_weight, service_weight=service_weight)
    if "operator" in doc:
        try:
            policy = replace(policy, operator=CombineOperator(str(doc["operator"])))
        except ValueError:
            raise ParseError(f"unknown combination operator {doc['operator']!r}") from None
    if "applyNetworkDelta" in doc:
        if not isinstance(doc["applyNetworkDelta"], bool):
            raise ParseError("'applyNetworkDelta' must be a boolean")
        policy = replace(policy, apply_network_delta=doc["applyNetworkDelta"])
    return policy


def parse_profile(doc: Mapping[str, Any] | None) -> PreferenceProfile:
    """Parse a profile document, defaulting every omitted part."""
    if doc is None:
        return default_profile()
    if not isinstance(doc, Mapping):
        raise ParseError("preference profile must be a JSON object")
    mode_doc = doc.get("mode", EvaluationMode.STEPWISE.value)
    try:
        mode = EvaluationMode(str(mode_doc))
    except ValueError:
        raise ParseError(f"unknown evaluation mode {mode_doc!r}") from None
    return PreferenceProfile(
        image=_parse_side(doc.get("image"), ahp.default_image_hierarchy(), "image"),
        service=_parse_side(doc.get("service"), ahp.default_service_hierarchy(), "service"),
        policy=_parse_policy(doc.get("combination")),
        mode=mode,
    )


def _tree_to_doc(node: ahp.GoalNode | ahp.CriterionLeaf) -> dict[str, Any]:
    if isinstance(node, ahp.CriterionLeaf):
        return {"id": node.id, "attr": node.attribute_key, "influence": node.influence.value}
    return {"id": node.id, "children": [_tree_to_doc(c) for c in node.children]}


def _side_to_doc(side: SidePreferences) -> dict[str, Any]:
    return {
        "requirements": [requirement_to_doc(r) for r in side.requirements],
        "hierarchy": _tree_to_doc(side.hierarchy.root),
        "matrices": {
            node_id: [list(row) for row in side.matrices[node_id].rows]
            for node_id in sorted(side.matrices)
        },
        "relax": side.relax,
    }


def profile_to_doc(profile: PreferenceProfile) -> dict[str, Any]:
    """Full document form; parse_profile(profile_to_doc(p)) == p."""
    return {
        "mode": profile.mode.value,
        "image": _side_to_doc(profile.image),
        "service": _side_to_doc(profile.service),
        "combination": {
            "operator": profile.policy.operator.value,
            "imageWeight": profile.policy.image_weight,
            "serviceWeight": profile.policy.service_weight,
            "applyNetworkDelta": profile.policy.apply_network_delta,
        },
    }
