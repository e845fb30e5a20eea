"""Hierarchies, pairwise comparisons, priority weights and consistency.

Priority weights come from the row geometric means of a reciprocal
pairwise comparison matrix, normalized to sum 1. For consistent
matrices this coincides with the principal eigenvector and recovers the
generating ratio vector exactly; unlike eigeniteration it is
closed-form and deterministic.

The consistency ratio follows the usual construction: lambda_max is
estimated from the derived weights, the consistency index
(lambda_max - n) / (n - 1) is divided by the random index for order n.
Matrices of order 2 or less are always consistent (ratio 0). Ratios
above 0.1 are reported as warnings downstream, never as rejections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from . import catalog as cat
from .errors import InvalidMatrix, MissingMatrix, NegativeValue, ValidationError

SAATY_MIN = 1.0 / 9.0
SAATY_MAX = 9.0
_RECIPROCITY_TOL = 1e-9

# Saaty's random consistency indices by matrix order; orders beyond the
# table reuse the largest published value.
RANDOM_INDEX = {
    1: 0.0, 2: 0.0, 3: 0.58, 4: 0.90, 5: 1.12,
    6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45, 10: 1.49,
}

# Discrete judgment scale accepted from preference documents: the nine
# integer strengths and their reciprocals.
SAATY_SCALE = tuple(sorted({float(k) for k in range(1, 10)} | {1.0 / k for k in range(1, 10)}))


@dataclass(frozen=True)
class PairwiseMatrix:
    """Square reciprocal comparison matrix on the Saaty scale."""

    rows: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.rows)
        if n == 0 or any(len(row) != n for row in self.rows):
            raise InvalidMatrix("comparison matrix must be square and non-empty")
        for i in range(n):
            if abs(self.rows[i][i] - 1.0) > _RECIPROCITY_TOL:
                raise InvalidMatrix(f"diagonal entry [{i}][{i}] must be 1")
            for j in range(n):
                value = self.rows[i][j]
                if not (SAATY_MIN - _RECIPROCITY_TOL <= value <= SAATY_MAX + _RECIPROCITY_TOL):
                    raise InvalidMatrix(
                        f"entry [{i}][{j}] = {value:g} outside the [1/9, 9] judgment scale"
                    )
                if abs(value - 1.0 / self.rows[j][i]) > _RECIPROCITY_TOL:
                    raise InvalidMatrix(f"entries [{i}][{j}] and [{j}][{i}] are not reciprocal")

    @property
    def order(self) -> int:
        return len(self.rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "PairwiseMatrix":
        return cls(tuple(tuple(float(v) for v in row) for row in rows))

    @classmethod
    def equal(cls, order: int) -> "PairwiseMatrix":
        """All-ones matrix: every item judged equally important."""
        return cls(tuple(tuple(1.0 for _ in range(order)) for _ in range(order)))

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=float)


def derive_weights(matrix: PairwiseMatrix) -> list[float]:
    """Priority weights: normalized row geometric means."""
    arr = matrix.as_array()
    means = np.exp(np.mean(np.log(arr), axis=1))
    weights = means / means.sum()
    return [float(w) for w in weights]


def consistency_ratio(matrix: PairwiseMatrix) -> float:
    """CR = CI / RI with lambda_max estimated from the derived weights."""
    n = matrix.order
    if n <= 2:
        return 0.0
    arr = matrix.as_array()
    weights = np.array(derive_weights(matrix))
    lambda_max = float(np.mean((arr @ weights) / weights))
    ci = (lambda_max - n) / (n - 1)
    ri = RANDOM_INDEX.get(n, RANDOM_INDEX[10])
    return max(ci / ri, 0.0)


def normalize_criterion(
    values: Union[Mapping[str, float], Iterable[tuple[str, float]]],
) -> dict[str, float]:
    """Distributive normalization: each value divided by the total.

    Outputs sum to 1; an all-zero input degenerates to the uniform
    1/N distribution so that the criterion becomes indifferent.
    """
    pairs = list(values.items()) if isinstance(values, Mapping) else list(values)
    for key, value in pairs:
        if value < 0:
            raise NegativeValue(f"criterion value for {key!r} is negative ({value:g})")
    total = sum(v for _, v in pairs)
    if total == 0:
        n = len(pairs)
        return {key: 1.0 / n for key, _ in pairs}
    return {key: value / total for key, value in pairs}


@dataclass(frozen=True)
class CriterionLeaf:
    """Leaf criterion bound to one influential attribute."""

    id: str
    attribute_key: str
    influence: cat.Influence

    def __post_init__(self) -> None:
        if self.influence is cat.Influence.NONE:
            raise ValidationError(
                f"criterion {self.id!r}: attribute {self.attribute_key!r} has no influence "
                "direction and cannot be scored"
            )


@dataclass(frozen=True)
class GoalNode:
    id: str
    children: tuple["HierarchyNode", ...]


HierarchyNode = Union[GoalNode, CriterionLeaf]


@dataclass(frozen=True)
class CriteriaHierarchy:
    """Acyclic goal tree whose leaves are influential attributes."""

    root: GoalNode

    def __post_init__(self) -> None:
        ids: set[str] = set()
        stack: list[HierarchyNode] = [self.root]
        while stack:
            node = stack.pop()
            if node.id in ids:
                raise ValidationError(f"duplicate hierarchy node id {node.id!r}")
            ids.add(node.id)
            if isinstance(node, GoalNode):
                if not node.children:
                    raise ValidationError(f"goal node {node.id!r} has no children")
                stack.extend(node.children)

    def leaves(self) -> tuple[CriterionLeaf, ...]:
        out: list[CriterionLeaf] = []

        def walk(node: HierarchyNode) -> None:
            if isinstance(node, CriterionLeaf):
                out.append(node)
            else:
                for child in node.children:
                    walk(child)

        walk(self.root)
        return tuple(out)

    def internal_nodes(self) -> tuple[GoalNode, ...]:
        out: list[GoalNode] = []

        def walk(node: HierarchyNode) -> None:
            if isinstance(node, GoalNode):
                out.append(node)
                for child in node.children:
                    walk(child)

        walk(self.root)
        return tuple(out)

    def prune(self, keep_ids: Iterable[str]) -> "CriteriaHierarchy":
        """Keep only the subtrees selected by id (a kept goal keeps its subtree)."""
        keep = set(keep_ids)

        def rebuild(node: HierarchyNode, kept: bool) -> HierarchyNode | None:
            kept = kept or node.id in keep
            if isinstance(node, CriterionLeaf):
                return node if kept else None
            children = tuple(c for c in (rebuild(ch, kept) for ch in node.children) if c is not None)
            if not children:
                return None
            return GoalNode(node.id, children)

        root = rebuild(self.root, self.root.id in keep)
        if root is None or isinstance(root, CriterionLeaf):
            raise ValidationError("hierarchy selection removed every goal node")
        return CriteriaHierarchy(root)


def global_weights(
    hierarchy: CriteriaHierarchy,
    matrices: Mapping[str, PairwiseMatrix],
) -> dict[str, float]:
    """Global leaf weights: products of sibling weights along each path.

    Every internal node with two or more children must have a matrix
    whose order equals its child count; the resulting leaf weights sum
    to 1.
    """
    leaf_weights: dict[str, float] = {}

    def walk(node: HierarchyNode, weight: float) -> None:
        if isinstance(node, CriterionLeaf):
            leaf_weights[node.id] = weight
            return
        if len(node.children) == 1:
            sibling_weights = [1.0]
        else:
            matrix = matrices.get(node.id)
            if matrix is None:
                raise MissingMatrix(f"no pairwise comparisons for goal node {node.id!r}")
            if matrix.order != len(node.children):
                raise InvalidMatrix(
                    f"matrix for {node.id!r} has order {matrix.order}, "
                    f"expected {len(node.children)}"
                )
            sibling_weights = derive_weights(matrix)
        for child, sibling_weight in zip(node.children, sibling_weights):
            walk(child, weight * sibling_weight)

    walk(hierarchy.root, 1.0)
    total = sum(leaf_weights.values())
    if not math.isclose(total, 1.0, abs_tol=1e-9):
        raise ValidationError(f"leaf weights sum to {total!r}, expected 1")
    return leaf_weights


def equal_matrices(hierarchy: CriteriaHierarchy) -> dict[str, PairwiseMatrix]:
    """An all-equal comparison for every internal node (uniform weights)."""
    return {
        node.id: PairwiseMatrix.equal(len(node.children))
        for node in hierarchy.internal_nodes()
        if len(node.children) > 1
    }


def consistency_warnings(matrices: Mapping[str, PairwiseMatrix], threshold: float = 0.1) -> list[str]:
    """Warning strings for every matrix whose consistency ratio exceeds the threshold."""
    out = []
    for node_id in sorted(matrices):
        ratio = consistency_ratio(matrices[node_id])
        if ratio > threshold:
            out.append(
                f"comparisons for {node_id!r} are inconsistent (CR = {ratio:.3f} > {threshold:g})"
            )
    return out


def _slug(key: str) -> str:
    return "".join(ch if ch.isalnum() else "-" for ch in key.lower()).strip("-").replace("--", "-")


def _leaf(key: str, specs: cat.AttributeSpecSet) -> CriterionLeaf:
    spec = specs.numerical_spec(key)
    assert spec is not None
    return CriterionLeaf(id=_slug(key), attribute_key=key, influence=spec.influence)


_SERVICE_COST_KEYS = (
    cat.HOURLY_CPU_PRICE,
    cat.NETWORK_SEND_PRICE,
    cat.NETWORK_RECEIVE_PRICE,
    cat.INTERNET_SEND_PRICE,
    cat.INTERNET_RECEIVE_PRICE,
)
_SERVICE_PERF_KEYS = (
    cat.CPU_PERFORMANCE,
    cat.CPU_CORES,
    cat.RAM_PERFORMANCE,
    cat.RAM_SIZE,
    cat.DISK_PERFORMANCE,
    cat.DISK_SIZE,
)
_SERVICE_LATENCY_KEYS = (cat.MAX_LATENCY, cat.AVG_LATENCY)
_SERVICE_REPUTATION_KEYS = (cat.UPTIME, cat.SERVICE_POPULARITY)


def default_image_hierarchy() -> CriteriaHierarchy:
    """Built-in image criteria, flat: every influential attribute under the goal.

    A flat tree keeps all-equal comparisons equivalent to uniform leaf
    weights; the grouped variant is available for engineers who prefer
    goal-level trade-offs.
    """
    image_specs, _ = cat.builtin_attribute_specs()
    leaves = tuple(
        _leaf(spec.key, image_specs)
        for spec in image_specs.numerical
        if spec.influence is not cat.Influence.NONE
    )
    return CriteriaHierarchy(GoalNode("image-value", leaves))


def default_service_hierarchy() -> CriteriaHierarchy:
    """Built-in service criteria, flat (all fifteen influential attributes)."""
    _, service_specs = cat.builtin_attribute_specs()
    leaves = tuple(_leaf(spec.key, service_specs) for spec in service_specs.numerical)
    return CriteriaHierarchy(GoalNode("service-value", leaves))


def grouped_image_hierarchy() -> CriteriaHierarchy:
    """Image criteria grouped into cost and reputation goals."""
    image_specs, _ = cat.builtin_attribute_specs()
    return CriteriaHierarchy(
        GoalNode(
            "image-value",
            (
                GoalNode("image-cost", (_leaf(cat.HOURLY_LICENSE_PRICE, image_specs),)),
                GoalNode(
                    "image-reputation",
                    (_leaf(cat.POPULARITY, image_specs), _leaf(cat.AGE, image_specs)),
                ),
            ),
        )
    )


def grouped_service_hierarchy() -> CriteriaHierarchy:
    """Service criteria grouped into cost, performance, latency, reputation."""
    _, service_specs = cat.builtin_attribute_specs()
    return CriteriaHierarchy(
        GoalNode(
            "service-value",
            (
                GoalNode("service-cost", tuple(_leaf(k, service_specs) for k in _SERVICE_COST_KEYS)),
                GoalNode("service-performance", tuple(_leaf(k, service_specs) for k in _SERVICE_PERF_KEYS)),
                GoalNode("service-latency", tuple(_leaf(k, service_specs) for k in _SERVICE_LATENCY_KEYS)),
                GoalNode(
                    "service-reputation",
                    tuple(_leaf(k, service_specs) for k in _SERVICE_REPUTATION_KEYS),
                ),
            ),
        )
    )


def integrated_hierarchy(
    image_hierarchy: CriteriaHierarchy,
    service_hierarchy: CriteriaHierarchy,
    root_id: str = "combined-value",
) -> CriteriaHierarchy:
    """Single tree with the image and service trees as the two subtrees."""
    return CriteriaHierarchy(
        GoalNode(root_id, (image_hierarchy.root, service_hierarchy.root))
    )
