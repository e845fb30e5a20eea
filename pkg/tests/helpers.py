"""Random fixture generation and the engine adapter for oracle checks.

A fixture is plain data (dicts, lists, sets). The oracle consumes it
directly; :func:`run_engine` converts it into engine objects and runs
the real pipeline, so both sides start from the same numbers but share
no computation.
"""

from __future__ import annotations

import random
from typing import Any

from formation_genius import (
    Catalog,
    CombinationPolicy,
    CombineOperator,
    CommittedSolution,
    Component,
    CriteriaHierarchy,
    CriterionLeaf,
    GoalNode,
    Influence,
    TrafficCostEstimate,
    catalog_from_doc,
    combine,
    define_formation,
    evaluate_images,
    evaluate_services,
    filter_alternatives,
)

IMAGE_NUMERIC_ATTRS = ["Hourly License Price", "Popularity", "Age", "OS Version", "Software Version"]
SERVICE_NUMERIC_ATTRS = ["Hourly CPU Price", "CPU Cores", "RAM Size", "Uptime", "Avg. Latency"]
TEXT_ATTRS = ["Virtualization Format", "Operating System (OS)"]
TEXT_POOLS = {
    "Virtualization Format": ["Xen", "VMWare", "KVM"],
    "Operating System (OS)": ["Linux", "Windows"],
}
_PERCENT_ATTRS = {"Popularity", "Uptime", "Service Popularity"}


def _random_numericals(rng: random.Random, attrs: list[str], drop_rate: float) -> dict[str, float]:
    out = {}
    for attr in attrs:
        if rng.random() < drop_rate:
            continue
        cap = 100.0 if attr in _PERCENT_ATTRS else 50.0
        out[attr] = round(rng.uniform(0.0, cap), 4)
    return out


def _random_leaves(rng: random.Random, attrs: list[str]) -> list[dict[str, Any]]:
    count = rng.randint(1, min(4, len(attrs)))
    chosen = rng.sample(attrs, count)
    weights = [rng.uniform(0.1, 1.0) for _ in chosen]
    total = sum(weights)
    return [
        {"attr": attr, "influence": rng.choice("+-"), "weight": weight / total}
        for attr, weight in zip(chosen, weights)
    ]


SERVICE_TEXT_POOLS = {
    "Provider": ["aws", "rack", "joyent"],
    "Location Country": ["Germany", "Australia"],
    # Image-only attribute: requirements on it always fail for services,
    # exercising the fail-closed path and the relaxation loop.
    "Virtualization Format": ["Xen", "VMWare"],
}


def _random_requirements(
    rng: random.Random,
    numeric_attrs: list[str],
    text_pools: dict[str, list[str]],
    max_count: int,
) -> list[dict]:
    reqs = []
    text_attrs = list(text_pools)
    for _ in range(rng.randint(0, max_count)):
        roll = rng.random()
        if roll < 0.4:
            reqs.append({"attr": rng.choice(numeric_attrs), "kind": "max", "value": round(rng.uniform(5, 80), 3)})
        elif roll < 0.8:
            reqs.append({"attr": rng.choice(numeric_attrs), "kind": "min", "value": round(rng.uniform(0, 40), 3)})
        elif roll < 0.9:
            attr = rng.choice(text_attrs)
            reqs.append({"attr": attr, "kind": "equals", "value": rng.choice(text_pools[attr])})
        else:
            attr = rng.choice(text_attrs)
            pool = text_pools[attr]
            reqs.append({"attr": attr, "kind": "oneOf", "values": rng.sample(pool, rng.randint(1, len(pool)))})
    return reqs


def random_fixture(
    rng: random.Random,
    max_images: int = 10,
    max_services: int = 10,
    max_components: int = 4,
    with_requirements: bool = True,
    drop_rate: float = 0.05,
) -> dict[str, Any]:
    m = rng.randint(2, max_images)
    n = rng.randint(2, max_services)

    images = []
    for i in range(m):
        images.append(
            {
                "id": f"i{i:02d}",
                "numerical": _random_numericals(rng, IMAGE_NUMERIC_ATTRS, drop_rate),
                "nonNumerical": {attr: rng.choice(TEXT_POOLS[attr]) for attr in TEXT_ATTRS},
            }
        )
    services = []
    for j in range(n):
        services.append(
            {
                "id": f"s{j:02d}",
                "numerical": _random_numericals(rng, SERVICE_NUMERIC_ATTRS, drop_rate),
                "nonNumerical": {
                    "Provider": rng.choice(["aws", "rack", "joyent"]),
                    "Location Country": rng.choice(["Germany", "Australia"]),
                },
            }
        )

    image_ids = [i["id"] for i in images]
    service_ids = [s["id"] for s in services]
    deployable = {
        (i, s) for i in image_ids for s in service_ids if rng.random() < rng.uniform(0.3, 1.0)
    }
    image_compat = {
        (image_ids[a], image_ids[b])
        for a in range(m)
        for b in range(a, m)
        if rng.random() < 0.85
    }
    service_compat = {
        (service_ids[a], service_ids[b])
        for a in range(n)
        for b in range(a, n)
        if rng.random() < 0.85
    }

    neighbor_count = rng.randint(0, max_components - 1)
    neighbors = []
    for k in range(neighbor_count):
        service = rng.choice(services)
        neighbors.append(
            {
                "componentId": f"nb{k}",
                "image": rng.choice(image_ids),
                "service": {
                    "id": service["id"],
                    "provider": service["nonNumerical"]["Provider"],
                    "location": service["nonNumerical"]["Location Country"],
                },
                "costs": {
                    "localRecv": round(rng.uniform(0, 0.5), 4),
                    "localSend": round(rng.uniform(0, 0.5), 4),
                    "inetRecv": round(rng.uniform(0, 0.5), 4),
                    "inetSend": round(rng.uniform(0, 0.5), 4),
                },
            }
        )

    image_weight = round(rng.uniform(0.1, 0.9), 4)
    return {
        "images": images,
        "services": services,
        "D": deployable,
        "E": image_compat,
        "F": service_compat,
        "neighbors": neighbors,
        "imageReqs": _random_requirements(rng, IMAGE_NUMERIC_ATTRS, TEXT_POOLS, 3) if with_requirements else [],
        "serviceReqs": _random_requirements(rng, SERVICE_NUMERIC_ATTRS, SERVICE_TEXT_POOLS, 3) if with_requirements else [],
        "imageLeaves": _random_leaves(rng, IMAGE_NUMERIC_ATTRS),
        "serviceLeaves": _random_leaves(rng, SERVICE_NUMERIC_ATTRS),
        "policy": {
            "op": rng.choice(["sum", "product"]),
            "wi": image_weight,
            "ws": round(1.0 - image_weight, 4),
            "applyDelta": rng.random() < 0.7,
        },
        "unrelatedCommitted": rng.random() < 0.3,
    }


def fixture_catalog(fixture: dict[str, Any]) -> Catalog:
    doc = {
        "providers": [
            {"id": p, "name": p.upper()} for p in ("aws", "rack", "joyent")
        ],
        "images": [
            {
                "id": img["id"],
                "feature": "Web Server",
                "numerical": img["numerical"],
                "nonNumerical": img["nonNumerical"],
            }
            for img in fixture["images"]
        ],
        "services": [
            {
                "id": svc["id"],
                "provider": svc["nonNumerical"]["Provider"],
                "location": svc["nonNumerical"]["Location Country"],
                "numerical": svc["numerical"],
                "nonNumerical": {},
            }
            for svc in fixture["services"]
        ],
        "compat": {
            "imageService": [list(p) for p in sorted(fixture["D"])],
            "imageImage": [list(p) for p in sorted(fixture["E"])],
            "serviceService": [list(p) for p in sorted(fixture["F"])],
        },
    }
    return catalog_from_doc(doc)


def fixture_formation(fixture: dict[str, Any]):
    """Target component plus one linked component per committed neighbor."""
    components = [Component("target", "Web Server")]
    links = []
    estimates = []
    for nb in fixture.get("neighbors", []):
        components.append(Component(nb["componentId"], "Web Server"))
        links.append(("target", nb["componentId"]))
        costs = nb["costs"]
        estimates.append(
            TrafficCostEstimate(
                from_component="target",
                to_component=nb["componentId"],
                local_receive=costs["localRecv"],
                local_send=costs["localSend"],
                internet_receive=costs["inetRecv"],
                internet_send=costs["inetSend"],
            )
        )
    if fixture.get("unrelatedCommitted"):
        components.append(Component("loner", "Web Server"))

    formation = define_formation(components, links, estimates)
    for nb in fixture.get("neighbors", []):
        formation.committed[nb["componentId"]] = CommittedSolution(
            component_id=nb["componentId"],
            image_id=nb["image"],
            service_id=nb["service"]["id"],
            score=1.0,
        )
    if fixture.get("unrelatedCommitted"):
        first_image = fixture["images"][0]["id"]
        first_service = fixture["services"][0]["id"]
        formation.committed["loner"] = CommittedSolution(
            component_id="loner", image_id=first_image, service_id=first_service, score=1.0
        )
    return formation


def _hierarchy(leaves: list[dict[str, Any]], root_id: str) -> CriteriaHierarchy:
    nodes = tuple(
        CriterionLeaf(
            id=f"{root_id}-leaf{i}",
            attribute_key=leaf["attr"],
            influence=Influence.POSITIVE if leaf["influence"] == "+" else Influence.NEGATIVE,
        )
        for i, leaf in enumerate(leaves)
    )
    return CriteriaHierarchy(GoalNode(root_id, nodes))


def _weights(leaves: list[dict[str, Any]], root_id: str) -> dict[str, float]:
    return {f"{root_id}-leaf{i}": leaf["weight"] for i, leaf in enumerate(leaves)}


def _requirement_objects(docs: list[dict]):
    from formation_genius.requirements import parse_requirement

    return tuple(parse_requirement(d) for d in docs)


def run_engine(fixture: dict[str, Any]) -> dict[str, Any]:
    """Run filter -> evaluate -> combine on the fixture, returning plain data."""
    catalog = fixture_catalog(fixture)
    formation = fixture_formation(fixture)

    image_outcome = filter_alternatives(_requirement_objects(fixture["imageReqs"]), list(catalog.images))
    service_outcome = filter_alternatives(_requirement_objects(fixture["serviceReqs"]), list(catalog.services))

    image_ranking = evaluate_images(
        catalog, image_outcome, _hierarchy(fixture["imageLeaves"], "img"),
        _weights(fixture["imageLeaves"], "img"),
    )
    service_ranking = evaluate_services(
        catalog, service_outcome, _hierarchy(fixture["serviceLeaves"], "svc"),
        _weights(fixture["serviceLeaves"], "svc"),
    )

    policy = CombinationPolicy(
        operator=CombineOperator(fixture["policy"]["op"]),
        image_weight=fixture["policy"]["wi"],
        service_weight=fixture["policy"]["ws"],
        apply_network_delta=fixture["policy"]["applyDelta"],
    )
    combined = combine(image_ranking, service_ranking, formation, "target", catalog, policy)
    return {
        "imageRanking": image_ranking,
        "serviceRanking": service_ranking,
        "combined": combined,
        "imageOutcome": image_outcome,
        "serviceOutcome": service_outcome,
    }


def close(a: float, b: float, tol: float = 1e-9) -> bool:
    """Absolute for small magnitudes, relative beyond 1."""
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))
