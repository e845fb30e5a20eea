"""Static world model: providers, VM images, infrastructure services.

The catalog is an immutable snapshot loaded from a single JSON document.
It carries the attribute specifications for the built-in criteria set,
the alternatives themselves, and the three compatibility relations used
by the feasibility checks:

* ``image_service`` - which images are deployable on which services,
* ``image_image``   - which image pairs may coexist in one formation,
* ``service_service`` - same for services.

Unordered relations are stored as normalized (sorted) id pairs and
queried through symmetric membership helpers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Mapping

from .errors import ParseError, ValidationError


class Influence(str, Enum):
    """Direction in which a higher attribute value moves an alternative's worth."""

    POSITIVE = "positive"
    NEGATIVE = "negative"
    NONE = "none"


class Variability(str, Enum):
    STATIC = "static"
    DYNAMIC = "dynamic"


@dataclass(frozen=True)
class ValueRange:
    """Closed or half-open interval of admissible attribute values."""

    lower: float = 0.0
    upper: float | None = None

    def contains(self, value: float) -> bool:
        if value < self.lower:
            return False
        return self.upper is None or value <= self.upper


@dataclass(frozen=True)
class NumericalAttributeSpec:
    key: str
    influence: Influence
    variability: Variability
    metric: str
    value_range: ValueRange = ValueRange()


@dataclass(frozen=True)
class NonNumericalAttributeSpec:
    key: str
    allowed_values: frozenset[str] | None = None
    variability: Variability = Variability.STATIC


# Built-in image attribute keys.
HOURLY_LICENSE_PRICE = "Hourly License Price"
POPULARITY = "Popularity"
AGE = "Age"
OS_VERSION = "OS Version"
SOFTWARE_VERSION = "Software Version"
VIRTUALIZATION_FORMAT = "Virtualization Format"
OPERATING_SYSTEM = "Operating System (OS)"
IMPLEMENTATION_LANGUAGE = "Implementation Language"
SOFTWARE_FEATURE = "Software Feature"
SOFTWARE = "Software"

# Built-in service attribute keys.
HOURLY_CPU_PRICE = "Hourly CPU Price"
NETWORK_SEND_PRICE = "Network Send Price"
NETWORK_RECEIVE_PRICE = "Network Recieve Price"
INTERNET_SEND_PRICE = "Internet Send Price"
INTERNET_RECEIVE_PRICE = "Internet Recieve Price"
CPU_PERFORMANCE = "CPU Perfomance"
CPU_CORES = "CPU Cores"
RAM_PERFORMANCE = "RAM Perfomance"
RAM_SIZE = "RAM Size"
DISK_PERFORMANCE = "Disk Perfomance"
DISK_SIZE = "Disk Size"
MAX_LATENCY = "Max. Latency"
AVG_LATENCY = "Avg. Latency"
UPTIME = "Uptime"
SERVICE_POPULARITY = "Service Popularity"
PROVIDER_ATTR = "Provider"
LOCATION_COUNTRY = "Location Country"

_PERCENT = ValueRange(0.0, 100.0)
_NON_NEGATIVE = ValueRange(0.0, None)

_IMAGE_NUMERICAL = (
    NumericalAttributeSpec(HOURLY_LICENSE_PRICE, Influence.NEGATIVE, Variability.DYNAMIC, "$/h", _NON_NEGATIVE),
    NumericalAttributeSpec(POPULARITY, Influence.POSITIVE, Variability.DYNAMIC, "%", _PERCENT),
    NumericalAttributeSpec(AGE, Influence.POSITIVE, Variability.DYNAMIC, "Days", _NON_NEGATIVE),
    NumericalAttributeSpec(OS_VERSION, Influence.NONE, Variability.STATIC, "Version", _NON_NEGATIVE),
    NumericalAttributeSpec(SOFTWARE_VERSION, Influence.NONE, Variability.STATIC, "Version", _NON_NEGATIVE),
)

_IMAGE_NON_NUMERICAL = (
    NonNumericalAttributeSpec(VIRTUALIZATION_FORMAT),
    NonNumericalAttributeSpec(OPERATING_SYSTEM),
    NonNumericalAttributeSpec(IMPLEMENTATION_LANGUAGE),
    NonNumericalAttributeSpec(SOFTWARE_FEATURE),
    NonNumericalAttributeSpec(SOFTWARE),
)

_SERVICE_NUMERICAL = (
    NumericalAttributeSpec(HOURLY_CPU_PRICE, Influence.NEGATIVE, Variability.DYNAMIC, "$/h", _NON_NEGATIVE),
    NumericalAttributeSpec(NETWORK_SEND_PRICE, Influence.NEGATIVE, Variability.DYNAMIC, "$/B", _NON_NEGATIVE),
    NumericalAttributeSpec(NETWORK_RECEIVE_PRICE, Influence.NEGATIVE, Variability.DYNAMIC, "$/B", _NON_NEGATIVE),
    NumericalAttributeSpec(INTERNET_SEND_PRICE, Influence.NEGATIVE, Variability.DYNAMIC, "$/h", _NON_NEGATIVE),
    NumericalAttributeSpec(INTERNET_RECEIVE_PRICE, Influence.NEGATIVE, Variability.DYNAMIC, "$/B", _NON_NEGATIVE),
    NumericalAttributeSpec(CPU_PERFORMANCE, Influence.POSITIVE, Variability.DYNAMIC, "Flops", _NON_NEGATIVE),
    NumericalAttributeSpec(CPU_CORES, Influence.POSITIVE, Variability.DYNAMIC, "Cores", _NON_NEGATIVE),
    NumericalAttributeSpec(RAM_PERFORMANCE, Influence.POSITIVE, Variability.DYNAMIC, "Flops", _NON_NEGATIVE),
    NumericalAttributeSpec(RAM_SIZE, Influence.POSITIVE, Variability.DYNAMIC, "Bit", _NON_NEGATIVE),
    NumericalAttributeSpec(DISK_PERFORMANCE, Influence.POSITIVE, Variability.DYNAMIC, "Flops", _NON_NEGATIVE),
    NumericalAttributeSpec(DISK_SIZE, Influence.POSITIVE, Variability.DYNAMIC, "Bit", _NON_NEGATIVE),
    NumericalAttributeSpec(MAX_LATENCY, Influence.NEGATIVE, Variability.DYNAMIC, "ms", _NON_NEGATIVE),
    NumericalAttributeSpec(AVG_LATENCY, Influence.NEGATIVE, Variability.DYNAMIC, "ms", _NON_NEGATIVE),
    NumericalAttributeSpec(UPTIME, Influence.POSITIVE, Variability.DYNAMIC, "%", _PERCENT),
    NumericalAttributeSpec(SERVICE_POPULARITY, Influence.POSITIVE, Variability.DYNAMIC, "%", _PERCENT),
)

_SERVICE_NON_NUMERICAL = (
    NonNumericalAttributeSpec(PROVIDER_ATTR),
    NonNumericalAttributeSpec(LOCATION_COUNTRY),
)


@dataclass(frozen=True)
class AttributeSpecSet:
    """Numerical and non-numerical attribute specs for one alternative kind."""

    numerical: tuple[NumericalAttributeSpec, ...]
    non_numerical: tuple[NonNumericalAttributeSpec, ...]

    def numerical_spec(self, key: str) -> NumericalAttributeSpec | None:
        for spec in self.numerical:
            if spec.key == key:
                return spec
        return None

    def non_numerical_spec(self, key: str) -> NonNumericalAttributeSpec | None:
        for spec in self.non_numerical:
            if spec.key == key:
                return spec
        return None


def builtin_attribute_specs() -> tuple[AttributeSpecSet, AttributeSpecSet]:
    """Return the built-in (image, service) attribute specifications."""
    return (
        AttributeSpecSet(_IMAGE_NUMERICAL, _IMAGE_NON_NUMERICAL),
        AttributeSpecSet(_SERVICE_NUMERICAL, _SERVICE_NON_NUMERICAL),
    )


@dataclass(frozen=True)
class Provider:
    id: str
    name: str


@dataclass(frozen=True)
class VmImage:
    """A pre-built VM template providing exactly one software feature."""

    id: str
    software_feature: str
    numerical: Mapping[str, float]
    non_numerical: Mapping[str, str]

    def numeric_value(self, key: str) -> float | None:
        return self.numerical.get(key)

    def text_value(self, key: str) -> str | None:
        if key == SOFTWARE_FEATURE:
            return self.software_feature
        return self.non_numerical.get(key)


@dataclass(frozen=True)
class CloudService:
    """A purchasable compute offering at one provider and location."""

    id: str
    provider_id: str
    location_country: str
    numerical: Mapping[str, float]
    non_numerical: Mapping[str, str]

    def numeric_value(self, key: str) -> float | None:
        return self.numerical.get(key)

    def text_value(self, key: str) -> str | None:
        if key == PROVIDER_ATTR:
            return self.provider_id
        if key == LOCATION_COUNTRY:
            return self.location_country
        return self.non_numerical.get(key)


def _norm_pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class CompatibilitySets:
    """The three feasibility relations, symmetric ones closed under swap."""

    image_service: frozenset[tuple[str, str]]
    image_image: frozenset[tuple[str, str]]
    service_service: frozenset[tuple[str, str]]

    @classmethod
    def from_pairs(
        cls,
        image_service: Iterable[tuple[str, str]] = (),
        image_image: Iterable[tuple[str, str]] = (),
        service_service: Iterable[tuple[str, str]] = (),
    ) -> "CompatibilitySets":
        return cls(
            image_service=frozenset((i, s) for i, s in image_service),
            image_image=frozenset(_norm_pair(a, b) for a, b in image_image),
            service_service=frozenset(_norm_pair(a, b) for a, b in service_service),
        )

    def deployable(self, image_id: str, service_id: str) -> bool:
        return (image_id, service_id) in self.image_service

    def images_compatible(self, a: str, b: str) -> bool:
        return _norm_pair(a, b) in self.image_image

    def services_compatible(self, a: str, b: str) -> bool:
        return _norm_pair(a, b) in self.service_service


@dataclass(frozen=True)
class Catalog:
    """Immutable snapshot of everything selectable plus its compatibility."""

    providers: tuple[Provider, ...]
    images: tuple[VmImage, ...]
    services: tuple[CloudService, ...]
    compat: CompatibilitySets
    image_specs: AttributeSpecSet
    service_specs: AttributeSpecSet
    warnings: tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_images_by_id", {i.id: i for i in self.images})
        object.__setattr__(self, "_services_by_id", {s.id: s for s in self.services})
        object.__setattr__(self, "_providers_by_id", {p.id: p for p in self.providers})

    def image(self, image_id: str) -> VmImage:
        try:
            return self._images_by_id[image_id]  # type: ignore[attr-defined]
        except KeyError:
            raise ValidationError(f"unknown image id {image_id!r}") from None

    def service(self, service_id: str) -> CloudService:
        try:
            return self._services_by_id[service_id]  # type: ignore[attr-defined]
        except KeyError:
            raise ValidationError(f"unknown service id {service_id!r}") from None

    def provider(self, provider_id: str) -> Provider:
        try:
            return self._providers_by_id[provider_id]  # type: ignore[attr-defined]
        except KeyError:
            raise ValidationError(f"unknown provider id {provider_id!r}") from None

    def images_with_feature(self, feature: str) -> list[VmImage]:
        """Images whose software feature equals ``feature`` (case-insensitive)."""
        wanted = feature.strip().lower()
        return [i for i in self.images if i.software_feature.strip().lower() == wanted]


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValidationError(message)


def _as_number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{where}: expected a number, got {value!r}")
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        raise ValidationError(f"{where}: value must be finite")
    return value


def _as_text(value: Any, where: str) -> str:
    if not isinstance(value, str) or not value:
        raise ValidationError(f"{where}: expected a non-empty string, got {value!r}")
    return value


def _check_numericals(
    owner: str,
    values: Mapping[str, Any],
    specs: AttributeSpecSet,
    warnings: list[str],
) -> dict[str, float]:
    out: dict[str, float] = {}
    for key, raw in values.items():
        value = _as_number(raw, f"{owner}, attribute {key!r}")
        spec = specs.numerical_spec(key)
        if spec is None:
            warnings.append(f"{owner}: unknown numerical attribute {key!r} carried through")
        elif not spec.value_range.contains(value):
            upper = "inf" if spec.value_range.upper is None else f"{spec.value_range.upper:g}"
            raise ValidationError(
                f"{owner}: {key!r} value {value:g} outside range "
                f"[{spec.value_range.lower:g}, {upper}]"
            )
        out[key] = value
    for spec in specs.numerical:
        if spec.key not in out:
            warnings.append(f"{owner}: missing built-in attribute {spec.key!r}")
    return out


def _check_non_numericals(
    owner: str,
    values: Mapping[str, Any],
    specs: AttributeSpecSet,
    warnings: list[str],
    reserved: tuple[str, ...] = (),
) -> dict[str, str]:
    out: dict[str, str] = {}
    for key, raw in values.items():
        _require(key not in reserved, f"{owner}: {key!r} must use its dedicated field")
        value = _as_text(raw, f"{owner}, attribute {key!r}")
        spec = specs.non_numerical_spec(key)
        if spec is None:
            warnings.append(f"{owner}: unknown non-numerical attribute {key!r} carried through")
        elif spec.allowed_values is not None and value not in spec.allowed_values:
            raise ValidationError(f"{owner}: {key!r} value {value!r} not among allowed values")
        out[key] = value
    return out


def _unique_ids(items: Iterable[str], kind: str) -> None:
    seen: set[str] = set()
    for item_id in items:
        _require(item_id not in seen, f"duplicate {kind} id {item_id!r}")
        seen.add(item_id)


def _parse_pairs(raw: Any, where: str) -> list[tuple[str, str]]:
    if raw is None:
        return []
    if not isinstance(raw, list):
        raise ParseError(f"{where}: expected a list of id pairs")
    pairs = []
    for entry in raw:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise ParseError(f"{where}: each entry must be a pair of ids")
        pairs.append((_as_text(entry[0], where), _as_text(entry[1], where)))
    return pairs


def catalog_from_doc(doc: Mapping[str, Any]) -> Catalog:
    """Build and validate a :class:`Catalog` from a parsed JSON document."""
    if not isinstance(doc, Mapping):
        raise ParseError("catalog document must be a JSON object")
    image_specs, service_specs = builtin_attribute_specs()
    warnings: list[str] = []

    providers = []
    for entry in doc.get("providers", []):
        providers.append(
            Provider(
                id=_as_text(entry.get("id"), "provider"),
                name=_as_text(entry.get("name"), f"provider {entry.get('id')!r}"),
            )
        )
    _unique_ids((p.id for p in providers), "provider")

    images = []
    for entry in doc.get("images", []):
        image_id = _as_text(entry.get("id"), "image")
        where = f"image {image_id!r}"
        images.append(
            VmImage(
                id=image_id,
                software_feature=_as_text(entry.get("feature"), f"{where} feature"),
                numerical=_check_numericals(where, entry.get("numerical", {}), image_specs, warnings),
                non_numerical=_check_non_numericals(
                    where, entry.get("nonNumerical", {}), image_specs, warnings,
                    reserved=(SOFTWARE_FEATURE,),
                ),
            )
        )
    _unique_ids((i.id for i in images), "image")

    provider_ids = {p.id for p in providers}
    services = []
    for entry in doc.get("services", []):
        service_id = _as_text(entry.get("id"), "service")
        where = f"service {service_id!r}"
        provider_id = _as_text(entry.get("provider"), f"{where} provider")
        _require(provider_id in provider_ids, f"{where}: unknown provider {provider_id!r}")
        services.append(
            CloudService(
                id=service_id,
                provider_id=provider_id,
                location_country=_as_text(entry.get("location"), f"{where} location"),
                numerical=_check_numericals(where, entry.get("numerical", {}), service_specs, warnings),
                non_numerical=_check_non_numericals(
                    where, entry.get("nonNumerical", {}), service_specs, warnings,
                    reserved=(PROVIDER_ATTR, LOCATION_COUNTRY),
                ),
            )
        )
    _unique_ids((s.id for s in services), "service")

    compat_doc = doc.get("compat", {})
    if not isinstance(compat_doc, Mapping):
        raise ParseError("compat: expected an object")
    image_service = _parse_pairs(compat_doc.get("imageService"), "compat.imageService")
    image_image = _parse_pairs(compat_doc.get("imageImage"), "compat.imageImage")
    service_service = _parse_pairs(compat_doc.get("serviceService"), "compat.serviceService")

    image_ids = {i.id for i in images}
    service_ids = {s.id for s in services}
    for i, s in image_service:
        _require(i in image_ids, f"compat.imageService: unknown image {i!r}")
        _require(s in service_ids, f"compat.imageService: unknown service {s!r}")
    for a, b in image_image:
        _require(a in image_ids and b in image_ids, f"compat.imageImage: unknown image in ({a!r}, {b!r})")
    for a, b in service_service:
        _require(
            a in service_ids and b in service_ids,
            f"compat.serviceService: unknown service in ({a!r}, {b!r})",
        )

    return Catalog(
        providers=tuple(providers),
        images=tuple(images),
        services=tuple(services),
        compat=CompatibilitySets.from_pairs(image_service, image_image, service_service),
        image_specs=image_specs,
        service_specs=service_specs,
        warnings=tuple(warnings),
    )


def load_catalog(path: str | Path) -> Catalog:
    """Load, parse and validate a catalog JSON file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read catalog file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed catalog JSON in {path}: {exc}") from exc
    return catalog_from_doc(doc)


def serialize_catalog(catalog: Catalog) -> dict[str, Any]:
    """Render a catalog back into its JSON document form (stable order)."""
    return {
        "providers": [{"id": p.id, "name": p.name} for p in catalog.providers],
        "images": [
            {
                "id": i.id,
                "feature": i.software_feature,
                "numerical": {k: i.numerical[k] for k in sorted(i.numerical)},
                "nonNumerical": {k: i.non_numerical[k] for k in sorted(i.non_numerical)},
            }
            for i in catalog.images
        ],
        "services": [
            {
                "id": s.id,
                "provider": s.provider_id,
                "location": s.location_country,
                "numerical": {k: s.numerical[k] for k in sorted(s.numerical)},
                "nonNumerical": {k: s.non_numerical[k] for k in sorted(s.non_numerical)},
            }
            for s in catalog.services
        ],
        "compat": {
            "imageService": sorted([list(p) for p in catalog.compat.image_service]),
            "imageImage": sorted([list(p) for p in catalog.compat.image_image]),
            "serviceService": sorted([list(p) for p in catalog.compat.service_service]),
        },
    }
