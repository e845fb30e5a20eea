import json

import pytest

from formation_genius import (
    Influence,
    ParseError,
    ValidationError,
    Variability,
    builtin_attribute_specs,
    catalog_from_doc,
    load_catalog,
    serialize_catalog,
)


def test_load_counts_echo_input(catalog):
    assert len(catalog.providers) == 2
    assert len(catalog.images) == 3
    assert len(catalog.services) == 3
    assert len(catalog.compat.image_service) == 9


def test_out_of_range_percent_names_image_and_attribute(catalog_doc):
    catalog_doc["images"][0]["numerical"]["Popularity"] = 150.0
    with pytest.raises(ValidationError) as err:
        catalog_from_doc(catalog_doc)
    assert "web-apache" in str(err.value)
    assert "Popularity" in str(err.value)


def test_unknown_provider_reference_rejected(catalog_doc):
    catalog_doc["services"][0]["provider"] = "px"
    with pytest.raises(ValidationError) as err:
        catalog_from_doc(catalog_doc)
    assert "px" in str(err.value)


def test_duplicate_image_id_rejected(catalog_doc):
    catalog_doc["images"].append(dict(catalog_doc["images"][0]))
    with pytest.raises(ValidationError):
        catalog_from_doc(catalog_doc)


def test_negative_price_rejected(catalog_doc):
    catalog_doc["images"][0]["numerical"]["Hourly License Price"] = -0.1
    with pytest.raises(ValidationError):
        catalog_from_doc(catalog_doc)


def test_compat_ids_must_resolve(catalog_doc):
    catalog_doc["compat"]["imageService"].append(["ghost", "ec2-de"])
    with pytest.raises(ValidationError):
        catalog_from_doc(catalog_doc)


def test_software_feature_uses_dedicated_field(catalog_doc):
    catalog_doc["images"][0]["nonNumerical"]["Software Feature"] = "Web Server"
    with pytest.raises(ValidationError):
        catalog_from_doc(catalog_doc)


def test_unknown_attributes_warn_but_load(catalog_doc):
    catalog_doc["images"][0]["numerical"]["GPU Count"] = 2.0
    catalog = catalog_from_doc(catalog_doc)
    assert catalog.image("web-apache").numeric_value("GPU Count") == 2.0
    assert any("GPU Count" in w for w in catalog.warnings)


def test_missing_builtin_attribute_warns(catalog_doc):
    del catalog_doc["images"][0]["numerical"]["Age"]
    catalog = catalog_from_doc(catalog_doc)
    assert any("Age" in w and "web-apache" in w for w in catalog.warnings)


def test_malformed_file_is_parse_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ParseError):
        load_catalog(path)
    with pytest.raises(ParseError):
        load_catalog(tmp_path / "missing.json")


def test_round_trip(catalog, tmp_path):
    path = tmp_path / "catalog.json"
    path.write_text(json.dumps(serialize_catalog(catalog)), encoding="utf-8")
    reloaded = load_catalog(path)
    assert reloaded == catalog


def test_symmetric_closure_of_pair_sets(catalog):
    assert catalog.compat.images_compatible("web-apache", "web-nginx")
    assert catalog.compat.images_compatible("web-nginx", "web-apache")
    assert catalog.compat.services_compatible("rack-de", "ec2-de")


def test_builtin_image_specs_match_published_table():
    image_specs, _ = builtin_attribute_specs()
    license_price = image_specs.numerical_spec("Hourly License Price")
    assert license_price.influence is Influence.NEGATIVE
    assert license_price.variability is Variability.DYNAMIC
    assert license_price.metric == "$/h"
    popularity = image_specs.numerical_spec("Popularity")
    assert popularity.influence is Influence.POSITIVE
    assert popularity.value_range.upper == 100.0
    assert {s.key for s in image_specs.non_numerical} == {
        "Virtualization Format",
        "Operating System (OS)",
        "Implementation Language",
        "Software Feature",
        "Software",
    }


def test_builtin_service_specs_match_published_table():
    _, service_specs = builtin_attribute_specs()
    uptime = service_specs.numerical_spec("Uptime")
    assert uptime.influence is Influence.POSITIVE
    assert uptime.metric == "%"
    assert uptime.value_range.lower == 0.0 and uptime.value_range.upper == 100.0
    assert len(service_specs.numerical) == 15
    assert all(s.variability is Variability.DYNAMIC for s in service_specs.numerical)
    assert {s.key for s in service_specs.non_numerical} == {"Provider", "Location Country"}


def test_version_attributes_carry_no_influence():
    image_specs, _ = builtin_attribute_specs()
    assert image_specs.numerical_spec("OS Version").influence is Influence.NONE
    assert image_specs.numerical_spec("Software Version").influence is Influence.NONE


def test_feature_match_is_case_insensitive(catalog):
    assert {i.id for i in catalog.images_with_feature("web server")} == {"web-apache", "web-nginx"}
    assert catalog.images_with_feature("Database") == []
