"""Shared fixtures: a small hand-written catalog and formation."""

from __future__ import annotations

import copy
import json
from pathlib import Path

import pytest

from formation_genius import catalog_from_doc, formation_from_doc


_DATA_DIR = Path(__file__).parent / "data"

SMALL_CATALOG_DOC = json.loads((_DATA_DIR / "catalog_small.json").read_text(encoding="utf-8"))
SMALL_FORMATION_DOC = json.loads((_DATA_DIR / "formation_small.json").read_text(encoding="utf-8"))


@pytest.fixture
def catalog_doc():
    return copy.deepcopy(SMALL_CATALOG_DOC)


@pytest.fixture
def formation_doc():
    return copy.deepcopy(SMALL_FORMATION_DOC)


@pytest.fixture
def catalog(catalog_doc):
    return catalog_from_doc(catalog_doc)


@pytest.fixture
def formation(formation_doc):
    return formation_from_doc(formation_doc)


@pytest.fixture
def catalog_file(tmp_path, catalog_doc):
    path = tmp_path / "catalog.json"
    path.write_text(json.dumps(catalog_doc), encoding="utf-8")
    return path


@pytest.fixture
def formation_file(tmp_path, formation_doc):
    path = tmp_path / "formation.json"
    path.write_text(json.dumps(formation_doc), encoding="utf-8")
    return path


def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    print(f"\nACCEPTANCE {status}: {name}")
