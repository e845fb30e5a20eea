import csv
import json

import pytest

from formation_genius import ValidationError, serialize_catalog
from formation_genius.bench import (
    BenchConfig,
    Phase,
    generate_synthetic,
    measure_parallel_speedup,
    run_point,
    run_scaling,
    summarize,
    write_csv,
)


def _cfg(**kw):
    base = dict(image_counts=(6,), service_counts=(6,), component_count=3,
                seed=42, repetitions=3)
    base.update(kw)
    return BenchConfig(**base)


def test_generation_is_deterministic():
    a, _ = generate_synthetic(_cfg(), 42)
    b, _ = generate_synthetic(_cfg(), 42)
    assert json.dumps(serialize_catalog(a)) == json.dumps(serialize_catalog(b))
    c, _ = generate_synthetic(_cfg(), 43)
    assert json.dumps(serialize_catalog(a)) != json.dumps(serialize_catalog(c))


def test_formation_is_complete_graph():
    _, formation = generate_synthetic(_cfg(component_count=3), 1)
    assert len(formation.components) == 3
    assert len(formation.interconnections) == 3
    _, formation = generate_synthetic(_cfg(component_count=5), 1)
    assert len(formation.interconnections) == 10


def test_sampled_attributes_respect_ranges():
    catalog, _ = generate_synthetic(_cfg(image_counts=(30,), service_counts=(30,)), 3)
    for image in catalog.images:
        assert 0.0 <= image.numeric_value("Popularity") <= 100.0
        assert image.numeric_value("Hourly License Price") >= 0.0
    for service in catalog.services:
        assert 0.0 <= service.numeric_value("Uptime") <= 100.0
        assert 0.0 <= service.numeric_value("Service Popularity") <= 100.0


def test_full_deployability_relation():
    catalog, _ = generate_synthetic(_cfg(), 5)
    assert len(catalog.compat.image_service) == 36
    partial, _ = generate_synthetic(_cfg(full_d=False), 5)
    assert len(partial.compat.image_service) < 36


def test_config_validation():
    with pytest.raises(ValidationError):
        BenchConfig(image_counts=(0,), service_counts=(5,))
    with pytest.raises(ValidationError):
        BenchConfig(repetitions=2)


def test_run_point_produces_phase_records():
    records, chosen = run_point(_cfg(), 6, 6, 3)
    assert len(chosen) == 3
    per_phase = {phase: [r for r in records if r.phase is phase] for phase in Phase}
    for phase in Phase:
        assert len(per_phase[phase]) == 3  # one per repetition
    assert all(r.elapsed_ns >= 0 for r in records)


def test_phase_times_account_for_total():
    records, _ = run_point(_cfg(image_counts=(20,), service_counts=(20,)), 20, 20, 3)
    for repetition in range(3):
        by_phase = {
            r.phase: r.elapsed_ns for r in records if r.repetition == repetition
        }
        total = by_phase.pop(Phase.TOTAL)
        assert sum(by_phase.values()) >= 0.9 * total
        assert sum(by_phase.values()) <= total


def test_timed_and_untimed_runs_agree():
    _, timed = run_point(_cfg(), 6, 6, 3, timed=True)
    _, untimed = run_point(_cfg(), 6, 6, 3, timed=False)
    assert [(c.image_id, c.service_id, c.combined_score) for c in timed] == [
        (c.image_id, c.service_id, c.combined_score) for c in untimed
    ]


def test_scaling_grid_and_summary():
    config = _cfg(image_counts=(5, 10), service_counts=(5, 10))
    records = run_scaling(config)
    points = {(r.m, r.n) for r in records}
    assert points == {(5, 5), (5, 10), (10, 5), (10, 10)}
    summary = summarize(records)
    assert summary["totalVsPairs"] is not None
    assert set(summary["phaseShares"]) == {p.value for p in Phase if p is not Phase.TOTAL}
    assert summary["largestPoint"] == {"m": 10, "n": 10, "l": 3}


def test_component_sweep_fit():
    config = _cfg(image_counts=(8,), service_counts=(8,), component_counts=(1, 2, 3))
    records = run_scaling(config)
    summary = summarize(records)
    fit = summary["totalVsComponents"]
    assert fit is not None
    assert [p["components"] for p in fit["points"]] == [1, 2, 3]
    assert fit["slope"] > 0


def test_csv_schema(tmp_path):
    records, _ = run_point(_cfg(), 6, 6, 3)
    path = tmp_path / "bench.csv"
    write_csv(records, path)
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["m", "n", "l", "phase", "repetition", "elapsed_ns"]
    assert len(rows) == len(records) + 1
    assert {row[3] for row in rows[1:]} == {p.value for p in Phase}


def test_parallel_probe_reports_a_ratio():
    speedup = measure_parallel_speedup(_cfg(image_counts=(50,), service_counts=(50,)))
    assert speedup > 0.0
