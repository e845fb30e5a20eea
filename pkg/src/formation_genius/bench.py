"""Synthetic catalogs and a timing harness for scaling trends.

The harness generates deterministic random catalogs (seeded), runs a
full stepwise migration with no requirements and a full deployability
relation, and times five phases per component:

* Filter        - requirement filtering of images and services,
* Evaluate      - per-side scoring with uniform criteria weights,
* NetworkCosts  - per-service deltas, per-pair map, normalization,
* Feasibility   - deployability and neighbor-compatibility of all pairs,
* Combine       - combined values, rescaling and ranking.

Per-run totals are recorded under the pseudo-phase ``Total`` (wall
time around the component loop). Records go to CSV as
``m,n,l,phase,repetition,elapsed_ns``; the summary JSON carries least
squares fits of median total time against the pair count m*n and
against the component count, plus phase shares at the largest grid
point.

Timing uses the monotonic nanosecond clock. The first run of every
grid point is a discarded warm-up. Runs are single-threaded; an
optional probe measures thread-pool speedup of pair scoring only.
"""

from __future__ import annotations

import csv
import gc
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from itertools import product
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import catalog as cat
from . import combination as comb
from . import evaluation as ev
from .ahp import default_image_hierarchy, default_service_hierarchy, equal_matrices, global_weights
from .catalog import Catalog, CloudService, CompatibilitySets, Provider, VmImage
from .errors import ValidationError
from .formation import (
    CommittedSolution,
    Component,
    Formation,
    TrafficCostEstimate,
    define_formation,
)
from .requirements import filter_alternatives

# Synthetic per-direction traffic costs; only their order matters to the
# local-versus-internet split.
LOW_TRAFFIC_COST = 0.01
HIGH_TRAFFIC_COST = 0.25

# Sampling cap for attributes with an unbounded upper range.
_UNBOUNDED_CAP = 100.0

_FEATURE = "Web Server"
_LOCATIONS = ("Germany", "Australia", "USA")
_FORMATS = ("Xen", "VMWare", "KVM")
_SYSTEMS = ("Linux", "Windows")
_LANGUAGES = ("Java", "Perl", "Ruby")
_SOFTWARE = ("Apache HTTP", "JBoss Appl. Server", "nginx")


class Phase(str, Enum):
    FILTER = "Filter"
    EVALUATE = "Evaluate"
    FEASIBILITY = "Feasibility"
    COMBINE = "Combine"
    NETWORK_COSTS = "NetworkCosts"
    TOTAL = "Total"


@dataclass(frozen=True)
class BenchConfig:
    image_counts: tuple[int, ...] = (10, 20, 40)
    service_counts: tuple[int, ...] = (10, 20, 40)
    component_count: int = 3
    component_counts: tuple[int, ...] | None = None
    provider_count: int = 3
    seed: int = 42
    repetitions: int = 5
    full_d: bool = True

    def __post_init__(self) -> None:
        counts = list(self.image_counts) + list(self.service_counts) + [
            self.component_count, self.provider_count,
        ]
        if self.component_counts:
            counts += list(self.component_counts)
        if any(c <= 0 for c in counts):
            raise ValidationError("benchmark counts must be positive")
        if self.repetitions < 3:
            raise ValidationError("benchmark needs at least 3 repetitions")

    def grid(self) -> list[tuple[int, int, int]]:
        ls = self.component_counts or (self.component_count,)
        return list(product(self.image_counts, self.service_counts, ls))


@dataclass(frozen=True)
class BenchRecord:
    m: int
    n: int
    l: int
    phase: Phase
    repetition: int
    elapsed_ns: int


def _sample(rng: random.Random, value_range: cat.ValueRange) -> float:
    upper = value_range.upper if value_range.upper is not None else value_range.lower + _UNBOUNDED_CAP
    return round(rng.uniform(value_range.lower, upper), 6)


def generate_synthetic(config: BenchConfig, seed: int) -> tuple[Catalog, Formation]:
    """Deterministic random catalog and fully-connected formation.

    Sizes come from the first entries of the config's count lists. All
    images share one software feature so every component sees the full
    image set; compatibility within images and within services is
    universal, deployability is universal when ``full_d`` and a random
    half otherwise. Components are assigned a provider each; links
    between same-provider components carry low traffic costs, others
    high ones.
    """
    m, n, l = config.image_counts[0], config.service_counts[0], config.component_count
    rng = random.Random(seed)
    image_specs, service_specs = cat.builtin_attribute_specs()

    providers = tuple(
        Provider(id=f"p{k + 1}", name=f"Provider {k + 1}") for k in range(config.provider_count)
    )

    images = []
    for i in range(m):
        numerical = {spec.key: _sample(rng, spec.value_range) for spec in image_specs.numerical}
        non_numerical = {
            cat.VIRTUALIZATION_FORMAT: rng.choice(_FORMATS),
            cat.OPERATING_SYSTEM: rng.choice(_SYSTEMS),
            cat.IMPLEMENTATION_LANGUAGE: rng.choice(_LANGUAGES),
            cat.SOFTWARE: rng.choice(_SOFTWARE),
        }
        images.append(
            VmImage(
                id=f"img{i + 1:04d}",
                software_feature=_FEATURE,
                numerical=numerical,
                non_numerical=non_numerical,
            )
        )

    services = []
    for j in range(n):
        numerical = {spec.key: _sample(rng, spec.value_range) for spec in service_specs.numerical}
        services.append(
            CloudService(
                id=f"svc{j + 1:04d}",
                provider_id=rng.choice(providers).id,
                location_country=rng.choice(_LOCATIONS),
                numerical=numerical,
                non_numerical={},
            )
        )

    image_ids = [i.id for i in images]
    service_ids = [s.id for s in services]
    if config.full_d:
        image_service = [(i, s) for i in image_ids for s in service_ids]
    else:
        image_service = [(i, s) for i in image_ids for s in service_ids if rng.random() < 0.5]
    image_image = [
        (image_ids[a], image_ids[b]) for a in range(m) for b in range(a, m)
    ]
    service_service = [
        (service_ids[a], service_ids[b]) for a in range(n) for b in range(a, n)
    ]

    catalog = Catalog(
        providers=providers,
        images=tuple(images),
        services=tuple(services),
        compat=CompatibilitySets.from_pairs(image_service, image_image, service_service),
        image_specs=image_specs,
        service_specs=service_specs,
    )

    components = [Component(id=f"comp{h + 1}", software_feature=_FEATURE) for h in range(l)]
    assigned = {c.id: rng.choice(providers).id for c in components}
    links = []
    estimates = []
    for a in range(l):
        for b in range(a + 1, l):
            pair = (components[a].id, components[b].id)
            links.append(pair)
            cost = (
                LOW_TRAFFIC_COST
                if assigned[pair[0]] == assigned[pair[1]]
                else HIGH_TRAFFIC_COST
            )
            estimates.append(
                TrafficCostEstimate(
                    from_component=pair[0],
                    to_component=pair[1],
                    local_receive=cost,
                    local_send=cost,
                    internet_receive=cost,
                    internet_send=cost,
                )
            )
    formation = define_formation(components, links, estimates)
    return catalog, formation


class _Stopwatch:
    """Accumulates elapsed nanoseconds per phase for one run."""

    def __init__(self) -> None:
        self.elapsed: dict[Phase, int] = {phase: 0 for phase in Phase}
        self._phase: Phase | None = None
        self._start = 0

    def start(self, phase: Phase) -> None:
        self._phase = phase
        self._start = time.perf_counter_ns()

    def stop(self) -> None:
        assert self._phase is not None
        self.elapsed[self._phase] += time.perf_counter_ns() - self._start
        self._phase = None


def _migrate_once(
    catalog: Catalog, formation: Formation, watch: _Stopwatch | None = None
) -> list[comb.CombinedSolution]:
    """One stepwise migration committing the top pair per component.

    The untimed and timed paths are the same code; timing wraps but
    never alters the computation. Returns the committed solutions in
    component order.
    """
    image_hierarchy = default_image_hierarchy()
    service_hierarchy = default_service_hierarchy()
    image_weights = global_weights(image_hierarchy, equal_matrices(image_hierarchy))
    service_weights = global_weights(service_hierarchy, equal_matrices(service_hierarchy))
    policy = comb.CombinationPolicy()

    images = list(catalog.images)
    services = list(catalog.services)
    service_ids = [s.id for s in services]
    chosen: list[comb.CombinedSolution] = []

    total_start = time.perf_counter_ns()
    for component in formation.components:
        if watch:
            watch.start(Phase.FILTER)
        image_outcome = filter_alternatives((), images)
        service_outcome = filter_alternatives((), services)
        if watch:
            watch.stop()
            watch.start(Phase.EVALUATE)
        image_ranking = ev.evaluate_images(catalog, image_outcome, image_hierarchy, image_weights)
        service_ranking = ev.evaluate_services(
            catalog, service_outcome, service_hierarchy, service_weights
        )
        if watch:
            watch.stop()
            watch.start(Phase.NETWORK_COSTS)
        image_ids = [i.alternative_id for i in image_ranking]
        deltas = comb.pair_deltas(formation, component.id, services, image_ids, catalog)
        normalized = comb.normalize_deltas(deltas)
        if watch:
            watch.stop()
            watch.start(Phase.FEASIBILITY)
        feasibility = comb.pair_feasibility(
            catalog, formation, component.id, image_ids, service_ids
        )
        if watch:
            watch.stop()
            watch.start(Phase.COMBINE)
        ranked = comb.assemble_combinations(
            image_ranking, service_ranking, feasibility, deltas, normalized, policy
        )
        if watch:
            watch.stop()
        top = comb.best_combination(ranked)
        formation.committed[component.id] = CommittedSolution(
            component_id=component.id,
            image_id=top.image_id,
            service_id=top.service_id,
            score=top.combined_score,
        )
        chosen.append(top)
    if watch:
        watch.elapsed[Phase.TOTAL] = time.perf_counter_ns() - total_start
    return chosen


def _point_seed(base: int, m: int, n: int, l: int) -> int:
    return base + 1_000_003 * m + 10_007 * n + 101 * l


class _PointContext:
    """Prepared inputs for one grid point (already warmed up)."""

    def __init__(self, config: BenchConfig, m: int, n: int, l: int) -> None:
        self.m, self.n, self.l = m, n, l
        point = replace(
            config,
            image_counts=(m,), service_counts=(n,),
            component_count=l, component_counts=None,
        )
        self.catalog, self._formation = generate_synthetic(
            point, _point_seed(config.seed, m, n, l)
        )

    def fresh_formation(self) -> Formation:
        # The committed map must reset for every migration run.
        return Formation(
            components=self._formation.components,
            interconnections=self._formation.interconnections,
            traffic=self._formation.traffic,
        )


def run_points(
    config: BenchConfig, points: Sequence[tuple[int, int, int]]
) -> list[BenchRecord]:
    """Time the given (m, n, l) points, ``repetitions`` runs each.

    Repetitions are interleaved round-robin across the points so a
    transient load spike on the machine degrades at most one
    repetition of each point instead of every repetition of one,
    keeping the per-point medians honest.
    """
    contexts = [_PointContext(config, m, n, l) for m, n, l in points]
    for context in contexts:
        _migrate_once(context.catalog, context.fresh_formation())  # warm-up, discarded

    records: list[BenchRecord] = []
    gc_was_enabled = gc.isenabled()
    gc.collect()
    gc.disable()
    try:
        for repetition in range(config.repetitions):
            for context in contexts:
                watch = _Stopwatch()
                _migrate_once(context.catalog, context.fresh_formation(), watch)
                for phase in Phase:
                    records.append(
                        BenchRecord(
                            m=context.m, n=context.n, l=context.l, phase=phase,
                            repetition=repetition,
                            elapsed_ns=watch.elapsed[phase],
                        )
                    )
    finally:
        if gc_was_enabled:
            gc.enable()
    return records


def run_point(
    config: BenchConfig, m: int, n: int, l: int, timed: bool = True
) -> tuple[list[BenchRecord], list[comb.CombinedSolution]]:
    """One grid point: warm up, then time ``repetitions`` migrations.

    Returns the records plus the committed solutions of the last run,
    so callers can check that timing never changes the outcome.
    """
    context = _PointContext(config, m, n, l)
    last = _migrate_once(context.catalog, context.fresh_formation())
    if not timed:
        return [], last
    return run_points(config, [(m, n, l)]), last


def run_scaling(config: BenchConfig) -> list[BenchRecord]:
    """Time every grid point of the config; ``repetitions`` runs each."""
    return run_points(config, config.grid())


def _median_totals(records: Sequence[BenchRecord]) -> dict[tuple[int, int, int], float]:
    by_point: dict[tuple[int, int, int], list[int]] = {}
    for record in records:
        if record.phase is Phase.TOTAL:
            by_point.setdefault((record.m, record.n, record.l), []).append(record.elapsed_ns)
    return {point: float(np.median(times)) for point, times in by_point.items()}


def _linear_fit(xs: Sequence[float], ys: Sequence[float]) -> dict[str, float]:
    """Least squares line with the coefficient of determination."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    predicted = slope * x + intercept
    ss_res = float(np.sum((y - predicted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return {"slope": float(slope), "intercept": float(intercept), "r2": float(r2)}


def fit_total_vs_pairs(records: Sequence[BenchRecord]) -> dict[str, Any] | None:
    """Median total time regressed against the pair count m*n."""
    totals = _median_totals(records)
    ls = {l for (_, _, l) in totals}
    if not ls:
        return None
    l = max(ls, key=lambda value: sum(1 for p in totals if p[2] == value))
    points = sorted((m * n, t) for (m, n, pl), t in totals.items() if pl == l)
    if len(points) < 2:
        return None
    fit = _linear_fit([p for p, _ in points], [t for _, t in points])
    fit["l"] = l
    fit["points"] = [{"pairs": p, "medianNs": t} for p, t in points]
    return fit


def fit_total_vs_components(records: Sequence[BenchRecord]) -> dict[str, Any] | None:
    """Median total time regressed against the component count."""
    totals = _median_totals(records)
    sizes = {(m, n) for (m, n, _) in totals}
    if not sizes:
        return None
    m, n = max(sizes, key=lambda size: sum(1 for p in totals if (p[0], p[1]) == size))
    points = sorted((l, t) for (pm, pn, l), t in totals.items() if (pm, pn) == (m, n))
    if len(points) < 2:
        return None
    fit = _linear_fit([l for l, _ in points], [t for _, t in points])
    fit["m"], fit["n"] = m, n
    fit["points"] = [{"components": l, "medianNs": t} for l, t in points]
    return fit


def phase_shares(records: Sequence[BenchRecord], m: int, n: int, l: int) -> dict[str, float]:
    """Median share of each phase in the phase-time sum at one grid point."""
    medians = {}
    for phase in Phase:
        if phase is Phase.TOTAL:
            continue
        times = [
            r.elapsed_ns for r in records
            if r.phase is phase and (r.m, r.n, r.l) == (m, n, l)
        ]
        if times:
            medians[phase.value] = float(np.median(times))
    total = sum(medians.values())
    return {phase: (t / total if total else 0.0) for phase, t in medians.items()}


def measure_parallel_speedup(config: BenchConfig, workers: int = 4) -> float:
    """Wall-clock ratio of serial to thread-pool pair scoring.

    Measures only the arithmetic of combining two score vectors over
    all pairs; reported for information, not asserted.
    """
    m, n = config.image_counts[0], config.service_counts[0]
    rng = random.Random(config.seed)
    image_scores = [rng.random() for _ in range(m)]
    service_scores = [rng.random() for _ in range(n)]

    def score_chunk(chunk: Iterable[int]) -> float:
        acc = 0.0
        for i in chunk:
            a = image_scores[i]
            for b in service_scores:
                acc += 0.5 * a + 0.5 * b
        return acc

    start = time.perf_counter_ns()
    serial = score_chunk(range(m))
    serial_ns = time.perf_counter_ns() - start

    chunks = [range(k, m, workers) for k in range(workers)]
    start = time.perf_counter_ns()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parallel = sum(pool.map(score_chunk, chunks))
    parallel_ns = time.perf_counter_ns() - start
    assert abs(serial - parallel) < 1e-6 * max(abs(serial), 1.0)
    return serial_ns / parallel_ns if parallel_ns else 1.0


def summarize(records: Sequence[BenchRecord], parallel_speedup: float | None = None) -> dict[str, Any]:
    """Fits and phase shares for a finished record set."""
    totals = _median_totals(records)
    largest = max(totals, key=lambda point: (point[0] * point[1], point[2]), default=None)
    summary: dict[str, Any] = {
        "totalVsPairs": fit_total_vs_pairs(records),
        "totalVsComponents": fit_total_vs_components(records),
        "phaseShares": phase_shares(records, *largest) if largest else {},
        "largestPoint": {"m": largest[0], "n": largest[1], "l": largest[2]} if largest else None,
    }
    if parallel_speedup is not None:
        summary["parallelSpeedup"] = parallel_speedup
    return summary


def write_csv(records: Sequence[BenchRecord], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["m", "n", "l", "phase", "repetition", "elapsed_ns"])
        for record in records:
            writer.writerow(
                [record.m, record.n, record.l, record.phase.value, record.repetition, record.elapsed_ns]
            )
