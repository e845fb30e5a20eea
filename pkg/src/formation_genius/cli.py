"""Command line front door: evaluate, migrate, bench, validate.

Exit codes: 0 success, 2 validation or input failure, 3 when every
image/service pair is infeasible. Verbosity comes from the
FORMATION_GENIUS_LOG environment variable (DEBUG/INFO/WARNING/ERROR).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from . import bench as bench_mod
from . import migration
from .catalog import load_catalog
from .errors import EngineError, NoFeasibleCombination
from .formation import load_formation
from .jsonio import canonical_json

logger = logging.getLogger("formation_genius")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_FEASIBLE = 3


def _configure_logging() -> None:
    level_name = os.environ.get("FORMATION_GENIUS_LOG", "WARNING").upper()
    level = getattr(logging, level_name, logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _write_doc(doc: Any, out: str | None) -> None:
    text = canonical_json(doc)
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise EngineError(f"cannot read JSON file {path}: {exc}") from exc


def _apply_flag_overrides(prefs_doc: dict[str, Any] | None, args: argparse.Namespace) -> dict[str, Any] | None:
    doc = dict(prefs_doc) if prefs_doc else {}
    combination = dict(doc.get("combination") or {})
    if args.mode:
        doc["mode"] = args.mode
    if args.operator:
        combination["operator"] = args.operator
    if args.no_network_delta:
        combination["applyNetworkDelta"] = False
    if combination:
        doc["combination"] = combination
    return doc or None


def _cmd_validate(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog)
    for warning in catalog.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(
        f"catalog ok: {len(catalog.providers)} providers, {len(catalog.images)} images, "
        f"{len(catalog.services)} services"
    )
    if args.formation:
        formation = load_formation(args.formation)
        for warning in formation.warnings:
            print(f"warning: {warning}", file=sys.stderr)
        print(
            f"formation ok: {len(formation.components)} components, "
            f"{len(formation.interconnections)} links"
        )
    return EXIT_OK


def _cmd_evaluate(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog)
    formation_doc = _read_json(args.formation)
    prefs_doc = _read_json(args.prefs) if args.prefs else None
    prefs_doc = _apply_flag_overrides(prefs_doc, args)

    session = migration.create_session(catalog, formation_doc, session_id="cli")
    migration.select_component(session, args.component)
    migration.set_preferences(session, args.component, prefs_doc)
    run = migration.evaluate_pending(session)

    doc = run.result_doc
    if args.top is not None:
        doc = dict(doc)
        doc["combinations"] = doc["combinations"][: args.top]
    _write_doc(doc, args.out)
    return EXIT_OK


def _cmd_migrate(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog)
    formation_doc = _read_json(args.formation)
    script = _read_json(args.script) if args.script else {}
    steps = script.get("steps")
    if steps is None:
        # No script: walk the formation's components in declaration order
        # with default preferences.
        steps = [{"component": c["id"]} for c in formation_doc.get("components", [])]

    session = migration.create_session(catalog, formation_doc, session_id=args.session_id)
    for step in steps:
        component_id = step["component"]
        migration.select_component(session, component_id)
        migration.set_preferences(session, component_id, step.get("preferences"))
        run = migration.evaluate_pending(session)
        choice = step.get("commit", args.auto_commit)
        if choice == "top":
            top = next(c for c in run.combined if c.feasible)
            migration.commit(session, top.image_id, top.service_id)
        elif isinstance(choice, dict):
            migration.commit(session, choice["image"], choice["service"])
        else:
            raise EngineError(f"unsupported commit choice {choice!r} for {component_id!r}")

    if args.log:
        migration.save_event_log(session, args.log)
    _write_doc({"sessionId": session.session_id, "commits": migration.history_doc(session)}, args.out)
    return EXIT_OK


def _parse_counts(raw: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in raw.split(",") if part)
    except ValueError:
        raise EngineError(f"expected a comma-separated list of integers, got {raw!r}") from None


def _cmd_bench(args: argparse.Namespace) -> int:
    config = bench_mod.BenchConfig(
        image_counts=_parse_counts(args.images),
        service_counts=_parse_counts(args.services),
        component_count=args.components,
        component_counts=_parse_counts(args.component_sweep) if args.component_sweep else None,
        provider_count=args.providers,
        seed=args.seed,
        repetitions=args.reps,
        full_d=not args.partial_d,
    )
    records = bench_mod.run_scaling(config)
    if args.csv:
        bench_mod.write_csv(records, args.csv)
    speedup = bench_mod.measure_parallel_speedup(config) if args.parallel_probe else None
    summary = bench_mod.summarize(records, parallel_speedup=speedup)
    _write_doc(summary, args.summary)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="formation-genius",
        description="Recommend feasible VM image and cloud service combinations per component.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    validate = sub.add_parser("validate", help="check catalog and formation files")
    validate.add_argument("--catalog", required=True)
    validate.add_argument("--formation")
    validate.set_defaults(func=_cmd_validate)

    evaluate = sub.add_parser("evaluate", help="rank combinations for one component")
    evaluate.add_argument("--catalog", required=True)
    evaluate.add_argument("--formation", required=True)
    evaluate.add_argument("--component", required=True)
    evaluate.add_argument("--prefs")
    evaluate.add_argument("--out", default="-")
    evaluate.add_argument("--mode", choices=["stepwise", "integrated"])
    evaluate.add_argument("--operator", choices=["sum", "product"])
    evaluate.add_argument("--no-network-delta", action="store_true")
    evaluate.add_argument("--top", type=int)
    evaluate.set_defaults(func=_cmd_evaluate)

    migrate = sub.add_parser("migrate", help="run a scripted full migration")
    migrate.add_argument("--catalog", required=True)
    migrate.add_argument("--formation", required=True)
    migrate.add_argument("--script", help="JSON with steps[] {component, preferences, commit}")
    migrate.add_argument("--auto-commit", default="top", choices=["top"])
    migrate.add_argument("--session-id", default="cli")
    migrate.add_argument("--log", help="write the session event log (JSON Lines)")
    migrate.add_argument("--out", default="-")
    migrate.set_defaults(func=_cmd_migrate)

    bench = sub.add_parser("bench", help="run the scaling benchmark")
    bench.add_argument("--images", default="10,20,40")
    bench.add_argument("--services", default="10,20,40")
    bench.add_argument("--components", type=int, default=3)
    bench.add_argument("--component-sweep", help="comma-separated component counts")
    bench.add_argument("--providers", type=int, default=3)
    bench.add_argument("--seed", type=int, default=42)
    bench.add_argument("--reps", type=int, default=5)
    bench.add_argument("--partial-d", action="store_true", help="sample a random half of deployability")
    bench.add_argument("--parallel-probe", action="store_true")
    bench.add_argument("--csv")
    bench.add_argument("--summary", default="-")
    bench.set_defaults(func=_cmd_bench)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoFeasibleCombination as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_FEASIBLE
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
