"""Command-line pipeline driver: classify, repair, sample, review, report.

Exit codes: 0 success, 1 failure (validation or runtime), 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from . import pipeline
from .analytics import export_report
from .classifier import LiveBackend, ReplayBackend
from .config import PipelineConfig, resolve_config
from .corpus import load_corpus, load_court_table
from .evaluation import make_sample_plan
from .repair import load_correction_map
from .store import RunStore
from .taxonomy import EXPECTED_AREA_COUNT, load_taxonomy

_CONFIG_FLAGS = [
    ("--taxonomy", "taxonomy", str, "taxonomy data file"),
    ("--court-table", "court_table", str, "court tier table file"),
    ("--corrections", "corrections", str, "correction map file"),
    ("--corpus-dir", "corpus_dir", str, "directory of case XML files"),
    ("--output-dir", "output_dir", str, "run store root directory"),
    ("--backend", "backend", str, "completion backend: replay or live"),
    ("--replay-fixtures", "replay_fixtures", str, "replay fixture file"),
    ("--live-endpoint", "live_endpoint", str, "live backend URL"),
    ("--live-model", "live_model", str, "live backend model name"),
    ("--live-timeout", "live_timeout", float, "live backend timeout seconds"),
    ("--concurrency", "concurrency", int, "max in-flight backend calls"),
    ("--confidence", "confidence", float, "sample confidence level"),
    ("--margin", "margin", float, "sample margin of error"),
    ("--seed", "seed", int, "sampling seed"),
    ("--excerpt-chars", "excerpt_chars", int, "review task excerpt length"),
    ("--token-budget", "token_budget", int, "prompt token budget"),
    ("--retry-limit", "retry_limit", int, "backend retry attempts"),
    ("--run-id", "run_id", str, "run identifier (default: derived)"),
    ("--started-at", "started_at", str, "run start timestamp (default: now)"),
    ("--static-dir", "static_dir", str, "review UI asset directory"),
]


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="config file (key=value lines); also JT_CONFIG")
    for flag, dest, kind, help_text in _CONFIG_FLAGS:
        parser.add_argument(flag, dest=dest, type=kind, default=None, help=help_text)


def _config_from_args(args: argparse.Namespace) -> PipelineConfig:
    flag_values = {dest: getattr(args, dest, None) for _, dest, _, _ in _CONFIG_FLAGS}
    return resolve_config(flag_values, config_path=getattr(args, "config", None))


def _make_backend(cfg: PipelineConfig):
    if cfg.backend == "replay":
        if not cfg.replay_fixtures:
            raise ValueError("replay backend requires --replay-fixtures")
        return ReplayBackend.from_file(cfg.replay_fixtures)
    return LiveBackend(cfg.live_endpoint, cfg.live_model, timeout=cfg.live_timeout)


def cmd_taxonomy_validate(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    taxonomy = load_taxonomy(cfg.taxonomy)
    report = taxonomy.validate(expected_count=args.expected_count)
    print(report.summary())
    return 0 if report.passed else 1


def cmd_classify(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    taxonomy = load_taxonomy(cfg.taxonomy)
    courts = load_court_table(cfg.court_table)
    cases, ingest = load_corpus(cfg.corpus_dir, courts)
    backend = _make_backend(cfg)
    store = RunStore(cfg.output_dir)
    run_id = pipeline.classify_run(
        store,
        taxonomy,
        cfg.taxonomy,
        cases,
        str(cfg.corpus_dir),
        backend,
        run_id=cfg.run_id or None,
        started_at=cfg.started_at or None,
        concurrency=cfg.concurrency,
        retry_limit=cfg.retry_limit,
        token_budget=cfg.token_budget,
        config_snapshot=cfg.snapshot(),
    )
    print(f"ingested: {ingest.summary()}")
    print(f"run: {run_id}")
    print(f"store: {Path(cfg.output_dir) / run_id}")
    return 0


def cmd_repair(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    taxonomy = load_taxonomy(cfg.taxonomy)
    corrections = load_correction_map(cfg.corrections)
    corrections.validate_targets(taxonomy)
    store = RunStore(cfg.output_dir)
    report = pipeline.repair_run(store, taxonomy, _require_run(cfg), corrections)
    print(report.summary())
    return 0


def cmd_sample(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    if args.population is not None:
        plan = make_sample_plan(args.population, cfg.confidence, cfg.margin, cfg.seed)
        print(f"N={plan.population_size} n0={plan.base_size:.3f} n={plan.sample_size}")
        return 0
    store = RunStore(cfg.output_dir)
    run_id = _require_run(cfg)
    sample = pipeline.sample_run(store, run_id, cfg.confidence, cfg.margin, cfg.seed)
    print(f"N={sample['population']} n0={sample['base_size']:.3f} n={sample['sample_size']}")
    print(f"store: {Path(cfg.output_dir) / run_id / 'sample.json'}")
    return 0


def cmd_metrics(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    store = RunStore(cfg.output_dir)
    report = pipeline.metrics_for_run(store, _require_run(cfg))
    if report is None:
        print("no verdicts")
        return 0
    print(report.summary())
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    taxonomy = load_taxonomy(cfg.taxonomy)
    store = RunStore(cfg.output_dir)
    run_id = _require_run(cfg)
    report = pipeline.aggregates_for_run(store, taxonomy, run_id)
    dest = args.dest or Path(cfg.output_dir) / run_id / "exports" / args.format
    only = None if args.by == "all" else args.by
    for path in export_report(report, args.format, dest, only=only):
        print(path)
    return 0


def cmd_review_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    cfg = _config_from_args(args)
    taxonomy = load_taxonomy(cfg.taxonomy)
    static = cfg.static_dir if Path(cfg.static_dir).is_dir() else None
    app = create_app(cfg.output_dir, taxonomy, excerpt_chars=cfg.excerpt_chars, static_dir=static)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _require_run(cfg: PipelineConfig) -> str:
    if not cfg.run_id:
        raise ValueError("a run id is required (--run-id)")
    return cfg.run_id


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jt", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    tax = commands.add_parser("taxonomy", help="taxonomy utilities")
    tax_sub = tax.add_subparsers(dest="action", required=True)
    validate = tax_sub.add_parser("validate", help="validate a taxonomy file")
    validate.add_argument("--expected-count", type=int, default=EXPECTED_AREA_COUNT)
    _add_config_flags(validate)
    validate.set_defaults(func=cmd_taxonomy_validate)

    classify = commands.add_parser("classify", help="classify a corpus into a new run")
    _add_config_flags(classify)
    classify.set_defaults(func=cmd_classify)

    repair = commands.add_parser("repair", help="resolve raw labels for a run")
    _add_config_flags(repair)
    repair.set_defaults(func=cmd_repair)

    sample = commands.add_parser("sample", help="compute and draw the review sample")
    sample.add_argument("--population", type=int, default=None, help="plan only, no run needed")
    _add_config_flags(sample)
    sample.set_defaults(func=cmd_sample)

    review = commands.add_parser("review", help="expert review service")
    review_sub = review.add_subparsers(dest="action", required=True)
    serve = review_sub.add_parser("serve", help="start the review HTTP API")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    _add_config_flags(serve)
    serve.set_defaults(func=cmd_review_serve)

    metrics = commands.add_parser("metrics", help="accuracy report for a run")
    _add_config_flags(metrics)
    metrics.set_defaults(func=cmd_metrics)

    report = commands.add_parser("report", help="export aggregate analytics")
    report.add_argument("--by", choices=["higher", "area", "year", "court", "all"], default="all")
    report.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    report.add_argument("--dest", default=None, help="output directory")
    _add_config_flags(report)
    report.set_defaults(func=cmd_report)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
