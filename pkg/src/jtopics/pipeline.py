"""Pipeline stages over a run store, shared by the CLI and the HTTP service.

Each stage is a pure function of the store contents plus its explicit inputs,
so replay-backed runs are reproducible byte for byte.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional

from . import classifier
from .analytics import AggregateReport, ClassifiedCase, build_report
from .classifier import CompletionBackend, ResponseParseError
from .corpus import CaseDocument
from .evaluation import (
    AccuracyReport,
    accuracy,
    draw_sample,
    make_sample_plan,
)
from .repair import CorrectionMap, RepairStatus, resolve_label
from .store import (
    RunManifest,
    RunStore,
    classification_record,
    repair_record,
    verdict_from_record,
)
from .taxonomy import Taxonomy


def checksum_file(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def derive_run_id(taxonomy_checksum: str, corpus_dir: str, backend_id: str) -> str:
    digest = hashlib.sha256(f"{taxonomy_checksum}\n{corpus_dir}\n{backend_id}".encode()).hexdigest()
    return f"run-{digest[:12]}"


def classify_run(
    store: RunStore,
    taxonomy: Taxonomy,
    taxonomy_path: str | Path,
    cases: list[CaseDocument],
    corpus_dir: str,
    backend: CompletionBackend,
    *,
    run_id: Optional[str] = None,
    started_at: Optional[str] = None,
    concurrency: int = 4,
    retry_limit: int = 3,
    token_budget: int = classifier.DEFAULT_TOKEN_BUDGET,
    config_snapshot: Optional[dict[str, str]] = None,
    clock: Callable[[], datetime] = lambda: datetime.now(timezone.utc),
) -> str:
    """Classify every case and persist raw plus parsed results as a new run."""
    checksum = checksum_file(taxonomy_path)
    run_id = run_id or derive_run_id(checksum, corpus_dir, backend.backend_id)
    manifest = RunManifest(
        run_id=run_id,
        taxonomy_checksum=checksum,
        corpus_dir=str(corpus_dir),
        backend_id=backend.backend_id,
        started_at=started_at or clock().replace(microsecond=0).isoformat(),
        config=config_snapshot or {},
    )

    def classify_one(case: CaseDocument) -> dict:
        response = classifier.classify_case(
            backend,
            taxonomy,
            case,
            retry_limit=retry_limit,
            token_budget=token_budget,
            clock=clock,
        )
        try:
            parsed = classifier.parse_response(response.text, case_id=case.case_id)
            return classification_record(case.case_id, response.text, parsed, None)
        except ResponseParseError as exc:
            return classification_record(case.case_id, response.text, None, exc)

    with ThreadPoolExecutor(max_workers=max(1, concurrency)) as pool:
        records = list(pool.map(classify_one, cases))
    records.sort(key=lambda r: r["case_id"])
    store.create_run(manifest, cases, records)
    return run_id


def repair_run(store: RunStore, taxonomy: Taxonomy, run_id: str, corrections: CorrectionMap):
    """Resolve every parsed label for a run and persist the outcomes."""
    from .repair import hallucination_report

    records = []
    outcomes = []
    for classification in store.classifications(run_id):
        parsed = classification.get("parsed")
        if parsed is None:
            continue
        primary = resolve_label(taxonomy, parsed["primary_raw"], corrections)
        secondary = None
        if parsed.get("secondary_raw"):
            secondary = resolve_label(taxonomy, parsed["secondary_raw"], corrections)
        outcomes.append(primary)
        records.append(repair_record(classification["case_id"], primary, secondary))
    store.write_repairs(run_id, records)
    store.write_correction_map(run_id, corrections)
    return hallucination_report(outcomes)


def sample_run(store: RunStore, run_id: str, confidence: float, margin: float, seed: int) -> dict:
    """Compute the review sample for a run and persist the plan."""
    case_ids = sorted(
        record["case_id"] for record in store.classifications(run_id) if record.get("parsed")
    )
    plan = make_sample_plan(len(case_ids), confidence, margin, seed)
    sampled = draw_sample(case_ids, plan.sample_size, seed)
    sample = {
        "population": plan.population_size,
        "confidence": plan.confidence,
        "margin": plan.margin,
        "z": plan.z,
        "p": plan.p,
        "seed": plan.seed,
        "base_size": plan.base_size,
        "sample_size": plan.sample_size,
        "case_ids": sampled,
    }
    store.write_sample(run_id, sample)
    return sample


def next_task(store: RunStore, run_id: str, excerpt_chars: int = 4000) -> Optional[dict]:
    """The lowest-ordered sampled case that has no verdict yet, as a review task."""
    sample = store.sample(run_id)
    if sample is None:
        return None
    reviewed = {v["case_id"] for v in store.verdicts(run_id)}
    pending = [case_id for case_id in sample["case_ids"] if case_id not in reviewed]
    if not pending:
        return None
    case_id = pending[0]
    case = store.case(run_id, case_id)
    classification = next(
        (c for c in store.classifications(run_id) if c["case_id"] == case_id), None
    )
    repair = next((r for r in store.repairs(run_id) if r["case_id"] == case_id), None)
    parsed = (classification or {}).get("parsed") or {}
    primary_repair = (repair or {}).get("primary") or {}
    return {
        "case_id": case_id,
        "excerpt": (case or {}).get("full_text", "")[:excerpt_chars],
        "court_name": (case or {}).get("court_name"),
        "hearing_date": (case or {}).get("hearing_date"),
        "neutral_citation": (case or {}).get("neutral_citation"),
        "word_count": (case or {}).get("word_count"),
        "assigned_primary": parsed.get("primary_raw"),
        "assigned_secondary": parsed.get("secondary_raw"),
        "explanation": parsed.get("explanation"),
        "confidence": parsed.get("confidence"),
        "repair_status": primary_repair.get("status"),
        "repair_method": primary_repair.get("method"),
        "resolved_label": primary_repair.get("resolved"),
        "remaining": len(pending),
    }


def metrics_for_run(store: RunStore, run_id: str) -> Optional[AccuracyReport]:
    """Accuracy over the verdicts stored so far; None when there are none."""
    records = [verdict_from_record(v) for v in store.verdicts(run_id)]
    if not records:
        return None
    return accuracy(records)


def classified_cases(
    store: RunStore, taxonomy: Taxonomy, run_id: str
) -> tuple[list[ClassifiedCase], int]:
    """Final per-case areas: verdict corrections override repair resolutions.

    Cases that neither resolved nor received a corrective verdict are
    excluded and counted as unclassified.
    """
    repairs = {r["case_id"]: r for r in store.repairs(run_id)}
    # later verdicts supersede earlier ones for the same case
    verdicts: dict[str, dict] = {}
    for verdict in store.verdicts(run_id):
        verdicts[verdict["case_id"]] = verdict

    cases: list[ClassifiedCase] = []
    unclassified = 0
    for record in store.cases(run_id):
        case_id = record["case_id"]
        area = None
        verdict = verdicts.get(case_id)
        if verdict and verdict.get("corrected_label"):
            area = taxonomy.find_by_label(verdict["corrected_label"])
        if area is None:
            repair = repairs.get(case_id)
            if repair and repair["primary"]["status"] != RepairStatus.UNRESOLVED.value:
                area = taxonomy.find_by_label(repair["primary"]["resolved"])
        if area is None:
            unclassified += 1
            continue
        tier = None
        if record.get("tier") is not None:
            from .corpus import CourtTier

            tier = CourtTier(record["tier"], record["tier_category"])
        cases.append(
            ClassifiedCase(
                case_id=case_id,
                area=area,
                hearing_year=int(record["hearing_date"][:4]),
                court_name=record["court_name"],
                court_tier=tier,
            )
        )
    return cases, unclassified


def aggregates_for_run(store: RunStore, taxonomy: Taxonomy, run_id: str) -> AggregateReport:
    cases, unclassified = classified_cases(store, taxonomy, run_id)
    manifest = store.manifest(run_id)
    return build_report(cases, taxonomy, generated_at=manifest.started_at, unclassified=unclassified)
