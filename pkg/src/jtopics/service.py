"""HTTP+JSON API for the expert review workflow and dashboard.

All endpoints are read-only views over the run store except verdict
submission, which is serialized through a single writer lock.  The review
frontend is served as static assets when a build directory is supplied.
"""

from __future__ import annotations

import json
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional

from fastapi import FastAPI, HTTPException, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import pipeline
from .evaluation import CORRECTION_REQUIRED, EvaluationRecord, Verdict
from .repair import resolve_label
from .store import ConflictingVerdictError, RunStore, UnknownRunError
from .taxonomy import HIGHER_LEVEL_NAMES, Taxonomy

DEFAULT_EXCERPT_CHARS = 4000


class VerdictSubmission(BaseModel):
    case_id: str
    verdict: str
    corrected_label: Optional[str] = None
    reviewer: str
    note: Optional[str] = None


def _accuracy_payload(report) -> dict:
    return {
        "total": report.total,
        "counts": {v.value: report.counts[v] for v in Verdict},
        "initial_accuracy": report.initial_accuracy,
        "adjusted_accuracy": report.adjusted_accuracy,
    }


def create_app(
    store_root: str | Path,
    taxonomy: Taxonomy,
    *,
    excerpt_chars: int = DEFAULT_EXCERPT_CHARS,
    static_dir: Optional[str | Path] = None,
    clock: Callable[[], datetime] = lambda: datetime.now(timezone.utc),
) -> FastAPI:
    store = RunStore(store_root)
    write_lock = threading.Lock()
    app = FastAPI(title="jtopics review service")

    def _known_run(run_id: str) -> None:
        try:
            store.manifest(run_id)
        except UnknownRunError:
            raise HTTPException(status_code=404, detail=f"unknown run: {run_id}")

    @app.get("/api/runs")
    def list_runs() -> list[dict]:
        summaries = []
        for manifest in store.list_runs():
            summaries.append(
                {
                    "run_id": manifest.run_id,
                    "backend_id": manifest.backend_id,
                    "started_at": manifest.started_at,
                    "corpus_dir": manifest.corpus_dir,
                    "taxonomy_checksum": manifest.taxonomy_checksum,
                    "cases": len(store.cases(manifest.run_id)),
                    "sampled": len((store.sample(manifest.run_id) or {}).get("case_ids", [])),
                    "verdicts": len(store.verdicts(manifest.run_id)),
                }
            )
        return summaries

    @app.get("/api/taxonomy")
    def get_taxonomy() -> dict:
        return {
            "groups": [
                {"code": code, "name": HIGHER_LEVEL_NAMES[code]} for code in sorted(HIGHER_LEVEL_NAMES)
            ],
            "areas": [
                {
                    "label": area.canonical_label,
                    "short_name": area.short_name,
                    "abbreviation": area.abbreviation,
                    "group": area.group.code,
                }
                for area in taxonomy
            ],
        }

    @app.get("/api/runs/{run_id}/tasks/next")
    def get_next_task(run_id: str, reviewer: str = "") -> Response:
        _known_run(run_id)
        task = pipeline.next_task(store, run_id, excerpt_chars=excerpt_chars)
        if task is None:
            return Response(status_code=204)
        return Response(content=json.dumps(task), media_type="application/json")

    @app.post("/api/runs/{run_id}/verdicts", status_code=201)
    def submit_verdict(run_id: str, submission: VerdictSubmission, response: Response) -> dict:
        _known_run(run_id)
        try:
            verdict = Verdict(submission.verdict)
        except ValueError:
            raise HTTPException(status_code=400, detail=f"unknown verdict: {submission.verdict!r}")

        sample = store.sample(run_id)
        if sample is None or submission.case_id not in sample["case_ids"]:
            raise HTTPException(
                status_code=404, detail=f"case not in review sample: {submission.case_id!r}"
            )

        corrected = submission.corrected_label
        if corrected is not None:
            if taxonomy.find_by_label(corrected) is None:
                raise HTTPException(status_code=400, detail=f"label not in taxonomy: {corrected!r}")
            corrected = taxonomy.find_by_label(corrected).canonical_label
        elif verdict in CORRECTION_REQUIRED:
            raise HTTPException(
                status_code=400,
                detail=f"verdict {verdict.value!r} requires a corrected label",
            )

        classification = next(
            (c for c in store.classifications(run_id) if c["case_id"] == submission.case_id), None
        )
        parsed = (classification or {}).get("parsed") or {}
        record = EvaluationRecord(
            case_id=submission.case_id,
            assigned_primary=parsed.get("primary_raw", ""),
            assigned_secondary=parsed.get("secondary_raw"),
            verdict=verdict,
            corrected_label=corrected,
            reviewer=submission.reviewer,
            submitted_at=clock(),
            note=submission.note,
        )
        with write_lock:
            try:
                stored, created = store.append_verdict(run_id, record)
            except ConflictingVerdictError as exc:
                existing = next(
                    (
                        v
                        for v in store.verdicts(run_id)
                        if v["case_id"] == submission.case_id and v["reviewer"] == submission.reviewer
                    ),
                    None,
                )
                raise HTTPException(
                    status_code=409, detail={"message": str(exc), "existing": existing}
                )
            if created and verdict is Verdict.HALLUCINATED and corrected:
                _maybe_extend_correction_map(store, taxonomy, run_id, record)
        if not created:
            response.status_code = 200
        return stored

    @app.get("/api/runs/{run_id}/metrics")
    def get_metrics(run_id: str) -> dict:
        _known_run(run_id)
        report = pipeline.metrics_for_run(store, run_id)
        if report is None:
            return {
                "total": 0,
                "counts": {v.value: 0 for v in Verdict},
                "initial_accuracy": None,
                "adjusted_accuracy": None,
                "note": "no verdicts",
            }
        return _accuracy_payload(report)

    @app.get("/api/runs/{run_id}/aggregates")
    def get_aggregates(run_id: str) -> dict:
        _known_run(run_id)
        return pipeline.aggregates_for_run(store, taxonomy, run_id).to_json_obj()

    @app.get("/api/runs/{run_id}/cases/{case_id}")
    def get_case(run_id: str, case_id: str) -> dict:
        _known_run(run_id)
        record = store.case(run_id, case_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"unknown case: {case_id!r}")
        return record

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def _maybe_extend_correction_map(
    store: RunStore, taxonomy: Taxonomy, run_id: str, record: EvaluationRecord
) -> None:
    """Record a reviewer-confirmed hallucination mapping as a new map version."""
    raw = record.assigned_primary
    corrections = store.latest_correction_map(run_id)
    if not raw or corrections is None or record.corrected_label is None:
        return
    if corrections.is_ambiguous(raw) or corrections.lookup(raw) is not None:
        return
    outcome = resolve_label(taxonomy, raw, corrections)
    if outcome.resolved is not None:
        return
    store.write_correction_map(
        run_id,
        corrections.with_entry(raw, record.corrected_label, provenance=f"reviewer:{record.reviewer}"),
    )
