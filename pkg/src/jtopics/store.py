"""Per-run persistence: line-delimited record files, written atomically.

A run directory holds the manifest, the ingested cases, raw and parsed
classifications, repair outcomes, the review sample, the verdict log and
correction-map versions.  Files are staged and renamed into place so a crash
never leaves a partially visible run, and identical inputs always produce
byte-identical files.
"""

from __future__ import annotations

import json
import os
import shutil
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional

from .classifier import ParsedClassification, ResponseParseError
from .corpus import CaseDocument, CourtTier
from .evaluation import EvaluationRecord, Verdict
from .repair import CorrectionMap, RepairOutcome, load_correction_map


class StoreError(RuntimeError):
    pass


class RunExistsError(StoreError):
    pass


class UnknownRunError(StoreError):
    pass


class ConflictingVerdictError(StoreError):
    pass


@dataclass(frozen=True)
class RunManifest:
    run_id: str
    taxonomy_checksum: str
    corpus_dir: str
    backend_id: str
    started_at: str
    config: dict[str, str] = field(default_factory=dict)


def _json_line(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True) + "\n"


def _read_jsonl(path: Path) -> list[dict]:
    if not path.exists():
        return []
    records = []
    lines = [line for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]
    for index, line in enumerate(lines):
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError:
            if index == len(lines) - 1:
                # a crash mid-append can truncate the final line; ignore it
                continue
            raise StoreError(f"{path}:{index + 1}: corrupt record line") from None
    return records


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8", newline="")
    os.replace(tmp, path)


def case_record(case: CaseDocument) -> dict:
    return {
        "case_id": case.case_id,
        "court_name": case.court_name,
        "hearing_date": case.hearing_date.isoformat(),
        "neutral_citation": case.neutral_citation,
        "word_count": case.word_count,
        "tier": case.court_tier.tier if case.court_tier else None,
        "tier_category": case.court_tier.category if case.court_tier else None,
        "full_text": case.full_text,
    }


def case_from_record(record: dict) -> CaseDocument:
    from datetime import date

    tier = None
    if record.get("tier") is not None:
        tier = CourtTier(record["tier"], record["tier_category"])
    return CaseDocument(
        case_id=record["case_id"],
        court_name=record["court_name"],
        hearing_date=date.fromisoformat(record["hearing_date"]),
        neutral_citation=record.get("neutral_citation"),
        word_count=record["word_count"],
        court_tier=tier,
        full_text=record["full_text"],
    )


def classification_record(
    case_id: str,
    response_text: str,
    parsed: Optional[ParsedClassification],
    parse_error: Optional[ResponseParseError],
) -> dict:
    record: dict = {"case_id": case_id, "response_text": response_text}
    record["parsed"] = None
    record["parse_error"] = None
    if parsed is not None:
        record["parsed"] = {
            "primary_raw": parsed.primary_raw,
            "secondary_raw": parsed.secondary_raw,
            "explanation": parsed.explanation,
            "confidence": parsed.confidence,
        }
    if parse_error is not None:
        record["parse_error"] = {"field": parse_error.field, "message": str(parse_error)}
    return record


def repair_record(case_id: str, primary: RepairOutcome, secondary: Optional[RepairOutcome]) -> dict:
    def one(outcome: RepairOutcome) -> dict:
        return {
            "original_raw": outcome.original_raw,
            "status": outcome.status.value,
            "method": outcome.method.value,
            "resolved": outcome.resolved.canonical_label if outcome.resolved else None,
        }

    return {
        "case_id": case_id,
        "primary": one(primary),
        "secondary": one(secondary) if secondary else None,
    }


def verdict_record(record: EvaluationRecord) -> dict:
    return {
        "case_id": record.case_id,
        "assigned_primary": record.assigned_primary,
        "assigned_secondary": record.assigned_secondary,
        "verdict": record.verdict.value,
        "corrected_label": record.corrected_label,
        "reviewer": record.reviewer,
        "submitted_at": record.submitted_at.isoformat(),
        "note": record.note,
    }


def verdict_from_record(record: dict) -> EvaluationRecord:
    return EvaluationRecord(
        case_id=record["case_id"],
        assigned_primary=record["assigned_primary"],
        assigned_secondary=record.get("assigned_secondary"),
        verdict=Verdict(record["verdict"]),
        corrected_label=record.get("corrected_label"),
        reviewer=record["reviewer"],
        submitted_at=datetime.fromisoformat(record["submitted_at"]),
        note=record.get("note"),
    )


def _same_verdict_payload(a: dict, b: dict) -> bool:
    keys = ("case_id", "verdict", "corrected_label", "reviewer", "note")
    return all(a.get(k) == b.get(k) for k in keys)


class RunStore:
    """File-backed store of pipeline runs under one root directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _run_dir(self, run_id: str, must_exist: bool = True) -> Path:
        path = self.root / run_id
        if must_exist and not (path / "manifest.json").exists():
            raise UnknownRunError(f"unknown run: {run_id!r}")
        return path

    def list_runs(self) -> list[RunManifest]:
        manifests = []
        for entry in sorted(self.root.iterdir()):
            manifest_path = entry / "manifest.json"
            if entry.is_dir() and not entry.name.endswith(".staging") and manifest_path.exists():
                manifests.append(RunManifest(**json.loads(manifest_path.read_text(encoding="utf-8"))))
        return manifests

    def create_run(
        self,
        manifest: RunManifest,
        cases: Iterable[CaseDocument],
        classifications: Iterable[dict],
    ) -> Path:
        """Persist a new run atomically; the run becomes visible only when complete."""
        final_dir = self.root / manifest.run_id
        if final_dir.exists():
            raise RunExistsError(f"run already exists: {manifest.run_id!r}")
        staging = self.root / f"{manifest.run_id}.staging"
        if staging.exists():
            shutil.rmtree(staging)
        staging.mkdir(parents=True)
        try:
            (staging / "manifest.json").write_text(
                json.dumps(asdict(manifest), ensure_ascii=False, sort_keys=True, indent=2) + "\n",
                encoding="utf-8",
                newline="",
            )
            (staging / "cases.jsonl").write_text(
                "".join(_json_line(case_record(c)) for c in cases), encoding="utf-8", newline=""
            )
            (staging / "classifications.jsonl").write_text(
                "".join(_json_line(r) for r in classifications), encoding="utf-8", newline=""
            )
            os.rename(staging, final_dir)
        except BaseException:
            if staging.exists():
                shutil.rmtree(staging, ignore_errors=True)
            raise
        return final_dir

    # --- readers ---------------------------------------------------------

    def manifest(self, run_id: str) -> RunManifest:
        path = self._run_dir(run_id) / "manifest.json"
        return RunManifest(**json.loads(path.read_text(encoding="utf-8")))

    def cases(self, run_id: str) -> list[dict]:
        return _read_jsonl(self._run_dir(run_id) / "cases.jsonl")

    def case(self, run_id: str, case_id: str) -> Optional[dict]:
        for record in self.cases(run_id):
            if record["case_id"] == case_id:
                return record
        return None

    def classifications(self, run_id: str) -> list[dict]:
        return _read_jsonl(self._run_dir(run_id) / "classifications.jsonl")

    def repairs(self, run_id: str) -> list[dict]:
        return _read_jsonl(self._run_dir(run_id) / "repairs.jsonl")

    def sample(self, run_id: str) -> Optional[dict]:
        path = self._run_dir(run_id) / "sample.json"
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))

    def verdicts(self, run_id: str) -> list[dict]:
        return _read_jsonl(self._run_dir(run_id) / "verdicts.jsonl")

    # --- writers ---------------------------------------------------------

    def write_repairs(self, run_id: str, records: Iterable[dict]) -> Path:
        path = self._run_dir(run_id) / "repairs.jsonl"
        _atomic_write(path, "".join(_json_line(r) for r in records))
        return path

    def write_sample(self, run_id: str, sample: dict) -> Path:
        path = self._run_dir(run_id) / "sample.json"
        _atomic_write(path, json.dumps(sample, ensure_ascii=False, sort_keys=True, indent=2) + "\n")
        return path

    def append_verdict(self, run_id: str, record: EvaluationRecord) -> tuple[dict, bool]:
        """Append one verdict; idempotent for identical payloads.

        Returns (stored record, created).  A different payload for the same
        (case_id, reviewer) pair is a conflict.
        """
        new = verdict_record(record)
        for existing in self.verdicts(run_id):
            if existing["case_id"] == record.case_id and existing["reviewer"] == record.reviewer:
                if _same_verdict_payload(existing, new):
                    return existing, False
                raise ConflictingVerdictError(
                    f"conflicting verdict for case {record.case_id!r} by {record.reviewer!r}"
                )
        path = self._run_dir(run_id) / "verdicts.jsonl"
        with path.open("a", encoding="utf-8", newline="") as handle:
            handle.write(_json_line(new))
            handle.flush()
            os.fsync(handle.fileno())
        return new, True

    # --- correction-map versions -----------------------------------------

    def correction_map_versions(self, run_id: str) -> list[int]:
        run_dir = self._run_dir(run_id)
        versions = []
        for path in run_dir.glob("corrections.v*.txt"):
            suffix = path.name[len("corrections.v"):-len(".txt")]
            if suffix.isdigit():
                versions.append(int(suffix))
        return sorted(versions)

    def latest_correction_map(self, run_id: str) -> Optional[CorrectionMap]:
        versions = self.correction_map_versions(run_id)
        if not versions:
            return None
        return load_correction_map(self._run_dir(run_id) / f"corrections.v{versions[-1]}.txt")

    def write_correction_map(self, run_id: str, corrections: CorrectionMap) -> Path:
        versions = self.correction_map_versions(run_id)
        next_version = (versions[-1] + 1) if versions else 1
        path = self._run_dir(run_id) / f"corrections.v{next_version}.txt"
        _atomic_write(path, corrections.serialize())
        return path


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()
