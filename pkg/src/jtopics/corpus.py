"""Case document ingestion: XML parsing, court-tier lookup and date filtering.

The corpus is a directory of per-case XML files with a small fixed tag set
(court, hearing date, optional neutral citation, word count, body text).
Cases are filtered to the summary-judgment window and returned in a
deterministic order.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import date, datetime
from importlib import resources
from pathlib import Path
from typing import Optional

WINDOW_START = date(1999, 4, 26)
WINDOW_END = date(2023, 6, 7)

TIER_CATEGORIES = {
    1: {"Court of Last Resort"},
    2: {"Appellate Court", "Appellate Tribunal"},
    3: {"First Instance Court", "First Instance Tribunal"},
}


class CaseParseError(ValueError):
    """Raised when a case XML file cannot be turned into a CaseDocument."""


class UnknownCourtError(LookupError):
    """Raised when a court name is absent from the tier table."""


@dataclass(frozen=True)
class CourtTier:
    tier: int
    category: str

    def __post_init__(self):
        if self.tier not in TIER_CATEGORIES:
            raise ValueError(f"tier out of range 1..3: {self.tier}")
        if self.category not in TIER_CATEGORIES[self.tier]:
            raise ValueError(f"category {self.category!r} is not a tier-{self.tier} category")


@dataclass(frozen=True)
class CaseDocument:
    case_id: str
    court_name: str
    hearing_date: date
    neutral_citation: Optional[str]
    word_count: int
    court_tier: Optional[CourtTier]
    full_text: str

    def __post_init__(self):
        if not self.full_text:
            raise ValueError("full_text must be non-empty")
        if self.word_count < 0:
            raise ValueError("word_count must be non-negative")


def _normalize_court(name: str) -> str:
    return re.sub(r"\s+", " ", name).strip()


class CourtTable:
    """Exact-match court name to tier lookup, seeded from the tier table file."""

    def __init__(self, entries: dict[str, CourtTier]):
        self._entries = {_normalize_court(k): v for k, v in entries.items()}

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def court_names(self) -> list[str]:
        return sorted(self._entries)

    def tier_for_court(self, court_name: str) -> CourtTier:
        key = _normalize_court(court_name)
        try:
            return self._entries[key]
        except KeyError:
            raise UnknownCourtError(f"unknown court: {court_name!r}") from None


def load_court_table(source: str | Path) -> CourtTable:
    """Load "<tier-digit>|<category>|<court name>" lines into a CourtTable."""
    path = Path(source)
    entries: dict[str, CourtTier] = {}
    for lineno, raw_line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("|")
        if len(parts) != 3:
            raise ValueError(f"{path}:{lineno}: malformed court line: {raw_line!r}")
        digit, category, name = (p.strip() for p in parts)
        entries[name] = CourtTier(int(digit), category)
    return CourtTable(entries)


def canonical_court_table_path() -> Path:
    return Path(resources.files("jtopics.data") / "court_tiers.txt")


def load_canonical_court_table() -> CourtTable:
    return load_court_table(canonical_court_table_path())


def _parse_hearing_date(text: str) -> date:
    value = text.strip()
    try:
        return date.fromisoformat(value)
    except ValueError:
        pass
    try:
        return datetime.strptime(value, "%d %B %Y").date()
    except ValueError:
        raise CaseParseError(f"unparseable hearing date: {value!r}") from None


def parse_case(xml_bytes: bytes, case_id: str, courts: CourtTable) -> CaseDocument:
    """Parse one case XML document.

    ``case_id`` is the fallback identifier (normally the file stem); when a
    neutral citation is present it takes precedence.  Unknown courts leave
    ``court_tier`` unset; the caller surfaces them in the ingestion report.
    """
    try:
        root = ET.fromstring(xml_bytes)
    except ET.ParseError as exc:
        raise CaseParseError(f"malformed XML: {exc}") from exc

    def text_of(tag: str) -> Optional[str]:
        el = root.find(tag)
        if el is None:
            return None
        return (el.text or "").strip()

    court_name = text_of("court")
    if not court_name:
        raise CaseParseError("missing mandatory tag: court")
    date_text = text_of("hearing_date")
    if not date_text:
        raise CaseParseError("missing mandatory tag: hearing_date")
    body = text_of("body")
    if not body:
        raise CaseParseError("missing mandatory tag: body")

    hearing_date = _parse_hearing_date(date_text)
    neutral_citation = text_of("neutral_citation") or None

    word_count_text = text_of("word_count")
    if word_count_text is None or word_count_text == "":
        word_count = len(body.split())
    else:
        try:
            word_count = int(word_count_text)
        except ValueError:
            raise CaseParseError(f"non-integer word count: {word_count_text!r}") from None
        if word_count < 0:
            raise CaseParseError(f"negative word count: {word_count}")

    try:
        tier: Optional[CourtTier] = courts.tier_for_court(court_name)
    except UnknownCourtError:
        tier = None

    return CaseDocument(
        case_id=neutral_citation or case_id,
        court_name=_normalize_court(court_name),
        hearing_date=hearing_date,
        neutral_citation=neutral_citation,
        word_count=word_count,
        court_tier=tier,
        full_text=body,
    )


@dataclass
class IngestionReport:
    files: int = 0
    loaded: int = 0
    excluded_by_date: int = 0
    parse_failures: int = 0
    failures: list[tuple[str, str]] = field(default_factory=list)
    unknown_courts: dict[str, int] = field(default_factory=dict)

    def summary(self) -> str:
        parts = [
            f"files={self.files}",
            f"loaded={self.loaded}",
            f"excluded_by_date={self.excluded_by_date}",
            f"parse_failures={self.parse_failures}",
        ]
        if self.unknown_courts:
            parts.append("unknown_courts=" + ",".join(sorted(self.unknown_courts)))
        return " ".join(parts)


def load_corpus(
    directory: str | Path,
    courts: CourtTable,
    window: tuple[date, date] = (WINDOW_START, WINDOW_END),
) -> tuple[list[CaseDocument], IngestionReport]:
    """Load all ``*.xml`` case files under ``directory``.

    Cases outside the hearing-date window and unparseable files are excluded
    and counted.  The returned sequence is ordered lexicographically by
    case_id, so repeat loads of the same directory are identical.
    """
    root = Path(directory)
    if not root.is_dir():
        raise NotADirectoryError(f"corpus directory not found: {root}")
    start, end = window
    report = IngestionReport()
    cases: list[CaseDocument] = []
    for path in sorted(root.glob("*.xml")):
        report.files += 1
        try:
            case = parse_case(path.read_bytes(), path.stem, courts)
        except CaseParseError as exc:
            report.parse_failures += 1
            report.failures.append((path.name, str(exc)))
            continue
        if not (start <= case.hearing_date <= end):
            report.excluded_by_date += 1
            continue
        if case.court_tier is None:
            report.unknown_courts[case.court_name] = report.unknown_courts.get(case.court_name, 0) + 1
        cases.append(case)
        report.loaded += 1
    cases.sort(key=lambda c: c.case_id)
    return cases, report
