"""Resolution of raw model topic labels against the taxonomy.

Model output is either an exact canonical label, a minor hallucination (the
right category under a malformed name, repaired automatically), or a major
hallucination (a label that is not in the taxonomy at all, resolved through a
curated correction map or escalated to a human).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from .taxonomy import LegalArea, Taxonomy, normalize_label


class RepairStatus(str, Enum):
    EXACT = "Exact"
    MINOR_REPAIRED = "MinorRepaired"
    MAJOR_MAPPED = "MajorMapped"
    UNRESOLVED = "Unresolved"


class RepairMethod(str, Enum):
    EXACT = "exact"
    NAME_MATCH = "name-match"
    ABBREVIATION_MATCH = "abbreviation-match"
    CORRECTION_MAP = "correction-map"
    NONE = "none"


_ALLOWED_METHODS = {
    RepairStatus.EXACT: {RepairMethod.EXACT},
    RepairStatus.MINOR_REPAIRED: {RepairMethod.NAME_MATCH, RepairMethod.ABBREVIATION_MATCH},
    RepairStatus.MAJOR_MAPPED: {RepairMethod.CORRECTION_MAP},
    RepairStatus.UNRESOLVED: {RepairMethod.NONE},
}


@dataclass(frozen=True)
class RepairOutcome:
    original_raw: str
    status: RepairStatus
    resolved: Optional[LegalArea]
    method: RepairMethod

    def __post_init__(self):
        if self.method not in _ALLOWED_METHODS[self.status]:
            raise ValueError(f"method {self.method.value} invalid for status {self.status.value}")
        if (self.resolved is None) != (self.status is RepairStatus.UNRESOLVED):
            raise ValueError("resolved area present iff status is not Unresolved")


@dataclass(frozen=True)
class CorrectionEntry:
    raw_label: str
    target_label: str
    provenance: str


class CorrectionMap:
    """Curated mapping from hallucinated labels to canonical labels.

    Context-ambiguous raw labels (the same hallucination was corrected to
    different areas depending on the case) live in a separate set and are
    never auto-mapped.  Immutable; adding entries produces a new version.
    """

    def __init__(self, entries: Iterable[CorrectionEntry], ambiguous: Iterable[str] = ()):
        self.entries: tuple[CorrectionEntry, ...] = tuple(entries)
        self.ambiguous: frozenset[str] = frozenset(normalize_label(a) for a in ambiguous)
        self._by_norm: dict[str, CorrectionEntry] = {}
        for entry in self.entries:
            key = normalize_label(entry.raw_label)
            if key in self.ambiguous:
                raise ValueError(f"{entry.raw_label!r} is ambiguous and cannot be auto-mapped")
            self._by_norm[key] = entry

    def lookup(self, raw: str) -> Optional[CorrectionEntry]:
        return self._by_norm.get(normalize_label(raw))

    def is_ambiguous(self, raw: str) -> bool:
        return normalize_label(raw) in self.ambiguous

    def with_entry(self, raw_label: str, target_label: str, provenance: str) -> "CorrectionMap":
        """New map version with one appended entry."""
        return CorrectionMap(
            list(self.entries) + [CorrectionEntry(raw_label, target_label, provenance)],
            [a for a in sorted(self.ambiguous)],
        )

    def validate_targets(self, taxonomy: Taxonomy) -> None:
        for entry in self.entries:
            if taxonomy.find_by_label(entry.target_label) is None:
                raise ValueError(f"correction target not in taxonomy: {entry.target_label!r}")

    def serialize(self) -> str:
        lines = [f"{e.raw_label}\t{e.target_label}" for e in self.entries]
        lines += [f"?\t{raw}" for raw in sorted(self.ambiguous)]
        return "\n".join(lines) + "\n"


def load_correction_map(source: str | Path) -> CorrectionMap:
    """Load "<raw label><TAB><canonical label>" lines; "?<TAB><raw>" marks ambiguous."""
    path = Path(source)
    entries: list[CorrectionEntry] = []
    ambiguous: list[str] = []
    for lineno, raw_line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw_line.rstrip()
        if not line or line.startswith("#"):
            continue
        first, _, rest = line.partition("\t")
        if first == "?":
            if not rest:
                raise ValueError(f"{path}:{lineno}: ambiguous line missing label")
            ambiguous.append(rest)
            continue
        if not rest:
            raise ValueError(f"{path}:{lineno}: expected raw<TAB>canonical")
        entries.append(CorrectionEntry(first, rest, provenance=f"{path.name}:{lineno}"))
    return CorrectionMap(entries, ambiguous)


def canonical_correction_map_path() -> Path:
    return Path(resources.files("jtopics.data") / "corrections.txt")


def build_correction_map() -> CorrectionMap:
    """The seeded correction map shipped with the package."""
    return load_correction_map(canonical_correction_map_path())


_CODE_RE = re.compile(r"\(([A-Z]{3})\)")


def _strip_code(raw: str) -> str:
    return _CODE_RE.sub("", raw).strip()


def _tokens(text: str) -> set[str]:
    return {t for t in normalize_label(text).split() if t != "–"}


def _name_similarity(raw: str, area: LegalArea) -> float:
    a, b = _tokens(_strip_code(raw)), _tokens(area.short_name)
    if not a or not b:
        return 0.0
    return len(a & b) / max(len(a), len(b))


def resolve_label(taxonomy: Taxonomy, raw: str, corrections: CorrectionMap) -> RepairOutcome:
    """Resolve one raw topic label against the taxonomy.

    Cheapest signals first: exact canonical label, then a bare or misnamed
    short name, then the curated correction map (checked before abbreviation
    rescue, because several major hallucinations carry a code that clashes
    with an unrelated area, e.g. "Contempt of court (CON)" vs Construction),
    then the "(ABC)" abbreviation.  Anything left is Unresolved, which is a
    value, not an error.
    """
    raw = raw.strip()

    area = taxonomy.find_by_canonical(raw)
    if area is not None:
        return RepairOutcome(raw, RepairStatus.EXACT, area, RepairMethod.EXACT)

    candidates = taxonomy.find_by_short_name(raw)
    if len(candidates) == 1:
        return RepairOutcome(raw, RepairStatus.MINOR_REPAIRED, candidates[0], RepairMethod.NAME_MATCH)

    if corrections.is_ambiguous(raw):
        return RepairOutcome(raw, RepairStatus.UNRESOLVED, None, RepairMethod.NONE)
    entry = corrections.lookup(raw)
    if entry is not None:
        target = taxonomy.find_by_label(entry.target_label)
        if target is not None:
            return RepairOutcome(raw, RepairStatus.MAJOR_MAPPED, target, RepairMethod.CORRECTION_MAP)

    code_match = _CODE_RE.search(raw)
    if code_match:
        areas = sorted(taxonomy.find_by_abbreviation(code_match.group(1)), key=lambda a: a.canonical_label)
        if len(areas) == 1:
            return RepairOutcome(raw, RepairStatus.MINOR_REPAIRED, areas[0], RepairMethod.ABBREVIATION_MATCH)
        if len(areas) > 1:
            scored = sorted(areas, key=lambda a: -_name_similarity(raw, a))
            best, runner_up = scored[0], scored[1]
            if _name_similarity(raw, best) > _name_similarity(raw, runner_up):
                return RepairOutcome(raw, RepairStatus.MINOR_REPAIRED, best, RepairMethod.ABBREVIATION_MATCH)
            return RepairOutcome(raw, RepairStatus.UNRESOLVED, None, RepairMethod.NONE)

    return RepairOutcome(raw, RepairStatus.UNRESOLVED, None, RepairMethod.NONE)


@dataclass
class HallucinationReport:
    total: int
    exact: int
    minor: int
    major: int
    unresolved: int
    in_taxonomy_rate: Optional[float]

    def summary(self) -> str:
        rate = "n/a (no outcomes)" if self.in_taxonomy_rate is None else f"{self.in_taxonomy_rate:.2f}%"
        return (
            f"total={self.total} exact={self.exact} minor={self.minor} "
            f"major={self.major} unresolved={self.unresolved} in_taxonomy_rate={rate}"
        )


def hallucination_report(outcomes: Iterable[RepairOutcome]) -> HallucinationReport:
    """Tally repair statuses; the in-taxonomy rate is exact matches over total."""
    counts = {status: 0 for status in RepairStatus}
    total = 0
    for outcome in outcomes:
        counts[outcome.status] += 1
        total += 1
    rate = round(counts[RepairStatus.EXACT] / total * 100, 2) if total else None
    return HallucinationReport(
        total=total,
        exact=counts[RepairStatus.EXACT],
        minor=counts[RepairStatus.MINOR_REPAIRED],
        major=counts[RepairStatus.MAJOR_MAPPED],
        unresolved=counts[RepairStatus.UNRESOLVED],
        in_taxonomy_rate=rate,
    )
