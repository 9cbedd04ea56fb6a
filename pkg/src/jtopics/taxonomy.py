"""Functional taxonomy of UK legal areas: loading, validation and lookup.

The taxonomy is a flat list of specific areas of law, each tagged with a
three-letter abbreviation and assigned to one of six higher-level groups.
It ships as a data file so alternative taxonomies can be loaded; the
canonical file lives in ``jtopics/data/taxonomy.txt``.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

EN_DASH = "–"

# Number of specific areas the taxonomy is documented to contain.  The
# shipped canonical file is validated against this; validate() reports the
# actual count rather than refusing to load.
EXPECTED_AREA_COUNT = 108
EXPECTED_GROUP_COUNT = 6
EXPECTED_COLLISIONS = {"CSG"}

HIGHER_LEVEL_NAMES = {
    1: "Commercial law",
    2: "Criminal law",
    3: "Dispute resolution law",
    4: "International law",
    5: "Personal and consumer matters",
    6: "Public law",
}

_LINE_RE = re.compile(r"^([0-9])\s+(.+?)\s*\(([A-Za-z]{3})\)\s*$")
_ABBR_RE = re.compile(r"^[A-Z]{3}$")


class TaxonomyError(ValueError):
    """Raised when a taxonomy file cannot be loaded."""


@dataclass(frozen=True)
class HigherLevelArea:
    """One of the six top-level groups of the taxonomy."""

    code: int
    name: str

    def __post_init__(self):
        if self.code not in HIGHER_LEVEL_NAMES:
            raise TaxonomyError(f"higher-level group code out of range 1..6: {self.code}")
        if HIGHER_LEVEL_NAMES[self.code] != self.name:
            raise TaxonomyError(f"group code {self.code} does not name {self.name!r}")

    @classmethod
    def from_code(cls, code: int) -> "HigherLevelArea":
        if code not in HIGHER_LEVEL_NAMES:
            raise TaxonomyError(f"higher-level group code out of range 1..6: {code}")
        return cls(code, HIGHER_LEVEL_NAMES[code])


@dataclass(frozen=True)
class LegalArea:
    """A specific area of law, e.g. "Private client – trusts (PCT)"."""

    short_name: str
    abbreviation: str
    group: HigherLevelArea

    def __post_init__(self):
        if not _ABBR_RE.match(self.abbreviation):
            raise TaxonomyError(f"abbreviation must be three uppercase letters: {self.abbreviation!r}")
        if " - " in self.short_name:
            raise TaxonomyError(f"short name uses hyphen-minus as a separator: {self.short_name!r}")

    @property
    def canonical_label(self) -> str:
        return f"{self.short_name} ({self.abbreviation})"


def normalize_label(text: str) -> str:
    """Normalize a label for matching: case-fold, unify dashes, collapse spaces.

    Hyphen-minus, en-dash and em-dash are unified to en-dash and spaced
    uniformly, so "Fraud - crime", "Fraud – crime" and "fraud–crime" compare
    equal.  Idempotent.
    """
    text = unicodedata.normalize("NFC", text)
    text = text.casefold()
    text = re.sub(r"[-–—]", EN_DASH, text)
    text = text.replace(EN_DASH, f" {EN_DASH} ")
    text = re.sub(r"\s+", " ", text)
    return text.strip()


@dataclass
class ValidationReport:
    """Outcome of validating a loaded taxonomy against its documented shape."""

    area_count: int
    expected_area_count: int
    group_sizes: dict[int, int]
    collisions: dict[str, list[str]]
    duplicate_labels: list[str]
    passed: bool

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lines = [
            f"{status}: {self.area_count} areas (expected {self.expected_area_count}), "
            f"{len(self.group_sizes)} groups, {len(self.collisions)} abbreviation collision(s)",
        ]
        for code in sorted(self.group_sizes):
            lines.append(f"  group {code} ({HIGHER_LEVEL_NAMES[code]}): {self.group_sizes[code]} areas")
        for abbr, labels in sorted(self.collisions.items()):
            lines.append(f"  collision {abbr}: {', '.join(labels)}")
        for label in self.duplicate_labels:
            lines.append(f"  duplicate label: {label}")
        return "\n".join(lines)


class Taxonomy:
    """Immutable, indexed collection of legal areas in file order."""

    def __init__(self, areas: Iterable[LegalArea]):
        self.areas: tuple[LegalArea, ...] = tuple(areas)
        self.by_label: dict[str, LegalArea] = {}
        self.by_abbreviation: dict[str, set[LegalArea]] = {}
        self._by_norm_label: dict[str, LegalArea] = {}
        self._by_norm_short: dict[str, list[LegalArea]] = {}
        for area in self.areas:
            label = area.canonical_label
            if label in self.by_label:
                raise TaxonomyError(f"duplicate canonical label: {label!r}")
            self.by_label[label] = area
            self.by_abbreviation.setdefault(area.abbreviation, set()).add(area)
            self._by_norm_label[normalize_label(label)] = area
            self._by_norm_short.setdefault(normalize_label(area.short_name), []).append(area)

    def __len__(self) -> int:
        return len(self.areas)

    def __iter__(self):
        return iter(self.areas)

    @property
    def groups(self) -> list[HigherLevelArea]:
        return [HigherLevelArea.from_code(c) for c in sorted(HIGHER_LEVEL_NAMES)]

    def find_by_abbreviation(self, code: str) -> set[LegalArea]:
        """All areas whose abbreviation equals the given code, case-insensitively."""
        return set(self.by_abbreviation.get(code.strip().upper(), set()))

    def find_by_canonical(self, label: str) -> Optional[LegalArea]:
        """Match a full canonical label ("Contract (CTR)") after normalization."""
        return self._by_norm_label.get(normalize_label(label))

    def find_by_short_name(self, name: str) -> list[LegalArea]:
        """All areas whose short name matches after normalization."""
        return list(self._by_norm_short.get(normalize_label(name), []))

    def find_by_label(self, label: str) -> Optional[LegalArea]:
        """Exact match on canonical label after normalization.

        A bare short name with no abbreviation suffix also matches, provided
        that short name is unique in the taxonomy.
        """
        area = self.find_by_canonical(label)
        if area is not None:
            return area
        candidates = self.find_by_short_name(label)
        if len(candidates) == 1:
            return candidates[0]
        return None

    def serialize(self) -> str:
        """Render back to the canonical line format (round-trips the file)."""
        return "".join(f"{a.group.code} {a.canonical_label}\n" for a in self.areas)

    def validate(self, expected_count: int = EXPECTED_AREA_COUNT) -> ValidationReport:
        """Check the documented shape: area count, six groups, the known CSG collision."""
        group_sizes = {code: 0 for code in HIGHER_LEVEL_NAMES}
        for area in self.areas:
            group_sizes[area.group.code] += 1
        collisions = {
            abbr: sorted(a.canonical_label for a in areas)
            for abbr, areas in self.by_abbreviation.items()
            if len(areas) > 1
        }
        seen: set[str] = set()
        duplicates: list[str] = []
        for area in self.areas:
            if area.canonical_label in seen:
                duplicates.append(area.canonical_label)
            seen.add(area.canonical_label)
        passed = (
            len(self.areas) == expected_count
            and all(size > 0 for size in group_sizes.values())
            and set(collisions) == EXPECTED_COLLISIONS
            and not duplicates
        )
        return ValidationReport(
            area_count=len(self.areas),
            expected_area_count=expected_count,
            group_sizes=group_sizes,
            collisions=collisions,
            duplicate_labels=duplicates,
            passed=passed,
        )


def parse_taxonomy(text: str, source: str = "<string>") -> Taxonomy:
    """Parse taxonomy file content: "<group-digit> <short name> (<ABBR>)" per line."""
    areas: list[LegalArea] = []
    labels: set[str] = set()
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        match = _LINE_RE.match(line)
        if not match:
            raise TaxonomyError(f"{source}:{lineno}: malformed area line: {raw_line!r}")
        digit, short_name, abbr = match.groups()
        code = int(digit)
        if code not in HIGHER_LEVEL_NAMES:
            raise TaxonomyError(f"{source}:{lineno}: group digit out of range 1..6: {digit}")
        if not _ABBR_RE.match(abbr):
            raise TaxonomyError(f"{source}:{lineno}: abbreviation not three uppercase letters: {abbr!r}")
        area = LegalArea(short_name, abbr, HigherLevelArea.from_code(code))
        if area.canonical_label in labels:
            raise TaxonomyError(f"{source}:{lineno}: duplicate canonical label: {area.canonical_label!r}")
        labels.add(area.canonical_label)
        areas.append(area)
    return Taxonomy(areas)


def load_taxonomy(source: str | Path, expected_count: int | None = None) -> Taxonomy:
    """Load a taxonomy from a UTF-8 data file, preserving area order.

    When ``expected_count`` is given, a mismatching file is rejected;
    otherwise the count is reported through :meth:`Taxonomy.validate`.
    """
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise TaxonomyError(f"cannot read taxonomy file {path}: {exc}") from exc
    taxonomy = parse_taxonomy(text, source=str(path))
    if expected_count is not None and len(taxonomy) != expected_count:
        raise TaxonomyError(
            f"{path}: expected {expected_count} areas, found {len(taxonomy)}"
        )
    return taxonomy


def canonical_taxonomy_path() -> Path:
    """Path of the taxonomy data file shipped with the package."""
    return Path(resources.files("jtopics.data") / "taxonomy.txt")


def load_canonical_taxonomy() -> Taxonomy:
    return load_taxonomy(canonical_taxonomy_path())
