"""Shared fixtures: canonical data, synthetic corpora and replay responses."""

from __future__ import annotations

import base64
from dataclasses import dataclass
from datetime import date
from pathlib import Path

import pytest

from jtopics.corpus import load_canonical_court_table
from jtopics.repair import build_correction_map
from jtopics.taxonomy import load_canonical_taxonomy

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def tax():
    return load_canonical_taxonomy()


@pytest.fixture(scope="session")
def courts():
    return load_canonical_court_table()


@pytest.fixture(scope="session")
def cmap():
    return build_correction_map()


def write_case_xml(
    directory: Path,
    case_id: str,
    court: str = "England and Wales High Court (Chancery Division)",
    hearing_date: str = "2020-05-01",
    body: str = "The claimant sought summary judgment.",
    neutral_citation: str | None = None,
    word_count: int | None = None,
) -> Path:
    citation = f"\n  <neutral_citation>{neutral_citation}</neutral_citation>" if neutral_citation else ""
    count = f"\n  <word_count>{word_count}</word_count>" if word_count is not None else ""
    path = directory / f"{case_id}.xml"
    path.write_text(
        f'<case id="{case_id}">\n'
        f"  <court>{court}</court>\n"
        f"  <hearing_date>{hearing_date}</hearing_date>{citation}{count}\n"
        f"  <body>{body}</body>\n"
        f"</case>\n",
        encoding="utf-8",
    )
    return path


def write_fixture_file(path: Path, responses: dict[str, str]) -> Path:
    lines = [
        f"{case_id}\t{base64.b64encode(text.encode('utf-8')).decode('ascii')}"
        for case_id, text in sorted(responses.items())
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def response_text(primary: str, secondary: str | None, explanation: str, confidence: int) -> str:
    return (
        f"Primary topic: {primary}\n"
        f"Secondary topic: {secondary or 'none'}\n"
        f"Explanation: {explanation}\n"
        f"Confidence score: {confidence}\n"
    )


@dataclass(frozen=True)
class FixtureCase:
    """One synthetic case plus the final label the pipeline must assign it."""

    case_id: str
    court: str
    tier: int
    hearing_date: date
    raw_primary: str
    raw_secondary: str | None
    expected_label: str
    expected_group: int


# (raw label, canonical label it must resolve to, higher-level group) used to
# spread fixture cases over statuses and groups; the expectations are written
# down literally so aggregate tests can tally them without the repair code.
_LABEL_ROTATION = [
    ("Contract (CTR)", "Contract (CTR)", 1),
    ("Banking (BAN)", "Banking (BAN)", 1),
    ("Intellectual property (IPR)", "Intellectual property (IPR)", 1),
    ("Construction (CON)", "Construction (CON)", 1),
    ("Crime – fraud (CRF)", "Crime – fraud (CRF)", 2),
    ("Crime – general (CRG)", "Crime – general (CRG)", 2),
    ("Litigation – general (LIG)", "Litigation – general (LIG)", 3),
    ("Dispute resolution – arbitration (DAR)", "Dispute resolution – arbitration (DAR)", 3),
    ("European Union law (EUL)", "European Union law (EUL)", 4),
    ("Cross-border (CRO)", "Cross-border (CRO)", 4),
    ("Defamation (DEF)", "Defamation (DEF)", 5),
    ("Employment (EMP)", "Employment (EMP)", 5),
    ("Planning (PLA)", "Planning (PLA)", 6),
    ("Tax – general (TAG)", "Tax – general (TAG)", 6),
    ("Trusts (PCT)", "Private client – trusts (PCT)", 5),
    ("Banking", "Banking (BAN)", 1),
    ("Fraud – crime (CRF)", "Crime – fraud (CRF)", 2),
    ("Carriage of goods by sea (COG)", "Commercial – general (COG)", 1),
    ("Costs (COS)", "Litigation – general (LIG)", 3),
    ("Privacy (PRI)", "Human rights (HRI)", 5),
    ("Conflict of laws (COL)", "Cross-border (CRO)", 4),
    ("Partnership (PRT)", "Company (COM)", 1),
    ("Restitution (RES)", "Contract (CTR)", 1),
    ("Administrative and public law (PUB)", "Administrative and public law (PUB)", 6),
    ("Insolvency and restructuring – business (INS)", "Insolvency and restructuring – business (INS)", 1),
]

_COURT_ROTATION = [
    ("England and Wales High Court (Chancery Division)", 3),
    ("England and Wales Court of Appeal (Civil Division)", 2),
    ("United Kingdom Supreme Court", 1),
    ("England and Wales High Court (Commercial Court)", 3),
    ("United Kingdom Employment Tribunal", 3),
    ("England and Wales High Court (Technology and Construction Court)", 3),
    ("United Kingdom Employment Appeal Tribunal", 2),
]

# 2020 appears disproportionately, mirroring the fixture's intended spike.
_YEAR_ROTATION = [1999, 2004, 2009, 2014, 2020, 2020, 2020, 2021, 2022, 2023]


def build_fixture50(root: Path) -> tuple[Path, Path, list[FixtureCase]]:
    """A 50-case corpus, replay fixture file and expected final labels."""
    corpus_dir = root / "corpus"
    corpus_dir.mkdir(parents=True, exist_ok=True)
    cases: list[FixtureCase] = []
    responses: dict[str, str] = {}
    for i in range(50):
        case_id = f"case_{i:03d}"
        raw, expected, group = _LABEL_ROTATION[i % len(_LABEL_ROTATION)]
        court, tier = _COURT_ROTATION[i % len(_COURT_ROTATION)]
        year = _YEAR_ROTATION[i % len(_YEAR_ROTATION)]
        # keep boundary years inside the 1999-04-26..2023-06-07 window
        if year == 1999:
            month = 7 + (i % 5)
        elif year == 2023:
            month = 1 + (i % 5)
        else:
            month = 3 + (i % 9)
        hearing = date(year, month, 1 + (i % 27))
        secondary = "Contract (CTR)" if i % 10 == 3 else None
        cases.append(
            FixtureCase(case_id, court, tier, hearing, raw, secondary, expected, group)
        )
        write_case_xml(
            corpus_dir,
            case_id,
            court=court,
            hearing_date=hearing.isoformat(),
            body=f"Summary judgment application number {i} concerning {expected}.",
            word_count=40 + i,
        )
        responses[case_id] = response_text(raw, secondary, f"dispute number {i} analysis", 3 + (i % 3))
    fixtures_path = root / "fixtures.tsv"
    write_fixture_file(fixtures_path, responses)
    return corpus_dir, fixtures_path, cases


@pytest.fixture()
def fixture50(tmp_path):
    return build_fixture50(tmp_path)
