from __future__ import annotations

from datetime import date

import pytest

from jtopics.corpus import (
    WINDOW_END,
    WINDOW_START,
    CaseParseError,
    UnknownCourtError,
    load_corpus,
    parse_case,
)
from tests.conftest import write_case_xml


def test_parse_case_full_document(courts):
    xml = (
        b'<case id="c1">'
        b"<court>England and Wales High Court (Chancery Division)</court>"
        b"<hearing_date>2020-05-01</hearing_date>"
        b"<neutral_citation>[2020] EWHC 100 (Ch)</neutral_citation>"
        b"<word_count>4</word_count>"
        b"<body>Summary judgment granted.</body>"
        b"</case>"
    )
    case = parse_case(xml, "c1", courts)
    assert case.case_id == "[2020] EWHC 100 (Ch)"
    assert case.neutral_citation == "[2020] EWHC 100 (Ch)"
    assert case.hearing_date == date(2020, 5, 1)
    assert case.word_count == 4
    assert case.court_tier.tier == 3
    assert case.court_tier.category == "First Instance Court"


def test_case_id_falls_back_to_file_stem(courts):
    xml = (
        b"<case><court>United Kingdom Supreme Court</court>"
        b"<hearing_date>2010-01-02</hearing_date>"
        b"<body>text</body></case>"
    )
    assert parse_case(xml, "stem_7", courts).case_id == "stem_7"


def test_verbose_date_format_accepted(courts):
    xml = (
        b"<case><court>United Kingdom Supreme Court</court>"
        b"<hearing_date>7 June 2023</hearing_date>"
        b"<body>text</body></case>"
    )
    assert parse_case(xml, "c", courts).hearing_date == date(2023, 6, 7)


def test_word_count_derived_when_tag_missing(courts):
    xml = (
        b"<case><court>United Kingdom Supreme Court</court>"
        b"<hearing_date>2010-01-02</hearing_date>"
        b"<body>one two three</body></case>"
    )
    assert parse_case(xml, "c", courts).word_count == 3


@pytest.mark.parametrize(
    "xml,message",
    [
        (b"<case><hearing_date>2010-01-02</hearing_date><body>t</body></case>", "court"),
        (b"<case><court>United Kingdom Supreme Court</court><body>t</body></case>", "hearing_date"),
        (
            b"<case><court>United Kingdom Supreme Court</court>"
            b"<hearing_date>2010-01-02</hearing_date></case>",
            "body",
        ),
    ],
)
def test_missing_mandatory_tags_rejected(courts, xml, message):
    with pytest.raises(CaseParseError, match=message):
        parse_case(xml, "c", courts)


def test_malformed_xml_rejected(courts):
    with pytest.raises(CaseParseError, match="malformed XML"):
        parse_case(b"<case><court>Unclosed", "c", courts)


def test_unparseable_date_rejected(courts):
    xml = (
        b"<case><court>United Kingdom Supreme Court</court>"
        b"<hearing_date>sometime in spring</hearing_date>"
        b"<body>t</body></case>"
    )
    with pytest.raises(CaseParseError, match="unparseable hearing date"):
        parse_case(xml, "c", courts)


def test_tier_lookup_table(courts):
    assert courts.tier_for_court("United Kingdom Supreme Court").tier == 1
    tier = courts.tier_for_court("United Kingdom Employment Tribunal")
    assert (tier.tier, tier.category) == (3, "First Instance Tribunal")
    assert courts.tier_for_court("  United Kingdom   Supreme Court ").tier == 1
    with pytest.raises(UnknownCourtError):
        courts.tier_for_court("Court of Narnia")


def test_court_table_has_29_seeded_entries(courts):
    assert len(courts) == 29


def test_unknown_court_reported_not_fatal(tmp_path, courts):
    write_case_xml(tmp_path, "c1", court="Court of Narnia")
    cases, report = load_corpus(tmp_path, courts)
    assert len(cases) == 1
    assert cases[0].court_tier is None
    assert report.unknown_courts == {"Court of Narnia": 1}


def test_load_corpus_filters_and_counts(tmp_path, courts):
    for i, day in enumerate(["1998-06-01", "2005-06-01", "2020-01-01", "2023-06-07", "2023-06-08"]):
        write_case_xml(tmp_path, f"case_{i}", hearing_date=day)
    (tmp_path / "broken.xml").write_text("<case><court>", encoding="utf-8")
    cases, report = load_corpus(tmp_path, courts)
    assert [c.case_id for c in cases] == ["case_1", "case_2", "case_3"]
    assert report.files == 6
    assert report.excluded_by_date == 2
    assert report.parse_failures == 1
    assert report.loaded + report.excluded_by_date + report.parse_failures == report.files
    assert all(WINDOW_START <= c.hearing_date <= WINDOW_END for c in cases)


def test_load_corpus_is_order_deterministic(tmp_path, courts):
    for case_id in ("zeta", "alpha", "mid"):
        write_case_xml(tmp_path, case_id)
    first, _ = load_corpus(tmp_path, courts)
    second, _ = load_corpus(tmp_path, courts)
    assert [c.case_id for c in first] == [c.case_id for c in second] == ["alpha", "mid", "zeta"]


def test_empty_directory(tmp_path, courts):
    cases, report = load_corpus(tmp_path, courts)
    assert cases == []
    assert report.files == 0
