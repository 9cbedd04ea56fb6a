from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jtopics.taxonomy import (
    TaxonomyError,
    canonical_taxonomy_path,
    load_taxonomy,
    normalize_label,
    parse_taxonomy,
)


def test_canonical_file_loads_with_known_shape(tax):
    report = tax.validate()
    assert report.group_sizes == {1: 28, 2: 8, 3: 9, 4: 7, 5: 42, 6: 13}
    assert report.area_count == len(tax) == sum(report.group_sizes.values())
    assert list(report.collisions) == ["CSG"]
    assert not report.duplicate_labels


def test_area_order_is_preserved(tax):
    assert tax.areas[0].canonical_label == "Administrative and public law (PUB)"
    assert tax.areas[-1].canonical_label == "Travel and tourism (TAT)"


def test_parse_single_line_fields():
    taxonomy = parse_taxonomy("1 Contract (CTR)\n")
    area = taxonomy.areas[0]
    assert area.short_name == "Contract"
    assert area.abbreviation == "CTR"
    assert area.group.code == 1
    assert area.canonical_label == "Contract (CTR)"


def test_parse_subdivided_line():
    taxonomy = parse_taxonomy("5 Private client – trusts (PCT)\n")
    assert taxonomy.areas[0].group.code == 5


def test_group_digit_out_of_range_rejected():
    with pytest.raises(TaxonomyError, match="out of range"):
        parse_taxonomy("7 Bogus (BOG)\n")


def test_malformed_lines_rejected():
    with pytest.raises(TaxonomyError, match="malformed"):
        parse_taxonomy("Contract (CTR)\n")
    with pytest.raises(TaxonomyError, match="malformed"):
        parse_taxonomy("1 Contract\n")


def test_duplicate_labels_rejected():
    with pytest.raises(TaxonomyError, match="duplicate"):
        parse_taxonomy("1 Contract (CTR)\n1 Contract (CTR)\n")


def test_expected_count_enforced_when_requested(tmp_path):
    path = tmp_path / "two.txt"
    path.write_text("1 Contract (CTR)\n5 Defamation (DEF)\n", encoding="utf-8")
    assert len(load_taxonomy(path)) == 2
    with pytest.raises(TaxonomyError, match="expected 3 areas, found 2"):
        load_taxonomy(path, expected_count=3)


def test_find_by_abbreviation(tax):
    assert {a.canonical_label for a in tax.find_by_abbreviation("CTR")} == {"Contract (CTR)"}
    assert {a.canonical_label for a in tax.find_by_abbreviation("CSG")} == {
        "Consumer – general (CSG)",
        "Consumer – goods and services (CSG)",
    }
    assert tax.find_by_abbreviation("ZZZ") == set()
    assert tax.find_by_abbreviation("ctr") == tax.find_by_abbreviation("CTR")


def test_find_by_label_exact_and_variants(tax):
    assert tax.find_by_label("Banking").canonical_label == "Banking (BAN)"
    assert tax.find_by_label("contract (ctr)").canonical_label == "Contract (CTR)"
    assert tax.find_by_label("Crime - fraud (CRF)").canonical_label == "Crime – fraud (CRF)"
    assert tax.find_by_label("Consumer – general").canonical_label == "Consumer – general (CSG)"
    assert tax.find_by_label("No such area") is None


def test_every_area_self_resolves(tax):
    for area in tax:
        assert tax.find_by_label(area.canonical_label) is area
        assert area in tax.find_by_abbreviation(area.abbreviation)


def test_groups_partition_the_areas(tax):
    by_group = {code: set() for code in range(1, 7)}
    for area in tax:
        by_group[area.group.code].add(area.canonical_label)
    union = set().union(*by_group.values())
    assert len(union) == len(tax)
    assert sum(len(s) for s in by_group.values()) == len(tax)


def test_serialize_round_trips_canonical_file(tax):
    original = canonical_taxonomy_path().read_text(encoding="utf-8")
    assert tax.serialize() == original


def test_validation_detects_missing_line(tmp_path, tax):
    lines = canonical_taxonomy_path().read_text(encoding="utf-8").splitlines(keepends=True)
    shorter = tmp_path / "short.txt"
    shorter.write_text("".join(lines[1:]), encoding="utf-8")
    report = load_taxonomy(shorter).validate(expected_count=len(tax))
    assert not report.passed
    assert report.area_count == len(tax) - 1


def test_validation_requires_the_csg_collision(tmp_path, tax):
    kept = [a for a in tax if a.canonical_label != "Consumer – goods and services (CSG)"]
    text = "".join(f"{a.group.code} {a.canonical_label}\n" for a in kept)
    path = tmp_path / "nocollision.txt"
    path.write_text(text, encoding="utf-8")
    report = load_taxonomy(path).validate(expected_count=len(kept))
    assert report.collisions == {}
    assert not report.passed


@given(st.text(max_size=80))
def test_normalize_is_idempotent(text):
    once = normalize_label(text)
    assert normalize_label(once) == once


@pytest.mark.parametrize(
    "left,right",
    [
        ("Crime – fraud", "crime - fraud"),
        ("Crime–fraud", "Crime — Fraud"),
        ("  Banking ", "banking"),
        ("Consumer  –   general", "consumer - general"),
    ],
)
def test_normalize_unifies_variants(left, right):
    assert normalize_label(left) == normalize_label(right)
