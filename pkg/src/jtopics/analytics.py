"""Aggregation of final classifications by area, group, year, court and tier.

All breakdowns are zero-filled over their full key space (areas, groups,
window years), conserve the input count, and export deterministically to
CSV, JSON and static SVG charts.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .corpus import CourtTier
from .taxonomy import HIGHER_LEVEL_NAMES, HigherLevelArea, LegalArea, Taxonomy

YEAR_START = 1999
YEAR_END = 2023

TOP_AREAS_DEFAULT = 6


@dataclass(frozen=True)
class ClassifiedCase:
    case_id: str
    area: LegalArea
    hearing_year: int
    court_name: str
    court_tier: Optional[CourtTier]

    def __post_init__(self):
        if not YEAR_START <= self.hearing_year <= YEAR_END:
            raise ValueError(f"hearing year outside {YEAR_START}..{YEAR_END}: {self.hearing_year}")


def count_by_higher_level(cases: Iterable[ClassifiedCase]) -> dict[int, int]:
    """Cases per higher-level group, every group present even at zero."""
    counts = {code: 0 for code in HIGHER_LEVEL_NAMES}
    for case in cases:
        counts[case.area.group.code] += 1
    return counts


def count_by_area(
    cases: Iterable[ClassifiedCase],
    taxonomy: Taxonomy,
    group: Optional[HigherLevelArea] = None,
) -> dict[str, int]:
    """Cases per specific area, zero-filled; optionally restricted to one group."""
    counts = {
        area.canonical_label: 0
        for area in taxonomy
        if group is None or area.group == group
    }
    for case in cases:
        label = case.area.canonical_label
        if label in counts:
            counts[label] += 1
    return counts


def _top_areas(cases: list[ClassifiedCase], taxonomy: Taxonomy, k: int) -> list[LegalArea]:
    totals = count_by_area(cases, taxonomy)
    order = {area.canonical_label: i for i, area in enumerate(taxonomy)}
    ranked = sorted(totals, key=lambda label: (-totals[label], order[label]))
    return [taxonomy.by_label[label] for label in ranked[:k]]


def counts_by_year(
    cases: Iterable[ClassifiedCase],
    taxonomy: Taxonomy,
    grouping: str = "higher",
    top_k: int = TOP_AREAS_DEFAULT,
) -> dict[int, dict[str, int]]:
    """Cases per year keyed by group name, area label, or the overall top-k areas.

    Years span the full window; ties in the top-k ranking break by taxonomy
    order.
    """
    cases = list(cases)
    if grouping == "higher":
        keys = [HIGHER_LEVEL_NAMES[code] for code in sorted(HIGHER_LEVEL_NAMES)]
        key_of = lambda c: HIGHER_LEVEL_NAMES[c.area.group.code]
    elif grouping == "area":
        keys = [area.canonical_label for area in taxonomy]
        key_of = lambda c: c.area.canonical_label
    elif grouping == "top":
        top = {area.canonical_label for area in _top_areas(cases, taxonomy, top_k)}
        keys = [area.canonical_label for area in taxonomy if area.canonical_label in top]
        key_of = lambda c: c.area.canonical_label if c.area.canonical_label in top else None
    else:
        raise ValueError(f"unknown grouping: {grouping!r}")

    table = {year: {key: 0 for key in keys} for year in range(YEAR_START, YEAR_END + 1)}
    for case in cases:
        key = key_of(case)
        if key is not None:
            table[case.hearing_year][key] += 1
    return table


def counts_by_court(
    cases: Iterable[ClassifiedCase],
    taxonomy: Taxonomy,
    top_k: Optional[int] = None,
) -> tuple[list[tuple[str, dict[str, int]]], dict[str, int]]:
    """Per-court area counts ordered by descending total, plus a tier rollup.

    Only courts that appear in the input are listed; the tier rollup keys are
    "1".."3" and "unknown".
    """
    per_court: dict[str, dict[str, int]] = {}
    totals: dict[str, int] = {}
    tiers: dict[str, int] = {"1": 0, "2": 0, "3": 0, "unknown": 0}
    for case in cases:
        court = case.court_name
        per_court.setdefault(court, {})
        label = case.area.canonical_label
        per_court[court][label] = per_court[court].get(label, 0) + 1
        totals[court] = totals.get(court, 0) + 1
        tier_key = str(case.court_tier.tier) if case.court_tier else "unknown"
        tiers[tier_key] += 1
    order = {area.canonical_label: i for i, area in enumerate(taxonomy)}
    ranked = sorted(per_court, key=lambda court: (-totals[court], court))
    if top_k is not None:
        ranked = ranked[:top_k]
    listed = [
        (court, dict(sorted(per_court[court].items(), key=lambda kv: order[kv[0]])))
        for court in ranked
    ]
    return listed, tiers


@dataclass
class AggregateReport:
    generated_at: str
    total: int
    unclassified: int
    by_higher_level: dict[int, int]
    by_area: dict[str, int]
    by_year: dict[int, dict[str, int]]
    by_court: list[tuple[str, dict[str, int]]]
    by_tier: dict[str, int]

    def to_json_obj(self) -> dict:
        return {
            "generated_at": self.generated_at,
            "total": self.total,
            "unclassified": self.unclassified,
            "by_higher_level": [
                {"group": code, "name": HIGHER_LEVEL_NAMES[code], "count": self.by_higher_level[code]}
                for code in sorted(self.by_higher_level)
            ],
            "by_area": [
                {"label": label, "count": count} for label, count in self.by_area.items()
            ],
            "by_year": [
                {"year": year, "counts": self.by_year[year]} for year in sorted(self.by_year)
            ],
            "by_court": [
                {"court": court, "total": sum(areas.values()), "areas": areas}
                for court, areas in self.by_court
            ],
            "by_tier": [
                {"tier": tier, "count": self.by_tier[tier]} for tier in ("1", "2", "3", "unknown")
            ],
        }


def build_report(
    cases: Iterable[ClassifiedCase],
    taxonomy: Taxonomy,
    generated_at: str,
    unclassified: int = 0,
) -> AggregateReport:
    cases = list(cases)
    courts, tiers = counts_by_court(cases, taxonomy)
    return AggregateReport(
        generated_at=generated_at,
        total=len(cases),
        unclassified=unclassified,
        by_higher_level=count_by_higher_level(cases),
        by_area=count_by_area(cases, taxonomy),
        by_year=counts_by_year(cases, taxonomy, grouping="higher"),
        by_court=courts,
        by_tier=tiers,
    )


def _csv_text(header: list[str], rows: Iterable[list]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _csv_tables(report: AggregateReport) -> dict[str, str]:
    return {
        "higher": _csv_text(
            ["key", "count"],
            [[HIGHER_LEVEL_NAMES[code], report.by_higher_level[code]]
             for code in sorted(report.by_higher_level)],
        ),
        "area": _csv_text(
            ["key", "count"],
            [[label, count] for label, count in report.by_area.items()],
        ),
        "year": _csv_text(
            ["year", "key", "count"],
            [[year, key, count]
             for year in sorted(report.by_year)
             for key, count in report.by_year[year].items()],
        ),
        "court": _csv_text(
            ["court", "area", "count"],
            [[court, label, count]
             for court, areas in report.by_court
             for label, count in areas.items()],
        ),
        "tier": _csv_text(
            ["key", "count"],
            [[tier, report.by_tier[tier]] for tier in ("1", "2", "3", "unknown")],
        ),
    }


# --- minimal static SVG rendering ---------------------------------------

_SVG_COLORS = ["#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2", "#b279a2",
               "#ff9da6", "#9d755d", "#bab0ac", "#637939"]


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _svg_bar_chart(title: str, items: list[tuple[str, int]]) -> str:
    bar_h, gap, label_w, chart_w = 18, 6, 340, 420
    height = 50 + len(items) * (bar_h + gap)
    peak = max((count for _, count in items), default=0) or 1
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{label_w + chart_w + 80}" height="{height}" '
        f'font-family="sans-serif" font-size="12">',
        f'<text x="10" y="20" font-size="14" font-weight="bold">{_esc(title)}</text>',
    ]
    y = 40
    for label, count in items:
        width = round(count / peak * chart_w)
        parts.append(f'<text x="{label_w - 6}" y="{y + 13}" text-anchor="end">{_esc(label)}</text>')
        parts.append(f'<rect x="{label_w}" y="{y}" width="{width}" height="{bar_h}" fill="{_SVG_COLORS[0]}"/>')
        parts.append(f'<text x="{label_w + width + 4}" y="{y + 13}">{count}</text>')
        y += bar_h + gap
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _svg_line_chart(title: str, years: list[int], series: dict[str, list[int]]) -> str:
    width, height, pad_l, pad_b, pad_t = 720, 300, 50, 40, 40
    plot_w, plot_h = width - pad_l - 20, height - pad_t - pad_b
    peak = max((v for values in series.values() for v in values), default=0) or 1
    step = plot_w / max(len(years) - 1, 1)

    def pt(i: int, value: int) -> str:
        x = pad_l + i * step
        y = pad_t + plot_h - value / peak * plot_h
        return f"{x:.1f},{y:.1f}"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height + 20 * len(series)}" '
        f'font-family="sans-serif" font-size="12">',
        f'<text x="10" y="20" font-size="14" font-weight="bold">{_esc(title)}</text>',
        f'<line x1="{pad_l}" y1="{pad_t + plot_h}" x2="{pad_l + plot_w}" y2="{pad_t + plot_h}" stroke="#888"/>',
        f'<line x1="{pad_l}" y1="{pad_t}" x2="{pad_l}" y2="{pad_t + plot_h}" stroke="#888"/>',
        f'<text x="{pad_l - 6}" y="{pad_t + 4}" text-anchor="end">{peak}</text>',
        f'<text x="{pad_l - 6}" y="{pad_t + plot_h + 4}" text-anchor="end">0</text>',
    ]
    for i, year in enumerate(years):
        if year % 4 == 0:
            x = pad_l + i * step
            parts.append(f'<text x="{x:.1f}" y="{pad_t + plot_h + 16}" text-anchor="middle">{year}</text>')
    for idx, (label, values) in enumerate(series.items()):
        color = _SVG_COLORS[idx % len(_SVG_COLORS)]
        points = " ".join(pt(i, v) for i, v in enumerate(values))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{points}"/>')
        ly = height + 14 * idx
        parts.append(f'<rect x="{pad_l}" y="{ly - 9}" width="10" height="10" fill="{color}"/>')
        parts.append(f'<text x="{pad_l + 16}" y="{ly}">{_esc(label)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _svg_charts(report: AggregateReport) -> dict[str, str]:
    years = sorted(report.by_year)
    keys = list(report.by_year[years[0]].keys()) if years else []
    series = {key: [report.by_year[year][key] for year in years] for key in keys}
    area_items = [(label, count) for label, count in report.by_area.items() if count > 0]
    return {
        "higher": _svg_bar_chart(
            "Cases per higher-level area",
            [(HIGHER_LEVEL_NAMES[code], report.by_higher_level[code])
             for code in sorted(report.by_higher_level)],
        ),
        "area": _svg_bar_chart("Cases per specific area", area_items),
        "year": _svg_line_chart("Cases per year", years, series),
        "court": _svg_bar_chart(
            "Cases per court",
            [(court, sum(areas.values())) for court, areas in report.by_court],
        ),
    }


def export_report(
    report: AggregateReport, fmt: str, dest: str | Path, only: Optional[str] = None
) -> list[Path]:
    """Write the report as CSV tables, a JSON document or SVG charts.

    ``only`` restricts CSV/SVG output to one breakdown (higher, area, year or
    court); the JSON document always mirrors the whole report.  Outputs are
    byte-deterministic for a given report.  Returns the paths written.
    """
    if only is not None and only not in ("higher", "area", "year", "court"):
        raise ValueError(f"unknown breakdown: {only!r}")
    dest_dir = Path(dest)
    dest_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    if fmt == "csv":
        for name, text in _csv_tables(report).items():
            if only is not None and name != only:
                continue
            path = dest_dir / f"{name}.csv"
            path.write_text(text, encoding="utf-8", newline="")
            written.append(path)
    elif fmt == "json":
        path = dest_dir / "report.json"
        path.write_text(
            json.dumps(report.to_json_obj(), ensure_ascii=False, indent=2) + "\n",
            encoding="utf-8",
            newline="",
        )
        written.append(path)
    elif fmt == "svg":
        for name, text in _svg_charts(report).items():
            if only is not None and name != only:
                continue
            path = dest_dir / f"{name}.svg"
            path.write_text(text, encoding="utf-8", newline="")
            written.append(path)
    else:
        raise ValueError(f"unknown export format: {fmt!r}")
    return written
