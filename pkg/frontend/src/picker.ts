// Search-as-you-type filtering over taxonomy areas.

import type { TaxonomyArea } from "./types.js";

/** Case-fold, unify dash variants and collapse whitespace. */
export function normalize(text: string): string {
  return text
    .toLowerCase()
    .replace(/[-–—]/g, "–")
    .replace(/–/g, " – ")
    .replace(/\s+/g, " ")
    .trim();
}

/**
 * Areas matching the query by abbreviation or name, best matches first:
 * exact abbreviation, then abbreviation substring, then short-name prefix,
 * then label substring.  Ties keep taxonomy order.
 */
export function filterAreas(areas: TaxonomyArea[], query: string, limit = 12): TaxonomyArea[] {
  const trimmed = query.trim();
  if (!trimmed) {
    return [];
  }
  const upper = trimmed.toUpperCase();
  const needle = normalize(trimmed);
  const scored: { area: TaxonomyArea; rank: number }[] = [];
  for (const area of areas) {
    const name = normalize(area.short_name);
    const label = normalize(area.label);
    let rank: number | null = null;
    if (area.abbreviation === upper) {
      rank = 0;
    } else if (area.abbreviation.includes(upper)) {
      rank = 1;
    } else if (name.startsWith(needle)) {
      rank = 2;
    } else if (label.includes(needle)) {
      rank = 3;
    }
    if (rank !== null) {
      scored.push({ area, rank });
    }
  }
  scored.sort((a, b) => a.rank - b.rank);
  return scored.slice(0, limit).map((s) => s.area);
}
