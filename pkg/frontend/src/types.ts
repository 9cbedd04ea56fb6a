// Wire types mirroring the review service's JSON API.

export type VerdictKind =
  | "correct"
  | "minor_naming"
  | "primary_secondary_swap"
  | "hallucinated"
  | "incorrect";

export interface TaxonomyArea {
  label: string;
  short_name: string;
  abbreviation: string;
  group: number;
}

export interface TaxonomyPayload {
  groups: { code: number; name: string }[];
  areas: TaxonomyArea[];
}

export interface RunSummary {
  run_id: string;
  backend_id: string;
  started_at: string;
  corpus_dir: string;
  taxonomy_checksum: string;
  cases: number;
  sampled: number;
  verdicts: number;
}

export interface ReviewTask {
  case_id: string;
  excerpt: string;
  court_name: string | null;
  hearing_date: string | null;
  neutral_citation: string | null;
  word_count: number | null;
  assigned_primary: string | null;
  assigned_secondary: string | null;
  explanation: string | null;
  confidence: number | null;
  repair_status: string | null;
  repair_method: string | null;
  resolved_label: string | null;
  remaining: number;
}

export interface MetricsPayload {
  total: number;
  counts: Record<VerdictKind, number>;
  initial_accuracy: number | null;
  adjusted_accuracy: number | null;
  note?: string;
}

export interface AggregatesPayload {
  generated_at: string;
  total: number;
  unclassified: number;
  by_higher_level: { group: number; name: string; count: number }[];
  by_area: { label: string; count: number }[];
  by_year: { year: number; counts: Record<string, number> }[];
  by_court: { court: string; total: number; areas: Record<string, number> }[];
  by_tier: { tier: string; count: number }[];
}

export interface VerdictSubmission {
  case_id: string;
  verdict: VerdictKind;
  corrected_label?: string;
  reviewer: string;
  note?: string;
}

export interface StoredVerdict {
  case_id: string;
  verdict: VerdictKind;
  corrected_label: string | null;
  reviewer: string;
  submitted_at: string;
  assigned_primary: string;
  assigned_secondary: string | null;
  note: string | null;
}

export interface CaseDetail {
  case_id: string;
  court_name: string;
  hearing_date: string;
  neutral_citation: string | null;
  word_count: number;
  tier: number | null;
  tier_category: string | null;
  full_text: string;
}

export type AggregateView = "higher" | "year" | "court";
