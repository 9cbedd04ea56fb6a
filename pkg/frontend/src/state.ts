// Review draft state: what can be submitted, and when.

import type { VerdictKind, VerdictSubmission } from "./types.js";

export interface VerdictOption {
  kind: VerdictKind;
  key: string;
  title: string;
}

// Keyboard shortcuts 1-5 follow this order.
export const VERDICTS: VerdictOption[] = [
  { kind: "correct", key: "1", title: "Correct" },
  { kind: "minor_naming", key: "2", title: "Minor naming" },
  { kind: "primary_secondary_swap", key: "3", title: "Primary/secondary swap" },
  { kind: "hallucinated", key: "4", title: "Hallucinated" },
  { kind: "incorrect", key: "5", title: "Incorrect" },
];

export function verdictForKey(key: string): VerdictKind | null {
  const option = VERDICTS.find((v) => v.key === key);
  return option ? option.kind : null;
}

export function requiresCorrectedLabel(kind: VerdictKind): boolean {
  return kind === "primary_secondary_swap" || kind === "hallucinated" || kind === "incorrect";
}

export interface Draft {
  verdict: VerdictKind | null;
  correctedLabel: string | null;
  note: string;
}

export function emptyDraft(): Draft {
  return { verdict: null, correctedLabel: null, note: "" };
}

/** Inline validation message, or null when the draft is submittable. */
export function draftError(draft: Draft): string | null {
  if (draft.verdict === null) {
    return "Choose a verdict category first.";
  }
  if (requiresCorrectedLabel(draft.verdict) && !draft.correctedLabel) {
    return "This verdict needs a corrected label from the taxonomy.";
  }
  return null;
}

export function toSubmission(draft: Draft, caseId: string, reviewer: string): VerdictSubmission {
  if (draftError(draft) !== null || draft.verdict === null) {
    throw new Error("draft is not submittable");
  }
  const submission: VerdictSubmission = {
    case_id: caseId,
    verdict: draft.verdict,
    reviewer,
  };
  if (draft.correctedLabel) {
    submission.corrected_label = draft.correctedLabel;
  }
  if (draft.note.trim()) {
    submission.note = draft.note.trim();
  }
  return submission;
}
