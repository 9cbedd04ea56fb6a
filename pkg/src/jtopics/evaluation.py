"""Statistically sized expert review: sample planning, drawing and accuracy.

Sample sizes use the standard normal-approximation formula with finite
population correction at an assumed proportion of 0.5, rounded up so the
requested margin is always met.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from statistics import NormalDist
from typing import Iterable, Optional, Sequence

ASSUMED_PROPORTION = 0.5


class Verdict(str, Enum):
    CORRECT = "correct"
    MINOR_NAMING = "minor_naming"
    PRIMARY_SECONDARY_SWAP = "primary_secondary_swap"
    HALLUCINATED = "hallucinated"
    INCORRECT = "incorrect"


#: Verdicts that must carry a corrected label when submitted.
CORRECTION_REQUIRED = {Verdict.PRIMARY_SECONDARY_SWAP, Verdict.HALLUCINATED, Verdict.INCORRECT}


@dataclass(frozen=True)
class SamplePlan:
    population_size: int
    confidence: float
    margin: float
    z: float
    p: float
    seed: int
    base_size: float
    sample_size: int

    def __post_init__(self):
        if not 1 <= self.sample_size <= self.population_size:
            raise ValueError("sample size must be within 1..population")


def _z_for_confidence(confidence: float) -> float:
    return NormalDist().inv_cdf(1 - (1 - confidence) / 2)


def sample_size(population: int, confidence: float, margin: float) -> int:
    """Minimum sample size for the confidence level and margin of error."""
    if population < 1:
        raise ValueError(f"population must be >= 1: {population}")
    if not 0 < confidence < 1:
        raise ValueError(f"confidence must be in (0,1): {confidence}")
    if not 0 < margin < 1:
        raise ValueError(f"margin must be in (0,1): {margin}")
    z = _z_for_confidence(confidence)
    n0 = z * z * ASSUMED_PROPORTION * (1 - ASSUMED_PROPORTION) / (margin * margin)
    n = math.ceil(n0 / (1 + (n0 - 1) / population))
    return max(1, min(n, population))


def make_sample_plan(population: int, confidence: float, margin: float, seed: int) -> SamplePlan:
    """Sample size plus the intermediate quantities, for auditability."""
    n = sample_size(population, confidence, margin)
    z = _z_for_confidence(confidence)
    n0 = z * z * ASSUMED_PROPORTION * (1 - ASSUMED_PROPORTION) / (margin * margin)
    return SamplePlan(
        population_size=population,
        confidence=confidence,
        margin=margin,
        z=z,
        p=ASSUMED_PROPORTION,
        seed=seed,
        base_size=n0,
        sample_size=n,
    )


def draw_sample(case_ids: Sequence[str], n: int, seed: int) -> list[str]:
    """Uniform random subset of size n, without replacement, sorted by case_id.

    Deterministic for a given (sequence, n, seed).
    """
    if n > len(case_ids):
        raise ValueError(f"sample size {n} exceeds population {len(case_ids)}")
    rng = random.Random(seed)
    return sorted(rng.sample(list(case_ids), n))


@dataclass(frozen=True)
class EvaluationRecord:
    case_id: str
    assigned_primary: str
    assigned_secondary: Optional[str]
    verdict: Verdict
    corrected_label: Optional[str]
    reviewer: str
    submitted_at: datetime
    note: Optional[str] = None


@dataclass
class AccuracyReport:
    total: int
    counts: dict[Verdict, int]
    initial_accuracy: float
    adjusted_accuracy: float

    def summary(self) -> str:
        parts = [f"{v.value}={self.counts[v]}" for v in Verdict]
        return (
            f"total={self.total} {' '.join(parts)} "
            f"initial={self.initial_accuracy:.2f}% adjusted={self.adjusted_accuracy:.2f}%"
        )


def accuracy_from_counts(counts: dict[Verdict, int]) -> AccuracyReport:
    total = sum(counts.values())
    if total == 0:
        raise ValueError("cannot compute accuracy with no verdicts")
    full = {v: counts.get(v, 0) for v in Verdict}
    correct = full[Verdict.CORRECT]
    minor = full[Verdict.MINOR_NAMING]
    return AccuracyReport(
        total=total,
        counts=full,
        initial_accuracy=round(correct / total * 100, 2),
        adjusted_accuracy=round((correct + minor) / total * 100, 2),
    )


def accuracy(records: Iterable[EvaluationRecord]) -> AccuracyReport:
    """Initial accuracy counts only correct verdicts; adjusted adds minor naming."""
    counts = {v: 0 for v in Verdict}
    for record in records:
        counts[record.verdict] += 1
    return accuracy_from_counts(counts)
