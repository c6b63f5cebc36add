"""Experimenter-side scoring against ground truth.

Precision is the fraction of flagged identities that are true members,
recall the fraction of true members flagged. When nothing is flagged,
precision is undefined and reported as None, never coerced to 0 or 1;
F1 then collapses to 0 with the undefined flag preserved on the report.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .attack import DecisionSet, FrequencyTable, decide
from .identity import DatasetSpec, random_baseline_precision


@dataclass(frozen=True)
class EvalReport:
    """One attack run scored at one threshold."""

    threshold: int
    precision: float | None
    recall: float
    f1: float
    positives_count: int
    truth_size: int
    mode: str = "full"
    lam: int | None = None
    baseline: float | None = None
    seed: int | str | None = None

    @property
    def precision_defined(self) -> bool:
        return self.precision is not None


@dataclass(frozen=True)
class PRCurve:
    """Precision/recall at every integer threshold from 0 to max count + 1."""

    points: tuple[tuple[int, float | None, float], ...]
    mode: str = "full"
    baseline: float | None = None

    def thresholds(self) -> list[int]:
        return [t for t, _, _ in self.points]

    def recalls(self) -> list[float]:
        return [r for _, _, r in self.points]


@dataclass(frozen=True)
class HistogramExport:
    """Per-identity count rows, heaviest first, ties by ascending id."""

    rows: tuple[tuple[int, int, bool, bool], ...]  # (identity, count, member, biased)

    def counts_total(self) -> int:
        return sum(r[1] for r in self.rows)


def precision_recall(
    decisions: DecisionSet, truth: DatasetSpec, mode: str = "full"
) -> tuple[float | None, float]:
    """Score a decision set; positives outside the pool are rejected."""
    positives = decisions.positives
    if positives and (min(positives) < 0 or max(positives) >= truth.yf_size):
        raise ValueError("decision set contains identities outside [0, yf_size)")
    target = truth.truth_set(mode)
    tp = len(positives & target)
    precision = tp / len(positives) if positives else None
    recall = tp / len(target)
    return precision, recall


def f1(precision: float | None, recall: float) -> float:
    """Harmonic mean of precision and recall; 0 when degenerate."""
    if precision is None:
        return 0.0
    if not 0.0 <= precision <= 1.0 or not 0.0 <= recall <= 1.0:
        raise ValueError("precision and recall must lie in [0, 1]")
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def evaluate(
    table: FrequencyTable,
    truth: DatasetSpec,
    threshold: int,
    mode: str = "full",
    lam: int | None = None,
    seed: int | str | None = None,
) -> EvalReport:
    """Decide at one threshold and package the scored result."""
    decisions = decide(table, threshold)
    precision, recall = precision_recall(decisions, truth, mode)
    return EvalReport(
        threshold=threshold,
        precision=precision,
        recall=recall,
        f1=f1(precision, recall),
        positives_count=len(decisions.positives),
        truth_size=len(truth.truth_set(mode)),
        mode=mode,
        lam=lam,
        baseline=random_baseline_precision(truth, mode),
        seed=seed,
    )


def pr_sweep(table: FrequencyTable, truth: DatasetSpec, mode: str = "full") -> PRCurve:
    """Whole precision-recall curve from a single frequency table.

    Sweeps every integer threshold rather than only the distinct counts, so
    curves from different runs line up column for column.
    """
    if table.yf_size != truth.yf_size:
        raise ValueError(f"table size {table.yf_size} != truth pool size {truth.yf_size}")
    target = truth.truth_set(mode)
    target_mask = np.zeros(table.yf_size, dtype=bool)
    target_mask[list(target)] = True
    max_k = table.max_count
    # hits[t] = #{y : counts[y] >= t}, via a reversed cumulative histogram
    hist_all = np.bincount(table.counts, minlength=max_k + 2)
    hist_tp = np.bincount(table.counts[target_mask], minlength=max_k + 2)
    ge_all = np.cumsum(hist_all[::-1])[::-1]
    ge_tp = np.cumsum(hist_tp[::-1])[::-1]
    n_target = len(target)
    points = []
    for t in range(max_k + 2):
        pos = int(ge_all[t])
        tp = int(ge_tp[t])
        precision = tp / pos if pos else None
        points.append((t, precision, tp / n_target))
    return PRCurve(
        points=tuple(points), mode=mode, baseline=random_baseline_precision(truth, mode)
    )


def histogram(table: FrequencyTable, truth: DatasetSpec) -> HistogramExport:
    """Plot-ready per-identity frequency rows with membership flags."""
    if table.yf_size != truth.yf_size:
        raise ValueError(f"table size {table.yf_size} != truth pool size {truth.yf_size}")
    counts = table.counts
    ids = np.arange(table.yf_size)
    order = np.lexsort((ids, -counts))
    biased = truth.biased_members or frozenset()
    rows = tuple(
        (int(y), int(counts[y]), int(y) in truth.members, int(y) in biased) for y in order
    )
    return HistogramExport(rows=rows)
