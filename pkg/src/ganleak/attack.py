"""The counting attack: accumulate per-identity prediction frequencies
over K generations and threshold them into membership decisions.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .classifier import ClassifierModel, classify_codes
from .generator import GeneratorModel, sample_codes
from .identity import IdentityId

Seed = int | np.random.SeedSequence


class OutOfRangeIdError(ValueError):
    """A predicted identity fell outside the known pool under strict policy."""


@dataclass(frozen=True)
class AttackConfig:
    """Attack parameters: K is always derived as ``lam * yf_size``.

    The natural threshold is ``lam`` (one hit per expected appearance);
    ``10 * lam`` trades recall for precision.
    """

    lam: int
    yf_size: int
    threshold: int

    def __post_init__(self):
        if self.lam < 1:
            raise ValueError(f"lam must be >= 1, got {self.lam}")
        if self.yf_size < 1:
            raise ValueError(f"yf_size must be >= 1, got {self.yf_size}")
        if self.threshold < 0:
            raise ValueError(f"threshold must be >= 0, got {self.threshold}")

    @property
    def k(self) -> int:
        return self.lam * self.yf_size

    @property
    def t0(self) -> int:
        return self.lam

    @property
    def t1(self) -> int:
        return 10 * self.lam

    @classmethod
    def natural(cls, lam: int, yf_size: int) -> "AttackConfig":
        return cls(lam=lam, yf_size=yf_size, threshold=lam)


class FrequencyTable:
    """Per-identity prediction counts; the attack's sufficient statistic.

    ``discarded`` counts predictions rejected as out of range in ingestion
    mode, so counts plus discarded always reconstruct the draw total.
    """

    __slots__ = ("counts", "discarded")

    def __init__(self, counts: np.ndarray, discarded: int = 0):
        self.counts = np.asarray(counts, dtype=np.int64)
        if self.counts.ndim != 1:
            raise ValueError("counts must be one-dimensional")
        if (self.counts < 0).any():
            raise ValueError("counts must be non-negative")
        if discarded < 0:
            raise ValueError("discarded must be >= 0")
        self.discarded = int(discarded)

    @property
    def yf_size(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum()) + self.discarded

    @property
    def max_count(self) -> int:
        return int(self.counts.max()) if len(self.counts) else 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, FrequencyTable):
            return NotImplemented
        return self.discarded == other.discarded and np.array_equal(self.counts, other.counts)

    def __repr__(self) -> str:
        return f"FrequencyTable(yf_size={self.yf_size}, total={self.total}, discarded={self.discarded})"


@dataclass(frozen=True)
class DecisionSet:
    """Identities flagged as training members at one threshold."""

    positives: frozenset[IdentityId]
    threshold: int


def accumulate(
    predictions: Sequence[IdentityId] | np.ndarray | Iterable[IdentityId],
    yf_size: int,
    policy: str = "strict",
) -> FrequencyTable:
    """Count predictions per identity.

    policy 'strict' rejects any id outside ``[0, yf_size)``; 'discard'
    counts such rows separately (robust to foreign prediction logs).
    """
    if yf_size < 1:
        raise ValueError(f"yf_size must be >= 1, got {yf_size}")
    preds = np.asarray(list(predictions) if not isinstance(predictions, np.ndarray) else predictions)
    if preds.size == 0:
        return FrequencyTable(np.zeros(yf_size, dtype=np.int64))
    preds = preds.astype(np.int64, copy=False)
    in_range = (preds >= 0) & (preds < yf_size)
    n_bad = int((~in_range).sum())
    if n_bad and policy == "strict":
        bad = preds[~in_range][0]
        raise OutOfRangeIdError(
            f"prediction {bad} outside [0, {yf_size}) ({n_bad} offending rows); "
            "use policy='discard' to count and skip them"
        )
    if policy not in ("strict", "discard"):
        raise ValueError(f"unknown policy {policy!r}")
    counts = np.bincount(preds[in_range], minlength=yf_size)
    return FrequencyTable(counts.astype(np.int64), discarded=n_bad)


def decide(table: FrequencyTable, threshold: int) -> DecisionSet:
    """Flag every identity whose count reaches the threshold."""
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    flagged = np.flatnonzero(table.counts >= threshold)
    return DecisionSet(positives=frozenset(int(y) for y in flagged), threshold=threshold)


def run_attack(
    generator: GeneratorModel,
    classifier: ClassifierModel,
    config: AttackConfig,
    master_seed: Seed,
) -> tuple[FrequencyTable, DecisionSet]:
    """Generate K identities, classify them, count, and threshold.

    Deterministic given the seed; equal to drawing a batch with
    ``sample_batch`` and classifying it with ``classify_batch`` on one
    shared generator stream.
    """
    if generator.spec.yf_size != classifier.yf_size:
        raise ValueError(
            f"generator pool size {generator.spec.yf_size} != classifier pool size "
            f"{classifier.yf_size}"
        )
    if config.yf_size != classifier.yf_size:
        raise ValueError(
            f"config pool size {config.yf_size} != classifier pool size {classifier.yf_size}"
        )
    rng = np.random.Generator(np.random.PCG64(master_seed))
    codes = sample_codes(generator, config.k, rng)
    u_cls = rng.random((config.k, 2))
    preds = classify_codes(classifier, codes, u_cls)
    table = accumulate(preds, classifier.yf_size)
    return table, decide(table, config.threshold)
