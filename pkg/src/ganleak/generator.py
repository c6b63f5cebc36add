"""Parametric stand-in for a trained generator.

Instead of images, the model emits source identities: with probability
``memorization_rate`` a training member (weighted by its sample count
raised to ``bias_exponent``), otherwise one of ``novel_space_size``
never-seen pseudo-identities. Latent vectors are subsumed by the seeded
uniform draws, since the attack only ever consumes predicted identities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import NamedTuple

import numpy as np

from . import kernels
from .identity import DatasetSpec


class SourceIdentity(NamedTuple):
    """Tagged origin of one generation: a member id or a novel slot."""

    is_member: bool
    index: int

    def to_code(self) -> int:
        return self.index if self.is_member else -(self.index + 1)

    @classmethod
    def from_code(cls, code: int) -> "SourceIdentity":
        if code >= 0:
            return cls(True, int(code))
        return cls(False, int(-code - 1))


@dataclass(frozen=True)
class GeneratorModel:
    """Stochastic identity source with tunable memorization and bias.

    memorization_rate: probability a generation carries a training identity.
    bias_exponent: member weights are proportional to count**bias_exponent,
        so 0 ignores dataset bias and larger values amplify it.
    novel_space_size: number of distinct novel pseudo-identities; defaults
        to the unseen part of the identity pool, ``yf_size - |members|``.
    """

    spec: DatasetSpec
    memorization_rate: float
    bias_exponent: float = 1.0
    novel_space_size: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.memorization_rate <= 1.0:
            raise ValueError(f"memorization_rate must be in [0, 1], got {self.memorization_rate}")
        if self.bias_exponent < 0.0:
            raise ValueError(f"bias_exponent must be >= 0, got {self.bias_exponent}")
        if self.novel_space_size is None:
            object.__setattr__(
                self, "novel_space_size", self.spec.yf_size - len(self.spec.members)
            )
        if self.novel_space_size < 0:
            raise ValueError("novel_space_size must be >= 0")
        if self.novel_space_size == 0 and self.memorization_rate < 1.0:
            raise ValueError(
                "novel_space_size = 0 requires memorization_rate = 1.0 "
                "(there is nowhere to draw novel identities from)"
            )

    @cached_property
    def member_ids(self) -> np.ndarray:
        return np.array(sorted(self.spec.members), dtype=np.int64)

    @cached_property
    def member_weights(self) -> np.ndarray:
        counts = np.array(
            [self.spec.samples_per_identity[int(y)] for y in self.member_ids], dtype=np.float64
        )
        w = counts**self.bias_exponent
        return w / w.sum()

    @cached_property
    def member_cdf(self) -> np.ndarray:
        cdf = np.cumsum(self.member_weights)
        cdf[-1] = 1.0  # close the interval against rounding
        return cdf


def sample_codes(model: GeneratorModel, k: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``k`` encoded source identities (the batch hot path)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    u = rng.random((k, 2))
    return kernels.sample_source_codes(
        u,
        model.memorization_rate,
        model.member_ids,
        model.member_cdf,
        model.novel_space_size,
    )


def sample_identity(model: GeneratorModel, rng: np.random.Generator) -> SourceIdentity:
    """Draw one source identity; consumes exactly two uniforms."""
    u = rng.random(2).reshape(1, 2)
    code = kernels.sample_source_codes(
        u,
        model.memorization_rate,
        model.member_ids,
        model.member_cdf,
        model.novel_space_size,
    )
    return SourceIdentity.from_code(int(code[0]))


def sample_batch(model: GeneratorModel, k: int, rng: np.random.Generator) -> list[SourceIdentity]:
    """Draw ``k`` source identities; equals ``k`` sequential single draws."""
    return [SourceIdentity.from_code(int(c)) for c in sample_codes(model, k, rng)]


@dataclass(frozen=True)
class SaturatingSchedule:
    """Memorization rising with training step as ``1 - exp(-step / tau)``."""

    tau: float

    def __post_init__(self):
        if self.tau <= 0.0:
            raise ValueError(f"tau must be > 0 for a non-decreasing schedule, got {self.tau}")

    def rate_at(self, step: int) -> float:
        if step < 0:
            raise ValueError(f"step must be >= 0, got {step}")
        return 1.0 - math.exp(-step / self.tau)


@dataclass(frozen=True)
class TabulatedSchedule:
    """Piecewise-constant schedule from explicit (step, rate) breakpoints."""

    points: tuple[tuple[int, float], ...]

    def __post_init__(self):
        if not self.points:
            raise ValueError("schedule needs at least one (step, rate) point")
        steps = [s for s, _ in self.points]
        rates = [r for _, r in self.points]
        if any(b <= a for a, b in zip(steps, steps[1:])):
            raise ValueError("schedule steps must be strictly increasing")
        if any(b < a for a, b in zip(rates, rates[1:])):
            raise ValueError("schedule rates must be non-decreasing")
        if not all(0.0 <= r <= 1.0 for r in rates):
            raise ValueError("schedule rates must lie in [0, 1]")

    def rate_at(self, step: int) -> float:
        rate = 0.0
        for s, r in self.points:
            if step >= s:
                rate = r
            else:
                break
        return rate


def memorization_schedule(
    base_model: GeneratorModel,
    step: int,
    schedule: SaturatingSchedule | TabulatedSchedule,
) -> GeneratorModel:
    """Model at a given training step: only the memorization rate moves."""
    return replace(base_model, memorization_rate=schedule.rate_at(step))
