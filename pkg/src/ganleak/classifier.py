"""Parametric face-identification surrogate.

Maps a source identity to a predicted identity in the attacker's pool.
Member identities come back correct with the model's top-1 accuracy and
otherwise land uniformly on the remaining identities. Novel faces are
absorbed either uniformly or through a fixed per-novel preference row
(the same fake person always resembles the same known people).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .generator import SourceIdentity
from .identity import IdentityId


@dataclass(frozen=True)
class UniformSpread:
    """Novel faces absorbed uniformly over the whole identity pool."""


@dataclass(frozen=True)
class ConcentratedSpread:
    """Novel faces with stable, concentrated preferences over known identities.

    Each novel pseudo-identity gets a preference row drawn once from a
    symmetric Dirichlet(kappa); small kappa concentrates the row on a few
    identities. Rows are a pure function of (seed, novel index, pool size,
    kappa), so repeated draws of the same novel hit the same row.
    """

    seed: int
    kappa: float
    _rows: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.kappa <= 0.0:
            raise ValueError(f"kappa must be > 0, got {self.kappa}")

    def row(self, novel_index: int, yf_size: int) -> np.ndarray:
        """Preference probabilities of one novel identity (cached)."""
        cached = self._rows.get(novel_index)
        if cached is not None:
            if len(cached[0]) != yf_size:
                raise ValueError(
                    f"spread already bound to pool size {len(cached[0])}, got {yf_size}"
                )
            return cached[0]
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=(novel_index,)))
        )
        g = rng.gamma(self.kappa, 1.0, size=yf_size)
        total = g.sum()
        if total <= 0.0:
            raise ValueError(
                f"kappa={self.kappa} underflowed for novel {novel_index}; use a larger kappa"
            )
        probs = g / total
        cdf = np.cumsum(probs)
        cdf[-1] = 1.0
        self._rows[novel_index] = (probs, cdf)
        return probs

    def row_cdf(self, novel_index: int, yf_size: int) -> np.ndarray:
        self.row(novel_index, yf_size)
        return self._rows[novel_index][1]


NovelSpread = UniformSpread | ConcentratedSpread

# top-1 accuracies and pool sizes of the two reference face classifiers
_PRESETS = {
    "vggface2": (8631, 0.861),
    "casia": (1292, 0.947),
}


@dataclass(frozen=True)
class ClassifierModel:
    """Identity classifier with a given pool size and top-1 accuracy."""

    yf_size: int
    top1_accuracy: float
    novel_spread: NovelSpread = UniformSpread()

    def __post_init__(self):
        if self.yf_size < 1:
            raise ValueError(f"yf_size must be >= 1, got {self.yf_size}")
        if not 0.0 < self.top1_accuracy <= 1.0:
            raise ValueError(f"top1_accuracy must be in (0, 1], got {self.top1_accuracy}")


def preset(dataset_name: str) -> ClassifierModel:
    """Classifier with the measured accuracy of a known reference setup."""
    try:
        yf_size, accuracy = _PRESETS[dataset_name]
    except KeyError:
        raise ValueError(
            f"unknown preset {dataset_name!r}; expected one of {sorted(_PRESETS)}"
        ) from None
    return ClassifierModel(yf_size=yf_size, top1_accuracy=accuracy)


def classify_codes(model: ClassifierModel, codes: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Predicted identities for encoded sources given pre-drawn uniforms."""
    uniform = isinstance(model.novel_spread, UniformSpread)
    preds = kernels.classify_codes(codes, u, model.top1_accuracy, model.yf_size, uniform)
    if uniform:
        return preds
    # concentrated novels come back as negative codes; resolve them against
    # each novel's preference row (per-draw, so grouping order is irrelevant)
    unresolved = preds < 0
    if unresolved.any():
        js = -preds[unresolved] - 1
        u1 = np.ascontiguousarray(u, dtype=np.float64)[unresolved, 1]
        resolved = np.empty(len(js), dtype=np.int64)
        for j in np.unique(js):
            sel = js == j
            cdf = model.novel_spread.row_cdf(int(j), model.yf_size)
            r = np.searchsorted(cdf, u1[sel], side="right")
            np.minimum(r, model.yf_size - 1, out=r)
            resolved[sel] = r
        preds[unresolved] = resolved
    return preds


def classify_batch(
    model: ClassifierModel, sources: list[SourceIdentity] | np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Classify a batch of sources; consumes two uniforms per source."""
    if isinstance(sources, np.ndarray):
        codes = sources
    else:
        codes = np.array([s.to_code() for s in sources], dtype=np.int64)
    u = rng.random((len(codes), 2))
    return classify_codes(model, codes, u)


def classify(
    model: ClassifierModel, source: SourceIdentity, rng: np.random.Generator
) -> IdentityId:
    """Classify one source; equal to the batch path draw for draw."""
    codes = np.array([source.to_code()], dtype=np.int64)
    u = rng.random(2).reshape(1, 2)
    return int(classify_codes(model, codes, u)[0])
