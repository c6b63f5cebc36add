"""Identity spaces, dataset splits and ground-truth membership.

Identities are dense integer indices in ``[0, yf_size)``. The attacker's
known identity pool has size ``yf_size``; the generator's training pool is
the ``members`` subset. Setting 2 additionally singles out a heavily
sampled ``biased_members`` subset.
"""
from __future__ import annotations

from dataclasses import dataclass, field

IdentityId = int


class NoBiasError(ValueError):
    """Raised when a two-tier split has no actual sampling bias."""


@dataclass(frozen=True)
class DatasetSpec:
    """Ground truth for one experiment: who was in the training set.

    ``samples_per_identity`` maps each member to its training instance
    count; non-members have no images by definition. Instances themselves
    are never materialized, only their counts matter.
    """

    yf_size: int
    members: frozenset[IdentityId]
    samples_per_identity: dict[IdentityId, int]
    biased_members: frozenset[IdentityId] | None = None
    total_samples: int = field(init=False)

    def __post_init__(self):
        if self.yf_size < 1:
            raise ValueError(f"yf_size must be >= 1, got {self.yf_size}")
        if not self.members:
            raise ValueError("members must be non-empty (the attack requires overlap)")
        if min(self.members) < 0 or max(self.members) >= self.yf_size:
            raise ValueError("members must lie in [0, yf_size)")
        if set(self.samples_per_identity) != set(self.members):
            raise ValueError("samples_per_identity must cover exactly the members")
        bad = {y: n for y, n in self.samples_per_identity.items() if n < 1}
        if bad:
            raise ValueError(f"per-identity sample counts must be >= 1: {bad}")
        if self.biased_members is not None:
            if not self.biased_members:
                raise ValueError("biased_members, when given, must be non-empty")
            if not self.biased_members <= self.members:
                raise ValueError("biased_members must be a subset of members")
        object.__setattr__(self, "total_samples", sum(self.samples_per_identity.values()))

    @property
    def unbiased_members(self) -> frozenset[IdentityId]:
        """Members outside the biased subset (the diverse tier in Setting 2)."""
        if self.biased_members is None:
            return self.members
        return self.members - self.biased_members

    def truth_set(self, mode: str = "full") -> frozenset[IdentityId]:
        """Positive identities for evaluation: all members, or only the biased tier."""
        if mode == "full":
            return self.members
        if mode == "biased":
            if self.biased_members is None:
                raise ValueError("biased evaluation requested but no biased subset is defined")
            return self.biased_members
        raise ValueError(f"unknown evaluation mode {mode!r} (expected 'full' or 'biased')")


def make_setting1_spec(yf_size: int, yg_size: int, per_id: int) -> DatasetSpec:
    """Low-bias split: the first ``yg_size`` identities, uniform counts."""
    if yg_size < 1:
        raise ValueError(f"yg_size must be >= 1, got {yg_size}")
    if yg_size > yf_size:
        raise ValueError(f"yg_size ({yg_size}) cannot exceed yf_size ({yf_size})")
    if per_id < 1:
        raise ValueError(f"per_id must be >= 1, got {per_id}")
    members = frozenset(range(yg_size))
    return DatasetSpec(
        yf_size=yf_size,
        members=members,
        samples_per_identity={y: per_id for y in members},
    )


def make_setting2_spec(
    yf_size: int,
    yg1_size: int,
    n1_per_id: int,
    yg2_size: int,
    n2_per_id: int,
) -> DatasetSpec:
    """Biased split: a small heavy tier followed by a large light tier.

    The first ``yg1_size`` identities get ``n1_per_id`` samples each and form
    the biased subset; the next ``yg2_size`` get ``n2_per_id`` each.
    """
    if yg1_size < 1 or yg2_size < 1:
        raise ValueError("both tiers must contain at least one identity")
    if yg1_size + yg2_size > yf_size:
        raise ValueError(
            f"tiers overflow the identity space: {yg1_size} + {yg2_size} > {yf_size}"
        )
    if n2_per_id < 1:
        raise ValueError(f"n2_per_id must be >= 1, got {n2_per_id}")
    if n1_per_id <= n2_per_id:
        raise NoBiasError(
            f"n1_per_id ({n1_per_id}) must exceed n2_per_id ({n2_per_id}); "
            "otherwise the split carries no bias"
        )
    counts: dict[IdentityId, int] = {y: n1_per_id for y in range(yg1_size)}
    counts.update({y: n2_per_id for y in range(yg1_size, yg1_size + yg2_size)})
    return DatasetSpec(
        yf_size=yf_size,
        members=frozenset(counts),
        samples_per_identity=counts,
        biased_members=frozenset(range(yg1_size)),
    )


def random_baseline_precision(spec: DatasetSpec, mode: str = "full") -> float:
    """Precision of guessing blindly: the positive fraction of the identity pool.

    Random guessing attains this at any recall, so it is the floor every
    attack must clear.
    """
    return len(spec.truth_set(mode)) / spec.yf_size
