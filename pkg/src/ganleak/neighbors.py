"""Intra-identity nearest-neighbor search over feature embeddings.

Supports the visual verification step: a generated sample is compared,
in feature space, against the training instances of its predicted
identity. Search is exact brute force over squared L2 distance; ties
break by ascending sample id so results are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .identity import IdentityId


@dataclass
class EmbeddingSet:
    """Feature vectors tagged with sample ids and identities."""

    dim: int
    sample_ids: list[str]
    identities: np.ndarray  # int64, one per entry
    vectors: np.ndarray  # float64, shape (n, dim)

    def __post_init__(self):
        self.identities = np.asarray(self.identities, dtype=np.int64)
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        n = len(self.sample_ids)
        if self.vectors.shape != (n, self.dim):
            raise ValueError(
                f"vectors shape {self.vectors.shape} does not match {n} entries of dim {self.dim}"
            )
        if len(self.identities) != n:
            raise ValueError("identities and sample_ids disagree in length")
        if len(set(self.sample_ids)) != n:
            raise ValueError("sample_ids must be unique")

    @classmethod
    def from_entries(
        cls, entries: list[tuple[str, IdentityId, np.ndarray]]
    ) -> "EmbeddingSet":
        if not entries:
            raise ValueError("at least one embedding entry is required")
        dim = len(entries[0][2])
        ids = [e[0] for e in entries]
        identities = np.array([e[1] for e in entries], dtype=np.int64)
        vectors = np.empty((len(entries), dim), dtype=np.float64)
        for i, (_, _, v) in enumerate(entries):
            v = np.asarray(v, dtype=np.float64)
            if v.shape != (dim,):
                raise ValueError(
                    f"entry {ids[i]!r} has dim {v.shape}, expected ({dim},)"
                )
            vectors[i] = v
        return cls(dim=dim, sample_ids=ids, identities=identities, vectors=vectors)

    def __len__(self) -> int:
        return len(self.sample_ids)


@dataclass(frozen=True)
class NNResult:
    """Ranked neighbors of one query: (sample id, squared distance)."""

    query_id: str | None
    neighbors: tuple[tuple[str, float], ...]


def nearest_intra_identity(
    query_vector: np.ndarray,
    identity: IdentityId,
    embeddings: EmbeddingSet,
    k: int,
    query_id: str | None = None,
) -> NNResult:
    """The k training instances of ``identity`` closest to the query.

    Exact scan; distances are plain sums of squared coordinate gaps.
    Returns fewer than k neighbors when the identity has fewer instances.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    query_vector = np.asarray(query_vector, dtype=np.float64)
    if query_vector.shape != (embeddings.dim,):
        raise ValueError(
            f"query dim {query_vector.shape} does not match embedding dim {embeddings.dim}"
        )
    candidate_idx = np.flatnonzero(embeddings.identities == identity)
    if len(candidate_idx) == 0:
        raise KeyError(f"identity {identity} has no embeddings")
    diffs = embeddings.vectors[candidate_idx] - query_vector
    d2 = (diffs * diffs).sum(axis=1)
    ranked = sorted(
        ((float(d2[i]), embeddings.sample_ids[candidate_idx[i]]) for i in range(len(candidate_idx)))
    )
    return NNResult(
        query_id=query_id,
        neighbors=tuple((sid, dist) for dist, sid in ranked[:k]),
    )


def contact_sheet_manifest(
    queries: list[tuple[str, IdentityId, np.ndarray]],
    embeddings: EmbeddingSet,
    k: int,
) -> list[tuple[str, int, str, float, bool]]:
    """Rows ``(query_id, rank, neighbor_id, distance_sq, truncated)``.

    One row per retrieved neighbor, rank starting at 1; ``truncated`` marks
    queries whose identity had fewer than k instances. Feed the rows to an
    external tool to assemble query-beside-neighbors image sheets.
    """
    rows: list[tuple[str, int, str, float, bool]] = []
    for query_id, identity, vector in queries:
        result = nearest_intra_identity(vector, identity, embeddings, k, query_id=query_id)
        truncated = len(result.neighbors) < k
        for rank, (neighbor_id, dist) in enumerate(result.neighbors, start=1):
            rows.append((query_id, rank, neighbor_id, dist, truncated))
    return rows
