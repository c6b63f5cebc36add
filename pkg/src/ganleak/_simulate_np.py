"""Pure-numpy sampling kernels; reference implementation of the hot loops.

The compiled twin in ``_simulate.pyx`` must produce bit-identical outputs:
both consume the same pre-drawn uniforms and apply the same comparisons,
truncations and clamps, so results never depend on which backend is active.

Encoding: a source code >= 0 is a member identity; a code c < 0 is the
novel pseudo-identity ``-c - 1``.
"""
from __future__ import annotations

import numpy as np

BACKEND = "numpy"


def sample_source_codes(u, rho, member_ids, member_cdf, novel_size):
    """Map uniforms ``u[i] = (u0, u1)`` to source-identity codes.

    u0 decides member vs novel; u1 picks within the branch (inverse CDF
    over member weights, or a uniform slot among ``novel_size`` novels).
    """
    u = np.ascontiguousarray(u, dtype=np.float64)
    n = u.shape[0]
    out = np.empty(n, dtype=np.int64)
    is_member = u[:, 0] < rho
    idx = np.searchsorted(member_cdf, u[is_member, 1], side="right")
    np.minimum(idx, len(member_ids) - 1, out=idx)
    out[is_member] = member_ids[idx]
    novel = ~is_member
    j = (u[novel, 1] * novel_size).astype(np.int64)
    np.minimum(j, novel_size - 1, out=j)
    out[novel] = -(j + 1)
    return out


def classify_codes(codes, u, accuracy, yf_size, novel_uniform):
    """Map source codes plus uniforms to predicted identities.

    Members: correct with probability ``accuracy``, else a uniform draw over
    the other ``yf_size - 1`` identities. Novels: a uniform draw over all of
    ``[0, yf_size)`` when ``novel_uniform``; otherwise the negative code is
    passed through for the caller to resolve against its preference rows.
    """
    codes = np.ascontiguousarray(codes, dtype=np.int64)
    u = np.ascontiguousarray(u, dtype=np.float64)
    out = np.empty_like(codes)
    member = codes >= 0
    y = codes[member]
    if yf_size == 1:
        out[member] = 0
    else:
        correct = u[member, 0] < accuracy
        e = (u[member, 1] * (yf_size - 1)).astype(np.int64)
        np.minimum(e, yf_size - 2, out=e)
        e += e >= y
        out[member] = np.where(correct, y, e)
    novel = ~member
    if novel_uniform:
        p = (u[novel, 1] * yf_size).astype(np.int64)
        np.minimum(p, yf_size - 1, out=p)
        out[novel] = p
    else:
        out[novel] = codes[novel]
    return out
