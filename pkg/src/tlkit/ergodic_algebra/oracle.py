"""Brute-force dimension of the truncated quotient, independent of the class table.

Spans ⊕_{|u| <= N} μ_u* ⊗ τ_u and quotients by every relation
μ(A)ᵀ e_a e_cᵀ at u  ~  e_a (τ(A) e_c)ᵀ at v, with A running over diagram
bases of (u, v) for |u|, |v| <= N.
"""
from __future__ import annotations

import numpy as np

from ..hilbert_embed.functors import Functor


def brute_force_dimension(mu: Functor, tau: Functor, N: int, tol: float = 1e-9) -> int:
    cat = mu.category
    words = cat.words(N)
    offsets, total = {}, 0
    for w in words:
        offsets[w] = total
        total += mu.dim(w) * tau.dim(w)
    if total == 0:
        return 0
    rows = []
    for u in words:
        for v in words:
            for a in cat.basis(u, v):
                ma, ta = mu.apply(a), tau.apply(a)
                dmv, dtu = mu.dim(v), tau.dim(u)
                for i in range(dmv):
                    for c in range(dtu):
                        vec = np.zeros(total, dtype=complex)
                        # μ(A)ᵀ e_i e_cᵀ at u
                        vec[offsets[u]:offsets[u] + mu.dim(u) * dtu] += np.outer(ma[i, :], np.eye(dtu)[c]).reshape(-1)
                        # e_i (τ(A) e_c)ᵀ at v
                        vec[offsets[v]:offsets[v] + dmv * tau.dim(v)] -= np.outer(np.eye(dmv)[i], ta[:, c]).reshape(-1)
                        rows.append(vec)
    if not rows:
        return total
    s = np.linalg.svd(np.array(rows), compute_uv=False)
    rank = int(np.sum(s > tol * max(1.0, s.max())))
    return total - rank
