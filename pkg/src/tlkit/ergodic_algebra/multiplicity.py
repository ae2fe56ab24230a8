"""Quantum multiplicity of the spectral spaces (ι, μ_u) for u a power of the generator."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..hilbert_embed.functors import Functor
from .algebra import AlgebraError


class SingularConjugation(AlgebraError):
    pass


@dataclass(frozen=True)
class Multiplicity:
    r: int
    word: str
    mult: int
    m: float
    qdim: float
    trace_jj: float
    trace_jj_inv: float

    @property
    def within_bounds(self) -> bool:
        return self.mult - 1e-6 <= self.m <= self.qdim + 1e-6 * max(1.0, self.qdim)

    @property
    def strict_lower(self) -> bool:
        return self.m > self.mult + 1e-6

    @property
    def strict_upper(self) -> bool:
        return self.m < self.qdim - 1e-6 * max(1.0, self.qdim)

    def to_json(self) -> dict:
        return {"r": self.r, "word": self.word, "mult": self.mult, "m": self.m, "qdim": self.qdim,
                "trace_JJ*": self.trace_jj, "trace_(JJ*)^-1": self.trace_jj_inv,
                "within_bounds": self.within_bounds,
                "strict_lower": self.strict_lower, "strict_upper": self.strict_upper}


def generator(functor: Functor) -> str:
    return "y" if functor.category.kind == "tl" else "x"


def quantum_multiplicity(functor: Functor, r: int, letter: str | None = None) -> Multiplicity:
    """m(u)^2 = Tr(JJ*) Tr((JJ*)^-1) with J: ξ ↦ ξ• from μ_u to μ_ū, u = letter^r."""
    cat = functor.category
    u = (letter or generator(functor)) * r
    d = float(np.real(complex(cat.d)))
    qdim = d ** r
    dim = functor.dim(u)
    if dim == 0:
        return Multiplicity(r, u, 0, 0.0, qdim, 0.0, 0.0)
    # ξ• = Kᵀ conj(ξ) with K = glue(u,ū)* μ(R̄_u) as a (dim u) × (dim ū) matrix
    k = functor.rbarhat(u).T
    if k.shape[0] != k.shape[1]:
        raise SingularConjugation(f"conjugation on {u!r} maps dimension {k.shape[1]} to {k.shape[0]}")
    jj = k @ k.conj().T
    s = np.linalg.svd(jj, compute_uv=False)
    if s.min() <= 1e-12 * s.max():
        raise SingularConjugation(f"JJ* is singular on {u!r} (smallest singular value {s.min():.3e})")
    t1 = float(np.real(np.trace(jj)))
    t2 = float(np.real(np.trace(np.linalg.inv(jj))))
    return Multiplicity(r, u, dim, float(np.sqrt(t1 * t2)), qdim, t1, t2)


def multiplicity_table(functor: Functor, r_max: int, letter: str | None = None) -> list:
    return [quantum_multiplicity(functor, r, letter) for r in range(r_max + 1)]
