"""Numerical *-functors out of a diagram category, each with its gluing isometries.

Every functor F exposes dim(u), apply(A) -> matrix of F(A), and
glue(u, v) -> the isometry F_u⊗F_v -> F_uv (kron index a*dim(v) + b).
"""
from __future__ import annotations

import numpy as np

from .category import SourceCategory, inverse_sqrt, invert_gram
from .embedding import Embedding, evaluate


class Functor:
    name = "abstract"

    def __init__(self, category: SourceCategory):
        self.category = category
        self._glue_cache: dict = {}
        self._apply_cache: dict = {}

    def dim(self, u: str) -> int:
        raise NotImplementedError

    def _apply(self, f) -> np.ndarray:
        raise NotImplementedError

    def _glue(self, u: str, v: str) -> np.ndarray:
        raise NotImplementedError

    def apply(self, f) -> np.ndarray:
        return self._apply(f)

    def glue(self, u: str, v: str) -> np.ndarray:
        key = (u, v)
        if key not in self._glue_cache:
            self._glue_cache[key] = self._glue(u, v)
        return self._glue_cache[key]

    def vector(self, f) -> np.ndarray:
        """F(f) for f in (ι, u), flattened."""
        return self.apply(f).reshape(-1)

    def rhat(self, u: str, solutions=None) -> np.ndarray:
        """glue(ū,u)* F(R_u) as a (dim ū) × (dim u) matrix."""
        cat = self.category
        ub = cat.conj(u)
        r = (solutions or {}).get(u, cat.solution(u))[0]
        vec = self.glue(ub, u).conj().T @ self.vector(r)
        return vec.reshape(self.dim(ub), self.dim(u))

    def rbarhat(self, u: str, solutions=None) -> np.ndarray:
        """glue(u,ū)* F(R̄_u) as a (dim u) × (dim ū) matrix."""
        cat = self.category
        ub = cat.conj(u)
        rb = (solutions or {}).get(u, cat.solution(u))[1]
        vec = self.glue(u, ub).conj().T @ self.vector(rb)
        return vec.reshape(self.dim(u), self.dim(ub))

    def descriptor(self) -> dict:
        return {"realization": self.name}


class TensorFunctor(Functor):
    """The embedding itself: a strict tensor functor, gluing maps are identities."""

    name = "embedding"

    def __init__(self, embedding: Embedding, category: SourceCategory | None = None):
        from .category import category_for
        super().__init__(category or category_for(embedding.spec.category, embedding.d))
        self.embedding = embedding

    def dim(self, u: str) -> int:
        return self.embedding.n ** len(u)

    def _apply(self, f) -> np.ndarray:
        return evaluate(f, self.embedding)

    def _glue(self, u: str, v: str) -> np.ndarray:
        return np.eye(self.dim(u) * self.dim(v), dtype=complex)

    def descriptor(self) -> dict:
        return {"realization": self.name, "spec": self.embedding.spec.to_json()}


class _InvariantCoordinates:
    """Orthonormal coordinates on (ι, u) built from the diagram basis."""

    def __init__(self, category: SourceCategory):
        self.category = category
        self._coords: dict = {}

    def coords(self, u: str) -> np.ndarray:
        """C_u = G^(-1/2); column β holds the diagram coefficients of the β-th basis vector."""
        if u not in self._coords:
            g = self.category.gram(u)
            self._coords[u] = inverse_sqrt(g) if g.size else np.zeros((0, 0), dtype=complex)
        return self._coords[u]


class DiagrammaticFunctor(Functor):
    """u -> (ι, u) with the inner product A*B: the identity followed by the q-functor."""

    name = "diagrammatic-identity"

    def __init__(self, category: SourceCategory):
        super().__init__(category)
        self._inv = _InvariantCoordinates(category)

    def dim(self, u: str) -> int:
        return len(self.category.diagrams("", u))

    def _apply(self, f) -> np.ndarray:
        cat = self.category
        u, v = cat.words_of(f)
        cu, cv = self._inv.coords(u), self._inv.coords(v)
        cols = [cat.to_vector(cat.compose(f, dj)) for dj in cat.basis("", u)]
        if not cols or cv.size == 0:
            return np.zeros((self.dim(v), self.dim(u)), dtype=complex)
        m = np.column_stack(cols)
        return np.linalg.solve(cv, m @ cu)

    def _glue(self, u: str, v: str) -> np.ndarray:
        cat = self.category
        du, dv, duv = self.dim(u), self.dim(v), self.dim(u + v)
        out = np.zeros((duv, du * dv), dtype=complex)
        if du == 0 or dv == 0:
            return out
        index = {x: i for i, x in enumerate(cat.diagrams("", u + v))}
        prod = np.zeros((duv, du * dv), dtype=complex)
        bu, bv = cat.basis("", u), cat.basis("", v)
        for i, a in enumerate(bu):
            for j, b in enumerate(bv):
                (diag,) = cat.tensor(a, b).terms
                prod[index[diag], i * dv + j] = 1
        cu, cv, cuv = self._inv.coords(u), self._inv.coords(v), self._inv.coords(u + v)
        return np.linalg.solve(cuv, prod @ np.kron(cu, cv))


class QComposite(Functor):
    """q∘F: u -> the image of (ι, u) under F, with gluing Q_uv* (Q_u ⊗ Q_v)."""

    name = "q-composite"

    def __init__(self, inner: Functor):
        super().__init__(inner.category)
        self.inner = inner
        self._inv = _InvariantCoordinates(inner.category)
        self._q: dict = {}

    def isometry(self, u: str) -> np.ndarray:
        """Q_u: orthonormal coordinates on (ι,u) -> F_u."""
        if u not in self._q:
            cat = self.category
            b = cat.basis("", u)
            if not b:
                self._q[u] = np.zeros((self.inner.dim(u), 0), dtype=complex)
            else:
                cols = np.column_stack([self.inner.vector(x) for x in b])
                self._q[u] = cols @ self._inv.coords(u)
        return self._q[u]

    def dim(self, u: str) -> int:
        return self.isometry(u).shape[1]

    def _apply(self, f) -> np.ndarray:
        u, v = self.category.words_of(f)
        return self.isometry(v).conj().T @ self.inner.apply(f) @ self.isometry(u)

    def _glue(self, u: str, v: str) -> np.ndarray:
        qu, qv, quv = self.isometry(u), self.isometry(v), self.isometry(u + v)
        return quv.conj().T @ self.inner.glue(u, v) @ np.kron(qu, qv)

    def descriptor(self) -> dict:
        return {"realization": self.name, "inner": self.inner.descriptor()}


def support_projection(u: str, functor: Functor) -> np.ndarray:
    """F(c_u) = Σ F(A_i) (G^-1)_ij F(A_j)* over the diagram basis of (ι, u)."""
    cat = functor.category
    b = cat.basis("", u)
    dim = functor.dim(u)
    if not b:
        return np.zeros((dim, dim), dtype=complex)
    ginv = invert_gram(cat.gram(u))
    vecs = np.column_stack([functor.vector(x) for x in b])
    return vecs @ ginv @ vecs.conj().T
