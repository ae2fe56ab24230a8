"""Uniform access to the unoriented and oriented diagram categories.

Objects are words: "yyy" in the unoriented category, strings over x/X in the
oriented one.  Arrows are the exact-engine morphism objects, usually over a
complex backend when they feed numerical functors.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

from ..oriented_core import morphism as om
from ..oriented_core.morphism import OrientedMorphism, conjugate_word
from ..tl_core import diagram as dg
from ..tl_core import morphism as tm
from ..tl_core.morphism import TLMorphism
from ..tl_core.scalars import Backend, ComplexBackend

KINDS = ("tl", "oriented")


class CategoryError(Exception):
    pass


class SourceCategory:
    def __init__(self, kind: str, backend: Backend | None = None, d: float | None = None):
        if kind not in KINDS:
            raise CategoryError(f"unknown category {kind!r}; expected one of {KINDS}")
        if backend is None:
            if d is None:
                raise CategoryError("need a backend or a loop value d")
            backend = ComplexBackend(d)
        self.kind = kind
        self.backend = backend
        self.letters = "y" if kind == "tl" else "xX"
        self._basis_cache: dict = {}
        self._solution_cache: dict = {}

    @property
    def d(self):
        return self.backend.d

    def check(self, w: str) -> str:
        if any(ch not in self.letters for ch in w):
            raise CategoryError(f"word {w!r} is not over the letters {self.letters!r}")
        return w

    def words(self, max_len: int, min_len: int = 0) -> list:
        out = []
        for r in range(min_len, max_len + 1):
            out.extend("".join(p) for p in product(self.letters, repeat=r))
        return out

    def conj(self, w: str) -> str:
        return w[::-1] if self.kind == "tl" else conjugate_word(w)

    # arrows
    def diagrams(self, u: str, v: str) -> tuple:
        """Diagram basis of (u, v), u the source word."""
        self.check(u)
        self.check(v)
        if self.kind == "tl":
            return dg.basis(len(u), len(v))
        return om.oriented_basis(u, v)

    def from_terms(self, u: str, v: str, terms: dict):
        if self.kind == "tl":
            return TLMorphism(len(u), len(v), terms, self.backend)
        return OrientedMorphism(u, v, terms, self.backend)

    def basis(self, u: str, v: str) -> list:
        key = (u, v)
        if key not in self._basis_cache:
            self._basis_cache[key] = [self.from_terms(u, v, {dgm: 1}) for dgm in self.diagrams(u, v)]
        return self._basis_cache[key]

    def identity(self, w: str):
        if self.kind == "tl":
            return tm.identity(len(w), self.backend)
        return om.identity(w, self.backend)

    def zero(self, u: str, v: str):
        return self.from_terms(u, v, {})

    def compose(self, f, g):
        return tm.compose(f, g) if self.kind == "tl" else om.compose(f, g)

    def tensor(self, f, g):
        return tm.tensor(f, g) if self.kind == "tl" else om.tensor(f, g)

    def adjoint(self, f):
        return tm.adjoint(f) if self.kind == "tl" else om.adjoint(f)

    def words_of(self, f) -> tuple:
        """(source word, target word) of an arrow."""
        if isinstance(f, TLMorphism):
            return "y" * f.source, "y" * f.target
        return f.source, f.target

    def scalar(self, f) -> complex:
        """The number c for an arrow c·1_ι."""
        return complex(self.backend.to_complex(f.coefficient(dg.identity(0))))

    def trace(self, f) -> complex:
        if self.kind == "tl":
            return complex(self.backend.to_complex(tm.markov_trace(f)))
        from ..oriented_core.calculus import trace
        return complex(self.backend.to_complex(trace(f)))

    def inner(self, f, g) -> complex:
        """f*∘g for arrows out of ι."""
        return self.scalar(self.compose(self.adjoint(f), g))

    # coordinates in the diagram basis
    def to_vector(self, f) -> np.ndarray:
        u, v = self.words_of(f)
        diags = self.diagrams(u, v)
        bk = self.backend
        return np.array([complex(bk.to_complex(f.coefficient(x))) for x in diags], dtype=complex)

    def from_vector(self, u: str, v: str, vec) -> object:
        diags = self.diagrams(u, v)
        return self.from_terms(u, v, {x: complex(c) for x, c in zip(diags, vec) if c != 0})

    def combination(self, arrows, coeffs):
        if not arrows:
            raise CategoryError("empty combination")
        out = arrows[0].scale(complex(coeffs[0]))
        for a, c in zip(arrows[1:], coeffs[1:]):
            out = out + a.scale(complex(c))
        return out

    # conjugates
    def solution(self, w: str):
        """(R_w, R̄_w) with R_w in (ι, w̄w), R̄_w in (ι, ww̄), multiplicative in w."""
        self.check(w)
        if w in self._solution_cache:
            return self._solution_cache[w]
        bk = self.backend
        if w == "":
            e = self.identity("")
            out = (e, e)
        elif len(w) == 1:
            if self.kind == "tl":
                s = tm.cup(bk)
                out = (s, s)
            else:
                r, rb = om.R(bk), om.Rbar(bk)
                out = (r, rb) if w == "x" else (rb, r)
        else:
            u, v = w[:-1], w[-1]
            ru, rbu = self.solution(u)
            rv, rbv = self.solution(v)
            ub, vb = self.conj(u), self.conj(v)
            r = self.compose(self.tensor(self.tensor(self.identity(vb), ru), self.identity(v)), rv)
            rb = self.compose(self.tensor(self.tensor(self.identity(u), rbv), self.identity(ub)), rbu)
            out = (r, rb)
        self._solution_cache[w] = out
        return out

    def bullet(self, a, solutions=None):
        """A• in (v̄, ū) for A in (v, u); ``solutions`` maps words to (R, R̄) overrides."""
        v, u = self.words_of(a)
        vb, ub = self.conj(v), self.conj(u)
        sol = solutions or {}
        rv = sol.get(v, self.solution(v))[0]
        rbu = sol.get(u, self.solution(u))[1]
        step1 = self.tensor(self.identity(vb), rbu)
        step2 = self.tensor(self.tensor(self.identity(vb), self.adjoint(a)), self.identity(ub))
        step3 = self.tensor(self.adjoint(rv), self.identity(ub))
        return self.compose(step3, self.compose(step2, step1))

    # algebra inside End(w)
    def gram(self, w: str) -> np.ndarray:
        """D_i*∘D_j on the diagram basis of (ι, w)."""
        b = self.basis("", w)
        return np.array([[self.inner(x, y) for y in b] for x in b], dtype=complex).reshape(len(b), len(b))

    def support(self, w: str):
        """c_w = Σ D_i (G^-1)_ij D_j*: the projection of (ι, w) support in End(w)."""
        b = self.basis("", w)
        if not b:
            return self.zero(w, w)
        g = self.gram(w)
        ginv = invert_gram(g)
        out = self.zero(w, w)
        for i, di in enumerate(b):
            for j, dj in enumerate(b):
                if ginv[i, j] != 0:
                    out = out + self.compose(di, self.adjoint(dj)).scale(complex(ginv[i, j]))
        return out

    def left_regular(self, x) -> np.ndarray:
        """Matrix of Y -> X∘Y on End(w) in diagram coordinates."""
        w, _ = self.words_of(x)
        b = self.basis(w, w)
        return np.column_stack([self.to_vector(self.compose(x, y)) for y in b])

    def inverse(self, x, tol: float = 1e-10):
        w, w2 = self.words_of(x)
        if w != w2:
            raise CategoryError("inverse needs an endomorphism")
        mat = self.left_regular(x)
        one = self.to_vector(self.identity(w))
        if abs(np.linalg.det(mat)) < tol:
            raise CategoryError("arrow is not invertible")
        return self.from_vector(w, w, np.linalg.solve(mat, one))


class SingularGram(ArithmeticError):
    """The inner product on a hom space is degenerate (root-of-unity loop value)."""


def invert_gram(g: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    if g.size == 0:
        return g
    evals = np.linalg.eigvalsh((g + g.conj().T) / 2)
    if evals.min() <= tol * max(1.0, abs(evals).max()):
        raise SingularGram(f"Gram matrix is not positive definite (min eigenvalue {evals.min():.3e})")
    return np.linalg.inv(g)


def inverse_sqrt(g: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """G^(-1/2) for a positive definite Gram matrix."""
    if g.size == 0:
        return g
    h = (g + g.conj().T) / 2
    evals, vecs = np.linalg.eigh(h)
    if evals.min() <= tol * max(1.0, abs(evals).max()):
        raise SingularGram(f"Gram matrix is not positive definite (min eigenvalue {evals.min():.3e})")
    return (vecs * (1 / np.sqrt(evals))) @ vecs.conj().T


@lru_cache(maxsize=None)
def category_for(kind: str, d: float) -> SourceCategory:
    return SourceCategory(kind, d=d)
