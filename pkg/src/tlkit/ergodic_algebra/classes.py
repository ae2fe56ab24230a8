"""Minimal projections and partial isometries for every word up to a length bound.

One minimal projection E_k is chosen per equivalence class, sitting at the
shortest word u_k carrying that class.  For every word u the table holds
partial isometries W_i in (u_k, u) with W_i*W_i = E_k and Σ W_i W_i* = 1_u.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..hilbert_embed.category import SourceCategory
from ..tl_core.forms import RootOfUnityObstruction, jones_wenzl, quantum_integers


class DecompositionError(ArithmeticError):
    pass


@dataclass
class ClassInfo:
    index: int
    word: str
    projection: object
    trace: complex


@dataclass
class ClassTable:
    category: SourceCategory
    N: int
    classes: list
    isometries: dict = field(default_factory=dict)   # word -> [(class index, W)]

    def words(self) -> list:
        return sorted(self.isometries, key=lambda w: (len(w), w))

    def class_of_word(self, w: str) -> int:
        for c in self.classes:
            if c.word == w:
                return c.index
        raise KeyError(w)

    def multiplicities(self, w: str) -> dict:
        out: dict = {}
        for k, _ in self.isometries[w]:
            out[k] = out.get(k, 0) + 1
        return out

    def verify(self) -> dict:
        """Max coefficient residuals of the partial-isometry relations."""
        cat = self.category
        worst_sum = worst_proj = worst_orth = 0.0
        for w, items in self.isometries.items():
            total = cat.zero(w, w)
            for k, wi in items:
                total = total + cat.compose(wi, cat.adjoint(wi))
            worst_sum = max(worst_sum, _maxabs(cat, total - cat.identity(w)))
            for a, (k, wa) in enumerate(items):
                for b, (l, wb) in enumerate(items):
                    prod = cat.compose(cat.adjoint(wa), wb)
                    if a == b:
                        worst_proj = max(worst_proj, _maxabs(cat, prod - self.classes[k].projection))
                    elif k == l:
                        worst_orth = max(worst_orth, _maxabs(cat, prod))
                    else:
                        # different classes: the product is an arrow between inequivalent minimal projections
                        worst_orth = max(worst_orth, _maxabs(cat, prod))
        return {"sum_to_identity": worst_sum, "projection": worst_proj, "orthogonality": worst_orth}


def _maxabs(cat: SourceCategory, f) -> float:
    vec = cat.to_vector(f)
    return float(np.abs(vec).max()) if vec.size else 0.0


def check_generic(cat: SourceCategory, N: int, tol: float = 1e-8) -> None:
    qi = quantum_integers(2 * N + 2, cat.backend)
    for j, q in enumerate(qi[1:], start=1):
        if abs(complex(q)) < tol:
            raise RootOfUnityObstruction(
                f"[{j}] = {complex(q):.3e} vanishes at d = {complex(cat.d)}; "
                "the class decomposition needs generic d")


def _lower_ideal_unit(cat: SourceCategory, w: str):
    """Unit of the ideal spanned by diagrams in End(w) with fewer than |w| through strands."""
    full = cat.basis(w, w)
    lower = [b for b in full if next(iter(b.terms)).through_strands < len(w)]
    if not lower:
        return cat.zero(w, w)
    rows = []
    rhs = []
    for di in lower:
        rows.append(np.column_stack([cat.to_vector(cat.compose(dj, di)) for dj in lower]))
        rhs.append(cat.to_vector(di))
    a = np.vstack(rows)
    b = np.concatenate(rhs)
    coeffs, *_ = np.linalg.lstsq(a, b, rcond=None)
    resid = np.abs(a @ coeffs - b).max()
    if resid > 1e-8:
        raise DecompositionError(f"ideal in End({w}) has no unit (residual {resid:.2e})")
    return cat.combination(lower, coeffs)


def minimal_projection(cat: SourceCategory, w: str):
    if cat.kind == "tl":
        return jones_wenzl(len(w), cat.backend)
    return cat.identity(w) - _lower_ideal_unit(cat, w)


def decompose_classes(cat: SourceCategory, N: int, tol: float = 1e-9) -> ClassTable:
    """Class table for all words of length <= 2N."""
    check_generic(cat, N)
    max_len = 2 * N
    if cat.kind == "tl":
        rep_words = ["y" * r for r in range(max_len + 1)]
    else:
        rep_words = cat.words(max_len)
    classes = []
    for idx, w in enumerate(rep_words):
        e = minimal_projection(cat, w)
        tr = cat.trace(e)
        if abs(tr) < tol:
            raise RootOfUnityObstruction(f"minimal projection at {w!r} has vanishing trace")
        classes.append(ClassInfo(idx, w, e, tr))
    table = ClassTable(cat, N, classes)
    for u in cat.words(max_len):
        items = []
        for c in classes:
            if len(c.word) > len(u) or (len(u) - len(c.word)) % 2:
                continue
            vs = [cat.compose(dgm, c.projection) for dgm in cat.basis(c.word, u)]
            vs = [v for v in vs if not v.is_zero()]
            if not vs:
                continue
            g = np.array([[cat.trace(cat.compose(cat.adjoint(a), b)) / c.trace for b in vs] for a in vs])
            g = (g + g.conj().T) / 2
            evals, vecs = np.linalg.eigh(g)
            scale = max(1.0, float(abs(evals).max()))
            if evals.min() < -tol * scale:
                raise DecompositionError(
                    f"inner product on ({c.word}, {u}) is not positive (eigenvalue {evals.min():.3e})")
            for s, vec in zip(evals, vecs.T):
                if s > tol * scale:
                    items.append((c.index, cat.combination(vs, vec / np.sqrt(s))))
        table.isometries[u] = items
    return table
