"""Oriented diagrams: planar matchings whose arcs respect x / x̄ letters.

Words are strings over "x" and "X" (X is the conjugate letter).  An arc
between a source point and a target point keeps its letter; a cup or cap
joins one x to one X.  The underlying pairing engine is the unoriented one.
"""
from __future__ import annotations

from functools import lru_cache

from ..tl_core import diagram as dg
from ..tl_core.diagram import TLDiagram
from ..tl_core.morphism import TLMorphism
from ..tl_core.scalars import Backend


class OrientationError(Exception):
    pass


def check_word(w: str) -> str:
    if any(ch not in "xX" for ch in w):
        raise OrientationError(f"word {w!r} must use only 'x' and 'X'")
    return w


def conjugate_word(w: str) -> str:
    return w[::-1].swapcase()


def _letter(source: str, target: str, diag: TLDiagram, p: int) -> str:
    kind, j = diag.side(p)
    return source[j] if kind == "s" else target[j]


def compatible(source: str, target: str, diag: TLDiagram) -> bool:
    for p, q in diag.pairs:
        lp, lq = _letter(source, target, diag, p), _letter(source, target, diag, q)
        crossing = (p < diag.source) != (q < diag.source)
        if crossing != (lp == lq):
            return False
    return True


@lru_cache(maxsize=None)
def oriented_basis(source: str, target: str) -> tuple:
    check_word(source)
    check_word(target)
    return tuple(d for d in dg.basis(len(source), len(target)) if compatible(source, target, d))


class OrientedMorphism:
    __slots__ = ("source", "target", "terms", "backend")

    def __init__(self, source: str, target: str, terms: dict, backend: Backend):
        check_word(source)
        check_word(target)
        clean = {}
        for diag, coeff in terms.items():
            if (diag.source, diag.target) != (len(source), len(target)):
                raise OrientationError(f"diagram {diag} has the wrong number of points")
            if not compatible(source, target, diag):
                raise OrientationError(f"diagram {diag.pairs} violates orientation {source}->{target}")
            coeff = backend.coerce(coeff)
            if not backend.is_zero(coeff):
                clean[diag] = coeff
        self.source, self.target = source, target
        self.terms = clean
        self.backend = backend

    @classmethod
    def from_diagram(cls, source: str, target: str, diag: TLDiagram, backend: Backend, coeff=1):
        return cls(source, target, {diag: coeff}, backend)

    @classmethod
    def zero(cls, source: str, target: str, backend: Backend):
        return cls(source, target, {}, backend)

    def _check(self, other):
        if self.backend != other.backend:
            raise OrientationError("scalar backend mismatch")

    def __add__(self, other):
        self._check(other)
        if (self.source, self.target) != (other.source, other.target):
            raise OrientationError("cannot add morphisms between different words")
        terms = dict(self.terms)
        for d, c in other.terms.items():
            terms[d] = terms[d] + c if d in terms else c
        return OrientedMorphism(self.source, self.target, terms, self.backend)

    def scale(self, c):
        c = self.backend.coerce(c)
        return OrientedMorphism(self.source, self.target,
                                {d: v * c for d, v in self.terms.items()}, self.backend)

    def __rmul__(self, c):
        return self.scale(c)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other):
        return compose(self, other)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, diag):
        return self.terms.get(diag, self.backend.zero)

    def __eq__(self, other):
        """Canonical-encoding equality (same words, same diagram coefficients)."""
        if not isinstance(other, OrientedMorphism):
            return NotImplemented
        return ((self.source, self.target) == (other.source, other.target)
                and self.backend == other.backend and self.terms == other.terms)

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.terms)))

    def __repr__(self):
        body = " + ".join(f"({c})*{d.pairs}" for d, c in sorted(self.terms.items())) or "0"
        return f"OrientedMorphism({self.source or 'ι'}->{self.target or 'ι'}: {body})"


def identity(w: str, backend: Backend) -> OrientedMorphism:
    return OrientedMorphism.from_diagram(w, w, dg.identity(len(w)), backend)


def R(backend: Backend) -> OrientedMorphism:
    """R in (ι, x̄x)."""
    return OrientedMorphism.from_diagram("", "Xx", dg.cup(), backend)


def Rbar(backend: Backend) -> OrientedMorphism:
    """R̄ in (ι, x x̄)."""
    return OrientedMorphism.from_diagram("", "xX", dg.cup(), backend)


def compose(f: OrientedMorphism, g: OrientedMorphism) -> OrientedMorphism:
    f._check(g)
    if f.source != g.target:
        raise OrientationError(f"word mismatch: {g.target!r} into {f.source!r}")
    bk = f.backend
    terms: dict = {}
    for df, cf in f.terms.items():
        for dgm, cg in g.terms.items():
            diag, loops = dg.compose(df, dgm)
            c = cf * cg * bk.power(bk.d, loops)
            terms[diag] = terms[diag] + c if diag in terms else c
    return OrientedMorphism(g.source, f.target, terms, bk)


def tensor(f: OrientedMorphism, g: OrientedMorphism) -> OrientedMorphism:
    f._check(g)
    terms: dict = {}
    for df, cf in f.terms.items():
        for dgm, cg in g.terms.items():
            diag = dg.tensor(df, dgm)
            terms[diag] = terms[diag] + cf * cg if diag in terms else cf * cg
    return OrientedMorphism(f.source + g.source, f.target + g.target, terms, f.backend)


def adjoint(f: OrientedMorphism) -> OrientedMorphism:
    bk = f.backend
    return OrientedMorphism(f.target, f.source,
                            {dg.adjoint(d): bk.conj(c) for d, c in f.terms.items()}, bk)


def forget(f: OrientedMorphism) -> TLMorphism:
    """Erase orientations: words of length n go to y^n, R and R̄ both go to S."""
    return TLMorphism(len(f.source), len(f.target), dict(f.terms), f.backend)


def basis(source: str, target: str, backend: Backend) -> list:
    return [OrientedMorphism.from_diagram(source, target, d, backend)
            for d in oriented_basis(source, target)]


def to_json(f: OrientedMorphism) -> dict:
    bk = f.backend
    return {
        "source": f.source,
        "target": f.target,
        "variant": 1,
        "backend": bk.descriptor(),
        "terms": [{"pairs": [list(p) for p in d.pairs], "coeff": bk.to_json(c)}
                  for d, c in sorted(f.terms.items())],
    }


def from_json(obj: dict, backend: Backend) -> OrientedMorphism:
    s, t = obj["source"], obj["target"]
    terms = {TLDiagram(len(s), len(t), tuple(tuple(p) for p in term["pairs"])):
             backend.from_json(term["coeff"]) for term in obj["terms"]}
    return OrientedMorphism(s, t, terms, backend)
