"""Linear combinations of planar diagrams and the categorical operations on them."""
from __future__ import annotations

from . import diagram as dg
from .diagram import TLDiagram
from .scalars import Backend


class MorphismError(Exception):
    pass


class SignedReductionDisabled(MorphismError):
    """Raised when a pseudoreal (ε = -1) diagram morphism would be constructed."""


class TLMorphism:
    """Scalar-weighted sum of diagrams sharing source and target strand counts."""

    __slots__ = ("source", "target", "terms", "backend", "variant")

    def __init__(self, source: int, target: int, terms: dict, backend: Backend, variant: int = 1):
        if variant not in (1, -1):
            raise MorphismError("variant must be +1 or -1")
        if variant == -1:
            raise SignedReductionDisabled(
                "pseudoreal diagram arithmetic is not available; evaluate pseudoreal "
                "embeddings numerically instead")
        clean = {}
        for diag, coeff in terms.items():
            if (diag.source, diag.target) != (source, target):
                raise MorphismError(f"diagram {diag} does not lie in ({source}, {target})")
            coeff = backend.coerce(coeff)
            if not backend.is_zero(coeff):
                clean[diag] = coeff
        self.source, self.target = source, target
        self.terms = clean
        self.backend = backend
        self.variant = variant

    # construction helpers
    @classmethod
    def from_diagram(cls, diag: TLDiagram, backend: Backend, coeff=1) -> "TLMorphism":
        return cls(diag.source, diag.target, {diag: coeff}, backend)

    @classmethod
    def zero(cls, source: int, target: int, backend: Backend) -> "TLMorphism":
        return cls(source, target, {}, backend)

    def _check(self, other: "TLMorphism"):
        if self.backend != other.backend:
            raise MorphismError("scalar backend mismatch")
        if self.variant != other.variant:
            raise MorphismError("variant mismatch")

    # vector-space structure
    def __add__(self, other: "TLMorphism") -> "TLMorphism":
        self._check(other)
        if (self.source, self.target) != (other.source, other.target):
            raise MorphismError("cannot add morphisms in different hom spaces")
        terms = dict(self.terms)
        for diag, c in other.terms.items():
            terms[diag] = terms[diag] + c if diag in terms else c
        return TLMorphism(self.source, self.target, terms, self.backend)

    def __neg__(self) -> "TLMorphism":
        return self.scale(-1)

    def __sub__(self, other: "TLMorphism") -> "TLMorphism":
        return self + (-other)

    def scale(self, c) -> "TLMorphism":
        c = self.backend.coerce(c)
        return TLMorphism(self.source, self.target,
                          {k: v * c for k, v in self.terms.items()}, self.backend)

    def __rmul__(self, c) -> "TLMorphism":
        return self.scale(c)

    def __matmul__(self, other: "TLMorphism") -> "TLMorphism":
        return compose(self, other)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, diag: TLDiagram):
        return self.terms.get(diag, self.backend.zero)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TLMorphism):
            return NotImplemented
        return ((self.source, self.target, self.variant) == (other.source, other.target, other.variant)
                and self.backend == other.backend and self.terms == other.terms)

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.terms)))

    def __repr__(self):
        body = " + ".join(f"({c})*{d.pairs}" for d, c in sorted(self.terms.items())) or "0"
        return f"TLMorphism({self.source}->{self.target}: {body})"


def identity(n: int, backend: Backend) -> TLMorphism:
    return TLMorphism.from_diagram(dg.identity(n), backend)


def cup(backend: Backend) -> TLMorphism:
    """The generator S in (ι, y²)."""
    return TLMorphism.from_diagram(dg.cup(), backend)


def cap(backend: Backend) -> TLMorphism:
    return TLMorphism.from_diagram(dg.cap(), backend)


def cupcap(backend: Backend) -> TLMorphism:
    """E = S∘S* in (y², y²)."""
    return compose(cup(backend), cap(backend))


def compose(f: TLMorphism, g: TLMorphism) -> TLMorphism:
    """f∘g: apply g first."""
    f._check(g)
    if f.source != g.target:
        raise MorphismError(f"object mismatch: ({g.source},{g.target}) then ({f.source},{f.target})")
    bk = f.backend
    terms: dict = {}
    loop_powers: dict = {}
    for df, cf in f.terms.items():
        for dgm, cg in g.terms.items():
            diag, loops = dg.compose(df, dgm)
            if loops not in loop_powers:
                loop_powers[loops] = bk.power(bk.d, loops)
            c = cf * cg * loop_powers[loops]
            terms[diag] = terms[diag] + c if diag in terms else c
    return TLMorphism(g.source, f.target, terms, bk)


def tensor(f: TLMorphism, g: TLMorphism) -> TLMorphism:
    f._check(g)
    terms: dict = {}
    for df, cf in f.terms.items():
        for dgm, cg in g.terms.items():
            diag = dg.tensor(df, dgm)
            c = cf * cg
            terms[diag] = terms[diag] + c if diag in terms else c
    return TLMorphism(f.source + g.source, f.target + g.target, terms, f.backend)


def adjoint(f: TLMorphism) -> TLMorphism:
    bk = f.backend
    return TLMorphism(f.target, f.source,
                      {dg.adjoint(d): bk.conj(c) for d, c in f.terms.items()}, bk)


def scalar_value(f: TLMorphism):
    """The number c when f = c·1_ι."""
    if (f.source, f.target) != (0, 0):
        raise MorphismError("not an arrow (ι, ι)")
    return f.coefficient(dg.identity(0))


def left_inverse(f: TLMorphism, side: str = "left") -> TLMorphism:
    """Close the leftmost (or, with side='right', the rightmost) strand of f.

    For f in (y^n, y^m) the result lies in (y^(n-1), y^(m-1)).
    """
    if f.source < 1 or f.target < 1:
        raise MorphismError("left inverse needs at least one strand on each side")
    bk = f.backend
    if side == "left":
        bottom = tensor(cup(bk), identity(f.source - 1, bk))
        middle = tensor(identity(1, bk), f)
        top = tensor(cap(bk), identity(f.target - 1, bk))
    elif side == "right":
        bottom = tensor(identity(f.source - 1, bk), cup(bk))
        middle = tensor(f, identity(1, bk))
        top = tensor(identity(f.target - 1, bk), cap(bk))
    else:
        raise ValueError("side must be 'left' or 'right'")
    return compose(top, compose(middle, bottom))


def markov_trace(f: TLMorphism, side: str = "left"):
    """Tr(f) by iterating the one-sided inverse down to (ι, ι)."""
    if f.source != f.target:
        raise MorphismError("trace needs an endomorphism")
    while f.source:
        f = left_inverse(f, side)
    return scalar_value(f)


def closure_trace(f: TLMorphism):
    """Tr(f) computed directly from loop counts of the closed diagrams."""
    if f.source != f.target:
        raise MorphismError("trace needs an endomorphism")
    bk = f.backend
    total = bk.zero
    for d, c in f.terms.items():
        total = total + c * bk.power(bk.d, dg.closure_loops(d))
    return total


def basis(source: int, target: int, backend: Backend) -> list:
    return [TLMorphism.from_diagram(d, backend) for d in dg.basis(source, target)]


def to_json(f: TLMorphism) -> dict:
    bk = f.backend
    return {
        "source": f.source,
        "target": f.target,
        "variant": f.variant,
        "backend": bk.descriptor(),
        "terms": [{"pairs": [list(p) for p in d.pairs], "coeff": bk.to_json(c)}
                  for d, c in sorted(f.terms.items())],
    }


def from_json(obj: dict, backend: Backend) -> TLMorphism:
    s, t = obj["source"], obj["target"]
    terms = {}
    for term in obj["terms"]:
        d = TLDiagram(s, t, tuple(tuple(p) for p in term["pairs"]))
        terms[d] = backend.from_json(term["coeff"])
    return TLMorphism(s, t, terms, backend, obj.get("variant", 1))
