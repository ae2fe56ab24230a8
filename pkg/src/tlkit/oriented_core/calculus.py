"""Trace, conjugation, equality and dimensions for oriented morphisms."""
from __future__ import annotations

from functools import lru_cache

from ..tl_core import diagram as dg
from ..tl_core.linalg import rank
from ..tl_core.scalars import Backend
from . import morphism as om
from .morphism import OrientedMorphism, OrientationError, conjugate_word


def left_inverse(f: OrientedMorphism) -> OrientedMorphism:
    """Close the first strand with R (letter x) or R̄ (letter X)."""
    if not f.source or not f.target:
        raise OrientationError("left inverse needs a strand on both sides")
    if f.source[0] != f.target[0]:
        raise OrientationError("first letters of source and target differ")
    bk = f.backend
    letter = f.source[0]
    gen = om.R(bk) if letter == "x" else om.Rbar(bk)
    bar = letter.swapcase()
    q, p = f.source[1:], f.target[1:]
    bottom = om.tensor(gen, om.identity(q, bk))
    middle = om.tensor(om.identity(bar, bk), f)
    top = om.tensor(om.adjoint(gen), om.identity(p, bk))
    return om.compose(top, om.compose(middle, bottom))


def right_inverse(f: OrientedMorphism) -> OrientedMorphism:
    """Close the last strand: R̄ for a trailing x, R for a trailing X."""
    if not f.source or not f.target or f.source[-1] != f.target[-1]:
        raise OrientationError("right inverse needs matching last letters")
    bk = f.backend
    letter = f.source[-1]
    gen = om.Rbar(bk) if letter == "x" else om.R(bk)
    q, p = f.source[:-1], f.target[:-1]
    bottom = om.tensor(om.identity(q, bk), gen)
    middle = om.tensor(f, om.identity(letter.swapcase(), bk))
    top = om.tensor(om.identity(p, bk), om.adjoint(gen))
    return om.compose(top, om.compose(middle, bottom))


def trace(f: OrientedMorphism, side: str = "left"):
    if f.source != f.target:
        raise OrientationError("trace needs an endomorphism")
    step = left_inverse if side == "left" else right_inverse
    while f.source:
        f = step(f)
    return f.coefficient(dg.identity(0))


def equals(f: OrientedMorphism, g: OrientedMorphism) -> bool:
    """Equality decided through the faithful forgetful functor plus word typing."""
    f.backend.require_exact("equality")
    if (f.source, f.target) != (g.source, g.target):
        return False
    return om.forget(f - g).is_zero()


def hom_dim(w1: str, w2: str, mode: str = "generic", backend: Backend | None = None) -> int:
    """Dimension of (w1, w2); 'specialized' is the rank of the trace form."""
    diags = om.oriented_basis(w1, w2)
    if mode == "generic":
        return len(diags)
    if mode != "specialized":
        raise ValueError("mode must be 'generic' or 'specialized'")
    if backend is None:
        raise ValueError("specialized dimensions need a backend")
    backend.require_exact("specialized dimension")
    return rank(trace_form(w1, w2, backend), backend)


def trace_form(w1: str, w2: str, backend: Backend) -> list:
    elems = om.basis(w1, w2, backend)
    return [[trace(om.compose(om.adjoint(a), b)) for b in elems] for a in elems]


def is_negligible(f: OrientedMorphism) -> bool:
    bk = f.backend
    bk.require_exact("negligibility")
    for probe in om.basis(f.source, f.target, bk):
        if not bk.is_zero(trace(om.compose(om.adjoint(probe), f))):
            return False
    return True


@lru_cache(maxsize=None)
def _solutions(w: str, backend: Backend):
    """Homomorphic pair (R_w, R̄_w) with R_x = R, R_X = R̄ extended to products."""
    bk = backend
    if w == "":
        e = om.identity("", bk)
        return e, e
    if len(w) == 1:
        r, rb = om.R(bk), om.Rbar(bk)
        return (r, rb) if w == "x" else (rb, r)
    u, v = w[:-1], w[-1]
    ru, rbu = _solutions(u, bk)
    rv, rbv = _solutions(v, bk)
    ub, vb = conjugate_word(u), conjugate_word(v)
    r = om.compose(om.tensor(om.tensor(om.identity(vb, bk), ru), om.identity(v, bk)), rv)
    rb = om.compose(om.tensor(om.tensor(om.identity(u, bk), rbv), om.identity(ub, bk)), rbu)
    return r, rb


def solution(w: str, backend: Backend):
    """(R_w, R̄_w) with R_w in (ι, w̄w) and R̄_w in (ι, w w̄)."""
    return _solutions(om.check_word(w), backend)


def bullet(a: OrientedMorphism) -> OrientedMorphism:
    """A• in (v̄, ū) for A in (v, u):  R_v*⊗1 ∘ 1⊗A*⊗1 ∘ 1⊗R̄_u."""
    bk = a.backend
    v, u = a.source, a.target
    vb, ub = conjugate_word(v), conjugate_word(u)
    rv, _ = solution(v, bk)
    _, rbu = solution(u, bk)
    step1 = om.tensor(om.identity(vb, bk), rbu)
    step2 = om.tensor(om.tensor(om.identity(vb, bk), om.adjoint(a)), om.identity(ub, bk))
    step3 = om.tensor(om.adjoint(rv), om.identity(ub, bk))
    return om.compose(step3, om.compose(step2, step1))
