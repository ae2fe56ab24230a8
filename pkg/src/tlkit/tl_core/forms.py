"""Jones-Wenzl idempotents, trace forms, dimensions and negligible arrows."""
from __future__ import annotations

from . import diagram as dg
from .linalg import rank
from .morphism import (
    TLMorphism, MorphismError, adjoint, cap, closure_trace, compose, cup, cupcap, identity,
    tensor,
)
from .scalars import Backend


class RootOfUnityObstruction(ArithmeticError):
    """A quantum integer needed as a divisor vanishes at this loop value."""


def quantum_integers(r: int, backend: Backend) -> list:
    """[0], [1], ..., [r] with [0]=0, [1]=1, [k+1] = d[k] - [k-1]."""
    q = [backend.zero, backend.one]
    while len(q) <= r:
        q.append(backend.d * q[-1] - q[-2])
    return q[: r + 1]


def jones_wenzl(r: int, backend: Backend, check: bool = False) -> TLMorphism:
    """p_r built by p_{n+1} = p_n⊗1 - ([n]/[n+1]) (p_n⊗1)(1⊗E)(p_n⊗1)."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    qi = quantum_integers(r + 1, backend)
    p = identity(min(r, 1), backend)
    for n in range(1, r):
        if backend.is_zero(qi[n + 1]):
            raise RootOfUnityObstruction(f"[{n + 1}] vanishes; p_{n + 1} does not exist")
        lift = tensor(p, identity(1, backend))
        e = tensor(identity(n - 1, backend), cupcap(backend))
        p = lift - compose(lift, compose(e, lift)).scale(qi[n] / qi[n + 1])
    if check:
        if compose(p, p) != p:
            raise ArithmeticError(f"p_{r} failed the idempotence check")
        if adjoint(p) != p:
            raise ArithmeticError(f"p_{r} failed the self-adjointness check")
    return p


def gram_matrix(n: int, backend: Backend) -> list:
    """G_ij = D_i*∘D_j on the diagram basis of (ι, y^n)."""
    diags = dg.basis(0, n)
    out = []
    for di in diags:
        dstar = dg.adjoint(di)
        out.append([backend.power(backend.d, dg.compose(dstar, dj)[1]) for dj in diags])
    return out


def trace_form(source: int, target: int, backend: Backend) -> list:
    """Tr(D_i*∘D_j) on the diagram basis of (y^source, y^target)."""
    diags = dg.basis(source, target)
    out = []
    for di in diags:
        dstar = dg.adjoint(di)
        row = []
        for dj in diags:
            comp, loops = dg.compose(dstar, dj)
            row.append(backend.power(backend.d, loops + dg.closure_loops(comp)))
        out.append(row)
    return out


def hom_dim(m: int, n: int, mode: str = "generic", backend: Backend | None = None) -> int:
    """Dimension of (y^m, y^n); 'specialized' gives the dimension modulo negligibles."""
    if mode == "generic":
        return len(dg.basis(m, n))
    if mode != "specialized":
        raise ValueError("mode must be 'generic' or 'specialized'")
    if backend is None:
        raise ValueError("specialized dimensions need a backend")
    backend.require_exact("specialized dimension")
    if (m + n) % 2:
        return 0
    return rank(trace_form(m, n, backend), backend)


def is_negligible(f: TLMorphism) -> bool:
    bk = f.backend
    bk.require_exact("negligibility")
    for d in dg.basis(f.source, f.target):
        probe = TLMorphism.from_diagram(dg.adjoint(d), bk)
        if not bk.is_zero(closure_trace(compose(probe, f))):
            return False
    return True


def annihilates_cups(p: TLMorphism) -> bool:
    """True when p gives zero against a cup or cap placed at any strand position."""
    if p.source != p.target:
        raise MorphismError("needs an endomorphism")
    n, bk = p.source, p.backend
    for i in range(n - 1):
        c = tensor(tensor(identity(i, bk), cup(bk)), identity(n - 2 - i, bk))
        k = tensor(tensor(identity(i, bk), cap(bk)), identity(n - 2 - i, bk))
        if not compose(p, c).is_zero() or not compose(k, p).is_zero():
            return False
    return True
