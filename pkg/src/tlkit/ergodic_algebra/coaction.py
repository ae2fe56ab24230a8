"""The coaction α: A(μ,τ) -> A(μ,τ) ⊗ A(τ,τ), M⊗T ↦ Σ_σ (M⊗e_σ) ⊗ (e_σ*⊗T).

Both algebras must share one class table so that the coefficient algebra
A(τ,τ) and its comultiplication Δ = α_{τ,τ} are taken over the same classes.
Elements of the tensor product are matrices P[p, q] over the ambient bases.
"""
from __future__ import annotations

import numpy as np

from .algebra import AlgebraError, TruncatedAlgebra


class Coaction:
    def __init__(self, source: TruncatedAlgebra, coeffs: TruncatedAlgebra | None = None):
        if coeffs is None:
            coeffs = TruncatedAlgebra(source.tau, source.tau, source.N, table=source.table, tol=source.tol)
        if coeffs.table is not source.table:
            raise AlgebraError("source and coefficient algebras must share one class table")
        if coeffs.mu is not source.tau or coeffs.tau is not source.tau:
            raise AlgebraError("coefficient algebra must be built on (τ, τ)")
        self.a1, self.a2 = source, coeffs

    def apply_at_word(self, w: str, x: np.ndarray) -> np.ndarray:
        a1, a2 = self.a1, self.a2
        dm, dt = a1.mu.dim(w), a1.tau.dim(w)
        l1 = a1.reducer(w).reshape(a1.ambient_dim, dm, dt)
        l2 = a2.reducer(w).reshape(a2.ambient_dim, dt, dt)
        return np.einsum("pai,ab,qib->pq", l1, x, l2)

    def apply(self, a: np.ndarray) -> np.ndarray:
        out = np.zeros((self.a1.ambient_dim, self.a2.ambient_dim), dtype=complex)
        for w, x in self.a1.representative(a).items():
            out += self.apply_at_word(w, x)
        return out

    def images(self, indices) -> dict:
        return {i: self.apply(self.a1.basis_vector(i)) for i in indices}


def _products(alg: TruncatedAlgebra, rows) -> np.ndarray:
    """C[i, j, :] = e_rows[i] e_rows[j] for basis pairs inside the truncation."""
    out = np.zeros((len(rows), len(rows), alg.ambient_dim), dtype=complex)
    for i, a in enumerate(rows):
        for j, c in enumerate(rows):
            out[i, j] = alg.multiply(alg.basis_vector(a), alg.basis_vector(c))
    return out


def coaction_report(alpha: Coaction, tol: float = 1e-8) -> dict:
    """Residuals of the coaction identities over the exposed basis."""
    a1, a2 = alpha.a1, alpha.a2
    idx1, idx2 = list(a1.exposed), list(a2.exposed)
    # zero out rounding noise so the support scans below stay sparse
    imgs = {i: np.where(np.abs(m) < 1e-14, 0, m) for i, m in alpha.images(idx1).items()}
    res = {}

    # α(e_i) is supported on exposed × exposed, so products stay inside the truncation
    c1, c2 = _products(a1, idx1), _products(a2, idx2)
    restricted = {i: imgs[i][np.ix_(idx1, idx2)] for i in idx1}
    worst = 0.0
    for a, i in enumerate(idx1):
        for b, j in enumerate(idx1):
            lhs = alpha.apply(c1[a, b])
            rhs = np.einsum("ab,ce,acp,beq->pq", restricted[i], restricted[j], c1, c2, optimize=True)
            worst = max(worst, float(np.abs(lhs - rhs).max()))
    res["multiplicativity"] = worst

    s1 = a1.star_matrix()
    s2 = a2.star_matrix()
    worst = 0.0
    for i in idx1:
        lhs = alpha.apply(a1.star(a1.basis_vector(i)))
        rhs = s1 @ np.conj(imgs[i]) @ s2.T
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    res["star_compatibility"] = worst

    h1 = np.array([a1.haar(a1.basis_vector(p)) for p in range(a1.ambient_dim)])
    unit2 = a2.unit()
    worst = 0.0
    for i in idx1:
        lhs = h1 @ imgs[i]
        worst = max(worst, float(np.abs(lhs - a1.haar(a1.basis_vector(i)) * unit2).max()))
    res["invariance"] = worst

    delta = Coaction(a2, a2)
    d_imgs = delta.images(range(a2.ambient_dim))
    worst = 0.0
    for i in idx1:
        p = imgs[i]
        lhs = np.zeros((a1.ambient_dim, a2.ambient_dim, a2.ambient_dim), dtype=complex)
        rhs = np.zeros_like(lhs)
        for pp in np.nonzero(np.abs(p).sum(axis=1))[0]:
            inner = alpha.apply(a1.basis_vector(pp))
            lhs += np.einsum("r,pq->pqr", p[pp], inner)
        for qq in np.nonzero(np.abs(p).sum(axis=0))[0]:
            rhs += np.einsum("p,qr->pqr", p[:, qq], d_imgs[qq])
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    res["coassociativity"] = worst

    res["unit"] = float(np.abs(alpha.apply(a1.unit()) - np.outer(a1.unit(), unit2)).max())

    res["fixed_point_dimension"] = fixed_point_dimension(alpha, imgs)
    res.update(fundamental_identities(a2))
    gated = ("multiplicativity", "star_compatibility", "invariance", "coassociativity", "unit",
             "unitarity", "r_invariance")
    res["pass"] = all(res[k] <= tol for k in gated) and res["fixed_point_dimension"] == 1
    return res


def fixed_point_dimension(alpha: Coaction, imgs: dict | None = None, tol: float = 1e-9) -> int:
    """Nullity of a ↦ α(a) - a⊗1 on the exposed basis."""
    a1, a2 = alpha.a1, alpha.a2
    idx = a1.exposed
    imgs = imgs or alpha.images(idx)
    unit2 = a2.unit()
    cols = [(imgs[i] - np.outer(a1.basis_vector(i), unit2)).reshape(-1) for i in idx]
    if not cols:
        return 0
    m = np.column_stack(cols)
    s = np.linalg.svd(m, compute_uv=False)
    return int(len(idx) - np.sum(s > tol * max(1.0, s.max(initial=0))))


def fundamental_coefficients(a2: TruncatedAlgebra, w: str) -> list:
    """u[i][j] = the class of e_i e_jᵀ at w in A(τ,τ)."""
    d = a2.tau.dim(w)
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            x = np.zeros((d, d), dtype=complex)
            x[i, j] = 1
            row.append(a2.reduce(w, x))
        out.append(row)
    return out


def fundamental_identities(a2: TruncatedAlgebra) -> dict:
    """Σ_k u_ki* u_kj = δ_ij = Σ_k u_ik u_jk*, and Σ R_kl u^ū_ik u^u_jl = R_ij for every fundamental word."""
    cat = a2.category
    letters = [w for w in cat.words(1) if len(w) == 1]
    unit = a2.unit()
    uni = rinv = 0.0
    for w in letters:
        u = fundamental_coefficients(a2, w)
        d = len(u)
        stars = [[a2.star(u[i][j]) for j in range(d)] for i in range(d)]
        for i in range(d):
            for j in range(d):
                s1 = sum(a2.multiply(stars[k][i], u[k][j]) for k in range(d))
                s2 = sum(a2.multiply(u[i][k], stars[j][k]) for k in range(d))
                target = unit if i == j else 0 * unit
                uni = max(uni, float(np.abs(s1 - target).max()), float(np.abs(s2 - target).max()))
        wb = cat.conj(w)
        ub = fundamental_coefficients(a2, wb)
        r, rb = cat.solution(w)
        for sol, left, right in ((r, ub, u), (rb, u, ub)):
            rm = a2.tau.vector(sol).reshape(len(left), len(right))
            for i in range(len(left)):
                for j in range(len(right)):
                    total = sum(rm[k, l] * a2.multiply(left[i][k], right[j][l])
                                for k in range(len(left)) for l in range(len(right)))
                    rinv = max(rinv, float(np.abs(total - rm[i, j] * unit).max()))
    return {"unitarity": uni, "r_invariance": rinv}
