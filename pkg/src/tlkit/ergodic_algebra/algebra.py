"""The truncated algebra Σ_u (μ_u, ι) ⊗_A (ι, τ_u) in reduced coordinates.

An element at word u is a matrix X of shape (dim μ_u, dim τ_u):  M⊗T with M a
functional (coefficient vector m) and T a vector t is X = m tᵀ.  The balancing
relation reads μ(A)ᵀ Y ~ Y τ(A)ᵀ for A in (u, v).  Reduced basis vectors
(k, α, β) are X = conj(b^μ_α) (b^τ_β)ᵀ at the class word u_k, where the b are
orthonormal bases of the ranges of μ(E_k) and τ(E_k).

Classes with |u_k| <= 2N span the ambient space; those with |u_k| <= N are
the exposed basis.  Products are defined when the word lengths add up to at
most 2N.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..hilbert_embed.category import SourceCategory, category_for
from ..hilbert_embed.embedding import build_embedding
from ..hilbert_embed.functors import DiagrammaticFunctor, Functor, QComposite, TensorFunctor
from ..hilbert_embed.spec import EmbeddingSpec
from .classes import ClassTable, decompose_classes


class AlgebraError(Exception):
    pass


class TruncationOverflow(AlgebraError):
    pass


class MixedClassError(AlgebraError):
    pass


# functor specifications

REALIZATIONS = ("embedding", "diagrammatic-identity", "q-composite")


def _spec_category(fs: dict):
    real = fs.get("realization")
    if real == "embedding":
        spec = EmbeddingSpec.from_json(fs["spec"])
        return spec.category, spec.d
    if real == "q-composite":
        return _spec_category(fs["inner"])
    if real == "diagrammatic-identity":
        return None, None
    raise AlgebraError(f"unknown realization {real!r}; expected one of {REALIZATIONS}")


def resolve_category(mu: dict, tau: dict, category: str | None = None, d: float | None = None):
    found = {_spec_category(mu), _spec_category(tau)} - {(None, None)}
    if len(found) > 1:
        raise AlgebraError(f"functors disagree on the source category or d: {sorted(found)}")
    if found:
        cat_kind, dval = found.pop()
        if category is not None and category != cat_kind:
            raise AlgebraError(f"category {category!r} does not match the embedding ({cat_kind!r})")
        if d is not None and abs(float(d) - dval) > 1e-9 * max(1, dval):
            raise AlgebraError(f"d={d} does not match the embedding (d={dval})")
        return category_for(cat_kind, dval)
    if category is None or d is None:
        raise AlgebraError("purely diagrammatic functors need explicit 'category' and 'd'")
    return category_for(category, float(d))


def build_functor(fs: dict, cat: SourceCategory) -> Functor:
    real = fs.get("realization")
    if real == "embedding":
        spec = EmbeddingSpec.from_json(fs["spec"])
        if spec.kind == "pseudoreal":
            raise AlgebraError("pseudoreal embeddings are not available as functors")
        u = fs.get("unitary")
        unitary = None if u is None else np.array([[complex(*z) if isinstance(z, list) else z for z in row]
                                                   for row in u])
        return TensorFunctor(build_embedding(spec, unitary), cat)
    if real == "diagrammatic-identity":
        return DiagrammaticFunctor(cat)
    if real == "q-composite":
        return QComposite(build_functor(fs["inner"], cat))
    raise AlgebraError(f"unknown realization {real!r}; expected one of {REALIZATIONS}")


def _range_basis(p: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis of the range of a (numerically) self-adjoint projection."""
    if p.size == 0:
        return np.zeros((p.shape[0], 0), dtype=complex)
    h = (p + p.conj().T) / 2
    evals, vecs = np.linalg.eigh(h)
    keep = evals > 0.5
    bad = (evals > tol) & (evals < 1 - tol)
    if bad.any():
        raise AlgebraError(f"functor image of a minimal projection is not a projection (eigenvalues {evals[bad]})")
    return vecs[:, keep]


@dataclass
class AlgebraElement:
    algebra: "TruncatedAlgebra"
    coeffs: np.ndarray

    def __add__(self, other):
        return AlgebraElement(self.algebra, self.coeffs + other.coeffs)

    def __sub__(self, other):
        return AlgebraElement(self.algebra, self.coeffs - other.coeffs)

    def __rmul__(self, c):
        return AlgebraElement(self.algebra, c * self.coeffs)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return AlgebraElement(self.algebra, self.algebra.multiply(self.coeffs, other.coeffs))
        return AlgebraElement(self.algebra, self.coeffs * other)

    def star(self):
        return AlgebraElement(self.algebra, self.algebra.star(self.coeffs))

    def haar(self) -> complex:
        return self.algebra.haar(self.coeffs)


class TruncatedAlgebra:
    def __init__(self, mu: Functor, tau: Functor, N: int, table: ClassTable | None = None,
                 tol: float = 1e-9):
        if mu.category is not tau.category:
            raise AlgebraError("μ and τ must share one source category")
        self.mu, self.tau, self.N, self.tol = mu, tau, N, tol
        self.category = mu.category
        self.table = table if table is not None else decompose_classes(self.category, N)
        if self.table.N != N:
            raise AlgebraError("class table was built for a different truncation")
        self.bmu, self.btau = [], []
        for c in self.table.classes:
            self.bmu.append(_range_basis(mu.apply(c.projection), 1e-6))
            self.btau.append(_range_basis(tau.apply(c.projection), 1e-6))
        self.m = [b.shape[1] for b in self.bmu]
        self.t = [b.shape[1] for b in self.btau]
        self.offsets = np.cumsum([0] + [a * b for a, b in zip(self.m, self.t)]).tolist()
        self.ambient_dim = self.offsets[-1]
        self.basis = [(k, a, b) for k in range(len(self.m)) for a in range(self.m[k]) for b in range(self.t[k])]
        self.exposed = [i for i, (k, _, _) in enumerate(self.basis)
                        if len(self.table.classes[k].word) <= N]
        self._reducers: dict = {}
        self._vcache: dict = {}

    # bookkeeping
    @property
    def dimension(self) -> int:
        """Σ m_k t_k over the exposed classes."""
        return len(self.exposed)

    def class_word(self, k: int) -> str:
        return self.table.classes[k].word

    def block(self, vec: np.ndarray, k: int) -> np.ndarray:
        a, b = self.offsets[k], self.offsets[k + 1]
        return vec[a:b].reshape(self.m[k], self.t[k])

    def zero(self) -> np.ndarray:
        return np.zeros(self.ambient_dim, dtype=complex)

    def unit(self) -> np.ndarray:
        out = self.zero()
        k0 = self.table.class_of_word("")
        out[self.offsets[k0]] = 1.0
        return out

    def basis_vector(self, i: int) -> np.ndarray:
        out = self.zero()
        out[i] = 1.0
        return out

    def element(self, vec) -> AlgebraElement:
        return AlgebraElement(self, np.asarray(vec, dtype=complex))

    def representative(self, vec: np.ndarray) -> dict:
        """word -> matrix X at that word, one term per class with nonzero block."""
        out = {}
        for k in range(len(self.m)):
            blk = self.block(vec, k)
            if blk.size and np.abs(blk).max() > 0:
                x = np.conj(self.bmu[k]) @ blk @ self.btau[k].T
                w = self.class_word(k)
                out[w] = out.get(w, 0) + x
        return out

    # reduction
    def _isometry_images(self, w: str, isometries=None):
        if isometries is None and w in self._vcache:
            return self._vcache[w]
        items = isometries if isometries is not None else self.table.isometries[w]
        out = []
        for k, wi in items:
            out.append((k, self.mu.apply(wi) @ self.bmu[k], self.tau.apply(wi) @ self.btau[k]))
        if isometries is None:
            self._vcache[w] = out
        return out

    def reduce(self, w: str, x: np.ndarray, isometries=None) -> np.ndarray:
        """Coordinates of the element represented by X at word w."""
        if len(w) > 2 * self.N:
            raise TruncationOverflow(f"word {w!r} exceeds the ambient truncation 2N={2 * self.N}")
        out = self.zero()
        for k, vmu, vtau in self._isometry_images(w, isometries):
            a, b = self.offsets[k], self.offsets[k + 1]
            out[a:b] += (vmu.T @ x @ np.conj(vtau)).reshape(-1)
        return out

    def reducer(self, w: str) -> np.ndarray:
        """The reduction at w as a matrix acting on X flattened row-major."""
        if w not in self._reducers:
            dm, dt = self.mu.dim(w), self.tau.dim(w)
            mat = np.zeros((self.ambient_dim, dm * dt), dtype=complex)
            for k, vmu, vtau in self._isometry_images(w):
                a = self.offsets[k]
                blk = np.einsum("ar,cs->rsac", vmu, np.conj(vtau)).reshape(self.m[k] * self.t[k], dm * dt)
                mat[a:a + blk.shape[0]] += blk
            self._reducers[w] = mat
        return self._reducers[w]

    # operations
    def _support(self, vec: np.ndarray) -> list:
        return [k for k in range(len(self.m)) if self.m[k] * self.t[k]
                and np.abs(self.block(vec, k)).max() > 0]

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = self.zero()
        ra, rb = self.representative(a), self.representative(b)
        for u, x in ra.items():
            for v, y in rb.items():
                if len(u) + len(v) > 2 * self.N:
                    raise TruncationOverflow(
                        f"product of words {u!r}, {v!r} exceeds the ambient truncation 2N={2 * self.N}")
                z = np.conj(self.mu.glue(u, v)) @ np.kron(x, y) @ self.tau.glue(u, v).T
                out += self.reduce(u + v, z)
        return out

    def star(self, a: np.ndarray, solutions=None) -> np.ndarray:
        """(M⊗T)* = M•⊗T•, i.e. X -> conj(R̂_u) conj(X) R̄̃_u at ū."""
        out = self.zero()
        cat = self.category
        for u, x in self.representative(a).items():
            rhat = self.mu.rhat(u, solutions)
            rbt = self.tau.rbarhat(u, solutions)
            out += self.reduce(cat.conj(u), np.conj(rhat) @ np.conj(x) @ rbt)
        return out

    def star_matrix(self, indices=None, solutions=None) -> np.ndarray:
        """Columns star(e_i); star(a) = S conj(a)."""
        idx = range(self.ambient_dim) if indices is None else indices
        return np.column_stack([self.star(self.basis_vector(i), solutions) for i in idx])

    def haar_at_word(self, w: str, x: np.ndarray) -> complex:
        """Σ_i μ(V_i)ᵀ X conj(τ(V_i)) over an orthonormal basis V_i of (ι, w)."""
        k0 = self.table.class_of_word("")
        total = 0j
        for k, vmu, vtau in self._isometry_images(w):
            if k == k0:
                total += complex((vmu.T @ x @ np.conj(vtau)).sum())
        return total

    def haar(self, a: np.ndarray) -> complex:
        return sum((self.haar_at_word(u, x) for u, x in self.representative(a).items()), 0j)

    def omega(self, k: int, t_vec: np.ndarray, m_vec: np.ndarray, a: np.ndarray | None = None,
              word: str | None = None, x: np.ndarray | None = None, isometries=None) -> complex:
        """ω_{T,M} for T in the range of τ(E_k) and M in the range of μ(E_k).

        Evaluate either on coordinates ``a`` or on a matrix ``x`` at ``word``
        (optionally with an alternative family of partial isometries).
        """
        cls = self.table.classes[k]
        pm, pt = self.mu.apply(cls.projection), self.tau.apply(cls.projection)
        m_vec = np.asarray(m_vec, dtype=complex)
        t_vec = np.asarray(t_vec, dtype=complex)
        scale = max(1.0, np.linalg.norm(m_vec), np.linalg.norm(t_vec))
        if np.linalg.norm(pm @ m_vec - m_vec) > 1e-8 * scale or np.linalg.norm(pt @ t_vec - t_vec) > 1e-8 * scale:
            raise MixedClassError(f"M and T must lie in the ranges of μ(E_{k}) and τ(E_{k})")
        terms = [(word, x)] if a is None else list(self.representative(a).items())
        total = 0j
        for w, xm in terms:
            items = isometries if (isometries is not None and a is None) else self.table.isometries[w]
            for kk, wi in items:
                if kk != k:
                    continue
                left = self.mu.apply(wi) @ m_vec
                right = self.tau.apply(wi) @ t_vec
                total += complex(left @ xm @ np.conj(right))
        return total

    def structure_constants(self, indices=None) -> dict:
        """Sparse triplets (i, j, k) -> value for products of basis vectors."""
        idx = self.exposed if indices is None else list(indices)
        out = {}
        for i in idx:
            for j in idx:
                prod = self.multiply(self.basis_vector(i), self.basis_vector(j))
                for k in np.nonzero(np.abs(prod) > 1e-13)[0]:
                    out[(i, j, int(k))] = complex(prod[k])
        return out

    def structure_tensor(self) -> tuple:
        """Dense tensor C[i, j, :] with a mask of the products inside the truncation."""
        n = self.ambient_dim
        c = np.zeros((n, n, n), dtype=complex)
        mask = np.zeros((n, n), dtype=bool)
        lengths = [len(self.class_word(k)) for k, _, _ in self.basis]
        for i in range(n):
            for j in range(n):
                if lengths[i] + lengths[j] <= 2 * self.N:
                    c[i, j] = self.multiply(self.basis_vector(i), self.basis_vector(j))
                    mask[i, j] = True
        return c, mask

    # checks
    def positivity_report(self, tol: float = 1e-9) -> dict:
        idx = self.exposed
        stars = {i: self.star(self.basis_vector(i)) for i in idx}
        g = np.array([[self.haar(self.multiply(stars[i], self.basis_vector(j))) for j in idx] for i in idx])
        herm = float(np.abs(g - g.conj().T).max()) if g.size else 0.0
        evals = np.linalg.eigvalsh((g + g.conj().T) / 2) if g.size else np.zeros(0)
        rank = int(np.sum(evals > tol * max(1.0, float(abs(evals).max(initial=0)))))
        return {
            "dimension": len(idx),
            "hermitian_residual": herm,
            "min_eigenvalue": float(evals.min(initial=np.inf)) if evals.size else 0.0,
            "max_eigenvalue": float(evals.max(initial=-np.inf)) if evals.size else 0.0,
            "rank": rank,
            "pass": bool((evals.size == 0 or evals.min() >= -tol) and rank == len(idx)),
            "spectrum": [float(x) for x in evals],
        }

    def quotient_residual(self, rng: np.random.Generator, samples: int = 20) -> float:
        """max | red(μ(A)ᵀ Y at u) - red(Y τ(A)ᵀ at v) | for random A in (u,v), Y."""
        cat = self.category
        words = cat.words(2 * self.N)
        worst = 0.0
        tries = 0
        while samples > 0 and tries < 50 * max(1, samples):
            tries += 1
            u = words[rng.integers(len(words))]
            v = words[rng.integers(len(words))]
            b = cat.basis(u, v)
            if not b:
                continue
            coeffs = rng.normal(size=len(b)) + 1j * rng.normal(size=len(b))
            a = cat.combination(b, coeffs)
            y = rng.normal(size=(self.mu.dim(v), self.tau.dim(u))) + 1j * rng.normal(
                size=(self.mu.dim(v), self.tau.dim(u)))
            lhs = self.reduce(u, self.mu.apply(a).T @ y)
            rhs = self.reduce(v, y @ self.tau.apply(a).T)
            worst = max(worst, float(np.abs(lhs - rhs).max(initial=0.0)))
            samples -= 1
        return worst


def build_algebra(mu_spec: dict, tau_spec: dict, N: int, category: str | None = None,
                  d: float | None = None, tol: float = 1e-9) -> TruncatedAlgebra:
    cat = resolve_category(mu_spec, tau_spec, category, d)
    mu = build_functor(mu_spec, cat)
    tau = mu if tau_spec == mu_spec else build_functor(tau_spec, cat)
    return TruncatedAlgebra(mu, tau, N, tol=tol)


def algebra_from_json(obj: dict) -> TruncatedAlgebra:
    return build_algebra(obj["mu"], obj["tau"], int(obj["N"]), obj.get("category"), obj.get("d"),
                         float(obj.get("tol", 1e-9)))


# property checks beyond the *-algebra axioms

def omega_evaluation_matrix(alg: TruncatedAlgebra) -> np.ndarray:
    """Rows: ω_{T,M} for basis pairs of each exposed class; columns: exposed basis vectors."""
    rows = []
    for i in alg.exposed:
        k, a, b = alg.basis[i]
        m_vec, t_vec = alg.bmu[k][:, a], alg.btau[k][:, b]
        rows.append([alg.omega(k, t_vec, m_vec, alg.basis_vector(j)) for j in alg.exposed])
    return np.array(rows, dtype=complex).reshape(len(alg.exposed), len(alg.exposed))


def omega_choice_residual(alg: TruncatedAlgebra, rng: np.random.Generator) -> float:
    """|ω with the stored isometries - ω with unitarily mixed ones| at every word carrying repeats."""
    cat = alg.category
    worst = 0.0
    for w in alg.table.words():
        items = alg.table.isometries[w]
        for k in {kk for kk, _ in items}:
            same = [wi for kk, wi in items if kk == k]
            if len(same) < 2 or alg.m[k] * alg.t[k] == 0:
                continue
            z = rng.normal(size=(len(same), len(same))) + 1j * rng.normal(size=(len(same), len(same)))
            q, _ = np.linalg.qr(z)
            mixed = [(k, cat.combination(same, q[:, j])) for j in range(len(same))]
            mixed += [(kk, wi) for kk, wi in items if kk != k]
            x = rng.normal(size=(alg.mu.dim(w), alg.tau.dim(w))) + 1j * rng.normal(size=(alg.mu.dim(w), alg.tau.dim(w)))
            m_vec = alg.bmu[k] @ rng.normal(size=alg.m[k])
            t_vec = alg.btau[k] @ rng.normal(size=alg.t[k])
            v1 = alg.omega(k, t_vec, m_vec, word=w, x=x)
            v2 = alg.omega(k, t_vec, m_vec, word=w, x=x, isometries=mixed)
            worst = max(worst, abs(v1 - v2))
            # the reduced coordinates themselves do not depend on the mixing either
            worst = max(worst, float(np.abs(alg.reduce(w, x) - alg.reduce(w, x, isometries=mixed)).max()))
    return worst


def j_involution(alg: TruncatedAlgebra, a: np.ndarray) -> np.ndarray:
    """j(L⊗M) = M*⊗L*, i.e. X ↦ X† at the same word; needs μ = τ."""
    if alg.mu is not alg.tau:
        raise AlgebraError("j is only defined when μ and τ coincide")
    out = alg.zero()
    for u, x in alg.representative(a).items():
        out += alg.reduce(u, x.conj().T)
    return out


def twisted_solutions(cat: SourceCategory, words, rng: np.random.Generator, eps: float = 0.2) -> dict:
    """R'_u = (X⊗1_u)R_u, R̄'_u = (1_u⊗(X*)⁻¹)R̄_u with X = 1 + eps·(random arrow) in End(ū)."""
    out = {}
    for u in words:
        if not u:
            continue
        ub = cat.conj(u)
        b = cat.basis(ub, ub)
        coeffs = eps * (rng.normal(size=len(b)) + 1j * rng.normal(size=len(b)))
        x = cat.identity(ub) + cat.combination(b, coeffs)
        xinv_star = cat.inverse(cat.adjoint(x))
        r, rb = cat.solution(u)
        r2 = cat.compose(cat.tensor(x, cat.identity(u)), r)
        rb2 = cat.compose(cat.tensor(cat.identity(u), xinv_star), rb)
        out[u] = (r2, rb2)
    return out


def solution_change_residual(alg: TruncatedAlgebra, rng: np.random.Generator, eps: float = 0.2) -> float:
    """max |star with twisted solutions - star with the standard ones| over the ambient basis."""
    words = {alg.class_word(k) for k in range(len(alg.m))}
    sols = twisted_solutions(alg.category, sorted(words), rng, eps)
    return float(np.abs(alg.star_matrix(solutions=sols) - alg.star_matrix()).max())
