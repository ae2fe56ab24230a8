"""Matrix realizations of the diagram categories on tensor powers of C^n.

Vectors in H⊗H are stored as n×n matrices M with v = Σ M[a,b] e_a⊗e_b, and
tensor-power indices are row-major (kron order).  An arc between two target
points evaluates to the pairing matrix indexed (left leg, right leg); an arc
between source points evaluates to its complex conjugate.
"""
from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field

import numpy as np

from ..oriented_core.morphism import OrientedMorphism
from ..tl_core.morphism import TLMorphism
from ..tl_core.scalars import RationalFunctionBackend, to_complex_at
from .spec import EmbeddingSpec

CACHE_ENV = "TLKIT_CACHE_CAP"
DEFAULT_CACHE_CAP = 100_000


class EmbeddingError(Exception):
    pass


class KindMismatch(EmbeddingError):
    pass


class LoopValueMismatch(EmbeddingError):
    pass


class CacheLimitExceeded(EmbeddingError):
    pass


def cache_cap() -> int:
    raw = os.environ.get(CACHE_ENV)
    return int(float(raw)) if raw else DEFAULT_CACHE_CAP


def _pairing(spec: EmbeddingSpec, lambdas) -> np.ndarray:
    n = spec.n
    s = np.zeros((n, n), dtype=complex)
    lam = list(lambdas)
    if spec.kind == "real":
        k = spec.k
        for i, x in enumerate(lam):
            s[i + k, i] = x
            s[i, i + k] = 1 / x
        for i in range(2 * k, n):
            s[i, i] = 1
    elif spec.kind == "pseudoreal":
        h = n // 2
        for i, x in enumerate(lam):
            s[i + h, i] = x
            s[i, i + h] = -1 / x
    else:
        raise EmbeddingError("general parameters do not define a single pairing")
    return s


def _general_pair(lambdas):
    # R̄ = Σ e_i ⊗ j e_i with j = diag(l)∘c; R is then forced by the conjugate equations
    rbar = np.diag(np.asarray(lambdas, dtype=complex))
    r = np.conj(np.linalg.inv(rbar))
    return r, rbar


@dataclass
class Embedding:
    """Immutable matrix data plus a lock-protected evaluation cache."""

    spec: EmbeddingSpec
    R: np.ndarray
    Rbar: np.ndarray
    j_matrix: np.ndarray
    unitary: np.ndarray | None = None
    label: str = ""
    _cache: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def d(self) -> float:
        return self.spec.d

    def j_star_j(self) -> np.ndarray:
        """j*∘j as a linear map; j = K∘c so j*j = K^T conj(K)."""
        k = self.j_matrix
        return k.T @ np.conj(k)

    def j_eigenvalues(self) -> list:
        return sorted(float(x) for x in np.linalg.eigvalsh((self.j_star_j() + self.j_star_j().conj().T) / 2))


def build_embedding(spec: EmbeddingSpec, unitary: np.ndarray | None = None,
                    label: str = "") -> Embedding:
    """Pairing vectors from the parameter formulas, optionally in a rotated basis."""
    if spec.kind == "general":
        r, rbar = _general_pair(spec.lambdas)
    else:
        s = _pairing(spec, spec.lambdas)
        r = s
        rbar = s if spec.kind == "real" else -s
    if unitary is not None:
        u = np.asarray(unitary, dtype=complex)
        if not np.allclose(u.conj().T @ u, np.eye(spec.n), atol=1e-10):
            raise EmbeddingError("basis change must be unitary")
        if spec.kind == "general":
            # x -> U, x̄ -> Ū
            rbar = u @ rbar @ u.conj().T
            r = np.conj(u) @ r @ u.T
        else:
            r = u @ r @ u.T
            rbar = u @ rbar @ u.T
    return Embedding(spec, r, rbar, rbar.T.copy(), unitary, label)


def inject_fault(e: Embedding, factor: float = 1.01) -> Embedding:
    """Rebuild R alone with every parameter scaled, leaving R̄ untouched."""
    spec = e.spec
    lam = [x * factor for x in spec.lambdas]
    if spec.kind == "general":
        r, _ = _general_pair(lam)
    else:
        r = _pairing(spec, lam)
        if not lam:
            r = r * factor
    if e.unitary is not None:
        u = e.unitary
        r = np.conj(u) @ r @ u.T if spec.kind == "general" else u @ r @ u.T
    return Embedding(spec, r, e.Rbar.copy(), e.j_matrix.copy(), e.unitary, e.label + "+fault")


# evaluation

def _check_target(f, e: Embedding):
    if isinstance(f, TLMorphism):
        if e.spec.kind == "general":
            raise KindMismatch("a general embedding realizes the oriented category, not TL")
        if e.spec.kind == "pseudoreal":
            raise KindMismatch(
                "pseudoreal embeddings need the signed zig-zag relation, which is disabled; "
                "verify them through verify_conjugate and q_matrix")
        return "y" * f.source, "y" * f.target
    if isinstance(f, OrientedMorphism):
        if e.spec.kind != "general":
            raise KindMismatch("oriented morphisms need a general embedding")
        return f.source, f.target
    raise EmbeddingError(f"cannot evaluate {type(f).__name__}")


def _coefficient(bk, c, d_value: float) -> complex:
    return to_complex_at(bk, c, d_value)


def _check_loop_value(f, e: Embedding, tol: float = 1e-9):
    bk = f.backend
    if isinstance(bk, RationalFunctionBackend):
        return
    dv = complex(bk.to_complex(bk.d))
    if abs(dv - e.d) > tol * max(1.0, abs(e.d)):
        raise LoopValueMismatch(f"morphism uses d={dv}, embedding has d={e.d}")


def diagram_matrix(diag, source: str, target: str, e: Embedding) -> np.ndarray:
    """Matrix of one diagram, shape (n^|target|, n^|source|)."""
    key = (diag, source, target)
    hit = e._cache.get(key)
    if hit is not None:
        return hit
    n = e.n
    s, t = len(source), len(target)
    entries = n ** (s + t)
    cap = cache_cap()
    if entries > cap:
        raise CacheLimitExceeded(
            f"diagram with {s + t} boundary points needs {entries} entries at n={n}; "
            f"cap is {cap} (raise {CACHE_ENV} to allow it)")
    oriented = e.spec.kind == "general"
    ops = []
    for p, q in diag.pairs:
        kp, ip = diag.side(p)
        kq, iq = diag.side(q)
        ax_p = ip if kp == "t" else t + ip
        ax_q = iq if kq == "t" else t + iq
        if kp != kq:
            ops += [np.eye(n), [ax_p, ax_q]]
            continue
        left, right = sorted((ip, iq))
        word = target if kp == "t" else source
        if oriented:
            mat = e.R if word[left] + word[right] == "Xx" else e.Rbar
        else:
            mat = e.R
        if kp == "s":
            mat = np.conj(mat)
        ax_l = left if kp == "t" else t + left
        ax_r = right if kp == "t" else t + right
        ops += [mat, [ax_l, ax_r]]
    if ops:
        tensor = np.einsum(*ops, list(range(s + t)))
    else:
        tensor = np.ones(())
    out = np.asarray(tensor, dtype=complex).reshape(n ** t, n ** s)
    with e._lock:
        e._cache.setdefault(key, out)
    return out


def evaluate(f, e: Embedding) -> np.ndarray:
    """φ(f) as a matrix on the tensor powers of C^n."""
    source, target = _check_target(f, e)
    _check_loop_value(f, e)
    n = e.n
    out = np.zeros((n ** len(target), n ** len(source)), dtype=complex)
    for diag, c in f.terms.items():
        out += _coefficient(f.backend, c, e.d) * diagram_matrix(diag, source, target, e)
    return out


def markov_functional(r_vec: np.ndarray, x: np.ndarray) -> complex:
    """φ_u(X) = R_u*∘(1⊗X)∘R_u with R_u given as a (dim ū) × (dim u) matrix."""
    m = np.asarray(r_vec)
    return complex(np.einsum("ab,ac,bc->", np.conj(m), m, x) if m.size else 0.0)


# verification

def _col(mat: np.ndarray) -> np.ndarray:
    return mat.reshape(-1, 1)


def verify_conjugate(e: Embedding, tol: float = 1e-10) -> dict:
    """Residuals of both conjugate equations and of the normalizations."""
    n = e.n
    eye = np.eye(n)
    r, rb = _col(e.R), _col(e.Rbar)
    # R̄*⊗1_u ∘ 1_u⊗R  and  R*⊗1_ū ∘ 1_ū⊗R̄, contracted as explicit networks
    eq1 = np.kron(rb.conj().T, eye) @ np.kron(eye, r)
    eq2 = np.kron(r.conj().T, eye) @ np.kron(eye, rb)
    res = {
        "conjugate_eq_1": float(np.abs(eq1 - eye).max()),
        "conjugate_eq_2": float(np.abs(eq2 - eye).max()),
        "norm_R": float(abs(np.vdot(r, r).real - e.d)),
        "norm_Rbar": float(abs(np.vdot(rb, rb).real - e.d)),
    }
    if e.spec.kind != "general":
        sign = e.spec.zigzag_sign
        zig = np.kron(eye, r.conj().T) @ np.kron(r, eye)
        res["zigzag_sign"] = float(np.abs(zig - sign * eye).max())
    res["pass"] = all(v <= tol for k, v in res.items() if k != "pass")
    return res


@dataclass
class QMatrix:
    type: str
    Q: np.ndarray
    sign: int | None = None

    def invariants(self) -> dict:
        q = self.Q
        n = q.shape[0]
        eye = np.eye(n)
        out: dict = {"type": self.type}
        if self.type == "B":
            qqbar = q @ np.conj(q)
            qsq = q.conj().T @ q
            out["sign"] = self.sign
            out["qqbar_residual"] = float(np.abs(qqbar - self.sign * eye).max())
            out["trace_QstarQ"] = float(np.trace(qsq).real)
            out["trace_QstarQ_inv"] = float(np.trace(np.linalg.inv(qsq)).real)
        else:
            herm = float(np.abs(q - q.conj().T).max())
            evals = np.linalg.eigvalsh((q + q.conj().T) / 2)
            out["hermitian_residual"] = herm
            out["positive"] = bool(evals.min() > 0)
            out["trace_Q"] = float(np.trace(q).real)
            out["trace_Q_inv"] = float(np.trace(np.linalg.inv(q)).real)
            out["eigenvalues"] = sorted(float(x) for x in evals)
        return out

    def to_json(self) -> dict:
        return {
            "type": self.type,
            "sign": self.sign,
            "Q": [[[float(z.real), float(z.imag)] for z in row] for row in self.Q],
            "invariants": self.invariants(),
        }


def q_matrix(e: Embedding) -> QMatrix:
    """B type Q = c∘j* for real/pseudoreal data, A type Q = F*F with F = j∘c otherwise."""
    k = e.j_matrix
    if e.spec.kind == "general":
        return QMatrix("A", k.conj().T @ k)
    q = k.conj().T
    prod = q @ np.conj(q)
    sign = 1 if np.real(np.trace(prod)) > 0 else -1
    return QMatrix("B", q, sign)


def q_report(e: Embedding, tol: float = 1e-10) -> dict:
    qm = q_matrix(e)
    inv = qm.invariants()
    d = e.d
    if qm.type == "A":
        ok = (abs(inv["trace_Q"] - d) <= tol * max(1, d) and abs(inv["trace_Q_inv"] - d) <= tol * max(1, d)
              and inv["positive"] and inv["hermitian_residual"] <= tol)
        expected = sorted(x * x for x in e.spec.lambdas)
        inv["expected_eigenvalues"] = expected
        ev_res = max((abs(a - b) for a, b in zip(inv["eigenvalues"], expected)), default=0.0)
        inv["eigenvalue_residual"] = ev_res
        ok = ok and ev_res <= 1e-8 * max(1, d)
    else:
        inv["expected_sign"] = e.spec.zigzag_sign
        ok = (inv["qqbar_residual"] <= 1e-12 * max(1, d)
              and inv["sign"] == e.spec.zigzag_sign
              and abs(inv["trace_QstarQ"] - d) <= tol * max(1, d)
              and abs(inv["trace_QstarQ_inv"] - d) <= tol * max(1, d))
    inv["pass"] = bool(ok)
    return inv


def classification_invariant(e: Embedding) -> dict:
    got = e.j_eigenvalues()
    want = e.spec.expected_eigenvalues()
    return {
        "eigenvalues": got,
        "expected": want,
        "residual": max((abs(a - b) for a, b in zip(got, want)), default=0.0),
    }


def standardness(e: Embedding, r: int, seed: int = 0, tol: float = 1e-9) -> dict:
    """Norms of the product solution on x^r against n^r, plus a trace-property probe."""
    from .category import category_for
    from .functors import TensorFunctor

    cat = category_for(e.spec.category, e.d)
    word = ("y" if cat.kind == "tl" else "x") * r
    tf = TensorFunctor(e, cat)
    rw, rbw = cat.solution(word)
    dim = e.n ** r
    mat_r = tf.apply(rw).reshape(dim, dim)
    mat_rb = tf.apply(rbw).reshape(dim, dim)
    nr = float(np.vdot(mat_r, mat_r).real)
    nrb = float(np.vdot(mat_rb, mat_rb).real)
    rng = np.random.default_rng(seed)

    def rand():
        z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        return z / np.linalg.norm(z)

    x, y = rand(), rand()
    resid = abs(markov_functional(mat_r, x @ y) - markov_functional(mat_r, y @ x))
    target = float(e.n ** r)
    return {
        "r": r,
        "norm_R_sq": nr,
        "norm_Rbar_sq": nrb,
        "qdim": e.d ** r,
        "hilbert_dim": target,
        "standard": bool(abs(nr - target) <= tol * target and abs(nrb - target) <= tol * target),
        "tracial_residual": float(resid),
    }
