import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import closure_by_matrices, random_oriented, random_tl, random_unitary
from tlkit.hilbert_embed import (
    CacheLimitExceeded, DiagrammaticFunctor, EmbeddingSpec, KindMismatch, LoopValueMismatch,
    QComposite, SpecError, TensorFunctor, build_embedding, category_for, classification_invariant,
    evaluate, glue_conjugation_residual, inject_fault, lemma_sum_residual, q_matrix, q_report,
    quasitensor_verify, random_spec, standardness, support_naturality_residual,
    support_projection, verify_conjugate,
)
from tlkit.oriented_core import R as oR
from tlkit.oriented_core import Rbar as oRbar
from tlkit.oriented_core import adjoint as o_adjoint
from tlkit.oriented_core import compose as o_compose
from tlkit.tl_core import ComplexBackend, cap, compose, cup, identity, markov_trace

REAL2 = EmbeddingSpec("real", 2, (), 2.0, 0)
GENERAL = EmbeddingSpec.from_json({"kind": "general", "n": 2, "lambdas": [0.7, 1 / 0.7]})


# parameter sets

def test_real_formula():
    lam = 0.6
    e = build_embedding(EmbeddingSpec("real", 2, (lam,), lam ** 2 + lam ** -2, 1))
    s = np.zeros((2, 2))
    s[1, 0], s[0, 1] = lam, 1 / lam
    assert np.allclose(e.R, s)


def test_pseudoreal_formula():
    e = build_embedding(EmbeddingSpec("pseudoreal", 2, (1.0,), 2.0))
    assert np.allclose(e.R, [[0, -1], [1, 0]])
    assert verify_conjugate(e)["pass"]


def test_general_unit_case():
    e = build_embedding(EmbeddingSpec("general", 2, (1.0, 1.0), 2.0))
    assert np.allclose(e.R, np.eye(2)) and np.allclose(e.Rbar, np.eye(2))
    res = verify_conjugate(e)
    assert max(v for k, v in res.items() if k != "pass") < 1e-15


@pytest.mark.parametrize("obj, fragment", [
    ({"kind": "general", "n": 2, "lambdas": [0.7, 1.5], "d": 2.74}, "sum(l^2) == sum(l^-2) == d"),
    ({"kind": "real", "n": 2, "k": 1, "lambdas": [1.2], "d": 2.2}, "0 < l_i < 1"),
    ({"kind": "pseudoreal", "n": 3, "lambdas": [0.5], "d": 4.25}, "even n"),
    ({"kind": "real", "n": 3, "k": 1, "lambdas": [0.5], "d": 3.0}, "sum(l^2 + l^-2) + n - 2k == d"),
    ({"kind": "general", "n": 3, "lambdas": [1.0, 0.5, 2.0]}, "monotone"),
])
def test_constraint_errors_name_the_formula(obj, fragment):
    with pytest.raises(SpecError) as info:
        EmbeddingSpec.from_json(obj)
    assert fragment in str(info.value)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["real", "pseudoreal", "general"]))
def test_random_specs_solve_conjugate_equations(seed, kind):
    spec = random_spec(kind, random.Random(seed))
    e = build_embedding(spec)
    res = verify_conjugate(e)
    assert res["pass"], res
    assert q_report(e)["pass"]
    assert classification_invariant(e)["residual"] < 1e-9
    assert EmbeddingSpec.from_json(spec.to_json()) == spec


def test_fault_injection_is_flagged():
    e = inject_fault(build_embedding(GENERAL), 1.01)
    res = verify_conjugate(e)
    assert not res["pass"]
    assert max(res["conjugate_eq_1"], res["conjugate_eq_2"]) > 1e-3


# Q matrices

def test_q_general():
    e = build_embedding(GENERAL)
    q = q_matrix(e)
    inv = q.invariants()
    assert q.type == "A"
    assert np.allclose(inv["eigenvalues"], sorted(x * x for x in GENERAL.lambdas))
    assert abs(inv["trace_Q"] - GENERAL.d) < 1e-12 and abs(inv["trace_Q_inv"] - GENERAL.d) < 1e-12


def test_q_pseudoreal_sign():
    q = q_matrix(build_embedding(EmbeddingSpec("pseudoreal", 2, (1.0,), 2.0)))
    assert q.type == "B" and q.sign == -1
    assert np.allclose(q.Q @ np.conj(q.Q), -np.eye(2))


def test_q_real_unitary():
    q = q_matrix(build_embedding(EmbeddingSpec("real", 3, (), 3.0, 0)))
    assert q.sign == 1
    assert np.allclose(q.Q.conj().T @ q.Q, np.eye(3))
    assert abs(q.invariants()["trace_QstarQ"] - 3) < 1e-12


def test_invariants_stable_under_basis_change():
    rng = np.random.default_rng(0)
    for spec in (GENERAL, EmbeddingSpec("real", 3, (0.5,), 0.25 + 4 + 1, 1),
                 EmbeddingSpec("pseudoreal", 4, (0.8, 1.0), 0.64 + 1 / 0.64 + 2)):
        base = build_embedding(spec)
        rot = build_embedding(spec, random_unitary(rng, spec.n))
        assert verify_conjugate(rot)["pass"]
        assert np.allclose(base.j_eigenvalues(), rot.j_eigenvalues())
        a, b = q_report(base), q_report(rot)
        assert a["pass"] and b["pass"]


# evaluation

def test_evaluate_identity_and_loop():
    e = build_embedding(REAL2)
    cat = category_for("tl", 2.0)
    bk = cat.backend
    assert np.allclose(evaluate(identity(3, bk), e), np.eye(8))
    assert np.allclose(evaluate(compose(cap(bk), cup(bk)), e), [[2.0]])
    # the pieces, multiplied as matrices, give the loop too
    assert np.allclose(evaluate(cap(bk), e) @ evaluate(cup(bk), e), [[2.0]])


def test_evaluate_kind_and_loop_checks():
    e = build_embedding(GENERAL)
    with pytest.raises(KindMismatch):
        evaluate(identity(1, ComplexBackend(GENERAL.d)), e)
    with pytest.raises(LoopValueMismatch):
        evaluate(identity(1, ComplexBackend(3.0)), build_embedding(REAL2))
    with pytest.raises(KindMismatch):
        evaluate(identity(1, ComplexBackend(2.0)), build_embedding(EmbeddingSpec("pseudoreal", 2, (1.0,), 2.0)))


def test_cache_cap(monkeypatch):
    monkeypatch.setenv("TLKIT_CACHE_CAP", "100")
    e = build_embedding(REAL2)
    with pytest.raises(CacheLimitExceeded):
        evaluate(identity(4, ComplexBackend(2.0)), e)


def test_closed_networks_match_loop_counts():
    rng = random.Random(1)
    e = build_embedding(EmbeddingSpec("real", 3, (0.5,), 0.25 + 4 + 1, 1))
    bk = ComplexBackend(e.d)
    for _ in range(30):
        m = rng.randint(1, 3)
        f = random_tl(rng, m, m, bk, 3)
        assert abs(closure_by_matrices(f, e) - complex(markov_trace(f))) < 1e-8


def test_injective_on_hom_bases():
    e = build_embedding(REAL2)
    cat = category_for("tl", 2.0)
    for m, n in ((0, 4), (2, 2), (1, 3), (3, 3)):
        mats = np.array([evaluate(b, e).reshape(-1) for b in cat.basis("y" * m, "y" * n)])
        assert np.linalg.matrix_rank(mats) == len(mats)


# functors, supports and quasitensor axioms

WORDS = ["", "x", "X", "xX"]


@pytest.fixture(scope="module")
def gen_functors():
    cat = category_for("oriented", GENERAL.d)
    tf = TensorFunctor(build_embedding(GENERAL), cat)
    return cat, tf, QComposite(tf), DiagrammaticFunctor(cat)


def test_support_examples(gen_functors):
    cat, tf, _, _ = gen_functors
    assert np.allclose(support_projection("", tf), [[1]])
    assert np.allclose(support_projection("x", tf), 0)
    r = tf.vector(cat.solution("x")[0])
    assert np.allclose(support_projection("Xx", tf), np.outer(r, r.conj()) / GENERAL.d)
    c = support_projection("xXxX", tf)
    assert np.allclose(c @ c, c) and np.allclose(c, c.conj().T)


def test_support_basis_independent(gen_functors):
    cat, tf, _, _ = gen_functors
    rng = np.random.default_rng(2)
    b = cat.basis("", "xXxX")
    mix = rng.normal(size=(len(b), len(b))) + np.eye(len(b)) * 3
    vecs = np.column_stack([tf.vector(cat.combination(b, mix[:, i])) for i in range(len(b))])
    g = np.array([[cat.inner(cat.combination(b, mix[:, i]), cat.combination(b, mix[:, j]))
                   for j in range(len(b))] for i in range(len(b))])
    assert np.allclose(vecs @ np.linalg.inv(g) @ vecs.conj().T, support_projection("xXxX", tf))


def test_tensor_functor_is_quasitensor(gen_functors):
    _, tf, _, _ = gen_functors
    rep = quasitensor_verify(tf, WORDS, naturality_words=["", "x", "X"])
    assert rep["pass"] and rep["equivalence_consistent"]
    assert rep["unit"] == rep["isometry"] == 0.0


def test_q_composite_is_minimal(gen_functors):
    _, _, qf, df = gen_functors
    for f in (qf, df):
        rep = quasitensor_verify(f, WORDS, naturality_words=["", "x", "X"])
        assert rep["pass"] and rep["minimal"] and rep["equivalence_consistent"]


def test_broken_glue_is_caught(gen_functors):
    _, tf, _, _ = gen_functors

    class Skewed(TensorFunctor):
        def _glue(self, u, v):
            g = super()._glue(u, v)
            if u == "x" and v == "X":
                g = g[:, ::-1]
            return g

    rep = quasitensor_verify(Skewed(tf.embedding, tf.category), WORDS, naturality_words=["", "x"])
    assert not rep["pass"]


def test_glue_conjugation_and_lemma_sum(gen_functors):
    _, tf, qf, _ = gen_functors
    for f in (tf, qf):
        for u, v in (("x", "X"), ("X", "x")):
            assert glue_conjugation_residual(f, u, v) < 1e-10
        for u in ("Xx", "XxXx"):
            assert lemma_sum_residual(f, u) < 1e-10
        assert support_naturality_residual(f, "xX", "xXxX") < 1e-10


def test_standardness():
    std = standardness(build_embedding(REAL2), 3)
    assert std["standard"] and std["tracial_residual"] < 1e-12
    gen = standardness(build_embedding(GENERAL), 1)
    assert not gen["standard"] and abs(gen["norm_R_sq"] - GENERAL.d) < 1e-12
    assert standardness(build_embedding(GENERAL), 0)["standard"]


def test_oriented_evaluation_respects_generators(gen_functors):
    cat, tf, _, _ = gen_functors
    bk = cat.backend
    e = tf.embedding
    assert np.allclose(evaluate(oR(bk), e).reshape(2, 2), e.R)
    assert np.allclose(evaluate(oRbar(bk), e).reshape(2, 2), e.Rbar)
    assert np.allclose(evaluate(o_compose(o_adjoint(oR(bk)), oR(bk)), e), GENERAL.d)
    rng = random.Random(0)
    f = random_oriented(rng, "xX", "xX", bk, 2)
    assert abs(closure_by_matrices(f, e) - complex(cat.trace(f))) < 1e-8
