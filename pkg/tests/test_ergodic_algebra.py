import numpy as np
import pytest

from oracles import catalan, noncrossing_matchings, random_unitary
from tlkit.ergodic_algebra import (
    AlgebraError, Coaction, MixedClassError, TruncationOverflow, algebra_from_json,
    brute_force_dimension, build_algebra, coaction_report, decompose_classes, j_involution,
    minimal_projection, multiplicity_table, omega_choice_residual, omega_evaluation_matrix,
    quantum_multiplicity, solution_change_residual,
)
from tlkit.hilbert_embed import category_for


def emb(kind, n, lambdas=(), d=None, k=0, **extra):
    spec = {"kind": kind, "n": n, "lambdas": list(lambdas)}
    if kind == "real":
        spec["k"] = k
    if d is not None:
        spec["d"] = d
    return dict({"realization": "embedding", "spec": spec}, **extra)


STD = emb("real", 2, d=2.0)
LAM = 0.6
SKEW = emb("real", 2, (LAM,), LAM ** 2 + LAM ** -2, k=1)
GEN = emb("general", 2, (0.7, 1 / 0.7))
GEN_D = 0.7 ** 2 + 0.7 ** -2
DIAG = {"realization": "diagrammatic-identity"}


@pytest.fixture(scope="module")
def std2():
    return build_algebra(STD, STD, 2)


@pytest.fixture(scope="module")
def skew2():
    return build_algebra(SKEW, SKEW, 2)


@pytest.fixture(scope="module")
def gen1():
    return build_algebra(GEN, GEN, 1)


def rand_exposed(alg, rng):
    v = alg.zero()
    v[alg.exposed] = rng.normal(size=alg.dimension) + 1j * rng.normal(size=alg.dimension)
    return v


def rand_at_length(alg, rng, max_len):
    v = alg.zero()
    idx = [i for i, (k, _, _) in enumerate(alg.basis) if len(alg.class_word(k)) <= max_len]
    v[idx] = rng.normal(size=len(idx)) + 1j * rng.normal(size=len(idx))
    return v


# class decomposition

def test_tl_classes_n1():
    t = decompose_classes(category_for("tl", 2.5), 1)
    assert [c.word for c in t.classes] == ["", "y", "yy"]
    # 1_{yy} = W0 W0* + p2 with W0 the normalized cup
    assert t.multiplicities("yy") == {0: 1, 2: 1}
    assert max(t.verify().values()) < 1e-12


def test_tl_class_ranks(std2):
    assert std2.m == std2.t == [1, 2, 3, 4, 5]
    assert [len(std2.class_word(k)) for k in range(5)] == list(range(5))


def test_oriented_exposed_classes(gen1):
    words = sorted({gen1.class_word(gen1.basis[i][0]) for i in gen1.exposed})
    assert words == ["", "X", "x"]
    assert max(gen1.table.verify().values()) < 1e-10


def test_minimal_projection_is_jones_wenzl():
    cat = category_for("tl", 2.5)
    p = minimal_projection(cat, "yy")
    assert abs(complex(cat.trace(p)) - (2.5 ** 2 - 1)) < 1e-12


# dimensions

def test_standard_dimension_and_brute_force(std2):
    assert std2.dimension == 1 + 4 + 9 == 14
    assert brute_force_dimension(std2.mu, std2.tau, 2) == 14


def test_collapsed_dimension():
    for tau in (DIAG, {"realization": "q-composite", "inner": GEN}):
        alg = build_algebra(DIAG, tau, 1, "oriented", GEN_D)
        assert alg.dimension == 1
        assert brute_force_dimension(alg.mu, alg.tau, 1) == 1


def test_general_dimension_brute_force(gen1):
    assert gen1.dimension == 9
    assert brute_force_dimension(gen1.mu, gen1.tau, 1) == 9


def test_real_n3_dimension():
    spec = emb("real", 3, d=3.0)
    alg = build_algebra(spec, spec, 2)
    # Σ (dim of the k-th spin-like summand)^2 over k <= 2
    assert alg.m == alg.t == [1, 3, 8, 21, 55][:len(alg.m)]
    assert alg.dimension == 1 + 9 + 64 == 74


# products

def test_unit(std2):
    rng = np.random.default_rng(0)
    one = std2.unit()
    for _ in range(10):
        a = rand_exposed(std2, rng)
        assert np.allclose(std2.multiply(one, a), a) and np.allclose(std2.multiply(a, one), a)


@pytest.mark.parametrize("fixture", ["std2", "skew2"])
def test_associativity(fixture, request):
    alg = request.getfixturevalue(fixture)
    rng = np.random.default_rng(1)
    for _ in range(50):
        # three elements of length <= 1 keep every bracketing inside 2N = 4
        a, b, c = (rand_at_length(alg, rng, 1) for _ in range(3))
        lhs = alg.multiply(alg.multiply(a, b), c)
        rhs = alg.multiply(a, alg.multiply(b, c))
        assert np.abs(lhs - rhs).max() < 1e-10


def test_product_of_unit_vectors_at_one_strand(std2):
    # e_i*⊗f_j times e_k*⊗f_l is the class of (e_i⊗e_k)*⊗(f_j⊗f_l) at yy
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    x = np.zeros((2, 2)); x[i, j] = 1
                    y = np.zeros((2, 2)); y[k, l] = 1
                    a, b = std2.reduce("y", x), std2.reduce("y", y)
                    assert np.allclose(std2.multiply(a, b), std2.reduce("yy", np.kron(x, y)))


def test_truncation_overflow(std2):
    top = std2.basis_vector(std2.offsets[4])
    with pytest.raises(TruncationOverflow):
        std2.multiply(top, top)
    with pytest.raises(TruncationOverflow):
        std2.reduce("yyyyy", np.zeros((32, 32)))


# star

@pytest.mark.parametrize("fixture", ["std2", "skew2", "gen1"])
def test_star_axioms(fixture, request):
    alg = request.getfixturevalue(fixture)
    one = alg.unit()
    assert np.allclose(alg.star(one), one)
    s = alg.star_matrix()
    # star is antilinear: star(a) = S conj(a), so star∘star = S conj(S)
    assert np.abs(s @ np.conj(s) - np.eye(alg.ambient_dim)).max() < 1e-10
    rng = np.random.default_rng(2)
    half = alg.N
    for _ in range(50):
        a, b = rand_at_length(alg, rng, half), rand_at_length(alg, rng, half)
        lhs = alg.star(alg.multiply(a, b))
        rhs = alg.multiply(alg.star(b), alg.star(a))
        assert np.abs(lhs - rhs).max() < 1e-10


@pytest.mark.parametrize("fixture", ["skew2", "gen1"])
def test_star_independent_of_solutions(fixture, request):
    alg = request.getfixturevalue(fixture)
    assert solution_change_residual(alg, np.random.default_rng(3)) < 1e-10


def test_element_wrapper(gen1):
    rng = np.random.default_rng(4)
    a, b = gen1.element(rand_exposed(gen1, rng)), gen1.element(rand_exposed(gen1, rng))
    assert np.allclose((a * b).star().coeffs, (b.star() * a.star()).coeffs)
    assert abs((a + b).haar() - a.haar() - b.haar()) < 1e-12


# Haar state

@pytest.mark.parametrize("fixture", ["std2", "skew2", "gen1"])
def test_haar_unit_and_nontrivial_classes(fixture, request):
    alg = request.getfixturevalue(fixture)
    assert abs(alg.haar(alg.unit()) - 1) < 1e-12
    k0 = alg.table.class_of_word("")
    for i, (k, _, _) in enumerate(alg.basis):
        if k != k0:
            assert abs(alg.haar(alg.basis_vector(i))) < 1e-12


def test_haar_at_two_strands(skew2):
    # h(X at yy) = μ(V)ᵀ X conj(τ(V)) with V the cup divided by sqrt(d)
    cat = skew2.category
    d = float(np.real(complex(cat.d)))
    s = skew2.tau.vector(cat.solution("y")[0])
    rng = np.random.default_rng(5)
    for _ in range(5):
        x = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        assert abs(skew2.haar_at_word("yy", x) - s @ x @ np.conj(s) / d) < 1e-12


def test_haar_gram_normalization(std2):
    rep = std2.positivity_report()
    assert rep["pass"] and rep["rank"] == 14
    # on an orthonormal class-k block the form is 1/Tr(E_k)
    expected = sorted([1.0] + [0.5] * 4 + [1 / 3] * 9)
    assert np.allclose(sorted(rep["spectrum"]), expected)


@pytest.mark.parametrize("fixture", ["skew2", "gen1"])
def test_haar_faithful(fixture, request):
    rep = request.getfixturevalue(fixture).positivity_report()
    assert rep["pass"] and rep["hermitian_residual"] < 1e-10


@pytest.mark.parametrize("fixture", ["std2", "skew2", "gen1"])
def test_quotient_relations(fixture, request):
    assert request.getfixturevalue(fixture).quotient_residual(np.random.default_rng(6)) < 1e-10


# the family ω_{T,M}

def test_omega_unit_class_is_haar(gen1):
    rng = np.random.default_rng(7)
    k0 = gen1.table.class_of_word("")
    one = np.ones(1)
    for _ in range(5):
        a = rand_exposed(gen1, rng)
        assert abs(gen1.omega(k0, one, one, a) - gen1.haar(a)) < 1e-12


@pytest.mark.parametrize("fixture", ["std2", "gen1"])
def test_omega_separates(fixture, request):
    alg = request.getfixturevalue(fixture)
    g = omega_evaluation_matrix(alg)
    assert np.abs(g - np.eye(alg.dimension)).max() < 1e-10


@pytest.mark.parametrize("fixture", ["std2", "gen1"])
def test_omega_choice_independent(fixture, request):
    assert omega_choice_residual(request.getfixturevalue(fixture), np.random.default_rng(8)) < 1e-10


def test_omega_refuses_mixed_vectors(std2):
    # at yy the class-2 range misses the cup direction, so adding it mixes classes
    k = 2
    cup = std2.mu.vector(std2.category.solution("y")[0])
    m_vec = std2.bmu[k][:, 0] + cup
    with pytest.raises(MixedClassError):
        std2.omega(k, std2.btau[k][:, 0], m_vec, std2.unit())


# the antilinear map j on A(μ, μ)

@pytest.mark.parametrize("fixture", ["skew2", "gen1"])
def test_j_multiplicative_and_involutive(fixture, request):
    alg = request.getfixturevalue(fixture)
    rng = np.random.default_rng(9)
    for _ in range(20):
        a, b = rand_at_length(alg, rng, alg.N), rand_at_length(alg, rng, alg.N)
        assert np.abs(j_involution(alg, j_involution(alg, a)) - a).max() < 1e-10
        lhs = j_involution(alg, alg.multiply(a, b))
        rhs = alg.multiply(j_involution(alg, a), j_involution(alg, b))
        assert np.abs(lhs - rhs).max() < 1e-10


def test_j_needs_equal_functors():
    alg = build_algebra(GEN, {"realization": "q-composite", "inner": GEN}, 1)
    with pytest.raises(AlgebraError):
        j_involution(alg, alg.unit())


# coaction

@pytest.mark.parametrize("source", [STD, GEN])
def test_coaction_report(source):
    alg = build_algebra(source, source, 1)
    rep = coaction_report(Coaction(alg))
    assert rep["pass"], rep
    assert rep["fixed_point_dimension"] == 1


def test_coaction_from_other_functor():
    alg = build_algebra(DIAG, GEN, 1)
    rep = coaction_report(Coaction(alg))
    assert rep["pass"], rep


def test_broken_coaction_is_caught():
    alg = build_algebra(STD, STD, 1)

    class Scaled(Coaction):
        def apply_at_word(self, w, x):
            out = super().apply_at_word(w, x)
            return out * 1.01 if w else out

    rep = coaction_report(Scaled(alg))
    assert not rep["pass"]
    assert rep["multiplicativity"] > 1e-3


def test_fundamental_identities_direct(gen1):
    from tlkit.ergodic_algebra import fundamental_identities
    res = fundamental_identities(gen1)
    assert res["unitarity"] < 1e-10 and res["r_invariance"] < 1e-10


# quantum multiplicity

def test_multiplicity_standard():
    alg = build_algebra(STD, STD, 1)
    for row in multiplicity_table(alg.mu, 4):
        assert row.mult == 2 ** row.r
        assert abs(row.m - 2 ** row.r) < 1e-9
        assert abs(row.qdim - 2 ** row.r) < 1e-9


def test_multiplicity_diagrammatic():
    alg = build_algebra(DIAG, DIAG, 1, "tl", 2.5)
    for row in multiplicity_table(alg.mu, 6):
        expected = len(noncrossing_matchings(row.r))
        assert row.mult == expected == (catalan(row.r // 2) if row.r % 2 == 0 else 0)
        assert abs(row.m - expected) < 1e-9


@pytest.mark.parametrize("spec", [SKEW, GEN])
def test_multiplicity_bounds(spec):
    alg = build_algebra(spec, spec, 1)
    rows = multiplicity_table(alg.mu, 3)
    assert (rows[0].mult, rows[0].m, rows[0].qdim) == (1, 1.0, 1.0)
    for row in rows[1:]:
        assert row.within_bounds
        assert row.strict_lower
        # a tensor embedding makes JJ* a product, so the upper bound is reached
        assert abs(row.m - row.qdim) < 1e-9 * row.qdim


def test_multiplicity_json():
    alg = build_algebra(GEN, GEN, 1)
    row = quantum_multiplicity(alg.mu, 2).to_json()
    assert row["word"] == "xx" and row["mult"] == 4


# functor specifications

def test_unitary_basis_change_preserves_invariants():
    u = random_unitary(np.random.default_rng(10), 2)
    rot = dict(SKEW, unitary=[[[z.real, z.imag] for z in row] for row in u])
    a, b = build_algebra(SKEW, SKEW, 2), build_algebra(rot, rot, 2)
    assert a.dimension == b.dimension
    sa, sb = a.positivity_report()["spectrum"], b.positivity_report()["spectrum"]
    assert np.allclose(sorted(sa), sorted(sb))


@pytest.mark.parametrize("obj", [
    {"mu": STD, "tau": GEN, "N": 1},
    {"mu": DIAG, "tau": DIAG, "N": 1},
    {"mu": STD, "tau": STD, "N": 1, "d": 3.0},
    {"mu": {"realization": "nope"}, "tau": STD, "N": 1},
    {"mu": emb("pseudoreal", 2, (1.0,), 2.0), "tau": emb("pseudoreal", 2, (1.0,), 2.0), "N": 1},
])
def test_bad_algebra_specs(obj):
    with pytest.raises(AlgebraError):
        algebra_from_json(obj)


def test_algebra_from_json():
    alg = algebra_from_json({"mu": STD, "tau": STD, "N": 1})
    assert alg.dimension == 5
