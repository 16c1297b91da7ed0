import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symstab import (
    IllConditioned,
    LocalUnitary,
    NotClosed,
    PauliOperator,
    Rank2Anomaly,
    ResourceLimit,
    ad_action,
    classify,
    conjugate,
    decompose_algebra,
    exp_su2,
    projection_dim,
    projection_dims,
    stabilizer_basis,
    verify_block_relations,
    weight,
)
from symstab.pauli import conjugate_element, local_element, local_matrix, pauli_to_dense
from symstab.stabilizer import AlgebraBasis, Block, BlockDecomposition, standard_block
from symstab.states import completely_mixed, dicke_state, ghz_mixture, ghz_rho, product_zero, singlet, werner_basis

from _synthetic import (
    class_representative,
    minimal_weight_partition,
    random_local,
    random_su2,
    random_symmetric,
    synthetic_algebra,
)

seeds = st.integers(0, 2**32 - 1)


def a_on(n, q):
    return local_element(n, {q: (1.0, 0.0, 0.0)})


def test_completely_mixed_dimension():
    K = stabilizer_basis(completely_mixed(3))
    assert K.dim == 9
    assert K.orthonormality_error() < 1e-8


def test_ghz_dimension_and_aligned_form():
    rho = ghz_rho(4, 2**-0.5, 2**-0.5)
    K = stabilizer_basis(rho)
    assert K.dim == 3
    aligned = K.conjugated(classify(rho).aligner)
    assert np.abs(aligned.elements[:, :, 1:]).max() < 1e-9


def test_product_dimension_and_span():
    K = stabilizer_basis(product_zero(3))
    assert K.dim == 3
    for q in range(3):
        assert K.residual(a_on(3, q) / 2) < 1e-9


@pytest.mark.parametrize("make", [lambda: ghz_rho(3, 0.6, 0.8j), singlet, lambda: dicke_state(4, 2)])
def test_basis_elements_commute_with_state(make):
    rho = make()
    K = stabilizer_basis(rho)
    dense = pauli_to_dense(rho)
    for M in K:
        assert ad_action(M, rho).max_abs() < 1e-9
        L = local_matrix(M)
        assert np.abs(L @ dense - dense @ L).max() < 1e-9


def test_basis_is_orthonormal_and_closed():
    rng = np.random.default_rng(20)
    for tag in ("Werner", "Product", "GHZ", "Dicke"):
        for n in (3, 4):
            K = stabilizer_basis(class_representative(tag, n, rng))
            assert K.orthonormality_error() < 1e-8
            assert K.closure_residual() < 1e-9


def test_resource_limit():
    with pytest.raises(ResourceLimit):
        stabilizer_basis(PauliOperator.identity(11))


def test_ill_conditioned_gap():
    # A on qubit 1 is broken at 1e-6, A on qubit 2 at 1e-8: too close to call
    rho = PauliOperator(3, {"iii": 1 / 8, "zii": 0.1, "izi": 0.1, "iiz": 0.1, "xzi": 1e-6, "zxi": 1e-8})
    with pytest.raises(IllConditioned):
        stabilizer_basis(rho)


def test_projection_dim_examples():
    K = stabilizer_basis(completely_mixed(2))
    assert [projection_dim(K, i) for i in range(2)] == [3, 3]
    dicke = AlgebraBasis.span(4, [sum(a_on(4, q) for q in range(4))])
    assert projection_dims(dicke) == [1, 1, 1, 1]
    empty = AlgebraBasis(3, np.zeros((0, 3, 3)))
    assert projection_dims(empty) == [0, 0, 0]


def test_rank2_anomaly():
    K = AlgebraBasis.span(1, [local_element(1, {0: (1, 0, 0)}), local_element(1, {0: (0, 1, 0)})])
    with pytest.raises(Rank2Anomaly):
        projection_dim(K, 0)


@settings(max_examples=30, deadline=None)
@given(seed=seeds, n=st.integers(2, 5))
def test_synthetic_projection_dims_never_two(seed, n):
    K, _ = synthetic_algebra(n, np.random.default_rng(seed))
    assert all(p in (0, 1, 3) for p in projection_dims(K))


def test_weight_examples():
    assert weight(np.zeros((4, 3))) == 0
    assert weight(a_on(4, 0) - a_on(4, 1)) == 2
    rng = np.random.default_rng(21)
    for _ in range(20):
        M = rng.normal(size=(5, 3)) * (rng.random(5) < 0.5)[:, None]
        assert weight(M) == int(np.count_nonzero(np.abs(M).sum(axis=1)))


def test_decompose_examples():
    D = decompose_algebra(stabilizer_basis(singlet()))
    assert D.partition() == (((0, 1),), (), ())

    n = 3
    elems = list(standard_block(n, (0, 1))) + [a_on(n, 2)]
    D = decompose_algebra(AlgebraBasis.span(n, elems))
    assert D.partition() == (((0, 1),), (2,), ())

    D = decompose_algebra(AlgebraBasis(3, np.zeros((0, 3, 3))))
    assert D.partition() == ((), (), (0, 1, 2))


def test_not_closed():
    K = AlgebraBasis.span(2, [a_on(2, 0) + a_on(2, 1), local_element(2, {0: (0, 1, 0), 1: (0, 1, 0)})])
    with pytest.raises(NotClosed):
        decompose_algebra(K)


def aligned_matches_standard(D, K):
    aligned = K.conjugated(D.aligner)
    worst = 0.0
    for b in D.blocks:
        for M in standard_block(K.n, b.qubits):
            worst = max(worst, aligned.residual(M / np.sqrt(len(b.qubits))))
    return worst


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_conjugated_block_recovered(n):
    rng = np.random.default_rng(30 + n)
    for _ in range(100):
        size = int(rng.integers(1, n + 1))
        B = tuple(sorted(rng.choice(n, size=size, replace=False)))
        g = random_local(n, rng)
        K = AlgebraBasis.span(n, conjugate_element(g, np.array(standard_block(n, B))))
        D = decompose_algebra(K)
        assert D.partition()[0] == (B,)
        assert aligned_matches_standard(D, K) < 1e-8
        for M in K:
            assert weight(M) == len(B)


@settings(max_examples=40, deadline=None)
@given(seed=seeds, n=st.integers(2, 5))
def test_synthetic_partition_and_alignment(seed, n):
    K, truth = synthetic_algebra(n, np.random.default_rng(seed))
    D = decompose_algebra(K)
    assert D.partition() == truth
    assert aligned_matches_standard(D, K) < 1e-8
    # the S summand lies along A on every S qubit after alignment
    S = D.s_basis.conjugated(D.aligner)
    if S.dim:
        assert np.abs(S.elements[:, :, 1:]).max() < 1e-8
    for q in D.r_qubits:
        assert np.abs(K.elements[:, q, :]).sum() < 1e-9
    # block elements have weight |B|
    rng = np.random.default_rng(seed)
    for b in D.blocks:
        M = np.tensordot(rng.normal(size=3), np.array([b.U, b.V, b.W]), axes=1)
        assert weight(M) == len(b.qubits)


@settings(max_examples=25, deadline=None)
@given(seed=seeds, n=st.integers(3, 4))
def test_rational_synthetic_matches_weight_oracle(seed, n):
    K, truth = synthetic_algebra(n, np.random.default_rng(seed), rational=True)
    D = decompose_algebra(K)
    assert D.partition() == truth
    assert minimal_weight_partition(K) == truth


def test_block_relations():
    n = 4
    K = AlgebraBasis.span(n, np.array(standard_block(n, (0, 1, 2))))
    checks = verify_block_relations(decompose_algebra(K))
    assert len(checks) == 1 and checks[0].ok
    assert max(checks[0].uv_w, checks[0].vw_u, checks[0].wu_v) < 1e-9

    rng = np.random.default_rng(40)
    g = random_local(n, rng)
    D = decompose_algebra(K.conjugated(g))
    assert all(c.ok for c in verify_block_relations(D))

    # corrupt W: relations must fail
    b = D.blocks[0]
    bad = Block(b.qubits, b.U, b.V, b.W + 0.01 * b.U)
    bad_D = BlockDecomposition(n, (bad,), D.s_qubits, D.s_basis, D.r_qubits, D.aligner)
    check = verify_block_relations(bad_D)[0]
    assert not check.ok
    assert check.uv_w > 1e-3


def test_standard_block_relations_directly():
    U, V, W = standard_block(3, (0, 2))
    D = BlockDecomposition(3, (Block((0, 2), U, V, W),), (), AlgebraBasis(3, np.zeros((0, 3, 3))), (1,), LocalUnitary.identity(3))
    check = verify_block_relations(D)[0]
    assert check.ok and check.orthonormality < 1e-12


@pytest.mark.parametrize("tag", ["FullLG", "Werner", "Product", "GHZ", "Dicke", "Zero"])
def test_dimension_invariant_under_local_conjugation(tag):
    rng = np.random.default_rng(sum(map(ord, tag)))
    for n in (3, 4):
        rho = class_representative(tag, n, rng)
        d = stabilizer_basis(rho).dim
        for _ in range(5):
            assert stabilizer_basis(conjugate(random_local(n, rng), rho)).dim == d


def test_uniform_projection_dims_for_symmetric_states():
    rng = np.random.default_rng(41)
    for n in (2, 3, 4, 5):
        for tag in ("FullLG", "Werner", "Product", "GHZ", "Dicke", "Zero"):
            dims = projection_dims(stabilizer_basis(class_representative(tag, n, rng)))
            assert len(set(dims)) == 1


@pytest.mark.parametrize(
    "rho",
    [
        ghz_mixture(3, [0.1, 0.2, 0.15, 0.25], 0.3, 0.8, 0.6j),
        singlet(),
        (werner_basis(4, 0) + 0.1 * werner_basis(4, 1)) / 16,
        product_zero(3),
        dicke_state(4, 2),
    ],
)
def test_flow_fixes_state(rho):
    # exp(tM) for M in the stabilizer, applied factor by factor
    K = stabilizer_basis(rho)
    for M in K:
        for t in (0.3, 1.1):
            g = LocalUnitary(tuple(exp_su2(M[q], t) for q in range(rho.n)))
            assert (conjugate(g, rho) - rho).max_abs() < 1e-8


def test_zero_stabilizer_for_generic_state():
    rng = np.random.default_rng(42)
    for n in (2, 3, 4):
        assert stabilizer_basis(random_symmetric(n, rng, 0.3)).dim == 0


def test_werner_stabilizer_is_diagonal_block():
    n = 4
    rho = (werner_basis(n, 0) + 0.1 * werner_basis(n, 1)) / 2**n
    D = decompose_algebra(stabilizer_basis(rho))
    assert D.partition() == (((0, 1, 2, 3),), (), ())
    rng = np.random.default_rng(43)
    g = LocalUnitary.uniform(random_su2(rng), n)
    D2 = decompose_algebra(stabilizer_basis(conjugate(g, rho)))
    assert D2.partition() == D.partition()
