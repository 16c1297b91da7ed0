import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from symstab import (
    DimensionMismatch,
    HermiticityViolation,
    LocalUnitary,
    PauliOperator,
    Unitary2,
    ad_action,
    conjugate,
    dense_to_pauli,
    eta_coeffs,
    exp_su2,
    pauli_to_dense,
    zeta_coeffs,
)
from symstab.pauli import (
    IX,
    SIGMA,
    SU2_BASIS,
    conjugate_element,
    hs_inner,
    index_label,
    local_element,
    local_matrix,
    pack_index,
    parse_index,
    rotation_to_z,
    su2_bracket,
    su2_matrix,
    su2_norm,
    unpack_index,
    weight,
)

from _synthetic import random_local, random_su2

seeds = st.integers(0, 2**32 - 1)


def kron_all(mats):
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def random_op(n, rng, density=0.5):
    vec = rng.normal(size=4**n) * (rng.random(4**n) < density)
    return PauliOperator.from_vector(vec)


def dense_oracle(op):
    out = np.zeros((2**op.n, 2**op.n), dtype=complex)
    for key, v in zip(op.keys, op.values):
        out += v * kron_all([SIGMA[d] for d in unpack_index(key, op.n)])
    return out


# --- indices ---------------------------------------------------------------

def test_index_packing_qubit1_most_significant():
    assert pack_index([3, 0]) == 12
    assert unpack_index(12, 2) == (3, 0)
    assert index_label(12, 2) == "zi"
    assert parse_index("zi", 2) == parse_index("30", 2) == parse_index((3, 0), 2) == 12


def test_index_errors():
    with pytest.raises(DimensionMismatch):
        parse_index("zz", 3)
    with pytest.raises(ValueError):
        parse_index("qz", 2)


# --- dense round trips -------------------------------------------------------

def test_pauli_to_dense_examples():
    assert np.allclose(pauli_to_dense(PauliOperator(1, {"z": 1.0})), np.diag([1, -1]))
    assert np.allclose(pauli_to_dense(PauliOperator(2, {"ii": 0.25})), np.eye(4) / 4)


def test_pauli_to_dense_matches_kronecker_oracle():
    rng = np.random.default_rng(1)
    op = random_op(3, rng, 0.3)
    dense = pauli_to_dense(op)
    assert np.allclose(dense, dense_oracle(op))
    assert np.isclose(np.trace(dense).real, 8 * op.coeff("iii"))


def test_dense_to_pauli_examples():
    assert dense_to_pauli(np.diag([1.0, -1.0])).terms() == {"z": 1.0}
    ket = np.zeros(4)
    ket[1] = 1.0  # |01>
    got = dense_to_pauli(np.outer(ket, ket))
    assert got.terms() == {"ii": 0.25, "iz": -0.25, "zi": 0.25, "zz": -0.25}


def test_dense_to_pauli_rejects_non_hermitian():
    with pytest.raises(HermiticityViolation):
        dense_to_pauli(np.array([[0, 1], [0, 0]], dtype=complex))


@settings(max_examples=30, deadline=None)
@given(seed=seeds, n=st.integers(1, 6))
def test_round_trip(seed, n):
    rng = np.random.default_rng(seed)
    op = random_op(n, rng, 0.2)
    assert dense_to_pauli(pauli_to_dense(op)).allclose(op)


def test_trace_and_tensor():
    a = PauliOperator(1, {"i": 0.5, "x": 0.2})
    b = PauliOperator(2, {"ii": 0.25, "zy": 0.1})
    ab = a.tensor(b)
    assert np.allclose(pauli_to_dense(ab), np.kron(pauli_to_dense(a), pauli_to_dense(b)))
    assert np.isclose(ab.trace(), a.trace() * b.trace())


# --- su(2) conventions -----------------------------------------------------

def test_rescaled_norm_constant():
    # |M|^2 = 2 tr(M^dag M): pinned against the matrices once
    rng = np.random.default_rng(2)
    for _ in range(5):
        x = rng.normal(size=3)
        m = su2_matrix(x)
        assert np.isclose(su2_norm(x), np.sqrt(2 * np.trace(m.conj().T @ m).real))
    assert su2_norm([1.0, 0.0, 0.0]) == 2.0


def test_bracket_table():
    A, B, C = np.eye(3)
    assert np.allclose(su2_bracket(A, B), 2 * C)
    assert np.allclose(su2_bracket(B, C), 2 * A)
    assert np.allclose(su2_bracket(C, A), 2 * B)
    rng = np.random.default_rng(3)
    x, y = rng.normal(size=(2, 3))
    mx, my = su2_matrix(x), su2_matrix(y)
    assert np.allclose(su2_matrix(su2_bracket(x, y)), mx @ my - my @ mx)


# [E, sigma_v] for E in (A, B, C) and v in (x, y, z), frozen from 2x2 commutators
BRACKETS = {
    ("A", "x"): {"y": -2.0}, ("A", "y"): {"x": 2.0}, ("A", "z"): {},
    ("B", "x"): {"z": 2.0}, ("B", "y"): {}, ("B", "z"): {"x": -2.0},
    ("C", "x"): {}, ("C", "y"): {"z": -2.0}, ("C", "z"): {"y": 2.0},
}


@pytest.mark.parametrize("pair", sorted(BRACKETS))
def test_single_qubit_bracket_constants(pair):
    e, v = pair
    M = np.zeros((1, 3))
    M[0, "ABC".index(e)] = 1.0
    got = ad_action(M, PauliOperator(1, {v: 1.0}))
    assert got.terms() == BRACKETS[pair]
    m = SU2_BASIS["ABC".index(e)]
    s = SIGMA["ixyz".index(v)]
    assert np.allclose(pauli_to_dense(got), m @ s - s @ m)


def test_ad_action_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        ad_action(np.zeros((2, 3)), PauliOperator(3, {"iii": 1.0}))


@settings(max_examples=25, deadline=None)
@given(seed=seeds, n=st.integers(1, 4))
def test_ad_action_matches_dense(seed, n):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(n, 3))
    rho = random_op(n, rng)
    m, r = local_matrix(M), pauli_to_dense(rho)
    assert np.allclose(pauli_to_dense(ad_action(M, rho)), m @ r - r @ m, atol=1e-9)


@settings(max_examples=20, deadline=None)
@given(seed=seeds, n=st.integers(1, 4))
def test_ad_action_bilinear(seed, n):
    rng = np.random.default_rng(seed)
    M, N = rng.normal(size=(2, n, 3))
    r1, r2 = random_op(n, rng), random_op(n, rng)
    s, t = rng.normal(size=2)
    lhs = ad_action(s * M + t * N, r1)
    assert lhs.allclose(s * ad_action(M, r1) + t * ad_action(N, r1))
    assert ad_action(M, s * r1 + t * r2).allclose(s * ad_action(M, r1) + t * ad_action(M, r2))


@settings(max_examples=20, deadline=None)
@given(seed=seeds, n=st.integers(1, 4))
def test_jacobi_consistency(seed, n):
    rng = np.random.default_rng(seed)
    M, N = rng.normal(size=(2, n, 3))
    rho = random_op(n, rng)
    lhs = ad_action(M, ad_action(N, rho)) - ad_action(N, ad_action(M, rho))
    assert lhs.allclose(ad_action(su2_bracket(M, N), rho), atol=1e-8)


def test_weight():
    assert weight(np.zeros((4, 3))) == 0
    M = local_element(4, {0: (1, 0, 0), 1: (-1, 0, 0)})
    assert weight(M) == 2
    rng = np.random.default_rng(4)
    for _ in range(10):
        M = rng.normal(size=(6, 3)) * (rng.random((6, 1)) < 0.5)
        assert weight(M) == int(np.count_nonzero(np.any(M != 0, axis=1)))


def test_hs_inner_polarizes_norm():
    rng = np.random.default_rng(5)
    x = rng.normal(size=(3, 3))
    assert np.isclose(hs_inner(x, x), np.sum(su2_norm(x) ** 2))


# --- group level -------------------------------------------------------------

def test_exp_su2_examples():
    g = exp_su2([1.0, 0.0, 0.0], np.pi / 2)
    assert np.allclose(g.matrix, np.diag([np.exp(1j * np.pi / 2), np.exp(-1j * np.pi / 2)]))
    assert np.allclose(exp_su2([0.3, -1.0, 2.0], 0.0).matrix, np.eye(2))


@settings(max_examples=40, deadline=None)
@given(seed=seeds)
def test_exp_su2_matches_expm(seed):
    rng = np.random.default_rng(seed)
    x, t = rng.normal(size=3), rng.uniform(-4, 4)
    g = exp_su2(x, t).matrix
    assert np.allclose(g, expm(t * su2_matrix(x)), atol=1e-10)
    assert np.allclose(g @ g.conj().T, np.eye(2), atol=1e-10)
    assert np.isclose(np.linalg.det(g), 1.0)


def test_unitary2_rotation_homomorphism():
    rng = np.random.default_rng(6)
    for _ in range(20):
        g, h = random_su2(rng), random_su2(rng)
        O = (g @ h).rotation
        assert np.allclose(O, g.rotation @ h.rotation)
        assert np.allclose(O @ O.T, np.eye(3))
        assert np.isclose(np.linalg.det(O), 1.0)
        lift = Unitary2.from_rotation(g.rotation)
        assert lift.is_close(g)


def test_ix_rotation_and_canonical_sign():
    assert np.allclose(IX.rotation, np.diag([1, -1, -1]))
    assert Unitary2(0, -1j).canonical() == IX
    assert Unitary2(-1, 0).canonical() == Unitary2.identity()


def test_rotation_to_z():
    rng = np.random.default_rng(7)
    for w in list(rng.normal(size=(5, 3))) + [np.array([0, 0, -2.0]), np.array([0, 0, 1.0])]:
        assert np.allclose(rotation_to_z(w).rotation @ (w / np.linalg.norm(w)), [0, 0, 1])


def test_conjugate_examples():
    rho = PauliOperator(3, {"iii": 0.125, "zzz": 0.07})
    assert conjugate(LocalUnitary.identity(3), rho).allclose(rho)
    flipped = conjugate(LocalUnitary.uniform(IX, 3), rho)
    assert flipped.allclose(PauliOperator(3, {"iii": 0.125, "zzz": -0.07}))
    with pytest.raises(DimensionMismatch):
        conjugate(LocalUnitary.identity(2), rho)


@settings(max_examples=25, deadline=None)
@given(seed=seeds, n=st.integers(1, 4))
def test_conjugate_matches_dense(seed, n):
    rng = np.random.default_rng(seed)
    g = random_local(n, rng)
    rho = random_op(n, rng)
    got = conjugate(g, rho)
    G = g.matrix
    assert np.allclose(pauli_to_dense(got), G @ pauli_to_dense(rho) @ G.conj().T, atol=1e-9)
    assert np.isclose(got.norm(), rho.norm())
    assert np.isclose(got.trace(), rho.trace())


def test_conjugate_element_matches_dense():
    rng = np.random.default_rng(8)
    g = random_local(3, rng)
    M = rng.normal(size=(3, 3))
    G = g.matrix
    assert np.allclose(local_matrix(conjugate_element(g, M)), G @ local_matrix(M) @ G.conj().T)


def test_flow_fixes_state_when_commuting():
    rho = PauliOperator(2, {"ii": 0.25, "zz": 0.1, "zi": 0.05, "iz": 0.05})
    M = local_element(2, {0: (0.7, 0, 0), 1: (-0.2, 0, 0)})
    assert ad_action(M, rho).max_abs() == 0
    for t in (0.1, 0.7, 1.3):
        g = LocalUnitary(tuple(exp_su2(part, t) for part in M))
        assert conjugate(g, rho).allclose(rho)


# --- bit-string commutator formulas -------------------------------------------

def test_zeta_trivial_cases():
    rng = np.random.default_rng(9)
    rho = pauli_to_dense(random_op(2, rng))
    assert np.allclose(zeta_coeffs(np.zeros(2), rho), 0)
    assert np.allclose(zeta_coeffs(rng.normal(size=2), np.diag(rng.normal(size=4))), 0)


def test_eta_examples():
    rng = np.random.default_rng(10)
    assert np.allclose(eta_coeffs(np.zeros(2), pauli_to_dense(random_op(2, rng))), 0)
    rho = np.diag([1.0, 0.0]).astype(complex)
    expected = 1j * (np.array([[0, 0], [1, 0]]) - np.array([[0, 1], [0, 0]]))
    assert np.allclose(eta_coeffs([1.0], rho), expected)
    C = SU2_BASIS[2]
    assert np.allclose(eta_coeffs([1.0], rho), C @ rho - rho @ C)


@settings(max_examples=25, deadline=None)
@given(seed=seeds, n=st.integers(1, 4))
def test_zeta_eta_match_ad_action(seed, n):
    rng = np.random.default_rng(seed)
    rho = random_op(n, rng)
    dense = pauli_to_dense(rho)
    a, c = rng.normal(size=(2, n))
    MA = np.zeros((n, 3))
    MA[:, 0] = a
    MC = np.zeros((n, 3))
    MC[:, 2] = c
    assert np.allclose(zeta_coeffs(a, dense), pauli_to_dense(ad_action(MA, rho)), atol=1e-9)
    assert np.allclose(eta_coeffs(c, dense), pauli_to_dense(ad_action(MC, rho)), atol=1e-9)
