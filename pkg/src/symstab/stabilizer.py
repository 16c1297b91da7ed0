"""Stabilizer subalgebras of local unitary actions and their block structure.

Algebra elements are ``(n, 3)`` coordinate arrays (see :mod:`symstab.pauli`).
Bases are orthonormal for the sum over qubits of the rescaled Hilbert-Schmidt
inner product, under which ``A, B, C`` each have norm 2; in coordinates this is
four times the Euclidean inner product.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import qr

from ._tol import (
    DEFAULT_TOL,
    MAX_QUBITS,
    IllConditioned,
    NotClosed,
    Rank2Anomaly,
    ResourceLimit,
)
from .pauli import (
    LocalUnitary,
    PauliOperator,
    Unitary2,
    ad_action,
    axis_angle_unitary,
    conjugate_element,
    rotation_to_z,
    su2_axis,
    su2_bracket,
    weight,
)

__all__ = [
    "AlgebraBasis",
    "BlockDecomposition",
    "BlockCheck",
    "stabilizer_basis",
    "projection_dim",
    "projection_dims",
    "decompose_algebra",
    "verify_block_relations",
    "standard_block",
    "canonical_axis",
    "bracket",
    "inner",
    "weight",
]


def inner(x, y) -> float:
    """Global inner product of two local algebra elements."""
    return 4.0 * float(np.sum(np.asarray(x) * np.asarray(y)))


def bracket(x, y) -> np.ndarray:
    return su2_bracket(x, y)


def _pivoted_basis(vectors: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis (rows) of the row span of ``vectors``.

    The projector onto the span is basis independent, so a pivoted QR of it
    gives the same answer whichever orthonormal rows we started from.
    """
    d = vectors.shape[0]
    if d == 0:
        return vectors
    proj = vectors.T @ vectors
    q, _, _ = qr(proj, pivoting=True)
    out = q[:, :d].T.copy()
    for row in out:
        j = int(np.argmax(np.abs(row)))
        if row[j] < 0:
            row *= -1
    return out


@dataclass(frozen=True)
class AlgebraBasis:
    """Orthonormal basis of a subalgebra of the local algebra, shape ``(d, n, 3)``."""

    n: int
    elements: np.ndarray
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        arr = np.asarray(self.elements, dtype=float).reshape(-1, self.n, 3)
        arr.setflags(write=False)
        object.__setattr__(self, "elements", arr)

    @property
    def dim(self) -> int:
        return int(self.elements.shape[0])

    @property
    def flat(self) -> np.ndarray:
        return self.elements.reshape(self.dim, 3 * self.n)

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.elements)

    @classmethod
    def span(cls, n: int, elements, tol=DEFAULT_TOL) -> AlgebraBasis:
        """Orthonormalize an arbitrary spanning set."""
        arr = np.asarray(elements, dtype=float).reshape(-1, 3 * n)
        if arr.shape[0] == 0:
            return cls(n, np.zeros((0, n, 3)))
        _, s, vt = np.linalg.svd(arr, full_matrices=False)
        r = int(np.sum(s > tol.rank * max(s[0], 1e-300)))
        return cls(n, _pivoted_basis(vt[:r]) / 2.0)

    def coordinates(self, M) -> np.ndarray:
        """Expansion coefficients of ``M`` (its orthogonal projection) in this basis."""
        return 4.0 * self.flat @ np.asarray(M, dtype=float).ravel()

    def residual(self, M) -> float:
        """Distance (global norm) from ``M`` to the span."""
        M = np.asarray(M, dtype=float).ravel()
        rest = M - self.coordinates(M) @ self.flat
        return 2.0 * float(np.linalg.norm(rest))

    def orthonormality_error(self) -> float:
        if self.dim == 0:
            return 0.0
        g = 4.0 * self.flat @ self.flat.T
        return float(np.abs(g - np.eye(self.dim)).max())

    def closure_residual(self) -> float:
        """Largest distance of a pairwise bracket from the span."""
        worst = 0.0
        for j in range(self.dim):
            for k in range(j + 1, self.dim):
                worst = max(worst, self.residual(su2_bracket(self.elements[j], self.elements[k])))
        return worst

    def conjugated(self, g: LocalUnitary) -> AlgebraBasis:
        """The algebra ``g K g^dag`` (orthonormality is preserved)."""
        return AlgebraBasis(self.n, conjugate_element(g, self.elements))


def _single_generators(n: int):
    eye = np.eye(3)
    for q in range(n):
        for a in range(3):
            M = np.zeros((n, 3))
            M[q] = eye[a]
            yield M


def stabilizer_basis(rho: PauliOperator, tol=DEFAULT_TOL) -> AlgebraBasis:
    """Orthonormal basis of ``{M local : [M, rho] = 0}``."""
    n = rho.n
    if n > MAX_QUBITS:
        raise ResourceLimit(f"stabilizer of an n={n} qubit state")
    cols = [ad_action(M, rho, tol) for M in _single_generators(n)]
    keys = np.unique(np.concatenate([c.keys for c in cols] + [np.zeros(0, dtype=np.int64)]))
    X = np.zeros((keys.size, 3 * n))
    for j, c in enumerate(cols):
        X[np.searchsorted(keys, c.keys), j] = c.values

    if keys.size == 0:
        s = np.zeros(3 * n)
        vt = np.eye(3 * n)
    else:
        _, s_part, vt = np.linalg.svd(X, full_matrices=True)
        s = np.zeros(3 * n)
        s[: s_part.size] = s_part
    smax = float(s[0])
    threshold = tol.rank * smax
    keep = s > threshold
    rank = int(keep.sum())
    gap = np.inf
    if 0 < rank < 3 * n:
        dropped = float(s[rank])
        gap = float(s[rank - 1]) / dropped if dropped > 0 else np.inf
        if gap < tol.gap:
            raise IllConditioned(
                f"singular value gap {gap:.3g} below {tol.gap:g} "
                f"(retained {s[rank - 1]:.3g}, discarded {dropped:.3g})"
            )

    basis = _pivoted_basis(vt[rank:])
    residual = float(np.linalg.norm(X @ basis.T, axis=0).max()) if basis.size else 0.0
    if residual > max(threshold, tol.num):
        raise IllConditioned(f"nullspace residual {residual:.3g}")
    diag = {
        "singular_values": s.tolist(),
        "rank": rank,
        "gap": gap,
        "threshold": threshold,
        "residual": residual,
    }
    return AlgebraBasis(n, basis / 2.0, diag)


def _part_svd(K: AlgebraBasis, i: int):
    P = K.elements[:, i, :]
    if P.size == 0:
        return np.zeros(0), np.zeros((0, K.dim))
    _, s, vt = np.linalg.svd(P.T, full_matrices=False)
    return s, vt


def _part_rank(s: np.ndarray, scale: float, tol) -> int:
    if scale <= 0:
        return 0
    return int(np.sum(s > tol.rank * scale))


def projection_dim(K: AlgebraBasis, i: int, tol=DEFAULT_TOL) -> int:
    """Dimension of the image of ``K`` under ``M -> M_i``."""
    if not 0 <= i < K.n:
        raise IndexError(f"qubit {i} out of range for n={K.n}")
    s, _ = _part_svd(K, i)
    r = _part_rank(s, 0.5 if K.dim else 0.0, tol)
    if r == 2:
        raise Rank2Anomaly(f"projection onto qubit {i + 1} has rank 2; the algebra is not bracket closed")
    return r


def projection_dims(K: AlgebraBasis, tol=DEFAULT_TOL) -> list[int]:
    return [projection_dim(K, i, tol) for i in range(K.n)]


@dataclass(frozen=True)
class Block:
    qubits: tuple[int, ...]
    U: np.ndarray
    V: np.ndarray
    W: np.ndarray


@dataclass(frozen=True)
class BlockDecomposition:
    """Partition of the qubits into su(2) blocks, the abelian summand S and the trivial set R.

    ``aligner`` conjugates every block triple onto ``(A/2, B/2, C/2)`` on each
    of its qubits and every S-direction onto the ``A`` axis.
    """

    n: int
    blocks: tuple[Block, ...]
    s_qubits: tuple[int, ...]
    s_basis: AlgebraBasis
    r_qubits: tuple[int, ...]
    aligner: LocalUnitary

    def partition(self) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...], tuple[int, ...]]:
        return tuple(b.qubits for b in self.blocks), self.s_qubits, self.r_qubits


def _structure_constants(K: AlgebraBasis, tol):
    d = K.dim
    c = np.zeros((d, d, d))
    worst = 0.0
    for j in range(d):
        for k in range(j + 1, d):
            br = su2_bracket(K.elements[j], K.elements[k])
            coords = K.coordinates(br)
            rest = br.ravel() - coords @ K.flat
            worst = max(worst, 2.0 * float(np.linalg.norm(rest)))
            c[j, k] = coords
            c[k, j] = -coords
    if worst > tol.num:
        raise NotClosed(f"bracket leaves the span by {worst:.3g}")
    return c


def _triple(E: np.ndarray, i: int):
    """Generator triple of a simple ideal spanned by the rows of ``E`` (shape (3, n, 3))."""
    parts = np.linalg.norm(E[:, i, :], axis=1)
    P = E[int(np.argmax(parts))]
    V = P / (2.0 * np.linalg.norm(P[i]))
    # the element whose i-th part is most orthogonal to V_i
    vi = V[i] / np.linalg.norm(V[i])
    scores = []
    for M in E:
        mi = np.linalg.norm(M[i])
        scores.append(abs(np.dot(M[i], vi)) / mi if mi > 0 else np.inf)
    Up = E[int(np.argmin(scores))]
    Wr = su2_bracket(Up, V)
    W = Wr / (2.0 * np.linalg.norm(Wr[i]))
    U = su2_bracket(V, W)
    return U, V, W


def _align_block_qubit(u: np.ndarray, v: np.ndarray) -> Unitary2:
    h = rotation_to_z(su2_axis(u))
    vy = h.rotation @ su2_axis(v)
    angle = np.pi / 2 - np.arctan2(vy[1], vy[0])
    return axis_angle_unitary([0.0, 0.0, 1.0], angle) @ h


def canonical_axis(w: np.ndarray) -> np.ndarray:
    """Flip ``w`` so the first non-negligible of (z, y, x) is positive."""
    for j in (2, 1, 0):
        if abs(w[j]) > 1e-9 * np.linalg.norm(w):
            return w if w[j] > 0 else -w
    return w


def decompose_algebra(K: AlgebraBasis, tol=DEFAULT_TOL) -> BlockDecomposition:
    """Split ``K`` into simple su(2) blocks plus its center.

    The Killing form ``tr(ad x ad y)`` vanishes exactly on the center.  The
    simple ideals of the remaining semisimple part act on disjoint sets of
    qubits, so they are separated by comparing the row spaces of the per-qubit
    part maps.
    """
    n, d = K.n, K.dim
    factors = [Unitary2.identity() for _ in range(n)]
    if d == 0:
        empty = AlgebraBasis(n, np.zeros((0, n, 3)))
        return BlockDecomposition(n, (), (), empty, tuple(range(n)), LocalUnitary(tuple(factors)))

    c = _structure_constants(K, tol)
    # ad(K_j) as a matrix acting on coefficient vectors: (ad_j)[l, k] = c[j, k, l]
    ad = np.transpose(c, (0, 2, 1))
    kill = np.einsum("jlm,kml->jk", ad, ad)
    kill = (kill + kill.T) / 2
    evals, evecs = np.linalg.eigh(kill)
    # a simple block on m qubits has Killing eigenvalues -2/m, far above the noise
    scale = max(float(np.abs(evals).max()), 1.0)
    semisimple = np.abs(evals) > tol.rank * scale
    D = np.einsum("ij,jqa->iqa", evecs[:, semisimple].T, K.elements)
    Z = np.einsum("ij,jqa->iqa", evecs[:, ~semisimple].T, K.elements)
    if D.shape[0] % 3:
        raise IllConditioned(f"semisimple part has dimension {D.shape[0]}, not a multiple of 3")

    # per-qubit row-space projectors of the semisimple part
    Dflat = D.reshape(D.shape[0], 3 * n)
    proj = {}
    for q in range(n):
        if D.shape[0] == 0:
            break
        _, s, vt = np.linalg.svd(D[:, q, :].T, full_matrices=False)
        r = _part_rank(s, 0.5, tol)
        if r == 0:
            continue
        if r != 3:
            raise Rank2Anomaly(f"semisimple part projects onto qubit {q + 1} with rank {r}")
        proj[q] = vt[:3]

    groups: list[list[int]] = []
    for q, rows in proj.items():
        for grp in groups:
            overlap = float(np.sum((proj[grp[0]] @ rows.T) ** 2))
            if overlap > 2.9:
                grp.append(q)
                break
            if overlap > 0.1:
                raise IllConditioned(f"qubits {grp[0] + 1} and {q + 1} share an ideal only partially")
        else:
            groups.append([q])
    if 3 * len(groups) != D.shape[0]:
        raise IllConditioned("simple ideals do not account for the semisimple part")

    blocks = []
    for grp in groups:
        E = (proj[grp[0]] @ Dflat).reshape(3, n, 3)
        support = [q for q in range(n) if np.linalg.norm(E[:, q, :]) > tol.rank]
        if support != grp:
            raise IllConditioned(f"ideal support {support} differs from qubit group {grp}")
        U, V, W = _triple(E, grp[0])
        for q in grp:
            factors[q] = _align_block_qubit(U[q], V[q])
        blocks.append(Block(tuple(grp), U, V, W))

    s_basis = AlgebraBasis.span(n, Z, tol) if Z.shape[0] else AlgebraBasis(n, np.zeros((0, n, 3)))
    block_qubits = set(proj)
    s_qubits = []
    for q in range(n):
        if s_basis.dim == 0:
            break
        _, sv, vt = np.linalg.svd(s_basis.elements[:, q, :], full_matrices=False)
        r = _part_rank(sv, 0.5, tol)
        if r == 0:
            continue
        if r != 1 or q in block_qubits:
            raise Rank2Anomaly(f"center projects onto qubit {q + 1} with rank {r}")
        s_qubits.append(q)
        factors[q] = rotation_to_z(canonical_axis(su2_axis(vt[0])))
    r_qubits = [q for q in range(n) if q not in block_qubits and q not in s_qubits]
    return BlockDecomposition(
        n,
        tuple(blocks),
        tuple(s_qubits),
        s_basis,
        tuple(r_qubits),
        LocalUnitary(tuple(factors)),
    )


def standard_block(n: int, qubits) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The aligned triple ``(A/2, B/2, C/2)`` on every qubit of ``qubits``."""
    out = []
    for a in range(3):
        M = np.zeros((n, 3))
        for q in qubits:
            M[q, a] = 0.5
        out.append(M)
    return tuple(out)


@dataclass(frozen=True)
class BlockCheck:
    qubits: tuple[int, ...]
    uv_w: float
    vw_u: float
    wu_v: float
    orthonormality: float
    ok: bool


def _norm(M) -> float:
    return 2.0 * float(np.linalg.norm(M))


def verify_block_relations(D: BlockDecomposition, tol=DEFAULT_TOL) -> list[BlockCheck]:
    """Bracket relations and per-qubit orthonormality of every block triple."""
    out = []
    for b in D.blocks:
        r1 = _norm(su2_bracket(b.U, b.V) - b.W)
        r2 = _norm(su2_bracket(b.V, b.W) - b.U)
        r3 = _norm(su2_bracket(b.W, b.U) - b.V)
        orth = 0.0
        for q in b.qubits:
            frame = np.array([b.U[q], b.V[q], b.W[q]])
            orth = max(orth, float(np.abs(4.0 * frame @ frame.T - np.eye(3)).max()))
        ok = max(r1, r2, r3) < tol.num and orth < tol.orth
        out.append(BlockCheck(b.qubits, r1, r2, r3, orth, ok))
    return out
