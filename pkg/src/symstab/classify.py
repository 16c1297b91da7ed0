"""Stabilizer classes of permutation-invariant states, canonical forms and LU equivalence."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ._tol import (
    DEFAULT_TOL,
    BasisExpansionResidual,
    DimensionMismatch,
    IllConditioned,
    NotSymmetric,
    UnclassifiableDimension,
    ZeroClassUnsupported,
)
from .pauli import (
    IX,
    IZ,
    LocalUnitary,
    PauliOperator,
    Unitary2,
    axis_angle_unitary,
    conjugate,
    conjugate_element,
    pauli_to_dense,
    rotation_to_z,
    su2_axis,
)
from .stabilizer import (
    AlgebraBasis,
    canonical_axis,
    decompose_algebra,
    projection_dims,
    stabilizer_basis,
    standard_block,
)
from .states import (
    dicke_representative,
    ghz_representative,
    product_representative,
    werner_representative,
)
from .sympoly import f_n, symmetry_defect

log = logging.getLogger(__name__)

TAGS = ("FullLG", "Werner", "Product", "GHZ", "Dicke", "Zero")

# canonical coefficients are compared to within this multiple of tol.num
CMP_FACTOR = 10.0


@dataclass(frozen=True)
class StabilizerClass:
    tag: str
    n: int
    dim: int
    projection_dims: tuple[int, ...]
    aligner: LocalUnitary
    basis: AlgebraBasis = field(compare=False, repr=False)


def _tag_for(n: int, p: int, d: int, K: AlgebraBasis, tol) -> str:
    if d == 0:
        return "Zero"
    if p == 3 and d == 3 * n:
        return "FullLG"
    if p == 3 and d == 3:
        return "Werner"
    if p == 1:
        if d == n:
            return "Product"
        if n >= 3 and d == n - 1:
            return "GHZ"
        if n >= 3 and d == 1:
            return "Dicke"
        if n == 2 and d == 1:
            m0, m1 = K.elements[0]
            size = np.linalg.norm(m0)
            if np.linalg.norm(m1 - m0) < np.sqrt(tol.num) * size:
                return "Dicke"
            if np.linalg.norm(m1 + m0) < np.sqrt(tol.num) * size:
                return "GHZ"
    raise UnclassifiableDimension(f"no class has projection dim {p} and stabilizer dim {d} at n={n}")


def _werner_aligner(K: AlgebraBasis, tol) -> LocalUnitary:
    n = K.n
    factors = [Unitary2.identity() for _ in range(n)]
    if n == 2:
        # K = {(x, O x)}; O is a symmetric rotation, so the identity or a half turn
        P1, P2 = K.elements[:, 0, :], K.elements[:, 1, :]
        O = P2.T @ np.linalg.inv(P1.T)
        evals, evecs = np.linalg.eigh((O + O.T) / 2)
        if evals[0] < 0:
            axis = su2_axis(evecs[:, -1])
            factors[1] = axis_angle_unitary(axis, np.pi)
    g = LocalUnitary(tuple(factors))
    aligned = K.conjugated(g)
    worst = max(aligned.residual(M / np.sqrt(n)) for M in standard_block(n, range(n)))
    if worst > np.sqrt(tol.num):
        raise IllConditioned(f"Werner stabilizer could not be aligned (residual {worst:.3g})")
    return g


def _axis_aligner(K: AlgebraBasis) -> LocalUnitary:
    _, _, vt = np.linalg.svd(K.elements[:, 0, :], full_matrices=False)
    w = canonical_axis(su2_axis(vt[0]))
    return LocalUnitary.uniform(rotation_to_z(w), K.n)


def classify(rho: PauliOperator, tol=DEFAULT_TOL, *, check_symmetry: bool = True) -> StabilizerClass:
    """Stabilizer class of a permutation-invariant state and an aligner onto the standard stabilizer.

    With ``check_symmetry=False`` the tag is still computed from the stabilizer
    dimensions (useful for locally conjugated inputs) and the aligner is the
    per-qubit one from the block decomposition, which needs no symmetry.
    """
    if check_symmetry:
        defect = symmetry_defect(rho)
        if defect > tol.num:
            raise NotSymmetric(f"permutation orbits differ by {defect:.3g}")
    n = rho.n
    K = stabilizer_basis(rho, tol)
    dims = tuple(projection_dims(K, tol))
    if len(set(dims)) != 1:
        raise UnclassifiableDimension(f"projection dims differ across qubits: {dims}")
    tag = _tag_for(n, dims[0], K.dim, K, tol)
    if not check_symmetry:
        aligner = decompose_algebra(K, tol).aligner
    elif tag == "Werner":
        aligner = _werner_aligner(K, tol)
    elif tag in ("Product", "GHZ", "Dicke"):
        aligner = _axis_aligner(K)
    else:
        aligner = LocalUnitary.identity(n)
    return StabilizerClass(tag, n, K.dim, dims, aligner, K)


# --------------------------------------------------------------------------
# coefficient extraction from an aligned state
# --------------------------------------------------------------------------

def _dicke_keys(n: int) -> list[tuple[int, int]]:
    return [(r, s) for r in range(n + 1) for s in range(n // 2 + 1) if r + 2 * s <= n]


def _extract(tag: str, rho: PauliOperator, tol):
    """Coefficients of an aligned state in its class basis, plus the expansion residual."""
    n = rho.n
    if tag == "GHZ":
        dense = pauli_to_dense(rho)
        hw = np.array([bin(i).count("1") for i in range(2**n)])
        diag = np.real(np.diag(dense))
        d = [float(diag[hw == k].sum()) for k in range(n + 1)]
        corner = complex(dense[0, -1])
        rebuilt = pauli_to_dense(ghz_representative(n, d, corner))
        return {"d": d, "corner": corner}, float(np.abs(dense - rebuilt).max())
    if tag == "FullLG":
        c0 = rho.trace()
        rest = (rho - PauliOperator.identity(n) * (c0 / 2**n)).max_abs()
        return {"scale": c0}, rest
    G = f_n(rho, tol) / 2**n
    if tag == "Werner":
        c = [G.coeff(2 * k, 0, 0) for k in range(n // 2 + 1)]
        rebuilt = werner_representative(n, c)
    elif tag == "Product":
        c = [G.coeff(0, 0, k) for k in range(n + 1)]
        rebuilt = product_representative(n, c)
    elif tag == "Dicke":
        b = {rs: G.coeff(2 * rs[1], 0, rs[0]) for rs in _dicke_keys(n)}
        return {"b": b}, (rho - dicke_representative(n, b)).max_abs()
    else:
        raise ValueError(tag)
    return {"c": c}, (rho - rebuilt).max_abs()


def _vector(tag: str, coeffs: dict) -> np.ndarray:
    if tag == "GHZ":
        return np.array(list(coeffs["d"]) + [coeffs["corner"].real, coeffs["corner"].imag])
    if tag == "Dicke":
        return np.array([coeffs["b"][k] for k in sorted(coeffs["b"])])
    if tag == "FullLG":
        return np.array([coeffs["scale"]])
    return np.array(coeffs["c"], dtype=float)


def _class_moves(tag: str, n: int, coeffs: dict, eps: float) -> list[tuple[str, LocalUnitary]]:
    """Local unitaries that carry aligned states of this class to aligned states.

    The uniform flip is the documented twin.  The single-qubit moves exist only
    when every coefficient they would desymmetrize vanishes.
    """
    flip = LocalUnitary.uniform(IX, n)
    last = [Unitary2.identity()] * (n - 1)
    if tag == "Product":
        moves = [("twin", flip)]
        if n >= 2 and all(abs(c) <= eps for c in coeffs["c"][1:n]):
            moves.append(("single_flip", LocalUnitary(tuple(last + [IX]))))
        return moves
    if tag == "Dicke":
        moves = [("twin", flip)]
        b = coeffs["b"]
        if n % 2 == 0 and all(abs(v) <= eps for (r, s), v in b.items() if 1 <= s and 2 * s < n):
            moves.append(("single_phase", LocalUnitary(tuple(last + [IZ]))))
        return moves
    if tag == "GHZ":
        return [("twin", flip)]
    return []


@dataclass(frozen=True)
class CanonicalForm:
    """Normal form of a state within its stabilizer class.

    Coefficients are in the units of the class representatives: Werner and
    Product ``c`` multiply the symmetrized basis operators, Dicke ``b[r, s]``
    multiplies ``Sym((xx + yy)^s z^r Id^(n-r-2s))``, GHZ stores the
    weight-``k`` diagonal totals ``d`` and the real corner coherence ``gamma``,
    and FullLG stores the trace.  ``twin`` is the coefficient set given by the
    class's sign/reversal rule, or None where the class is unique.
    """

    tag: str
    n: int
    coefficients: dict
    twin: dict | None
    aligner: LocalUnitary
    residual: float
    alternatives: tuple = field(default=(), compare=False, repr=False)

    def vector(self) -> np.ndarray:
        return _vector(self.tag, _internal(self.tag, self.coefficients))

    def representative(self) -> PauliOperator:
        return _rebuild(self.tag, self.n, self.coefficients)


def _internal(tag: str, public: dict) -> dict:
    if tag == "GHZ":
        return {"d": public["d"], "corner": complex(public["gamma"])}
    return public


def _public(tag: str, coeffs: dict) -> dict:
    if tag == "GHZ":
        return {"d": list(coeffs["d"]), "gamma": float(coeffs["corner"].real)}
    return coeffs


def _rebuild(tag: str, n: int, coeffs: dict) -> PauliOperator:
    if tag == "Werner":
        return werner_representative(n, coeffs["c"])
    if tag == "Product":
        return product_representative(n, coeffs["c"])
    if tag == "Dicke":
        return dicke_representative(n, coeffs["b"])
    if tag == "GHZ":
        return ghz_representative(n, coeffs["d"], coeffs["gamma"])
    if tag == "FullLG":
        return PauliOperator.identity(n) * (coeffs["scale"] / 2**n)
    raise ZeroClassUnsupported(tag)


def twin_rule(tag: str, n: int, coefficients: dict) -> dict | None:
    """Alternative coefficients from the class's nonuniqueness rule (None: unique)."""
    if tag == "Product":
        return {"c": [(-1) ** k * c for k, c in enumerate(coefficients["c"])]}
    if tag == "Dicke":
        return {"b": {(r, s): (-1) ** r * v for (r, s), v in coefficients["b"].items()}}
    if tag == "GHZ":
        return {"d": list(reversed(coefficients["d"])), "gamma": coefficients["gamma"]}
    return None


def _first_significant(values, eps: float) -> float:
    for v in values:
        if abs(v) > eps:
            return v
    return 0.0


def _lex_greater(u, v, eps: float) -> bool:
    for a, b in zip(u, v):
        if abs(a - b) > eps:
            return a > b
    return False


def _apply(tag: str, rho_a: PauliOperator, move: LocalUnitary, tol):
    moved = conjugate(move, rho_a, tol)
    coeffs, res = _extract(tag, moved, tol)
    return moved, coeffs, res


def canonical_form(rho: PauliOperator, tol=DEFAULT_TOL, cls: StabilizerClass | None = None) -> CanonicalForm:
    cls = cls or classify(rho, tol)
    tag, n = cls.tag, cls.n
    if tag == "Zero":
        raise ZeroClassUnsupported("states with zero stabilizer have no canonical form here")
    eps = CMP_FACTOR * tol.num
    g = cls.aligner
    rho_a = conjugate(g, rho, tol)

    if tag == "GHZ":
        corner = complex(pauli_to_dense(rho_a)[0, -1])
        if abs(corner) > tol.sparse:
            t = -np.angle(corner) / (2 * n)
            phase = LocalUnitary.uniform(Unitary2(complex(np.cos(t), np.sin(t)), 0j), n)
            g = phase @ g
            rho_a = conjugate(phase, rho_a, tol)

    coeffs, res = _extract(tag, rho_a, tol)

    # sign / ordering conventions
    if tag == "Product":
        odd = _first_significant(coeffs["c"][1::2], eps)
        if odd < 0:
            move = LocalUnitary.uniform(IX, n)
            rho_a, coeffs, res = _apply(tag, rho_a, move, tol)
            g = move @ g
        if n >= 2 and all(abs(c) <= eps for c in coeffs["c"][1:n]) and coeffs["c"][n] < -eps:
            move = LocalUnitary(tuple([Unitary2.identity()] * (n - 1) + [IX]))
            rho_a, coeffs, res = _apply(tag, rho_a, move, tol)
            g = move @ g
    elif tag == "Dicke":
        b = coeffs["b"]
        odd = _first_significant([b[k] for k in sorted(b) if k[0] % 2], eps)
        if odd < 0:
            move = LocalUnitary.uniform(IX, n)
            rho_a, coeffs, res = _apply(tag, rho_a, move, tol)
            g = move @ g
        b = coeffs["b"]
        lone = [v for (r, s), v in b.items() if 1 <= s and 2 * s < n]
        if n % 2 == 0 and all(abs(v) <= eps for v in lone) and b[(0, n // 2)] < -eps:
            move = LocalUnitary(tuple([Unitary2.identity()] * (n - 1) + [IZ]))
            rho_a, coeffs, res = _apply(tag, rho_a, move, tol)
            g = move @ g
    elif tag == "GHZ":
        if _lex_greater(coeffs["d"][::-1], coeffs["d"], eps):
            move = LocalUnitary.uniform(IX, n)
            rho_a, coeffs, res = _apply(tag, rho_a, move, tol)
            g = move @ g

    if res > eps:
        raise BasisExpansionResidual(f"{tag} expansion leaves residual {res:.3g}")

    alternatives = []
    for name, move in _class_moves(tag, n, coeffs, eps):
        _, alt, alt_res = _apply(tag, rho_a, move, tol)
        if alt_res <= eps:
            alternatives.append((name, move, alt))
    public = _public(tag, coeffs)
    return CanonicalForm(
        tag,
        n,
        public,
        twin_rule(tag, n, public),
        g.canonical(),
        res,
        tuple(alternatives),
    )


# --------------------------------------------------------------------------
# equivalence
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Equivalence:
    verdict: str  # "Equivalent", "Inequivalent" or "Unknown"
    witness: LocalUnitary | None = None
    route: str = ""
    note: str = ""
    residual: float | None = None

    def __bool__(self):
        return self.verdict == "Equivalent"


def lu_equivalent(rho: PauliOperator, rho2: PauliOperator, tol=DEFAULT_TOL) -> Equivalence:
    """Decide whether ``rho2 = g rho g^dag`` for a local unitary ``g``."""
    if rho.n != rho2.n:
        raise DimensionMismatch(f"qubit counts differ: {rho.n} vs {rho2.n}")
    c1 = classify(rho, tol)
    c2 = classify(rho2, tol)
    if c1.tag != c2.tag:
        return Equivalence("Inequivalent", note=f"classes differ: {c1.tag} vs {c2.tag}")
    if c1.tag == "Zero":
        return Equivalence("Unknown", note="zero stabilizer: outside the classification")
    f1 = canonical_form(rho, tol, c1)
    f2 = canonical_form(rho2, tol, c2)
    eps = CMP_FACTOR * tol.num
    v1 = f1.vector()

    candidates = [("principal", LocalUnitary.identity(rho.n), _internal(f2.tag, f2.coefficients))]
    for name, move, alt in f2.alternatives:
        candidates.append((name, move, alt))
    for name, move, coeffs in candidates:
        v2 = _vector(f2.tag, coeffs)
        if v1.shape != v2.shape or np.abs(v1 - v2).max() > eps:
            continue
        # g1 rho g1^dag = move g2 rho2 g2^dag move^dag
        witness = ((move @ f2.aligner).dagger() @ f1.aligner).canonical()
        resid = (conjugate(witness, rho, tol) - rho2).max_abs()
        if resid > eps:
            return Equivalence(
                "Unknown",
                route=name,
                note=f"coefficients match but witness check failed ({resid:.3g})",
                residual=resid,
            )
        note = ""
        first = witness.factors[0]
        if rho.n >= 3 and not all(f.is_close(first) for f in witness.factors):
            note = "witness is not a uniform h^(x)n"
            log.info("verified %s equivalence with a non-uniform witness", f1.tag)
        return Equivalence("Equivalent", witness, name, note, resid)
    return Equivalence("Inequivalent", note="canonical coefficients differ")


# --------------------------------------------------------------------------
# normalizer check
# --------------------------------------------------------------------------

def standard_stabilizer(tag: str, n: int) -> AlgebraBasis:
    """Aligned stabilizer of each class."""
    eye = np.zeros((n, n, 3))
    for q in range(n):
        eye[q, q, 0] = 1.0
    if tag == "FullLG":
        elems = list(np.eye(3 * n).reshape(3 * n, n, 3))
    elif tag == "Werner":
        elems = list(standard_block(n, range(n)))
    elif tag == "Product":
        elems = list(eye)
    elif tag == "GHZ":
        elems = [eye[0] - eye[q] for q in range(1, n)]
    elif tag == "Dicke":
        elems = [eye.sum(axis=0)]
    else:
        elems = []
    return AlgebraBasis.span(n, np.array(elems).reshape(-1, n, 3)) if elems else AlgebraBasis(n, np.zeros((0, n, 3)))


@dataclass(frozen=True)
class DiagReport:
    forms: tuple[str, ...]
    signs: tuple[int, ...]
    normalizes: bool
    ok: bool


def check_diag_antidiag(g: LocalUnitary, cls, tol=DEFAULT_TOL) -> DiagReport:
    """Per-factor diagonal/antidiagonal form of ``g`` and whether it normalizes the class stabilizer."""
    tag = cls if isinstance(cls, str) else cls.tag
    n = g.n
    forms, signs = [], []
    for f in g.factors:
        if abs(f.b) <= tol.unit:
            forms.append("diagonal")
            signs.append(1)
        elif abs(f.a) <= tol.unit:
            forms.append("antidiagonal")
            signs.append(-1)
        else:
            forms.append("generic")
            signs.append(0)
    K = standard_stabilizer(tag, n)
    moved = conjugate_element(g, K.elements)
    normalizes = all(K.residual(M) <= np.sqrt(tol.num) for M in moved)
    return DiagReport(tuple(forms), tuple(signs), normalizes, normalizes and "generic" not in forms)
