"""Symmetric operators as real polynomials in x, y, z and the rotation action on them.

A symmetric operator is written in the basis
``2**-n Sym(sigma_0^{n0} sigma_1^{n1} sigma_2^{n2} sigma_3^{n3})`` and the
coefficient of that element becomes the coefficient of ``x^n1 y^n2 z^n3``.
Mixtures map to mixtures, symmetrized tensor products to products, and a
uniform conjugation ``g^{(x)n}`` to the substitution ``(x, y, z) -> (x, y, z) Phi(g)``.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial
from typing import Mapping

import numpy as np
from scipy.signal import convolve

from ._tol import DEFAULT_TOL, MAX_QUBITS, DegreeTooHigh, NotSymmetric, ResourceLimit
from .pauli import PauliOperator, Unitary2, key_digits


class Polynomial3:
    """Real polynomial in x, y, z stored as a dense cube of coefficients.

    ``coef[n1, n2, n3]`` multiplies ``x**n1 * y**n2 * z**n3``.
    """

    __slots__ = ("coef",)

    def __init__(self, terms: Mapping[tuple[int, int, int], float] | None = None):
        terms = dict(terms or {})
        size = 1 + max((max(e) for e in terms), default=0)
        self.coef = np.zeros((size, size, size))
        for (i, j, k), v in terms.items():
            if min(i, j, k) < 0:
                raise ValueError("negative exponent")
            self.coef[i, j, k] += v

    @classmethod
    def from_array(cls, coef) -> Polynomial3:
        p = cls.__new__(cls)
        coef = np.asarray(coef, dtype=float)
        size = max(coef.shape)
        p.coef = np.zeros((size, size, size))
        p.coef[: coef.shape[0], : coef.shape[1], : coef.shape[2]] = coef
        return p

    @classmethod
    def constant(cls, c: float = 1.0) -> Polynomial3:
        return cls({(0, 0, 0): c})

    @classmethod
    def variables(cls) -> tuple[Polynomial3, Polynomial3, Polynomial3]:
        return cls({(1, 0, 0): 1.0}), cls({(0, 1, 0): 1.0}), cls({(0, 0, 1): 1.0})

    # -- access -------------------------------------------------------------

    @property
    def degree(self) -> int:
        nz = np.argwhere(self.coef != 0)
        return int(nz.sum(axis=1).max()) if nz.size else 0

    def coeff(self, n1: int, n2: int, n3: int) -> float:
        s = self.coef.shape[0]
        if max(n1, n2, n3) >= s:
            return 0.0
        return float(self.coef[n1, n2, n3])

    def terms(self, drop: float = 0.0) -> dict[tuple[int, int, int], float]:
        out = {}
        for idx in np.argwhere(np.abs(self.coef) > drop):
            i, j, k = map(int, idx)
            out[(i, j, k)] = float(self.coef[i, j, k])
        return dict(sorted(out.items(), key=lambda kv: (sum(kv[0]), kv[0])))

    def max_abs(self) -> float:
        return float(np.abs(self.coef).max()) if self.coef.size else 0.0

    def allclose(self, other: Polynomial3, atol: float = DEFAULT_TOL.num) -> bool:
        return (self - other).max_abs() <= atol

    def __call__(self, x, y, z):
        i, j, k = np.indices(self.coef.shape)
        return float(np.sum(self.coef * x**i * y**j * z**k))

    # -- arithmetic ---------------------------------------------------------

    def _padded(self, other: Polynomial3):
        s = max(self.coef.shape[0], other.coef.shape[0])
        a = np.zeros((s, s, s))
        b = np.zeros((s, s, s))
        a[tuple(slice(0, d) for d in self.coef.shape)] = self.coef
        b[tuple(slice(0, d) for d in other.coef.shape)] = other.coef
        return a, b

    def __add__(self, other):
        if not isinstance(other, Polynomial3):
            return self + Polynomial3.constant(float(other))
        a, b = self._padded(other)
        return Polynomial3.from_array(a + b)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial3.from_array(-self.coef)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Polynomial3):
            return poly_product(self, other)
        return Polynomial3.from_array(float(other) * self.coef)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def __pow__(self, k: int):
        out = Polynomial3.constant(1.0)
        for _ in range(int(k)):
            out = out * self
        return out

    def __repr__(self):
        parts = [f"{v:+.6g}*x^{i}y^{j}z^{k}" for (i, j, k), v in self.terms().items()]
        return "Polynomial3(" + (" ".join(parts) or "0") + ")"


def poly_product(f: Polynomial3, g: Polynomial3) -> Polynomial3:
    """Ordinary product; corresponds to the symmetrized tensor product of operators."""
    out = convolve(f.coef, g.coef, method="direct")
    return Polynomial3.from_array(out)


# --------------------------------------------------------------------------
# permutation orbits of Pauli strings
# --------------------------------------------------------------------------

def _class_ids(keys: np.ndarray, n: int) -> np.ndarray:
    d = key_digits(keys, n)
    n1 = (d == 1).sum(axis=1)
    n2 = (d == 2).sum(axis=1)
    n3 = (d == 3).sum(axis=1)
    return (n1 * (n + 1) + n2) * (n + 1) + n3


@lru_cache(maxsize=None)
def _orbit_table(n: int):
    """Class id of every key, and the orbit size of every class."""
    if n > MAX_QUBITS:
        raise ResourceLimit(f"orbit table for n={n} qubits")
    keys = np.arange(4**n, dtype=np.int64)
    ids = _class_ids(keys, n)
    sizes = np.bincount(ids, minlength=(n + 1) ** 3)
    ids.setflags(write=False)
    sizes.setflags(write=False)
    return ids, sizes


def _decode_class(cid: int, n: int) -> tuple[int, int, int]:
    n3 = cid % (n + 1)
    n2 = (cid // (n + 1)) % (n + 1)
    n1 = cid // (n + 1) ** 2
    return int(n1), int(n2), int(n3)


def multinomial(*counts: int) -> int:
    out = factorial(sum(counts))
    for c in counts:
        out //= factorial(c)
    return out


def _orbit_totals(op: PauliOperator):
    ids, sizes = _orbit_table(op.n)
    own = ids[op.keys]
    totals = np.bincount(own, weights=op.values, minlength=sizes.size)
    return own, totals, sizes


def symmetrize(op: PauliOperator, tol=DEFAULT_TOL) -> PauliOperator:
    """Average of ``P_pi op P_pi^-1`` over all qubit permutations.

    Each coefficient is replaced by the mean over its permutation orbit.
    """
    ids, _ = _orbit_table(op.n)
    _, totals, sizes = _orbit_totals(op)
    means = np.divide(totals, sizes, out=np.zeros_like(totals), where=sizes > 0)
    values = means[ids]
    keys = np.flatnonzero(np.abs(values) > tol.sparse)
    return PauliOperator.from_arrays(op.n, keys, values[keys], tol.sparse)


def symmetry_defect(op: PauliOperator) -> float:
    """Largest deviation of a coefficient from its orbit mean (missing terms count as 0)."""
    own, totals, sizes = _orbit_totals(op)
    means = np.divide(totals, sizes, out=np.zeros_like(totals), where=sizes > 0)
    dev = float(np.abs(op.values - means[own]).max()) if len(op) else 0.0
    counts = np.bincount(own, minlength=sizes.size)
    partial = counts < sizes
    if partial.any():
        dev = max(dev, float(np.abs(means[partial]).max()))
    return dev


def is_symmetric(op: PauliOperator, tol=DEFAULT_TOL) -> bool:
    return symmetry_defect(op) <= tol.num


def f_n(op: PauliOperator, tol=DEFAULT_TOL) -> Polynomial3:
    """Polynomial of a permutation-invariant operator."""
    defect = symmetry_defect(op)
    if defect > tol.num:
        raise NotSymmetric(f"orbit coefficients differ by {defect:.3g}")
    n = op.n
    _, totals, _ = _orbit_totals(op)
    coef = np.zeros((n + 1,) * 3)
    for cid in np.flatnonzero(totals):
        coef[_decode_class(cid, n)] = 2**n * totals[cid]
    return Polynomial3.from_array(coef)


def f_n_inv(f: Polynomial3, n: int, tol=DEFAULT_TOL) -> PauliOperator:
    """Symmetric ``n``-qubit operator whose polynomial is ``f``."""
    if f.degree > n and f.max_abs() > 0:
        raise DegreeTooHigh(f"degree {f.degree} exceeds qubit count {n}")
    ids, sizes = _orbit_table(n)
    per_class = np.zeros(sizes.size)
    for (n1, n2, n3), c in f.terms().items():
        cid = (n1 * (n + 1) + n2) * (n + 1) + n3
        per_class[cid] = c / (2**n * sizes[cid])
    values = per_class[ids]
    keys = np.flatnonzero(values)
    return PauliOperator.from_arrays(n, keys, values[keys], tol.sparse)


def sym_product(*ops: PauliOperator) -> PauliOperator:
    """``Sym(op_1 (x) op_2 (x) ...)``."""
    out = ops[0]
    for op in ops[1:]:
        out = out.tensor(op)
    return symmetrize(out)


# --------------------------------------------------------------------------
# rotation action
# --------------------------------------------------------------------------

def phi(g) -> np.ndarray:
    """Rotation matrix of the adjoint action, ordered (i sigma_x, i sigma_y, i sigma_z) ~ (x, y, z)."""
    if not isinstance(g, Unitary2):
        g = Unitary2.from_matrix(g)
    return g.rotation


def r_g(g, f: Polynomial3) -> Polynomial3:
    """``f((x, y, z) Phi(g))`` re-expanded in monomials."""
    O = phi(g)
    d = max(f.coef.shape[0] - 1, 0)
    # new variable j is sum_i x_i O[i, j]
    lin = []
    for j in range(3):
        lin.append(Polynomial3({(1, 0, 0): O[0, j], (0, 1, 0): O[1, j], (0, 0, 1): O[2, j]}))
    powers = [[Polynomial3.constant(1.0)] for _ in range(3)]
    for j in range(3):
        for _ in range(d):
            powers[j].append(powers[j][-1] * lin[j])
    out = Polynomial3()
    c = f.coef
    for a in range(c.shape[0]):
        inner_a = Polynomial3()
        for b in range(c.shape[1]):
            row = c[a, b]
            if not np.any(row):
                continue
            inner_b = Polynomial3()
            for k in np.flatnonzero(row):
                inner_b = inner_b + row[k] * powers[2][k]
            inner_a = inner_a + powers[1][b] * inner_b
        if inner_a.max_abs():
            out = out + powers[0][a] * inner_a
    return out


def homogeneous_irrep_dims(p: int) -> list[int]:
    """Dimensions of the SO(3) irreducible pieces of degree-``p`` homogeneous polynomials."""
    if p < 0:
        raise ValueError("degree must be non-negative")
    return [2 * (p - 2 * j) + 1 for j in range(p // 2 + 1)]


def trivial_u1_dim(p: int) -> int:
    """Dimension of the z-rotation invariant part of the degree-``p`` homogeneous polynomials."""
    if p < 0:
        raise ValueError("degree must be non-negative")
    return p // 2 + 1
