"""Hermitian operators in the Pauli tensor basis and the local unitary actions on them.

Qubit 1 is always the leftmost tensor factor.  A Pauli multi-index
``i_1 i_2 ... i_n`` (digits 0..3 for identity, x, y, z) is packed into an
integer key with two bits per qubit, qubit 1 in the most significant pair, so
the key is simply the base-4 number ``i_1 i_2 ... i_n``.

Local algebra elements are stored as real arrays of shape ``(n, 3)`` holding
the coordinates ``(a, b, c)`` of ``a*A + b*B + c*C`` with ``A = i sigma_z``,
``B = i sigma_y``, ``C = i sigma_x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.spatial.transform import Rotation

from ._tol import (
    DEFAULT_TOL,
    MAX_QUBITS,
    DimensionMismatch,
    HermiticityViolation,
    ParamOutOfRange,
    ResourceLimit,
)

SIGMA = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

LABELS = "ixyz"
_LABEL_DIGIT = {ch: d for d, ch in enumerate(LABELS)}
_LABEL_DIGIT.update({str(d): d for d in range(4)})
_LABEL_DIGIT.update({ch.upper(): d for ch, d in list(_LABEL_DIGIT.items()) if ch.isalpha()})

# su(2) basis in the order (A, B, C) = (i sz, i sy, i sx).
SU2_BASIS = np.array([1j * SIGMA[3], 1j * SIGMA[2], 1j * SIGMA[1]])


# --------------------------------------------------------------------------
# multi-index helpers
# --------------------------------------------------------------------------

def pack_index(digits: Sequence[int]) -> int:
    key = 0
    for d in digits:
        if not 0 <= int(d) <= 3:
            raise ValueError(f"Pauli digit out of range: {d!r}")
        key = 4 * key + int(d)
    return key


def unpack_index(key: int, n: int) -> tuple[int, ...]:
    return tuple((int(key) >> (2 * (n - 1 - k))) & 3 for k in range(n))


def index_label(key: int, n: int) -> str:
    return "".join(LABELS[d] for d in unpack_index(key, n))


def parse_index(index, n: int) -> int:
    """Accept a label string ("xzi", "130"), a digit sequence or a packed key."""
    if isinstance(index, (int, np.integer)):
        if not 0 <= index < 4**n:
            raise DimensionMismatch(f"packed key {index} out of range for n={n}")
        return int(index)
    if isinstance(index, str):
        try:
            digits = [_LABEL_DIGIT[ch] for ch in index]
        except KeyError as exc:
            raise ValueError(f"bad Pauli label {index!r}") from exc
    else:
        digits = list(index)
    if len(digits) != n:
        raise DimensionMismatch(f"index {index!r} has length {len(digits)}, expected {n}")
    return pack_index(digits)


def key_digits(keys: np.ndarray, n: int) -> np.ndarray:
    """Digit table of shape ``(len(keys), n)``."""
    shifts = 2 * np.arange(n - 1, -1, -1, dtype=np.int64)
    return (np.asarray(keys, dtype=np.int64)[:, None] >> shifts) & 3


# --------------------------------------------------------------------------
# PauliOperator
# --------------------------------------------------------------------------

def _combine(keys: np.ndarray, values: np.ndarray, drop: float):
    if keys.size == 0:
        return keys.astype(np.int64), values.astype(float)
    uniq, inv = np.unique(keys, return_inverse=True)
    summed = np.bincount(inv, weights=values, minlength=uniq.size)
    keep = np.abs(summed) > drop
    return uniq[keep].astype(np.int64), summed[keep]


class PauliOperator:
    """Real coefficient table ``s_I`` of ``sum_I s_I sigma_I``.

    Instances are treated as immutable; all arithmetic returns new objects.
    """

    __slots__ = ("n", "keys", "values")

    def __init__(self, n: int, terms: Mapping | None = None, *, drop: float = DEFAULT_TOL.sparse):
        if n < 1:
            raise ValueError("need at least one qubit")
        self.n = int(n)
        terms = terms or {}
        keys = np.array([parse_index(k, n) for k in terms], dtype=np.int64)
        values = np.array([float(np.real_if_close(v)) for v in terms.values()], dtype=float)
        self.keys, self.values = _combine(keys, values, drop)

    @classmethod
    def from_arrays(cls, n, keys, values, drop: float = DEFAULT_TOL.sparse) -> PauliOperator:
        op = cls.__new__(cls)
        op.n = int(n)
        op.keys, op.values = _combine(
            np.asarray(keys, dtype=np.int64).ravel(), np.asarray(values, dtype=float).ravel(), drop
        )
        return op

    @classmethod
    def from_vector(cls, vec, drop: float = DEFAULT_TOL.sparse) -> PauliOperator:
        vec = np.asarray(vec, dtype=float).ravel()
        n = int(round(np.log(vec.size) / np.log(4)))
        if 4**n != vec.size:
            raise DimensionMismatch("vector length is not a power of 4")
        keys = np.flatnonzero(np.abs(vec) > drop)
        return cls.from_arrays(n, keys, vec[keys], drop)

    @classmethod
    def identity(cls, n: int) -> PauliOperator:
        return cls.from_arrays(n, [0], [1.0])

    # -- access -------------------------------------------------------------

    def __len__(self):
        return int(self.keys.size)

    def coeff(self, index) -> float:
        key = parse_index(index, self.n)
        pos = np.searchsorted(self.keys, key)
        if pos < self.keys.size and self.keys[pos] == key:
            return float(self.values[pos])
        return 0.0

    def terms(self) -> dict[str, float]:
        return {index_label(k, self.n): float(v) for k, v in zip(self.keys, self.values)}

    def to_vector(self) -> np.ndarray:
        if self.n > MAX_QUBITS:
            raise ResourceLimit(f"dense coefficient vector for n={self.n} qubits")
        out = np.zeros(4**self.n)
        out[self.keys] = self.values
        return out

    def trace(self) -> float:
        return 2**self.n * self.coeff(0)

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def max_abs(self) -> float:
        return float(np.abs(self.values).max()) if self.values.size else 0.0

    def allclose(self, other: PauliOperator, atol: float = DEFAULT_TOL.num) -> bool:
        return (self - other).max_abs() <= atol

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, PauliOperator):
            return NotImplemented
        if other.n != self.n:
            raise DimensionMismatch(f"qubit counts differ: {self.n} vs {other.n}")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return PauliOperator.from_arrays(
            self.n, np.concatenate([self.keys, other.keys]), np.concatenate([self.values, other.values])
        )

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return PauliOperator.from_arrays(self.n, self.keys, -self.values)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return PauliOperator.from_arrays(self.n, self.keys, float(scalar) * self.values)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def tensor(self, other: PauliOperator) -> PauliOperator:
        """Kronecker product ``self (x) other`` (self on the leading qubits)."""
        keys = (self.keys[:, None] * 4**other.n + other.keys[None, :]).ravel()
        values = (self.values[:, None] * other.values[None, :]).ravel()
        return PauliOperator.from_arrays(self.n + other.n, keys, values)

    def __repr__(self):
        body = ", ".join(f"{k}: {v:.6g}" for k, v in list(self.terms().items())[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"PauliOperator(n={self.n}, {{{body}{more}}})"


def apply_local_map(op: PauliOperator, qubit: int, mat4: np.ndarray):
    """Apply a 4x4 map ``mat4[new_digit, old_digit]`` to one tensor factor.

    Returns uncombined ``(keys, values)`` arrays so that several pieces can be
    summed before deduplication.
    """
    shift = 2 * (op.n - 1 - qubit)
    digits = (op.keys >> shift) & 3
    base = op.keys - (digits << shift)
    out_k, out_v = [], []
    for new in range(4):
        coef = mat4[new, digits]
        mask = coef != 0
        if mask.any():
            out_k.append(base[mask] + (new << shift))
            out_v.append(op.values[mask] * coef[mask])
    if not out_k:
        return np.zeros(0, dtype=np.int64), np.zeros(0)
    return np.concatenate(out_k), np.concatenate(out_v)


# --------------------------------------------------------------------------
# dense computational-basis path
# --------------------------------------------------------------------------

def _apply_each_axis(tensor: np.ndarray, mat: np.ndarray) -> np.ndarray:
    for k in range(tensor.ndim):
        tensor = np.moveaxis(np.tensordot(mat, tensor, axes=([1], [k])), 0, k)
    return tensor


def pauli_to_dense(op: PauliOperator) -> np.ndarray:
    """Explicit ``2**n x 2**n`` matrix of ``sum_I s_I sigma_I``."""
    n = op.n
    coeffs = op.to_vector().reshape((4,) * n).astype(complex)
    # (i, j) pair index against Pauli digit
    to_pair = SIGMA.reshape(4, 4).T
    pairs = _apply_each_axis(coeffs, to_pair).reshape((2, 2) * n)
    order = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
    return pairs.transpose(order).reshape(2**n, 2**n)


def dense_to_pauli(rho: np.ndarray, tol=DEFAULT_TOL) -> PauliOperator:
    """Pauli coefficients ``s_I = tr(sigma_I rho) / 2**n`` of a Hermitian matrix."""
    rho = np.asarray(rho, dtype=complex)
    dim = rho.shape[0]
    n = int(round(np.log2(dim)))
    if rho.shape != (2**n, 2**n):
        raise DimensionMismatch(f"matrix shape {rho.shape} is not 2**n square")
    if n > MAX_QUBITS:
        raise ResourceLimit(f"dense conversion for n={n} qubits")
    asym = np.abs(rho - rho.conj().T).max()
    if asym > tol.herm:
        raise HermiticityViolation(f"matrix deviates from Hermitian by {asym:.3g}")
    order = [x for k in range(n) for x in (k, n + k)]
    pairs = rho.reshape((2,) * (2 * n)).transpose(order).reshape((4,) * n)
    # tr(sigma_a X) = sum_ij sigma_a[j, i] X[i, j]
    from_pair = SIGMA.transpose(0, 2, 1).reshape(4, 4)
    coeffs = _apply_each_axis(pairs, from_pair).real / 2**n
    return PauliOperator.from_vector(coeffs.ravel(), drop=tol.sparse)


# --------------------------------------------------------------------------
# su(2) coordinates
# --------------------------------------------------------------------------

def su2_axis(x) -> np.ndarray:
    """Map coordinates (a, b, c) of aA+bB+cC to the axis vector w with M = i w.sigma."""
    x = np.asarray(x, dtype=float)
    return x[..., ::-1]


def su2_coords(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    return w[..., ::-1]


def su2_matrix(x) -> np.ndarray:
    return np.tensordot(np.asarray(x, dtype=float), SU2_BASIS, axes=([-1], [0]))


def su2_bracket(x, y) -> np.ndarray:
    """Coordinates of [X, Y]; works elementwise on arrays of shape (..., 3)."""
    return su2_coords(-2.0 * np.cross(su2_axis(x), su2_axis(y)))


def su2_norm(x) -> np.ndarray:
    """Rescaled Hilbert-Schmidt norm (2 tr(M^dag M))**0.5 = 2 |(a, b, c)|."""
    return 2.0 * np.linalg.norm(np.asarray(x, dtype=float), axis=-1)


def hs_inner(x, y) -> float:
    """Inner product on local algebra elements polarizing the rescaled norm."""
    return 4.0 * float(np.vdot(np.asarray(x, float).ravel(), np.asarray(y, float).ravel()))


def local_element(n: int, parts: Mapping[int, Sequence[float]] | None = None) -> np.ndarray:
    """Build an ``(n, 3)`` element from ``{qubit: (a, b, c)}`` with 0-based qubits."""
    out = np.zeros((n, 3))
    for q, x in (parts or {}).items():
        out[q] = x
    return out


def weight(M, tol=DEFAULT_TOL) -> int:
    """Number of qubits on which ``M`` has a nonzero part."""
    return int(np.count_nonzero(su2_norm(M) > tol.sparse))


def _ad_map(x) -> np.ndarray:
    """4x4 action of aA+bB+cC on the Pauli digit: sigma_v -> -2 (w x v).sigma."""
    wx, wy, wz = su2_axis(x)
    cross = np.array([[0.0, -wz, wy], [wz, 0.0, -wx], [-wy, wx, 0.0]])
    out = np.zeros((4, 4))
    out[1:, 1:] = -2.0 * cross
    return out


def ad_action(M, rho: PauliOperator, tol=DEFAULT_TOL) -> PauliOperator:
    """Commutator ``[M, rho]`` computed termwise in the Pauli basis."""
    M = np.asarray(M, dtype=float)
    if M.shape != (rho.n, 3):
        raise DimensionMismatch(f"element shape {M.shape} does not match n={rho.n}")
    keys, values = [], []
    for q in range(rho.n):
        if not np.any(M[q]):
            continue
        k, v = apply_local_map(rho, q, _ad_map(M[q]))
        keys.append(k)
        values.append(v)
    if not keys:
        return PauliOperator.from_arrays(rho.n, [], [])
    return PauliOperator.from_arrays(rho.n, np.concatenate(keys), np.concatenate(values), tol.sparse)


def local_matrix(M) -> np.ndarray:
    """Dense ``sum_k M_k^{(k)}`` acting on the full Hilbert space."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    out = np.zeros((2**n, 2**n), dtype=complex)
    for q in range(n):
        out += np.kron(np.kron(np.eye(2**q), su2_matrix(M[q])), np.eye(2 ** (n - q - 1)))
    return out


# --------------------------------------------------------------------------
# SU(2) elements and local unitaries
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Unitary2:
    """SU(2) element with rows ``(a, -conj(b))`` and ``(b, conj(a))``."""

    a: complex
    b: complex

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        if abs(abs(self.a) ** 2 + abs(self.b) ** 2 - 1) > 1e-8:
            raise ParamOutOfRange(f"|a|^2+|b|^2 != 1 for ({self.a}, {self.b})")

    @classmethod
    def identity(cls) -> Unitary2:
        return cls(1, 0)

    @classmethod
    def from_matrix(cls, m, tol=DEFAULT_TOL) -> Unitary2:
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise DimensionMismatch("expected a 2x2 matrix")
        g = cls(m[0, 0], m[1, 0])
        if np.abs(g.matrix - m).max() > 1e3 * tol.unit:
            raise ParamOutOfRange("matrix is not in SU(2)")
        return g

    @classmethod
    def from_rotation(cls, O) -> Unitary2:
        """One of the two SU(2) lifts of a rotation matrix (sign fixed by ``canonical``)."""
        rv = Rotation.from_matrix(np.asarray(O, dtype=float)).as_rotvec()
        theta = float(np.linalg.norm(rv))
        if theta < 1e-15:
            return cls.identity()
        nx, ny, nz = rv / theta
        c, s = np.cos(theta / 2), np.sin(theta / 2)
        return cls(complex(c, -s * nz), complex(s * ny, -s * nx)).canonical()

    @property
    def matrix(self) -> np.ndarray:
        a, b = self.a, self.b
        return np.array([[a, -b.conjugate()], [b, a.conjugate()]])

    @property
    def rotation(self) -> np.ndarray:
        """Matrix of sigma_j -> g sigma_j g^dag on (sigma_x, sigma_y, sigma_z)."""
        g = self.matrix
        conj = np.einsum("ab,jbc,dc->jad", g, SIGMA[1:], g.conj())
        return 0.5 * np.einsum("iab,jba->ij", SIGMA[1:], conj).real

    def __matmul__(self, other: Unitary2) -> Unitary2:
        m = self.matrix @ other.matrix
        return Unitary2(m[0, 0], m[1, 0])

    def dagger(self) -> Unitary2:
        return Unitary2(self.a.conjugate(), -self.b)

    def canonical(self, eps: float = 1e-12) -> Unitary2:
        """Representative of {g, -g}: first non-negligible of (Re a, Im a, Re b, Im b) positive."""
        for part in (self.a.real, self.a.imag, self.b.real, self.b.imag):
            if abs(part) > eps:
                return self if part > 0 else Unitary2(-self.a, -self.b)
        return self

    def is_close(self, other: Unitary2, atol: float = 1e-9, up_to_sign: bool = True) -> bool:
        d = abs(self.a - other.a) + abs(self.b - other.b)
        if up_to_sign:
            d = min(d, abs(self.a + other.a) + abs(self.b + other.b))
        return d <= atol


IX = Unitary2(0, 1j)
IZ = Unitary2(1j, 0)


@dataclass(frozen=True)
class LocalUnitary:
    factors: tuple[Unitary2, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def n(self) -> int:
        return len(self.factors)

    @classmethod
    def identity(cls, n: int) -> LocalUnitary:
        return cls((Unitary2.identity(),) * n)

    @classmethod
    def uniform(cls, g: Unitary2, n: int) -> LocalUnitary:
        return cls((g,) * n)

    def __matmul__(self, other: LocalUnitary) -> LocalUnitary:
        if other.n != self.n:
            raise DimensionMismatch("local unitaries act on different qubit counts")
        return LocalUnitary(tuple(a @ b for a, b in zip(self.factors, other.factors)))

    def dagger(self) -> LocalUnitary:
        return LocalUnitary(tuple(g.dagger() for g in self.factors))

    def canonical(self) -> LocalUnitary:
        return LocalUnitary(tuple(g.canonical() for g in self.factors))

    @property
    def matrix(self) -> np.ndarray:
        out = np.ones((1, 1), dtype=complex)
        for g in self.factors:
            out = np.kron(out, g.matrix)
        return out

    def is_close(self, other: LocalUnitary, atol: float = 1e-9) -> bool:
        return self.n == other.n and all(a.is_close(b, atol) for a, b in zip(self.factors, other.factors))


def conjugate(g: LocalUnitary, rho: PauliOperator, tol=DEFAULT_TOL) -> PauliOperator:
    """``g rho g^dag`` via the per-qubit adjoint rotation of each tensor factor."""
    if g.n != rho.n:
        raise DimensionMismatch(f"local unitary on {g.n} qubits, operator on {rho.n}")
    out = rho
    for q, gq in enumerate(g.factors):
        O = gq.rotation
        if np.allclose(O, np.eye(3), atol=1e-15, rtol=0):
            continue
        mat4 = np.zeros((4, 4))
        mat4[0, 0] = 1.0
        mat4[1:, 1:] = O
        k, v = apply_local_map(out, q, mat4)
        out = PauliOperator.from_arrays(rho.n, k, v, tol.sparse)
    return out


def exp_su2(x, t: float = 1.0) -> Unitary2:
    """``exp(t (aA + bB + cC))`` from the axis-angle closed form."""
    w = t * su2_axis(x)
    angle = float(np.linalg.norm(w))
    if angle == 0.0:
        return Unitary2.identity()
    wx, wy, wz = w / angle
    c, s = np.cos(angle), np.sin(angle)
    return Unitary2(complex(c, s * wz), complex(-s * wy, s * wx))


def exp_local(M, t: float = 1.0) -> LocalUnitary:
    return LocalUnitary(tuple(exp_su2(part, t) for part in np.asarray(M, dtype=float)))


# --------------------------------------------------------------------------
# the closed-form commutator entries
# --------------------------------------------------------------------------

def _bits(n: int) -> np.ndarray:
    idx = np.arange(2**n)
    return (idx[:, None] >> np.arange(n - 1, -1, -1)) & 1


def zeta_coeffs(a: Iterable[float], rho: np.ndarray) -> np.ndarray:
    """Entries of ``[sum_k a_k A^(k), rho]`` from the bit-string formula."""
    a = np.asarray(list(a), dtype=float)
    rho = np.asarray(rho, dtype=complex)
    n = a.size
    if rho.shape != (2**n, 2**n):
        raise DimensionMismatch("coefficient vector length does not match matrix size")
    bits = _bits(n)
    differ = bits[:, None, :] != bits[None, :, :]
    signs = (1 - 2 * bits)[:, None, :]
    weight_sum = np.sum(np.where(differ, signs * a, 0.0), axis=-1)
    return 2j * rho * weight_sum


def eta_coeffs(c: Iterable[float], rho: np.ndarray) -> np.ndarray:
    """Entries of ``[sum_k c_k C^(k), rho]``: ``i sum_k c_k (rho[I_k, J] - rho[I, J_k])``."""
    c = np.asarray(list(c), dtype=float)
    rho = np.asarray(rho, dtype=complex)
    n = c.size
    if rho.shape != (2**n, 2**n):
        raise DimensionMismatch("coefficient vector length does not match matrix size")
    idx = np.arange(2**n)
    out = np.zeros_like(rho)
    for k in range(n):
        flip = idx ^ (1 << (n - 1 - k))
        out += c[k] * (rho[flip, :] - rho[:, flip])
    return 1j * out


def axis_angle_unitary(axis, angle: float) -> Unitary2:
    """``exp(-i angle/2 n.sigma)``: rotates Pauli axis vectors by ``angle`` about ``n``."""
    nx, ny, nz = np.asarray(axis, dtype=float) / np.linalg.norm(axis)
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return Unitary2(complex(c, -s * nz), complex(s * ny, -s * nx))


def rotation_to_z(w) -> Unitary2:
    """SU(2) element whose adjoint rotation carries the direction of ``w`` onto +z."""
    w = np.asarray(w, dtype=float)
    w = w / np.linalg.norm(w)
    axis = np.cross(w, [0.0, 0.0, 1.0])
    s = np.linalg.norm(axis)
    if s < 1e-14:
        return Unitary2.identity() if w[2] > 0 else axis_angle_unitary([1.0, 0.0, 0.0], np.pi)
    return axis_angle_unitary(axis, np.arctan2(s, w[2]))


def conjugate_element(g: LocalUnitary, M) -> np.ndarray:
    """Coordinates of ``g M g^dag`` for a local algebra element (or a stack of them)."""
    M = np.asarray(M, dtype=float)
    out = np.empty_like(M)
    for q, gq in enumerate(g.factors):
        out[..., q, :] = su2_coords(su2_axis(M[..., q, :]) @ gq.rotation.T)
    return out
