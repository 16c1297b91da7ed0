"""Named symmetric states and the standard representatives of each stabilizer class."""

from __future__ import annotations

from math import comb
from typing import Mapping, Sequence

import numpy as np

from ._tol import DEFAULT_TOL, NotNormalized, ParamOutOfRange
from .pauli import PauliOperator, dense_to_pauli
from .sympoly import sym_product

PRESET_KINDS = (
    "completely_mixed",
    "product_zero",
    "dicke",
    "dicke_pure",
    "ghz_pure",
    "ghz_mixture",
    "werner_basis",
    "singlet",
    "zz_example",
)


def _single(terms) -> PauliOperator:
    return PauliOperator(1, terms)


PROJ0 = _single({"i": 0.5, "z": 0.5})
PROJ1 = _single({"i": 0.5, "z": -0.5})
ID1 = _single({"i": 1.0})
SZ = _single({"z": 1.0})
U_PAIR = PauliOperator(2, {"xx": 1.0, "yy": 1.0, "zz": 1.0})
XY_PAIR = PauliOperator(2, {"xx": 1.0, "yy": 1.0})


def _power(op: PauliOperator, k: int) -> PauliOperator | None:
    out = None
    for _ in range(k):
        out = op if out is None else out.tensor(op)
    return out


def _sym_of(*factors) -> PauliOperator:
    return sym_product(*[f for f in factors if f is not None])


def completely_mixed(n: int) -> PauliOperator:
    if n < 1:
        raise ParamOutOfRange("n must be >= 1")
    return PauliOperator.identity(n) / 2**n


def product_zero(n: int) -> PauliOperator:
    """Projector onto |00...0>."""
    if n < 1:
        raise ParamOutOfRange("n must be >= 1")
    return _power(PROJ0, n)


def dicke_rho(n: int, k: int) -> PauliOperator:
    """Symmetrized projector onto |1>^k |0>^(n-k): the uniform mixture of weight-k strings."""
    if n < 1 or not 0 <= k <= n:
        raise ParamOutOfRange(f"need 0 <= k <= n, got n={n}, k={k}")
    return _sym_of(_power(PROJ1, k), _power(PROJ0, n - k))


def dicke_state(n: int, k: int) -> PauliOperator:
    """Pure symmetric Dicke state: projector onto the normalized sum of weight-k strings."""
    if n < 1 or not 0 <= k <= n:
        raise ParamOutOfRange(f"need 0 <= k <= n, got n={n}, k={k}")
    idx = np.arange(2**n)
    weights = np.array([bin(i).count("1") for i in idx])
    psi = (weights == k).astype(float) / np.sqrt(comb(n, k))
    return dense_to_pauli(np.outer(psi, psi))


def ghz_rho(n: int, alpha: complex, beta: complex, tol=DEFAULT_TOL) -> PauliOperator:
    """Projector onto alpha|0...0> + beta|1...1>."""
    if n < 2:
        raise ParamOutOfRange("GHZ states need n >= 2")
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1) > tol.num:
        raise NotNormalized("|alpha|^2 + |beta|^2 must be 1")
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = alpha
    psi[-1] = beta
    return dense_to_pauli(np.outer(psi, psi.conj()), tol)


def werner_basis(n: int, k: int) -> PauliOperator:
    """Unnormalized ``Sym(u^k (x) Id^(n-2k))`` with ``u = xx + yy + zz``."""
    if n < 1 or k < 0 or 2 * k > n:
        raise ParamOutOfRange(f"need 0 <= 2k <= n, got n={n}, k={k}")
    return _sym_of(_power(U_PAIR, k), _power(ID1, n - 2 * k))


def ghz_mixture(
    n: int, c: Sequence[float], d: float, alpha: complex, beta: complex, tol=DEFAULT_TOL
) -> PauliOperator:
    """``sum_k c_k dicke_rho(n, k) + d ghz_rho(n, alpha, beta)``."""
    c = list(c)
    if len(c) != n + 1:
        raise ParamOutOfRange(f"need n+1 = {n + 1} weights, got {len(c)}")
    if min(c + [d]) < -tol.num:
        raise NotNormalized("mixture weights must be nonnegative")
    if abs(sum(c) + d - 1) > tol.num:
        raise NotNormalized(f"weights sum to {sum(c) + d}, not 1")
    out = d * ghz_rho(n, alpha, beta, tol)
    for k, ck in enumerate(c):
        if ck:
            out = out + ck * dicke_rho(n, k)
    return out


def singlet() -> PauliOperator:
    """Projector onto (|01> - |10>)/sqrt(2)."""
    return (PauliOperator.identity(2) - U_PAIR) / 4


def zz_example(a: float, n: int = 3) -> PauliOperator:
    """``Id/2^n + a sigma_z^{(x)n}``."""
    return completely_mixed(n) + a * _power(SZ, n)


# --------------------------------------------------------------------------
# class representatives in the raw symmetrized bases
# --------------------------------------------------------------------------

def werner_representative(n: int, c: Sequence[float]) -> PauliOperator:
    out = PauliOperator(n)
    for k, ck in enumerate(c):
        if ck:
            out = out + ck * werner_basis(n, k)
    return out


def product_representative(n: int, c: Sequence[float]) -> PauliOperator:
    """``sum_k c_k Sym(sigma_z^k (x) Id^(n-k))``."""
    out = PauliOperator(n)
    for k, ck in enumerate(c):
        if ck:
            out = out + ck * _sym_of(_power(SZ, k), _power(ID1, n - k))
    return out


def dicke_representative(n: int, b: Mapping[tuple[int, int], float]) -> PauliOperator:
    """``sum b[r, s] Sym((xx + yy)^s (x) sigma_z^r (x) Id^(n-r-2s))``."""
    out = PauliOperator(n)
    for (r, s), v in b.items():
        if r + 2 * s > n:
            raise ParamOutOfRange(f"r + 2s = {r + 2 * s} exceeds n = {n}")
        if v:
            out = out + v * _sym_of(_power(XY_PAIR, s), _power(SZ, r), _power(ID1, n - r - 2 * s))
    return out


def ghz_representative(n: int, sectors: Sequence[float], corner: complex) -> PauliOperator:
    """State with weight-k diagonal total ``sectors[k]`` and ``rho[0...0, 1...1] = corner``."""
    if len(sectors) != n + 1:
        raise ParamOutOfRange("need n+1 sector weights")
    idx = np.arange(2**n)
    hw = np.array([bin(i).count("1") for i in idx])
    rho = np.diag([sectors[w] / comb(n, w) for w in hw]).astype(complex)
    rho[0, -1] = corner
    rho[-1, 0] = np.conj(corner)
    return dense_to_pauli(rho)


def preset(kind: str, n: int | None = None, **params) -> PauliOperator:
    """Construct a named state from its kind string and parameters."""
    if kind == "completely_mixed":
        return completely_mixed(n)
    if kind == "product_zero":
        return product_zero(n)
    if kind == "dicke":
        return dicke_rho(n, params["k"])
    if kind == "dicke_pure":
        return dicke_state(n, params["k"])
    if kind == "ghz_pure":
        return ghz_rho(n, params.get("alpha", 2**-0.5), params.get("beta", 2**-0.5))
    if kind == "ghz_mixture":
        return ghz_mixture(n, params["c"], params["d"], params["alpha"], params["beta"])
    if kind == "werner_basis":
        return werner_basis(n, params["k"])
    if kind == "singlet":
        if n not in (None, 2):
            raise ParamOutOfRange("singlet is a 2-qubit state")
        return singlet()
    if kind == "zz_example":
        return zz_example(params["a"], 3 if n is None else n)
    raise ParamOutOfRange(f"unknown preset kind {kind!r}")
