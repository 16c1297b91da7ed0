"""Numerical tolerances and the exception hierarchy shared by every module."""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    """Thresholds used throughout the package.

    ``num`` is an absolute bound on coefficient agreement (inputs are assumed
    normalized so that the largest Pauli coefficient is O(1)).  ``rank`` is
    relative to the largest singular value, and ``gap`` is the minimum ratio
    between the smallest retained and the largest discarded singular value.
    """

    num: float = 1e-9
    herm: float = 1e-10
    sparse: float = 1e-12
    rank: float = 1e-7
    gap: float = 1e3
    orth: float = 1e-8
    unit: float = 1e-10

    def with_overrides(self, **kw):
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


DEFAULT_TOL = Tolerances()

# Largest qubit count for which dense (4**n / 2**n sized) work is attempted.
MAX_QUBITS = 10


class SymstabError(Exception):
    pass


class DimensionMismatch(SymstabError, ValueError):
    pass


class HermiticityViolation(SymstabError, ValueError):
    pass


class NotSymmetric(SymstabError, ValueError):
    pass


class DegreeTooHigh(SymstabError, ValueError):
    pass


class ParamOutOfRange(SymstabError, ValueError):
    pass


class NotNormalized(SymstabError, ValueError):
    pass


class ResourceLimit(SymstabError):
    pass


class NumericalAbort(SymstabError, ArithmeticError):
    """Base class for failures that signal an unreliable numerical decision."""


class IllConditioned(NumericalAbort):
    pass


class Rank2Anomaly(NumericalAbort):
    pass


class NotClosed(NumericalAbort):
    pass


class UnclassifiableDimension(NumericalAbort):
    pass


class BasisExpansionResidual(NumericalAbort):
    pass


class ZeroClassUnsupported(SymstabError):
    pass
