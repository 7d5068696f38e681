"""
Exception hierarchy of the coherence-cost library.

Every precondition violation carries the measured magnitude so the CLI can
report it verbatim.
"""

from typing import Optional


class CoherenceCostError(Exception):
    """Base class for all library errors."""

    def __init__(self, message: str, measured: Optional[float] = None):
        super().__init__(message)
        self.message = message
        self.measured = measured

    @property
    def name(self) -> str:
        return type(self).__name__


class NumericalPreconditionError(CoherenceCostError):
    """A numerical precondition of an operation does not hold."""


class NotHermitian(NumericalPreconditionError):
    """Matrix deviates from its adjoint by more than tol_herm."""


class TraceNotOne(NumericalPreconditionError):
    """State trace deviates from one by more than tol_trace."""


class NotPSD(NumericalPreconditionError):
    """State has an eigenvalue below -tol_psd."""


class RankDeficient(NumericalPreconditionError):
    """Matrix logarithm requested on an eigenvalue at or below eps_rank."""


class DimensionMismatch(NumericalPreconditionError):
    """Operand dimensions are incompatible."""


class DimensionTooLarge(NumericalPreconditionError):
    """Dimension exceeds the dense desk-scale cap."""


class MaxStepsExceeded(NumericalPreconditionError):
    """Equilibration needs more than max_steps collisions."""


class ZeroCoherenceInput(NumericalPreconditionError):
    """Contraction ratio requested for a state without coherence."""


class CoherentTarget(NumericalPreconditionError):
    """No GTO stabilizer exists because the target has coherence."""


class SupportViolation(NumericalPreconditionError):
    """Relative entropy is infinite: support(a) is not inside support(b)."""


class InvalidParameter(NumericalPreconditionError):
    """A physical parameter (theta, beta, eps) is outside its domain."""


class WorkDiscrepancy(NumericalPreconditionError):
    """Direct and closed-form work disagree by more than tol_work."""
