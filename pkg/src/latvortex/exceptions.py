"""Exception hierarchy shared by all solver stages."""

from __future__ import annotations


class LatVortexError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(LatVortexError, ValueError):
    """Arguments violate a documented precondition."""


class OutOfDomainError(InvalidInputError):
    """A vertex was requested outside the set an operator is defined on."""


class PreconditionError(InvalidInputError):
    """A field fails a pointwise hypothesis; ``vertex`` names the worst offender."""

    def __init__(self, message: str, vertex=None, violation: float | None = None):
        super().__init__(message)
        self.vertex = vertex
        self.violation = violation


class SolverFailure(LatVortexError, RuntimeError):
    """An iterative solve stopped without meeting its tolerance."""

    def __init__(self, message: str, residual: float | None = None, trace=None, partial=None):
        super().__init__(message)
        self.residual = residual
        self.trace = trace
        self.partial = partial


class NonConvergenceError(SolverFailure):
    """The outer nonlinear iteration ran out of iterations."""


class ConsistencyError(LatVortexError, RuntimeError):
    """A property guaranteed by construction (monotonicity, sandwich, sign) was violated.

    This signals a parameter problem (K too small, linear tolerance too loose)
    rather than bad user input.
    """

    def __init__(self, message: str, violation: float | None = None, partial=None):
        super().__init__(message)
        self.violation = violation
        self.partial = partial


class DiagnosticError(LatVortexError):
    """A diagnostic could not be evaluated on the given data (e.g. too few samples)."""
