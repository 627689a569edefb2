"""Exception hierarchy shared across the package."""


class PolyTCError(Exception):
    """Base class for all package errors."""


class DomainError(PolyTCError, ValueError):
    """An argument lies outside the domain of an operation."""


class CertificateError(PolyTCError):
    """A zero-divisor certificate failed one of its soundness checks."""


class AmbiguityError(PolyTCError):
    """A configuration sits too close to a stratum boundary to classify."""


class PlannerConsistencyError(PolyTCError):
    """A local rule was asked to act outside its domain."""
