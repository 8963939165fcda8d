"""Exception hierarchy shared across the package."""


class LipnormError(Exception):
    """Base class for all package errors."""


class StructuralError(LipnormError):
    """Malformed input: dimension mismatch, bad index, inconsistent data."""


class CapacityError(LipnormError):
    """An enumeration-based operation was asked to exceed its hard cap."""


class UnsupportedExponentError(LipnormError):
    """The requested exponent is outside the supported range for this operation."""


class DegenerateMoleculeError(LipnormError):
    """A molecule was requested with equal endpoints."""


class InternalError(LipnormError):
    """An impossible state was reached (e.g. an infeasible balanced LP)."""
