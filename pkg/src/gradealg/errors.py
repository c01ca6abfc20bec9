"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class GradeAlgError(Exception):
    """Base class for library errors."""


class ConfigurationError(GradeAlgError, ValueError):
    """Invalid parameters or configuration (bad generating set, divisibility, schema)."""


class ValidationError(GradeAlgError, ValueError):
    """An axiom check failed on constructed data (cocycle, subgroup, partial action)."""


class StructuralError(GradeAlgError, ValueError):
    """Incompatible operands: fiber shape mismatch, wrong degree, window mismatch."""


class DomainError(GradeAlgError, ValueError):
    """Operation applied outside its domain (e.g. non-covariant kernel to upsilon_inv)."""


class RepresentationError(GradeAlgError):
    """A representation failed its isometry / Hermitian post-check."""


class InversionError(GradeAlgError, ArithmeticError):
    """Represented matrix is singular or numerically unusable."""

    def __init__(self, message: str, condition: float | None = None):
        super().__init__(message)
        self.condition = condition


class UnsupportedError(GradeAlgError, NotImplementedError):
    """Operation not available for this group or model (e.g. norms on k-graphs)."""


class OrbitLookupError(GradeAlgError, LookupError):
    """Two points do not lie on the same orbit within the search window."""


class ResourceError(GradeAlgError, RuntimeError):
    """A configured resource cap was exceeded; ``partial`` holds what was computed."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
