"""Finitely supported elements of l1-algebras of graded C*-algebras over discrete groups."""

from .errors import (ConfigurationError, DomainError, GradeAlgError, InversionError, OrbitLookupError,
                     RepresentationError, ResourceError, StructuralError, UnsupportedError, ValidationError)
from .graded import GradedElement, Kernel, MatrixFibers, ScalarFibers
from .group import (Cyclic, FiniteGroup, GeneratingSet, Heisenberg, Integers, Lattice, QuotientGroup, Weight,
                    word_length)

__version__ = "0.1.0"

__all__ = ["GradeAlgError", "ConfigurationError", "DomainError", "InversionError", "OrbitLookupError",
           "RepresentationError", "ResourceError", "StructuralError", "UnsupportedError", "ValidationError",
           "GradedElement", "Kernel", "MatrixFibers", "ScalarFibers", "Cyclic", "FiniteGroup",
           "GeneratingSet", "Heisenberg", "Integers", "Lattice", "QuotientGroup", "Weight", "word_length"]
