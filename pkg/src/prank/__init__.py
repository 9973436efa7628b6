"""Exact invariants of small restricted Lie algebras over finite fields."""

from .errors import (
    CapacityError,
    CocycleError,
    ContextError,
    DomainError,
    InvariantViolation,
    ParseError,
    PrankError,
    PreconditionError,
    ShapeError,
    ValidationError,
)
from .exactfield import FieldCtx, FieldElement, Subspace, field
from .liecore import Algebra, Element, validate

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "CapacityError",
    "CocycleError",
    "ContextError",
    "DomainError",
    "Element",
    "FieldCtx",
    "FieldElement",
    "InvariantViolation",
    "ParseError",
    "PrankError",
    "PreconditionError",
    "ShapeError",
    "Subspace",
    "ValidationError",
    "field",
    "validate",
]
