"""Exception hierarchy shared by all modules."""


class PrankError(Exception):
    """Base class for library errors."""


class DomainError(PrankError, ValueError):
    pass


class ContextError(PrankError, ValueError):
    """Operands live over different fields or in different algebras."""


class ShapeError(PrankError, ValueError):
    pass


class CapacityError(PrankError):
    """An enumeration or search would exceed its configured budget."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class PreconditionError(PrankError, ValueError):
    pass


class CocycleError(PreconditionError):
    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class InvariantViolation(PrankError):
    """A computed invariant disagrees with a property that must hold."""


class ParseError(PrankError, ValueError):
    pass


class ValidationError(PrankError, ValueError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
