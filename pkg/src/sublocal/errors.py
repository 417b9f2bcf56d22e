"""Exception types raised across the package."""


class ShapeError(ValueError):
    """Operand dimensions are inconsistent with the requested operation."""


class DomainError(ValueError):
    """Input is well-formed but violates a mathematical precondition."""


class ConsistencyError(RuntimeError):
    """An internally constructed object failed a post-condition check.

    Raised when, for example, an assembled Choi matrix that theory says must
    be positive semidefinite turns out not to be.
    """


class FormatError(ValueError):
    """A file could not be parsed into the expected structure."""
