"""Exception types shared across the package."""


class CoordGameError(Exception):
    """Base class for all domain errors raised by this package."""


class StructuralError(CoordGameError):
    """A graph or game does not satisfy the structural precondition of an operation."""


class FeasibilityError(CoordGameError):
    """A strategy assigns a node a color outside its color set."""


class BudgetExceededError(CoordGameError):
    """An exhaustive search was refused because it exceeds the configured budget."""

    def __init__(self, message, required=None, budget=None):
        super().__init__(message)
        self.required = required
        self.budget = budget


class ParseError(CoordGameError):
    """An instance file is malformed; carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
