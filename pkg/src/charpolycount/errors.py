"""Exception hierarchy.  The CLI maps these onto exit codes."""


class CharPolyError(Exception):
    """Base class for all package errors."""


class InvalidInputError(CharPolyError, ValueError):
    """Input violates a documented precondition (exit code 2)."""


class NotSquarefreeError(InvalidInputError):
    """Polynomial shares a factor with its derivative."""

    def __init__(self, message: str, gcd):
        super().__init__(message)
        self.gcd = gcd


class ReducibleError(InvalidInputError):
    """Polynomial is reducible over the rationals."""


class NotCoprimeError(InvalidInputError):
    """Hensel lifting was given factors that are not coprime mod p."""


class InfeasibleError(CharPolyError):
    """A computation exceeds its scale guard (exit code 3)."""


class OracleInconsistencyError(CharPolyError):
    """A q-polynomial fit violated integrality, degree or monicity."""


class FactorizationError(InfeasibleError):
    """An integer could not be fully factored; supply invariants via config."""
