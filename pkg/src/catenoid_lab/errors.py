"""Exception hierarchy shared across the lab."""


class CatenoidLabError(Exception):
    """Base class for every error raised by the package."""


class DomainError(CatenoidLabError, ValueError):
    """Parameter outside the family (a must exceed 1/2)."""


class NumericalFailure(CatenoidLabError, RuntimeError):
    """A numerical sub-computation did not meet its contract.

    ``stage`` names the failing sub-computation so callers (the CLI in
    particular) can report it.
    """

    def __init__(self, message: str, stage: str = "numerics"):
        super().__init__(message)
        self.stage = stage


class QuadratureError(NumericalFailure):
    def __init__(self, message: str, error_estimate: float = float("nan")):
        super().__init__(message, stage="quadrature")
        self.error_estimate = error_estimate


class BracketError(NumericalFailure):
    def __init__(self, message: str, bracket: tuple = ()):
        super().__init__(message, stage="root bracketing")
        self.bracket = bracket


class IntegrationError(NumericalFailure):
    def __init__(self, message: str):
        super().__init__(message, stage="ode integration")


class DegenerateDenominatorError(NumericalFailure):
    """Raised when B(s0)^2 - 2K^2 is too small to divide by."""

    def __init__(self, message: str, margin: float = float("nan")):
        super().__init__(message, stage="boundary formula")
        self.margin = margin
