"""tarstab error types."""


class TarstabError(Exception):
    """Base class for every error raised by tarstab."""


class ConfigError(TarstabError, ValueError):
    """Raised when a model, distribution or run configuration is malformed.

    Unknown keys, wrong shapes, negative ARCH coefficients and badly
    oriented hyperplanes all land here. The CLI maps this to exit code 2.
    """


class MissingRegimeError(ConfigError):
    """Raised when a sign pattern that the state can reach has no regime.

    Attributes:
        pattern: The offending sign pattern, a tuple of -1/+1.
    """

    def __init__(self, pattern: tuple[int, ...]) -> None:
        self.pattern = tuple(int(s) for s in pattern)
        super().__init__(f"No regime for attainable sign pattern {self.pattern}")


class DomainError(TarstabError, ValueError):
    """Raised when a moment is requested at a point where it is undefined."""


class MomentOrderError(TarstabError, ValueError):
    """Raised when a power moment is requested above the declared r0.

    Attributes:
        r: The requested moment order.
        r0: The largest order the distribution declares finite.
    """

    def __init__(self, r: float, r0: float) -> None:
        self.r = r
        self.r0 = r0
        super().__init__(f"E|e|^{r:g} is not declared finite (r0 = {r0:g})")


class NotApplicableError(TarstabError):
    """Raised when a closed-form criterion's hypotheses do not hold."""


class BracketError(TarstabError):
    """Raised when a root-finding bracket does not straddle the target.

    Attributes:
        bracket: The ``(lo, hi)`` pair tried.
        values: The measured function values at both ends.
    """

    def __init__(self, bracket: tuple[float, float], values: tuple[float, float]) -> None:
        self.bracket = bracket
        self.values = values
        super().__init__(
            f"Bracket {bracket} does not straddle 1: "
            f"g({bracket[0]:g}) = {values[0]:.6g}, g({bracket[1]:g}) = {values[1]:.6g}"
        )


class PreconditionError(TarstabError):
    """Raised when an analysis is requested for a model it cannot apply to.

    Attributes:
        log_rho: The Lyapounov exponent estimate that failed the check.
    """

    def __init__(self, message: str, log_rho: float | None = None) -> None:
        self.log_rho = log_rho
        super().__init__(message)


class ConstructionError(TarstabError):
    """Raised when a test-function construction has no valid solution."""
