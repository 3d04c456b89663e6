"""Exception hierarchy shared by all modules."""


class HuygensError(Exception):
    """Base class for errors raised by this package."""


class DomainError(HuygensError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class UnsupportedCosmologyError(HuygensError, ValueError):
    """The requested background has no closed form on this code path."""


class DegenerateReceiverError(HuygensError, ValueError):
    """Receiver state with |alpha_B||beta_B| = 0 carries no signal at leading order."""


class ConfigError(HuygensError, ValueError):
    """Invalid sweep or network configuration."""


class ConvergenceError(HuygensError, RuntimeError):
    """Numerical integration failed to reach the requested tolerance.

    ``estimate`` and ``error_estimate`` hold the best value obtained before
    giving up, so callers can still inspect it.
    """

    def __init__(self, message, estimate=float("nan"), error_estimate=float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate


class DivergenceError(ConvergenceError):
    """Partial sums of an oscillatory tail integral do not settle."""
