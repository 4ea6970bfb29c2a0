"""Exception and warning types shared across the package."""


class PathIntError(Exception):
    """Base class for all package errors."""


class CompositionDiverges(PathIntError):
    """A Gaussian integral over the composition variable is not convergent."""


class TruncationInsufficient(PathIntError):
    """The truncated Fock basis is too small for the requested phase-space point."""


class QuadratureNotConverged(PathIntError):
    """Refining a quadrature rule moved the result by more than the tolerance."""


class UnsupportedSymbol(PathIntError):
    """A Hamiltonian symbol has a structure the requested scheme cannot handle."""


class DistributionalKernel(PathIntError):
    """The requested kernel is a distribution (delta-concentrated), not a function.

    ``shift`` is the support condition ``p2 - p1 = shift`` and ``weight`` the
    function multiplying the delta, evaluated at the final momentum.
    """

    def __init__(self, message, shift=0.0, weight=None):
        super().__init__(message)
        self.shift = shift
        self.weight = weight


class TailUnbounded(PathIntError):
    """Decay of a tabulated or symbolic integrand could not be established."""


class ExtrapolationFailed(PathIntError):
    """An extrapolation to a limit did not stabilise."""


class ConfigError(PathIntError):
    """Experiment configuration is invalid. Carries field-level messages."""

    def __init__(self, messages):
        if isinstance(messages, str):
            messages = [messages]
        self.messages = list(messages)
        super().__init__("; ".join(self.messages))


class GridTruncationWarning(UserWarning):
    """Kernel amplitude at the grid boundary is not negligible."""


class SupportTruncationWarning(UserWarning):
    """Phase-space sample does not cover the Gaussian support of a function."""


class NonMonotoneWarning(UserWarning):
    """Distance to an oracle did not decrease along an extrapolation sequence."""


class VarianceExplosion(UserWarning):
    """Predicted Monte Carlo standard error is large relative to the signal."""
