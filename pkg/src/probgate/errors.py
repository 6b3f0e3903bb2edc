"""Exception types raised across the package.

Every error carries a stable ``name`` used by the CLI when it serializes a
structured error object.
"""


class ProbGateError(ValueError):
    """Base class for all input and construction errors."""

    exit_code = 1

    @property
    def name(self) -> str:
        return type(self).__name__


class NonHermitianInput(ProbGateError):
    pass


class NotPsd(ProbGateError):
    pass


class AmbientTooSmall(ProbGateError):
    pass


class GramMismatch(ProbGateError):
    def __init__(self, max_deviation: float):
        super().__init__(f"Gram matrices differ by up to {max_deviation:.3e}")
        self.max_deviation = max_deviation


class DependentInputs(ProbGateError):
    pass


class DimensionMismatch(ProbGateError):
    pass


class LinearlyDependentPair(ProbGateError):
    pass


class InvalidProbeOverlap(ProbGateError):
    pass


class InvalidGate(ProbGateError):
    pass


class EffOutOfRange(ProbGateError):
    pass


class InfeasibleEfficiency(ProbGateError):
    """The residual matrix at the requested efficiencies is indefinite."""

    exit_code = 2


class ZeroSuccessProbability(ProbGateError):
    pass


class ParseError(ProbGateError):
    pass


class NotNormalized(ProbGateError):
    pass
