"""Exception types raised across the toolkit."""


class AbsaError(Exception):
    """Base class for every error raised by :mod:`absa`."""


# statistics
class EmptyDistribution(AbsaError, ValueError):
    pass


class NonFiniteSample(AbsaError, ValueError):
    pass


class OutOfRange(AbsaError, ValueError):
    pass


class NonPositiveSigma(AbsaError, ValueError):
    pass


class LengthMismatch(AbsaError, ValueError):
    pass


class DegenerateVariance(AbsaError, ValueError):
    pass


# analyses
class InvalidSpec(AbsaError, ValueError):
    pass


class InsufficientRuns(AbsaError, ValueError):
    pass


class UnknownParameter(AbsaError, KeyError):
    pass


class UnknownOutput(AbsaError, KeyError):
    pass


class InvalidDimensions(AbsaError, ValueError):
    pass


class IndexOutOfRange(AbsaError, IndexError):
    pass


class DimensionMismatch(AbsaError, ValueError):
    pass


# simulation harness
class InvalidParams(AbsaError, ValueError):
    pass


class SimulationFailure(AbsaError, RuntimeError):
    """One or more runs failed; carries the offending run ids."""

    def __init__(self, message, run_ids=()):
        super().__init__(message)
        self.run_ids = tuple(run_ids)


class SpawnFailure(AbsaError, OSError):
    pass


class ProtocolViolation(AbsaError, ValueError):
    pass


class SimulationTimeout(AbsaError, TimeoutError):
    pass


class IoFailure(AbsaError, OSError):
    pass


class CorruptRecord(AbsaError, ValueError):
    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


# cli
class ConfigError(AbsaError, ValueError):
    pass


class MissingPrerequisite(AbsaError, RuntimeError):
    pass
