"""
Exception hierarchy shared by the toolkit apps
"""


class PDiracError(Exception):
    """Base class for every error raised by the toolkit"""


class ConfigurationError(PDiracError, ValueError):
    """An input (model, exponent, config section) is invalid"""


class ShapeMismatchError(ConfigurationError):
    """Fields, models or gamma sets do not fit together"""


class ClassificationError(ConfigurationError):
    """A solver precondition on the growth conditions of H is not met"""


class SolverError(PDiracError):
    """A solver could not produce an accepted result"""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])


class ConvergenceError(SolverError):
    """max_iter reached, stagnation, or no restart converged"""


class FindEError(SolverError):
    """The doubling search for a negative-energy endpoint gave up"""
