"""Exception hierarchy.

Each class carries an ``exit_code`` so the CLI can map failures to a
category without string matching.
"""


class DistNesterovError(Exception):
    exit_code = 1


class StructuralInputError(DistNesterovError, ValueError):
    """Malformed graph or matrix input (bad indices, wrong shapes)."""

    exit_code = 2


class ParameterError(DistNesterovError, ValueError):
    exit_code = 2


class ConfigError(DistNesterovError, ValueError):
    exit_code = 2


class NumericalError(DistNesterovError, ArithmeticError):
    """Non-finite input, singular transform, or a power iteration that stalls."""

    exit_code = 3


class ConvergenceError(NumericalError):
    def __init__(self, message, grad_norm=None):
        super().__init__(message)
        self.grad_norm = grad_norm


class DivergenceError(NumericalError):
    def __init__(self, message, k=None, magnitude=None):
        super().__init__(message)
        self.k = k
        self.magnitude = magnitude


class TuningError(NumericalError):
    def __init__(self, message, grid=None, results=None):
        super().__init__(message)
        self.grid = grid
        self.results = results or []


class OutputError(DistNesterovError, OSError):
    exit_code = 4
