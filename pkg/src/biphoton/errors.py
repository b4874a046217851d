"""Exception hierarchy shared by the simulation, fitting and CLI layers."""


class BiphotonError(Exception):
    """Base class for all package errors."""


class ConfigError(BiphotonError, ValueError):
    """Invalid parameters, configuration documents or incompatible inputs."""


class DomainError(BiphotonError, ArithmeticError):
    """A physics routine produced a non-finite value.

    ``varpi`` carries the offending detuning (rad/s) and ``index`` the grid
    index when the evaluation was vectorised over a grid.
    """

    def __init__(self, message, varpi=None, index=None):
        super().__init__(message)
        self.varpi = varpi
        self.index = index


class DegenerateModelError(BiphotonError, ValueError):
    """A model histogram carries no usable signal for a fit."""


class ReconstructionError(BiphotonError, ValueError):
    """Phase reconstruction impossible with the supplied measurements."""
