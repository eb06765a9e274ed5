"""Exception hierarchy shared by every module of the package."""


class SpaceformError(Exception):
    """Base class; the CLI maps subclasses onto exit codes."""


class InputError(SpaceformError, ValueError):
    """Malformed arguments: wrong shapes, unknown ids, bad overrides."""


class ParameterError(InputError):
    """A parameter lies outside its documented admissible range."""


class GeometryError(SpaceformError):
    """A point is off the model manifold, or a frame/chart degenerates."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DegenerateChartError(GeometryError):
    pass


class DegenerateFrameError(GeometryError):
    pass


class EvaluationError(SpaceformError):
    """An immersion returned non-finite values on a stencil footprint."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class PreconditionError(SpaceformError):
    """An operation was asked to run outside its hypotheses.

    ``verify`` turns these into ``skipped`` verdicts.
    """


class IntegrationError(SpaceformError):
    """The profile ODE left its domain or lost its first integral."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
