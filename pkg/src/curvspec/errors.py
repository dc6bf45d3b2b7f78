"""Exception hierarchy.

Every error raised by the library derives from :class:`CurvspecError`;
argument problems additionally derive from :class:`ValueError` so they
behave like ordinary bad-input errors for callers that do not care.
"""


class CurvspecError(Exception):
    pass


class InvalidArgument(CurvspecError, ValueError):
    pass


class InconsistentCurvature(CurvspecError, ValueError):
    """Closed curve whose reconstructed endpoint misses the start."""


class DegenerateProfile(CurvspecError, ValueError):
    """Profile radius vanishes at an interior node."""


class NotArclength(CurvspecError, ValueError):
    pass


class NeedsEmbedding(CurvspecError, ValueError):
    pass


class SizeExceeded(CurvspecError, ValueError):
    pass


class SolverFailure(CurvspecError, RuntimeError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ScenarioError(CurvspecError, ValueError):
    """Malformed scenario document; ``where`` names the offending field."""

    def __init__(self, message, where=None):
        super().__init__(message if where is None else f"{where}: {message}")
        self.where = where


class ConsistencyError(CurvspecError, RuntimeError):
    """Internal consistency check failed (e.g. ground state in the wrong mode)."""
