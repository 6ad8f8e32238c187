"""Exception hierarchy shared by all reconstruction modules."""
from typing import Optional


class ReconstructionError(Exception):
    """Base class for every domain error raised by the package."""


class PointFileError(ReconstructionError):
    """A point file could not be read or holds an invalid line."""

    def __init__(self, path: str, message: str, line: Optional[int] = None):
        self.path = str(path)
        self.line = line
        where = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{where}: {message}")


class UnknownShapeError(ReconstructionError):
    pass


class SingularSystemError(ReconstructionError):
    """The RBF interpolation system is singular or numerically so."""

    def __init__(self, message: str, rcond: Optional[float] = None):
        self.rcond = rcond
        if rcond is not None:
            message = f"{message} (reciprocal condition estimate {rcond:.3e})"
        super().__init__(message)


class EmptyGridError(ReconstructionError):
    pass


class NonFiniteError(ReconstructionError):
    pass


class MetricError(ReconstructionError):
    pass


class ConfigError(ReconstructionError):
    pass


class SchemeDivergenceError(ReconstructionError):
    """A time step produced a non-finite value; carries the partial run."""

    def __init__(self, node: int, branch: str, iteration: int, state=None, history=None):
        self.node = node
        self.branch = branch
        self.iteration = iteration
        self.state = state
        self.history = list(history) if history is not None else []
        super().__init__(
            f"non-finite update at node {node} ({branch} branch) in iteration {iteration}"
        )


class StageError(ReconstructionError):
    """A pipeline stage failed; `location` is the "file:line" that raised."""

    def __init__(self, stage: str, message: str, location: str = "unknown"):
        self.stage = stage
        self.message = message
        self.location = location
        super().__init__(f"stage '{stage}' failed: {message}")
