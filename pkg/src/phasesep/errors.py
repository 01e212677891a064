"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Mesh data violates a geometric precondition (degenerate triangle, bad index)."""


class UnsupportedGeometryError(GeometryError):
    """Operation requires a mesh class the input does not belong to (e.g. closed)."""


class CapabilityError(RuntimeError):
    """Requested evaluation is not supported by this potential kind."""


class MeshFormatError(ValueError):
    """Malformed mesh file; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class StagnationError(RuntimeError):
    """Line search could not decrease the energy; carries the last iterate."""

    def __init__(self, message: str, field=None, breakdown=None, iterations: int = 0):
        super().__init__(message)
        self.field = field
        self.breakdown = breakdown
        self.iterations = iterations


class ContinuationError(RuntimeError):
    """A continuation stage failed; carries the stages completed so far."""

    def __init__(self, message: str, stages=None):
        super().__init__(message)
        self.stages = stages or []


class ResolutionWarning(UserWarning):
    """Interface width is marginal for the mesh resolution (eps < 3h)."""
