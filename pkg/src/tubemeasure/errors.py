"""Exception taxonomy used across the package.

Input-side problems (bad dimensions, malformed files, out-of-range
parameters) subclass ValueError so callers can catch them uniformly;
the command line maps them to exit code 2.  Failures of internal
invariants or of a verification step map to exit code 1.
"""


class TubeMeasureError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(TubeMeasureError, ValueError):
    """Ambient or cross-section dimension outside the supported range."""


class ParameterError(TubeMeasureError, ValueError):
    """A numeric parameter violates its documented precondition."""


class DegenerateShapeError(TubeMeasureError, ValueError):
    """Shape has no interior/extent where the operation requires one."""


class UnboundedShapeError(TubeMeasureError, ValueError):
    """Operation requires a bounded shape (products with a full line are not)."""


class GeometryError(TubeMeasureError, ValueError):
    """Geometric precondition failed (overlap, non-convex position, ...)."""


class SchemaError(TubeMeasureError, ValueError):
    """Malformed JSON document: wrong type, missing or unknown field."""


class NoWitnessError(TubeMeasureError, RuntimeError):
    """Pigeonhole selection found no qualifying index (precondition broken)."""


class InvariantError(TubeMeasureError, RuntimeError):
    """An internal cross-check that must hold by construction failed."""


class StepFailureError(TubeMeasureError, RuntimeError):
    """A named step of the proof walkthrough failed.

    ``step`` holds the step name, ``report`` the partial walkthrough
    report gathered up to the failure.
    """

    def __init__(self, step: str, message: str, report=None):
        super().__init__(f"step '{step}' failed: {message}")
        self.step = step
        self.report = report
