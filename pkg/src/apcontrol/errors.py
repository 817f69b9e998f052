"""Exception hierarchy.  The CLI maps each class to a distinct exit code."""


class DimensionError(ValueError):
    """Shapes of the supplied operands are inconsistent."""


class HypothesisError(RuntimeError):
    """A standing assumption fails: -A not exponentially stable, or (-A, B)
    not exactly controllable."""


class SolverError(RuntimeError):
    """A matrix equation solve or iteration did not produce a valid result."""


class SimulationError(RuntimeError):
    """Time integration was refused or produced no usable trajectory."""
