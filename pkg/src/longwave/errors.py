"""Exception types raised across the package."""


class LongwaveError(Exception):
    """Base class for all package errors."""


class PreconditionError(LongwaveError, ValueError):
    """An operation was called with inputs outside its physical/numerical domain."""


class StabilityError(PreconditionError):
    """Explicit time step exceeds the stability bound.

    The largest admissible step is available as ``max_dt``.
    """

    def __init__(self, dt, max_dt):
        self.dt = dt
        self.max_dt = max_dt
        super().__init__(
            f"time step dt={dt:.6g} violates the CFL bound; "
            f"maximal stable dt is {max_dt:.6g}"
        )


class MissingHistoryError(PreconditionError):
    """A residual needs time derivatives but no snapshot history was supplied."""


class DelocalizedError(PreconditionError):
    """Intensity is spread so evenly that a circular centroid is undefined."""


class ConfigError(LongwaveError):
    """Invalid command configuration. ``problems`` lists every violation found."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
