"""Exception hierarchy. CLI maps PreconditionError to exit 2, CountCeilingError to exit 3."""


class WidthlabError(Exception):
    pass


class PreconditionError(WidthlabError, ValueError):
    pass


class DimensionMismatchError(PreconditionError):
    pass


class NonMonotoneProfileError(PreconditionError):
    pass


class NotRadialError(PreconditionError):
    pass


class DivergentTailError(PreconditionError):
    pass


class CountCeilingError(WidthlabError):
    pass


class AmbiguousBoundaryError(WidthlabError):
    """A lattice point sits inside the float guard band of the ball boundary."""
