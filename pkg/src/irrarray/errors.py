"""Exception types raised across the package."""


class InvalidLayoutError(ValueError):
    """Cluster sets overlap, leave the board, or are not edge-connected."""


class DegenerateChannelError(ArithmeticError):
    """Effective channel is too ill-conditioned for zero forcing."""


class DegenerateMaskError(ValueError):
    """Sidelobe region is empty for the given mask."""


class EvaluationError(RuntimeError):
    """Every channel realization of an evaluation was degenerate."""
