"""Exception types shared across the toolkit."""


class FormatError(ValueError):
    """Raised when a netpbm byte stream violates the P5/P6 contract.

    The message names the offending header field or raster section.
    """


class DimensionMismatchError(ValueError):
    """Raised when two rasters that must share dimensions do not."""


class QueryError(ValueError):
    """Raised when a query image lacks start/goal markers."""


class InfeasibleQueryError(QueryError):
    """Raised when a start or goal state falls inside an obstacle cell."""


class DegenerateHeuristicError(ValueError):
    """Raised when a heuristic carries no probability mass over free cells."""


class DegenerateMapError(ValueError):
    """Raised when a grid map has no free cells to sample from."""


class AugmentationError(RuntimeError):
    """Raised when an augmentation slot cannot produce a feasible sample."""
