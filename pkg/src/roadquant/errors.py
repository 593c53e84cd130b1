"""Exception hierarchy shared by all roadquant modules."""


class RoadQuantError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(RoadQuantError, ValueError):
    """A caller-supplied parameter violates a precondition."""


class DegenerateInputError(RoadQuantError):
    """Input is valid but carries no usable signal (e.g. single-valued histogram)."""


class DataError(RoadQuantError):
    """An input record or raster is inconsistent with what it references."""


class EstimationError(RoadQuantError):
    """A geometric estimate could not be formed (degenerate or collinear data)."""


class InsufficientDataError(RoadQuantError):
    """Too few valid samples to run an estimator at the configured minimum."""


class ContractError(RoadQuantError):
    """Two pipeline stages disagree about shared data (missing metric, bad dims)."""


class SceneSpecError(RoadQuantError, ValueError):
    """A synthetic scene description is internally inconsistent."""
