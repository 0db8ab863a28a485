"""Exception types shared across the library."""


class ParameterError(ValueError):
    """A parameter is outside its valid range."""


class InsufficientDataError(ValueError):
    """The dataset is too small for the requested operation."""


class UndefinedScoreError(ValueError):
    """R^2 is undefined (constant labels)."""


class UnsupportedDimensionError(ValueError):
    """The operation only supports a specific dimensionality."""


class DegenerateRegionError(RuntimeError):
    """Every candidate depth region has zero volume."""


class BoundsViolationError(ValueError):
    """A data row exceeds the user-supplied norm bounds."""


class IngestionError(ValueError):
    """A CSV file could not be parsed into a dataset."""
