"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Input dimension does not match what the object was built for."""


class FactorizationError(ValueError):
    """Covariance matrix is not symmetric positive definite."""


class UnsupportedDimensionError(ValueError):
    """Operation is only defined for a fixed set of dimensions."""


class EmptyInputError(ValueError):
    """An operation received an empty collection."""


class UndefinedRateError(ZeroDivisionError):
    """Degradation rate requested against a zero baseline metric."""


class UndefinedCorrelationError(ValueError):
    """Pearson correlation requested for a zero-variance column."""


class RegionStarvationError(RuntimeError):
    """Rejection sampling could not fill a density-ratio region."""

    def __init__(self, region, collected, needed, draws):
        self.region = region
        self.collected = collected
        self.needed = needed
        self.draws = draws
        super().__init__(
            f"region {region} starved: {collected}/{needed} points after {draws} draws"
        )
