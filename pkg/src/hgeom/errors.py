"""Exception hierarchy shared across the package."""


class HGeomError(Exception):
    """Base class for all package errors."""


class InvalidInputError(HGeomError, ValueError):
    pass


class NotASubgroupError(HGeomError, ValueError):
    """Raised when a horizontal basis does not span an isotropic subspace."""


class GrassmannianError(HGeomError, ValueError):
    """Raised when a subgroup is outside the intrinsic Grassmannian or lacks an orthogonal splitting."""


class InsufficientDataError(HGeomError):
    pass


class SamplingStarvedError(HGeomError):
    """Rejection sampler acceptance rate fell below the configured floor."""


class PreconditionError(HGeomError, ValueError):
    pass
