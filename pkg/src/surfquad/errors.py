"""Exception types shared across the package."""


class SurfquadError(Exception):
    """Base class for all package-specific errors."""


class SingularEvaluationError(SurfquadError):
    """Kernel evaluated at coincident points with zero softening."""


class IllPosedSystemError(SurfquadError):
    """Rank-deficient least-squares system solved without regularization."""


class NegativeWeightError(SurfquadError):
    """Negative raw scalar weight under the 'error' policy."""


class SelfIntersectionError(SurfquadError):
    """Offset construction collided with existing sample points."""


class DegeneratePairError(SurfquadError):
    """Green-gradient requested at a coincident or antipodal point pair."""
