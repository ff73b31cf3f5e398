"""Exception types shared across the package."""


class AqwalkError(Exception):
    """Base class for all package-specific failures."""


class NormViolation(AqwalkError):
    """Coin amplitudes violate the unit-norm constraint beyond tolerance."""


class DegenerateCoin(AqwalkError):
    """Coin with a vanishing amplitude; the walk would decouple."""


class VanishedState(AqwalkError):
    """State norm has underflowed below the usable range."""


class NoConvergence(AqwalkError):
    """An iterative procedure hit its step cap before reaching tolerance."""


class BranchDegenerate(AqwalkError):
    """Closed-form evaluation at a point where the square-root branch collapses."""


class NewtonDivergence(AqwalkError):
    """Root iteration failed to converge or left the admissible strip."""


class BranchAmbiguity(AqwalkError):
    """Both quadratic roots sit on the unit circle; no inside-disk selection."""


class NumericalBlowup(AqwalkError):
    """Intermediate quantities exceeded the rescaling safeguards."""


class NotADistribution(AqwalkError):
    """Input vector is not a probability distribution."""


class NoMinimum(AqwalkError):
    """No interior local minimum exists in the searched window."""


class ResourceLimit(AqwalkError):
    """Requested dense computation exceeds the configured size cap."""


class NullSpaceEmpty(AqwalkError):
    """Local null-space construction failed to produce a verified vector."""


class FullyLocalized(AqwalkError):
    """State lies entirely inside the localized span; nothing to orthogonalize."""


class IOFailure(AqwalkError):
    """File emission failed."""
