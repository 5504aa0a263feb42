"""Exception types raised by the flattening pipeline."""


class ConformapError(Exception):
    """Base class for all library errors."""


class NonManifold(ConformapError):
    """Mesh connectivity is not an oriented 2-manifold."""


class NotADisk(ConformapError):
    """Mesh does not have disk topology (chi != 1 or wrong boundary count)."""


class DegenerateFace(ConformapError):
    """A face violates the triangle inequality on its edge lengths."""


class ConeNotReachable(ConformapError):
    """A requested cone vertex cannot be placed on a cut."""


class AlreadyOpenWithCuts(ConformapError):
    """Input configuration for cutting is unsupported."""


class NotPositiveDefinite(ConformapError):
    """Matrix factorization failed; input geometry is broken."""


class DimensionMismatch(ConformapError):
    """Vector length does not match the expected vertex or boundary count."""


class AngleSumViolation(ConformapError):
    """Prescribed exterior angles do not sum to 2*pi."""


class NonPositiveLength(ConformapError):
    """Curve closure produced a non-positive boundary edge length."""

    def __init__(self, message, edges=None, ratios=None):
        super().__init__(message)
        self.edges = [] if edges is None else list(edges)
        self.ratios = [] if ratios is None else list(ratios)


class WindingMismatch(ConformapError):
    """Boundary direction field does not wind once around the loop."""


class ConeSumViolation(ConformapError):
    """Cone angle defects violate the Gauss-Bonnet constraint."""


class NoConvergence(ConformapError):
    """Iterative driver failed to converge within the iteration budget."""
