"""Exception types raised on contract violations."""


class NoisyGroverError(ValueError):
    """Base class for all contract violations in this package."""


class NotHermitian(NoisyGroverError):
    """Input matrix deviates from its conjugate transpose beyond tolerance."""


class DimensionMismatch(NoisyGroverError):
    """Operands have incompatible shapes or indices out of range."""


class DegeneratePolar(NoisyGroverError):
    """Matrix is numerically singular; its nearest unitary is non-unique."""


class NotTracePreserving(NoisyGroverError):
    """Kraus operators fail the completeness relation."""


class Indeterminate(NoisyGroverError):
    """The preconditioning angle is undefined for these inputs."""


class NotNormalized(NoisyGroverError):
    """Vector expected to have unit norm does not."""


class DegeneratePlane(NoisyGroverError):
    """Search plane is not two dimensional."""


class OffPlaneSupport(NoisyGroverError):
    """State has weight outside the search plane."""


class ZeroBlochVector(NoisyGroverError):
    """Bloch vector too short to define an angle."""


class LengthMismatch(NoisyGroverError):
    """Spectra have different lengths."""


class InvalidDensityMatrix(NoisyGroverError):
    """Matrix violates hermiticity, unit trace, or positivity."""
