"""Exception types shared across the package."""


class OamemError(Exception):
    """Base class for all package-specific errors."""


class GridMismatch(OamemError):
    """Two fields live on different grids."""


class GridTooSmall(OamemError):
    """Requested mode does not fit on the grid."""


class InvalidCharge(OamemError):
    """Topological charge not supported by the requested hologram."""


class NodalLineNotFound(OamemError):
    """No intensity minimum below threshold along the search axis."""


class FitDegenerate(OamemError):
    """Least-squares design matrix is singular or underdetermined."""


class NoCounts(OamemError):
    """A reduction requires at least one registered count."""


class MissingBasis(OamemError):
    """A record references a basis absent from the lookup table."""


class DomainError(OamemError):
    """Argument outside the mathematically valid domain."""


class DimMismatch(OamemError):
    """Operands have incompatible Hilbert-space dimensions."""


class NotPSD(OamemError):
    """Matrix is not positive semidefinite within tolerance."""


class InsufficientData(OamemError):
    """Measurement set does not determine the state."""


class ConfigError(OamemError):
    """Invalid or unparseable experiment configuration."""
