"""Exception hierarchy shared by every module of the package."""


class ConvprodError(Exception):
    """Base class for all errors raised by convprod."""


class DimensionError(ConvprodError, ValueError):
    """Inputs live on different grids or have incompatible shapes."""


class ContractError(ConvprodError, ValueError):
    """Data violates a declared structural property (support, symmetry...)."""


class PreconditionError(ConvprodError, ValueError):
    """A parameter is outside the range an operation accepts."""


class SingularSystemError(ConvprodError, ValueError):
    """A linear system that must be invertible turned out singular."""


class ManifestError(ConvprodError, ValueError):
    """A serialized manifest is truncated, malformed or inconsistent."""


class ManifestVersionError(ManifestError):
    """A serialized manifest carries a version this package cannot read."""
