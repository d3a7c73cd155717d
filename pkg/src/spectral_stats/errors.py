"""Exception types shared across the package."""


class SpectralStatsError(Exception):
    """Base class for every error raised by this package."""


class FormatError(SpectralStatsError):
    """File is not a well-formed tensor interchange file."""


class UnsupportedLayout(SpectralStatsError):
    """Structurally valid file, but dtype/order/rank outside the supported subset."""


class DataError(SpectralStatsError):
    """Tensor payload contains non-finite values."""


class IoError(SpectralStatsError):
    """Underlying I/O failure while reading or writing."""


class ManifestError(SpectralStatsError):
    """Manifest is malformed or inconsistent with the files on disk."""


class VersionError(SpectralStatsError):
    """Manifest declares an unsupported version."""


class ShapeError(SpectralStatsError):
    """Input dimensions violate an operation's contract."""


class EmptyEnsembleError(SpectralStatsError):
    """An ensemble operation received no items."""


class InsufficientDataError(SpectralStatsError):
    """Too few usable points for a fit."""


class DegenerateInputError(SpectralStatsError):
    """Input has no variation to fit."""


class SingularKernelError(SpectralStatsError):
    """Kernel frequency response vanishes inside the requested fit range."""


class NonPositiveEpsilonError(SpectralStatsError):
    """Denominator guard epsilon must be strictly positive."""
