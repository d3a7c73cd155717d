"""Power-law spectral statistics of images and CNN activation maps.

Rotationally averaged 2D power spectra, exponent fits, spatial
autocorrelation, pooling-invariance checks, analytic 3x3 kernel spectra
with a depth simulation, and spectral feature-comparison losses.
"""

from ._backend import backend_name
from .distill import (
    LossReport,
    ReducedFeatureMap,
    channel_reduce,
    cps_loss,
    cross_power,
    fourier_l1,
    total_loss,
)
from .errors import (
    DataError,
    DegenerateInputError,
    EmptyEnsembleError,
    FormatError,
    InsufficientDataError,
    IoError,
    ManifestError,
    NonPositiveEpsilonError,
    ShapeError,
    SingularKernelError,
    SpectralStatsError,
    UnsupportedLayout,
    VersionError,
)
from .scaling import InvarianceReport, average_pool, pooling_invariance_report
from .spectrum import (
    CorrelationFit,
    PowerLawFit,
    RadialCorrelation,
    RadialSpectrum,
    autocorrelation,
    dft2,
    ensemble_correlation,
    ensemble_spectrum,
    fit_correlation,
    fit_power_law,
    idft2,
    power_grid,
    radial_average,
    read_spectrum_csv,
    write_spectrum_csv,
)
from .synth import power_law_ensemble, white_noise_ensemble, write_ensemble
from .tensorio import (
    DatasetManifest,
    ManifestItem,
    load_manifest,
    read_tensor,
    write_manifest,
    write_tensor,
)
from .theory import (
    DepthReport,
    KernelModes,
    box_kernel,
    convolve_periodic,
    depth_simulation,
    identity_kernel,
    kernel_radial_modes,
    kernel_spectrum_grid,
    predicted_power_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "backend_name",
    # containers
    "RadialSpectrum",
    "PowerLawFit",
    "RadialCorrelation",
    "CorrelationFit",
    "InvarianceReport",
    "KernelModes",
    "DepthReport",
    "ReducedFeatureMap",
    "LossReport",
    "DatasetManifest",
    "ManifestItem",
    # tensor I/O
    "read_tensor",
    "write_tensor",
    "load_manifest",
    "write_manifest",
    # spectra
    "dft2",
    "idft2",
    "power_grid",
    "radial_average",
    "ensemble_spectrum",
    "fit_power_law",
    "autocorrelation",
    "ensemble_correlation",
    "fit_correlation",
    "read_spectrum_csv",
    "write_spectrum_csv",
    # scaling
    "average_pool",
    "pooling_invariance_report",
    # theory
    "box_kernel",
    "identity_kernel",
    "kernel_spectrum_grid",
    "kernel_radial_modes",
    "predicted_power_spectrum",
    "convolve_periodic",
    "depth_simulation",
    # distillation metrics
    "channel_reduce",
    "fourier_l1",
    "cross_power",
    "cps_loss",
    "total_loss",
    # synthetic ensembles
    "power_law_ensemble",
    "white_noise_ensemble",
    "write_ensemble",
    # errors
    "SpectralStatsError",
    "FormatError",
    "UnsupportedLayout",
    "DataError",
    "IoError",
    "ManifestError",
    "VersionError",
    "ShapeError",
    "EmptyEnsembleError",
    "InsufficientDataError",
    "DegenerateInputError",
    "SingularKernelError",
    "NonPositiveEpsilonError",
]
