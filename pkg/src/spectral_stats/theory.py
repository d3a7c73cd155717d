"""Analytic 3x3 kernel spectra and the multi-layer depth simulation.

A convolution layer multiplies the power grid by |W(k)|^2, so depth acts
additively on log power; the simulation measures that directly on an
ensemble (linear layers only: no nonlinearity, no normalization).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _backend
from .errors import ShapeError, SingularKernelError
from .spectrum import (
    PowerLawFit,
    RadialSpectrum,
    _radial_mean,
    dft2,
    ensemble_spectrum,
    fit_power_law,
    power_grid,
)

__all__ = [
    "KernelModes",
    "DepthReport",
    "as_kernel",
    "identity_kernel",
    "box_kernel",
    "kernel_spectrum_grid",
    "kernel_radial_modes",
    "predicted_power_spectrum",
    "convolve_periodic",
    "depth_simulation",
]


def as_kernel(w) -> np.ndarray:
    """Validate a 3x3 stencil; element [i, j] acts at spatial offset (i-1, j-1)."""
    k = np.asarray(w, dtype=np.float64)
    if k.shape != (3, 3):
        raise ShapeError(f"kernel must be 3x3, got {k.shape}")
    if not np.isfinite(k).all():
        raise ShapeError("kernel weights must be finite")
    return k


def identity_kernel() -> np.ndarray:
    k = np.zeros((3, 3))
    k[1, 1] = 1.0
    return k


def box_kernel() -> np.ndarray:
    return np.full((3, 3), 1.0 / 9.0)


@dataclass(frozen=True)
class KernelModes:
    """The three rotational frequency amplitudes of a 3x3 kernel.

    w00 is the center tap, w1 the sum of the four edge-adjacent taps
    (offset distance 1), wsqrt2 the sum of the four corner taps (distance
    sqrt(2)). Invariant under 90-degree kernel rotations.
    """

    w00: float
    w1: float
    wsqrt2: float


def kernel_radial_modes(w) -> KernelModes:
    k = as_kernel(w)
    return KernelModes(
        w00=float(k[1, 1]),
        w1=float(k[0, 1] + k[1, 0] + k[1, 2] + k[2, 1]),
        wsqrt2=float(k[0, 0] + k[0, 2] + k[2, 0] + k[2, 2]),
    )


def kernel_spectrum_grid(w, n: int) -> np.ndarray:
    """Frequency response of a 3x3 kernel on an n x n grid.

    Zero-pads the kernel with the center tap at the origin (offsets wrap
    periodically) and applies the forward transform; equals the nine-term
    exponential sum evaluated at the grid frequencies.
    """
    k = as_kernel(w)
    if n < 4:
        raise ShapeError(f"grid side must be >= 4, got {n}")
    grid = np.zeros((n, n), dtype=np.float64)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            grid[dy % n, dx % n] = k[dy + 1, dx + 1]
    return dft2(grid)


def predicted_power_spectrum(m: KernelModes, input_spectrum: RadialSpectrum) -> RadialSpectrum:
    """Radial-mode prediction of the power spectrum after one 3x3 layer.

    output[r] = r * [ (w00^2 + W1^2 + Wsqrt2^2)
                      + W1*Wsqrt2*cos((1 - sqrt2) r)
                      + w00*W1*cos(r)
                      + w00*Wsqrt2*cos(r / sqrt2) ] * input[r]

    The radius enters the cosines directly (radial-distance units) and the
    leading r is the polar-coordinates area factor. This is an approximate
    diagnostic: the interference terms matter only at high frequencies, and
    the prediction is meaningful up to a global constant.
    """
    if input_spectrum.bins.size == 0:
        raise ShapeError("input spectrum has no bins")
    r = input_spectrum.bins.astype(np.float64)
    sq = m.w00**2 + m.w1**2 + m.wsqrt2**2
    envelope = (
        sq
        + m.w1 * m.wsqrt2 * np.cos((1.0 - np.sqrt(2.0)) * r)
        + m.w00 * m.w1 * np.cos(r)
        + m.w00 * m.wsqrt2 * np.cos(r / np.sqrt(2.0))
    )
    return RadialSpectrum(
        bins=input_spectrum.bins.copy(),
        power=r * envelope * input_spectrum.power,
        counts=input_spectrum.counts.copy(),
        jacobian_applied=True,
    )


def convolve_periodic(t: np.ndarray, w) -> np.ndarray:
    """Circular 3x3 convolution of a square map (wraparound boundaries).

    Chosen so the convolution theorem holds exactly:
    dft2(result) == kernel_spectrum_grid(w, N) * dft2(t).
    """
    k = as_kernel(w)
    t = np.asarray(t, dtype=np.float64)
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        raise ShapeError(f"expected a square rank-2 map, got shape {t.shape}")
    if t.shape[0] < 4:
        raise ShapeError(f"side {t.shape[0]} below minimum 4")
    return _backend.convolve3x3_periodic(
        np.ascontiguousarray(t), np.ascontiguousarray(k)
    )


@dataclass
class DepthReport:
    """Spectrum fits after 0..L applications of a fixed kernel.

    per_layer_log_delta is the mean added log power per layer over the fit
    range; for a linear layer stack it is depth-independent up to estimation
    noise. spectra/step_log_deltas are kept for inspection and are not part
    of the serialized report.
    """

    depths: np.ndarray  # 0..L
    fits: tuple[PowerLawFit, ...]
    per_layer_log_delta: float
    linear_r2: float
    degenerate: bool = False
    spectra: tuple[RadialSpectrum, ...] = ()
    step_log_deltas: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {
            "depths": [int(d) for d in self.depths],
            "alphas": [f.alpha for f in self.fits],
            "r2s": [f.r2 for f in self.fits],
            "per_layer_log_delta": self.per_layer_log_delta,
            "linear_r2": self.linear_r2,
            "degenerate": self.degenerate,
        }


def depth_simulation(
    seed_ensemble: Sequence[np.ndarray],
    w,
    depth: int,
    k_min: int | None = None,
    k_max: int | None = None,
    jacobian: bool = False,
) -> DepthReport:
    """Apply a 3x3 kernel 0..depth times to an ensemble and fit each spectrum.

    Raises SingularKernelError when the kernel's radial power response
    vanishes on the fit range (log power undefined there).
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    k = as_kernel(w)
    maps = [np.asarray(x, dtype=np.float64) for x in seed_ensemble]
    if not maps:
        raise ShapeError("seed ensemble is empty")
    n = maps[0].shape[0]

    base = ensemble_spectrum(maps, jacobian=jacobian)
    top = k_max if k_max is not None else base.k_max
    bottom = k_min if k_min is not None else max(1, top // 2)
    _, wmeans, _ = _radial_mean(power_grid(kernel_spectrum_grid(k, n)))
    if np.any(wmeans[bottom : top + 1] <= 0.0):
        raise SingularKernelError(
            f"kernel radial power vanishes inside fit range [{bottom}, {top}]"
        )

    spectra = [base]
    fits = [fit_power_law(base, k_min, k_max)]
    current = maps
    for _d in range(depth):
        current = [convolve_periodic(x, k) for x in current]
        s = ensemble_spectrum(current, jacobian=jacobian)
        spectra.append(s)
        fits.append(fit_power_law(s, k_min, k_max))

    fit0 = fits[0]
    sel = (base.bins >= fit0.k_min) & (base.bins <= fit0.k_max)
    stacked = np.stack([s.power[sel] for s in spectra])
    usable = np.all(stacked > 0, axis=0)  # exact zeros can appear mid-stack
    logs = np.log(stacked[:, usable])
    step = np.diff(logs, axis=0)  # (depth, usable bins in range)
    step_means = step.mean(axis=1)
    per_layer = float(step_means.mean())

    alphas = np.array([f.alpha for f in fits], dtype=np.float64)
    depths = np.arange(depth + 1)
    # ptp, not var: the mean of identical floats can round away from them
    if float(np.ptp(alphas)) == 0.0:
        linear_r2 = 1.0
        degenerate = True
    else:
        coef = np.polyfit(depths.astype(np.float64), alphas, 1)
        resid = alphas - np.polyval(coef, depths)
        sst = float(np.sum((alphas - alphas.mean()) ** 2))
        linear_r2 = float(np.clip(1.0 - float(resid @ resid) / sst, 0.0, 1.0))
        degenerate = False

    return DepthReport(
        depths=depths,
        fits=tuple(fits),
        per_layer_log_delta=per_layer,
        linear_r2=linear_r2,
        degenerate=degenerate,
        spectra=tuple(spectra),
        step_log_deltas=step_means,
    )
