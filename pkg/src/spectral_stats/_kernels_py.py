"""Pure-NumPy implementations of the per-pixel hot kernels.

These back the spectrum pipeline when the compiled extension is absent.
Accumulation order is fixed to match `_kernels.pyx` exactly (row-major over
pixels, row-major over stencil offsets), so both backends produce
bit-identical results.
"""

from __future__ import annotations

import numpy as np


def bin_sum(values: np.ndarray, bin_index: np.ndarray, nbins: int) -> np.ndarray:
    """Sum `values` into `nbins` buckets keyed by `bin_index` (row-major order)."""
    out = np.bincount(bin_index.ravel(), weights=values.ravel(), minlength=nbins)
    return out[:nbins]


def convolve3x3_periodic(image: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Circular 3x3 convolution: out[y,x] = sum_{dy,dx} w[dy,dx] * f[y-dy, x-dx]."""
    out = np.zeros_like(image)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            out += weights[dy + 1, dx + 1] * np.roll(image, (dy, dx), axis=(0, 1))
    return out


def block_mean(image: np.ndarray, factor: int) -> np.ndarray:
    """Non-overlapping factor x factor block means (stride == kernel)."""
    acc = np.zeros((image.shape[0] // factor, image.shape[1] // factor), dtype=image.dtype)
    for a in range(factor):
        for b in range(factor):
            acc += image[a::factor, b::factor]
    return acc / (factor * factor)
