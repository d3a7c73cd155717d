"""Seeded synthetic ensembles: power-law fields and white noise.

Power-law images are built in the frequency domain (magnitude |k|**(alpha/2),
uniform random phases, zero DC) and brought to the spatial domain by the
real part of the inverse transform, which halves the expected power uniformly
without touching the exponent.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .tensorio import ManifestItem, write_manifest, write_tensor

__all__ = ["power_law_ensemble", "white_noise_ensemble", "write_ensemble"]


def power_law_image(size: int, alpha: float, rng: np.random.Generator) -> np.ndarray:
    k = np.fft.fftfreq(size) * size
    ky, kx = np.meshgrid(k, k, indexing="ij")
    radius = np.sqrt(kx * kx + ky * ky)
    with np.errstate(divide="ignore"):
        magnitude = np.where(radius > 0, radius ** (alpha / 2.0), 0.0)
    # one deterministic scale per (size, alpha): pixel variance comes out O(1)
    # for every exponent, and a shared constant cannot bias the slope
    scale = size * size / np.sqrt((magnitude**2).sum())
    phases = rng.uniform(0.0, 2.0 * np.pi, size=(size, size))
    coeffs = scale * magnitude * np.exp(1j * phases)
    return np.fft.ifft2(coeffs).real


def power_law_ensemble(
    count: int, size: int, alpha: float, seed: int = 42
) -> list[np.ndarray]:
    """`count` independent size x size fields with expected radial power ~ r**alpha."""
    rng = np.random.default_rng(seed)
    return [power_law_image(size, alpha, rng) for _ in range(count)]


def white_noise_ensemble(count: int, size: int, seed: int = 42) -> list[np.ndarray]:
    """Unit-variance Gaussian noise images (flat expected spectrum)."""
    rng = np.random.default_rng(seed)
    return [rng.standard_normal((size, size)) for _ in range(count)]


def write_ensemble(
    out_dir: str | Path,
    items: list[np.ndarray],
    kind: str = "image",
    layer: int | None = None,
    prefix: str = "img",
) -> Path:
    """Write an ensemble as tensor files plus manifest.json; returns the manifest path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    width = max(4, len(str(max(len(items) - 1, 0))))
    for i, arr in enumerate(items):
        name = f"{prefix}{i:0{width}d}.npy"
        write_tensor(out_dir / name, np.asarray(arr, dtype=np.float64))
        entries.append(
            ManifestItem(
                path=name,
                kind=kind,
                shape=tuple(np.asarray(arr).shape),
                layer=layer if kind == "activation" else None,
            )
        )
    manifest_path = out_dir / "manifest.json"
    write_manifest(manifest_path, entries)
    return manifest_path
