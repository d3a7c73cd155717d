#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the NumPy fallback.

Usage: python benchmarks/bench_kernels.py [--sizes 64,224,512] [--repeat 20]

Both backends are bit-identical; this only measures speed. The end-to-end
row times a full ensemble-spectrum pass (FFT included) to show how much of
the pipeline the kernels account for.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from spectral_stats import _kernels_py
from spectral_stats.spectrum import _radial_bins, ensemble_spectrum

try:
    from spectral_stats import _kernels
except ImportError:
    _kernels = None


def _time(fn, repeat: int) -> float:
    fn()  # warm up
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_backend(mod, size: int, repeat: int) -> dict[str, float]:
    rng = np.random.default_rng(0)
    image = np.ascontiguousarray(rng.standard_normal((size, size)))
    weights = np.ascontiguousarray(rng.uniform(-1, 1, (3, 3)))
    idx, _ = _radial_bins(size)
    nbins = size // 2 + 1
    return {
        "bin_sum": _time(lambda: mod.bin_sum(image**2, idx, nbins), repeat),
        "convolve3x3": _time(lambda: mod.convolve3x3_periodic(image, weights), repeat),
        "block_mean": _time(lambda: mod.block_mean(image, 2), repeat),
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="64,224,512")
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if _kernels is None:
        print("compiled extension not built; showing the NumPy fallback only")

    header = f"{'kernel':<14}{'N':>6}{'numpy':>12}{'compiled':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for size in sizes:
        py = bench_backend(_kernels_py, size, args.repeat)
        cy = bench_backend(_kernels, size, args.repeat) if _kernels else None
        for name in py:
            base = py[name]
            if cy:
                print(
                    f"{name:<14}{size:>6}{base * 1e6:>10.1f}us"
                    f"{cy[name] * 1e6:>10.1f}us{base / cy[name]:>9.2f}x"
                )
            else:
                print(f"{name:<14}{size:>6}{base * 1e6:>10.1f}us{'-':>12}{'-':>10}")

    rng = np.random.default_rng(1)
    items = [rng.standard_normal((64, 64)) for _ in range(50)]
    full = _time(lambda: ensemble_spectrum(items), max(3, args.repeat // 4))
    print(f"\nensemble_spectrum, 50 maps at N=64 (active backend): {full * 1e3:.2f} ms")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
