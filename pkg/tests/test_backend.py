"""Compiled kernels vs the NumPy fallback: bit-identical results."""

import numpy as np
import pytest

from spectral_stats import _kernels_py, backend_name

try:
    from spectral_stats import _kernels  # compiled extension
except ImportError:
    _kernels = None

needs_compiled = pytest.mark.skipif(
    _kernels is None, reason="compiled extension not built"
)


def test_backend_reports_a_known_name():
    assert backend_name() in ("compiled", "python")


@needs_compiled
def test_bin_sum_bit_identical():
    rng = np.random.default_rng(0)
    for n in (8, 16, 31):
        values = np.ascontiguousarray(rng.uniform(0, 1, (n, n)))
        idx = np.ascontiguousarray(
            rng.integers(0, n // 2 + 2, (n, n)), dtype=np.int32
        )
        a = _kernels_py.bin_sum(values, idx, n // 2 + 1)
        b = _kernels.bin_sum(values, idx, n // 2 + 1)
        assert a.tobytes() == b.tobytes()


@needs_compiled
def test_convolve_bit_identical():
    rng = np.random.default_rng(1)
    for n in (4, 8, 17):
        image = np.ascontiguousarray(rng.standard_normal((n, n)))
        weights = np.ascontiguousarray(rng.uniform(-1, 1, (3, 3)))
        a = _kernels_py.convolve3x3_periodic(image, weights)
        b = _kernels.convolve3x3_periodic(image, weights)
        assert a.tobytes() == b.tobytes()


@needs_compiled
def test_block_mean_bit_identical():
    rng = np.random.default_rng(2)
    for n, factor in ((8, 2), (16, 4), (24, 3)):
        image = np.ascontiguousarray(rng.standard_normal((n, n)))
        a = _kernels_py.block_mean(image, factor)
        b = _kernels.block_mean(image, factor)
        assert a.tobytes() == b.tobytes()
