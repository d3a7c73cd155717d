"""Acceptance suite: one test per criterion, each printing a pass line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. Tolerances are pinned here and never loosened at runtime.
"""

import time

import numpy as np
import pytest

import spectral_stats as ss

from oracles import (
    brute_force_dft2,
    direct_convolve3x3_periodic,
    direct_spatial_correlation,
    kernel_nine_term_sum,
    radial_mean_by_enumeration,
)


def _ok(num: int, detail: str) -> None:
    print(f"[PASS] criterion {num}: {detail}")


def test_criterion_01_dft_matches_brute_force():
    """dft2 equals the direct O(N^4) double sum within 1e-9, 50 inputs per size."""
    rng = np.random.default_rng(101)
    start = time.monotonic()
    worst = 0.0
    for n in (4, 8, 16):
        for _ in range(50):
            f = rng.standard_normal((n, n))
            diff = np.abs(ss.dft2(f) - brute_force_dft2(f)).max()
            worst = max(worst, diff)
    elapsed = time.monotonic() - start
    assert worst < 1e-9
    assert elapsed < 10.0
    _ok(1, f"max |dft2 - direct| = {worst:.3e} over 150 inputs in {elapsed:.2f}s")


def test_criterion_02_parseval():
    """sum(|F|^2)/N^2 equals the spatial sum of squares within 1e-6 relative."""
    rng = np.random.default_rng(102)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(4, 33))
        f = rng.standard_normal((n, n))
        lhs = ss.power_grid(ss.dft2(f)).sum() / (n * n)
        rhs = (f**2).sum()
        worst = max(worst, abs(lhs - rhs) / rhs)
    assert worst < 1e-6
    _ok(2, f"max relative Parseval error = {worst:.3e} over 100 inputs")


def test_criterion_03_exponent_recovery():
    """Fitted exponent within 0.1 of the constructed one for alpha in {-1,-2,-3}."""
    errs = {}
    for alpha in (-1.0, -2.0, -3.0):
        items = ss.power_law_ensemble(50, 64, alpha, seed=7)
        fit = ss.fit_power_law(ss.ensemble_spectrum(items))
        errs[alpha] = abs(fit.alpha - alpha)
        assert errs[alpha] <= 0.1
    detail = ", ".join(f"alpha={a}: err={e:.4f}" for a, e in errs.items())
    _ok(3, detail)


def test_criterion_04_white_noise_flatness():
    """|fitted alpha| < 0.05 for unit-variance noise, every one of 5 seeds."""
    alphas = []
    for seed in range(5):
        items = ss.white_noise_ensemble(100, 32, seed=seed)
        alphas.append(ss.fit_power_law(ss.ensemble_spectrum(items)).alpha)
    alphas = np.array(alphas)
    assert np.all(np.abs(alphas) < 0.05)
    _ok(4, f"|alpha| max={np.abs(alphas).max():.4f} "
           f"(mean {alphas.mean():+.4f}, sd {alphas.std():.4f} over 5 seeds)")


def test_criterion_05_kernel_dual_route():
    """Nine-term closed form equals the zero-padded transform within 1e-9."""
    rng = np.random.default_rng(105)
    worst = 0.0
    sizes = (8, 16, 32)
    for i in range(100):
        k = rng.uniform(-1, 1, (3, 3))
        n = sizes[i % 3]
        diff = np.abs(
            ss.kernel_spectrum_grid(k, n) - kernel_nine_term_sum(k, n)
        ).max()
        worst = max(worst, diff)
    assert worst < 1e-9
    _ok(5, f"max |closed form - numeric| = {worst:.3e} over 100 kernels")


def test_criterion_06_convolution_theorem():
    """Spatial double-loop route equals the frequency-product route within 1e-9."""
    rng = np.random.default_rng(106)
    worst = 0.0
    for n in (4, 8, 12, 16):
        for _ in range(5):
            f = rng.standard_normal((n, n))
            k = rng.uniform(-1, 1, (3, 3))
            spatial = direct_convolve3x3_periodic(f, k)
            fourier = np.fft.ifft2(ss.kernel_spectrum_grid(k, n) * ss.dft2(f)).real
            worst = max(worst, np.abs(spatial - fourier).max())
            worst = max(worst, np.abs(ss.convolve_periodic(f, k) - spatial).max())
    assert worst < 1e-9
    _ok(6, f"max route disagreement = {worst:.3e}")


def test_criterion_07_layer_multiplicativity():
    """Grid power after 8 layers equals |W|^16 times the original, within 1e-7
    in log, on grid points above the float noise floor of the dynamic range."""
    rng = np.random.default_rng(107)
    n, depth = 16, 8
    worst = 0.0
    kernels = [ss.box_kernel()] + [rng.uniform(-0.5, 0.5, (3, 3)) for _ in range(4)]
    for k in kernels:
        f = rng.standard_normal((n, n))
        gain = ss.power_grid(ss.kernel_spectrum_grid(k, n))
        predicted = gain**depth * ss.power_grid(ss.dft2(f))
        g = f
        for _ in range(depth):
            g = ss.convolve_periodic(g, k)
        measured = ss.power_grid(ss.dft2(g))
        mask = predicted > 1e-6 * predicted.max()
        assert mask.any()
        gap = np.abs(np.log(measured[mask]) - np.log(predicted[mask])).max()
        worst = max(worst, gap)
    assert worst < 1e-7
    _ok(7, f"max |log measured - log predicted| = {worst:.3e} at depth {depth}")


def test_criterion_08_depth_linearity():
    """Box-kernel depth sweep: strictly decreasing exponents, linear r^2 > 0.9.

    Fit range [4, 16] keeps the window below the box kernel's spectral zero
    set (first zero at k = N/3), where the log spectrum stays regular.
    """
    items = ss.power_law_ensemble(50, 64, -2.0, seed=7)
    report = ss.depth_simulation(items, ss.box_kernel(), 8, k_min=4, k_max=16)
    alphas = np.array([f.alpha for f in report.fits])
    assert np.all(np.diff(alphas) < 0)
    assert report.linear_r2 > 0.9
    _ok(8, f"alphas {alphas[0]:+.2f}..{alphas[-1]:+.2f} strictly decreasing, "
           f"linear r2 = {report.linear_r2:.4f}")


def test_criterion_09_pooling_invariance():
    """Factor-2 pooling moves the shared low-frequency log spectrum by < 0.2."""
    items = ss.power_law_ensemble(50, 64, -2.0, seed=7)
    report = ss.pooling_invariance_report(items, factor=2)
    assert report.low_freq_log_gap < 0.2
    _ok(9, f"mean |delta log P| = {report.low_freq_log_gap:.4f} on shared radii")


def test_criterion_10_wiener_khinchin():
    """Transform-route autocorrelation equals the spatial double loop within 1e-6."""
    rng = np.random.default_rng(110)
    worst = 0.0
    for n in (4, 8, 12, 16):
        f = rng.standard_normal((n, n))
        for subtract in (False, True):
            grid = direct_spatial_correlation(f, subtract)
            ref = radial_mean_by_enumeration(grid, np.arange(n // 2 + 1))
            got = ss.autocorrelation(f, subtract_mean=subtract)
            worst = max(worst, np.abs(got.corr - ref).max())
    assert worst < 1e-6
    _ok(10, f"max |transform - spatial| = {worst:.3e}")


def test_criterion_11_loss_identities():
    """fourier_l1 identity; cps normalized identity/sign-flip; total arithmetic."""
    rng = np.random.default_rng(111)
    x = rng.standard_normal((3, 16, 16))

    l1_self = ss.fourier_l1(x, x)
    assert l1_self == 0.0

    cps_self = ss.cps_loss(x, x, "normalized", 1e-8)
    assert cps_self < 1e-4

    cps_flip = ss.cps_loss(x, -x, "normalized", 1e-8)
    assert cps_flip == pytest.approx(2.0, abs=1e-3)

    report = ss.total_loss(3.0, 4.0, ce=1.0, overhaul=2.0,
                           alpha=1e-4, beta=1e-4, gamma=0.01)
    assert report.total == 1.0 + 1e-4 * 2.0 + 1e-4 * 3.0 + 0.01 * 4.0
    assert report.total == pytest.approx(1.0405, abs=1e-12)

    _ok(11, f"l1(X,X)={l1_self}, cps(X,X)={cps_self:.2e}, "
            f"cps(X,-X)={cps_flip:.6f}, total={report.total}")
