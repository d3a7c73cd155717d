"""Average pooling and spectrum behavior under downsampling."""

import numpy as np
import pytest

import spectral_stats as ss
from spectral_stats import DegenerateInputError, ShapeError

from oracles import direct_block_mean


class TestAveragePool:
    def test_constant_stays_constant(self):
        out = ss.average_pool(np.full((8, 8), 2.5), 2)
        assert out.shape == (4, 4)
        np.testing.assert_array_equal(out, 2.5)

    def test_checkerboard_blocks_average_to_half(self):
        board = (np.indices((8, 8)).sum(axis=0) % 2).astype(float)
        np.testing.assert_array_equal(ss.average_pool(board, 2), 0.5)

    def test_matches_double_loop(self, rng):
        x = rng.uniform(0, 1, (16, 16))
        for factor in (2, 4, 8):
            np.testing.assert_array_equal(
                ss.average_pool(x, factor), direct_block_mean(x, factor)
            )

    def test_global_mean_preserved(self, rng):
        x = rng.standard_normal((24, 24))
        pooled = ss.average_pool(x, 2)
        assert pooled.mean() == pytest.approx(x.mean(), abs=1e-12)

    def test_factor_must_divide(self):
        with pytest.raises(ShapeError):
            ss.average_pool(np.zeros((10, 10)), 3)

    def test_factor_below_two_rejected(self):
        with pytest.raises(ShapeError):
            ss.average_pool(np.zeros((8, 8)), 1)


class TestPoolingInvariance:
    def test_powerlaw_spectrum_survives_pooling(self, powerlaw_minus2):
        report = ss.pooling_invariance_report(powerlaw_minus2, factor=2)
        assert report.low_freq_log_gap < 0.2
        assert report.alpha_pre.alpha == pytest.approx(
            report.alpha_post.alpha, abs=0.3
        )
        assert report.post.k_max * 2 == report.pre.k_max

    def test_post_has_half_the_bins(self, powerlaw_minus2):
        report = ss.pooling_invariance_report(powerlaw_minus2, factor=2)
        assert len(report.post.bins) * 2 == len(report.pre.bins)

    def test_constant_ensemble_degenerate(self):
        items = [np.full((16, 16), 3.0) for _ in range(4)]
        with pytest.raises(DegenerateInputError):
            ss.pooling_invariance_report(items, factor=2)

    def test_predicted_factor_is_one_at_alpha_minus_two(self):
        """factor**(2+alpha) collapses to 1 when alpha == -2."""
        bins = np.arange(1, 33)
        spec = ss.RadialSpectrum(
            bins=bins,
            power=bins.astype(float) ** -2.0,
            counts=np.ones(32, dtype=int),
        )
        fit = ss.fit_power_law(spec, 1, 32)
        assert 2.0 ** (2.0 + fit.alpha) == pytest.approx(1.0, abs=1e-9)

    def test_report_serialization_fields(self, powerlaw_minus2):
        report = ss.pooling_invariance_report(powerlaw_minus2[:8], factor=2)
        doc = report.to_dict()
        assert set(doc) == {
            "pre",
            "post",
            "low_freq_log_gap",
            "alpha_pre",
            "alpha_post",
            "predicted_corr_factor",
        }
        assert set(doc["pre"]) == {"k", "power", "count"}
        assert doc["predicted_corr_factor"] == pytest.approx(
            2.0 ** (2.0 + doc["alpha_pre"]["alpha"])
        )
