import numpy as np
import pytest

import spectral_stats as ss


@pytest.fixture(scope="session")
def powerlaw_minus2():
    """50-image synthetic ensemble with radial power ~ r^-2, N=64."""
    return ss.power_law_ensemble(50, 64, -2.0, seed=7)


@pytest.fixture()
def rng():
    return np.random.default_rng(42)
