import math

import numpy as np
import pytest
import scipy.stats as ss

from gaussmin import stats
from gaussmin.streams import RngStream


def test_ks_1samp_matches_scipy():
    x = RngStream(1).gaussians(3000)
    cdf = lambda v: 0.5 * math.erfc(-v / math.sqrt(2.0))
    ours = stats.ks_1samp(x, cdf)
    ref = ss.ks_1samp(x, ss.norm.cdf).statistic
    assert abs(ours - ref) < 1e-12


def test_ks_2samp_matches_scipy():
    x = RngStream(2).gaussians(2000)
    y = RngStream(3).gaussians(1500) * 1.1
    ours = stats.ks_2samp(x, y)
    ref = ss.ks_2samp(x, y).statistic
    assert abs(ours - ref) < 1e-12


def test_ks_detects_shift():
    x = RngStream(4).gaussians(5000)
    y = RngStream(5).gaussians(5000) + 0.2
    assert stats.ks_2samp(x, y) > stats.ks_critical_2samp(0.001, 5000, 5000)


def test_ks_null_calibration():
    # same law, different streams: should pass at a strict level
    x = RngStream(6).gaussians(20_000)
    y = RngStream(7).gaussians(20_000)
    assert stats.ks_2samp(x, y) < stats.ks_critical_2samp(0.001, x.size, y.size)


def test_critical_value_magnitude():
    # the 0.1% one-sample constant is about 1.95/sqrt(n)
    c = stats.ks_critical_1samp(0.001, 10 ** 5)
    assert abs(c * math.sqrt(10 ** 5) - 1.9495) < 1e-3


def test_validation():
    with pytest.raises(ValueError):
        stats.ks_1samp(np.array([]), lambda v: 0.5)
    with pytest.raises(ValueError):
        stats.ks_critical_1samp(1.5, 100)
    with pytest.raises(ValueError):
        stats.ks_2samp(np.array([1.0]), np.array([]))
    with pytest.raises(ValueError):
        stats.ks_1samp(np.array([1.0]), lambda v: 2.0)
