import numpy as np
import pytest

from sigma_lab.bands import BandThresholds, band_weight, chi, chi_all, transition
from sigma_lab.errors import DomainError

SIGMAS = (1.25, 1.5, 2.0, 3.0)


def test_transition_examples():
    assert transition(-1.0) == 1.0
    assert transition(2.0) == 0.0
    assert transition(0.5) == 0.5
    s = np.linspace(-0.5, 1.5, 401)
    v = transition(s)
    assert np.all(np.diff(v) <= 0) and v.min() >= 0 and v.max() <= 1


@pytest.mark.parametrize("sigma", SIGMAS)
def test_threshold_ordering(sigma):
    r = BandThresholds.for_sigma(sigma)
    assert 0 < r.r1 < r.r2 < 1 < r.r3 < r.r4


def test_chi_examples():
    assert chi(1, 0.1, 2.0) == 1.0
    assert chi(3, 3.0, 2.0) == 1.0
    assert chi(2, 1.0, 2.0) == 1.0
    with pytest.raises(DomainError):
        chi(4, 1.0, 2.0)
    with pytest.raises(DomainError):
        chi(1, -0.1, 2.0)


@pytest.mark.parametrize("sigma", SIGMAS)
def test_partition_of_unity(sigma):
    rho = np.geomspace(1e-3, 10.0, 10_000)
    c1, c2, c3 = chi_all(rho, sigma)
    assert np.max(np.abs(c1 + c2 + c3 - 1)) <= 1e-15
    for c in (c1, c2, c3):
        assert c.min() >= 0 and c.max() <= 1


@pytest.mark.parametrize("sigma", SIGMAS)
def test_supports_and_plateaus(sigma):
    r = BandThresholds.for_sigma(sigma)
    rho = np.geomspace(1e-3, 10.0, 5000)
    c1, c2, c3 = chi_all(rho, sigma)
    assert np.all(c1[rho <= r.r1] == 1) and np.all(c1[rho >= r.r2] == 0)
    assert np.all(c3[rho >= r.r4] == 1) and np.all(c3[rho <= r.r3] == 0)
    assert np.all(c2[(rho <= r.r1) | (rho >= r.r4)] == 0)
    assert np.all(c2[(rho >= r.r2) & (rho <= r.r3)] == 1)


def test_ramp_endpoints_are_flat():
    # one-sided differences into the ramp approach the plateau's zero derivatives
    sigma = 2.0
    r = BandThresholds.for_sigma(sigma)
    w = r.r2 - r.r1
    for edge, sign in ((r.r1, 1.0), (r.r2, -1.0)):
        prev = None
        for h in (w / 80, w / 160, w / 320):
            x = edge + sign * h * np.arange(5)
            f = chi(1, x, sigma)
            mags = np.array([abs(np.diff(f, k)[0]) / h ** k for k in range(1, 5)])
            if prev is not None:
                assert np.all(mags <= prev) and (mags.sum() < prev.sum() or prev.sum() == 0)
            prev = mags
        assert np.all(prev < 1e-3)


def test_band_weight():
    rho = np.linspace(0, 3, 7)
    assert np.all(band_weight("all", rho, 2.0) == 1)
    assert np.array_equal(band_weight("2", rho, 2.0), chi(2, rho, 2.0))
