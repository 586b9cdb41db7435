import csv
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sigma_lab import grid as tg
from sigma_lab.errors import DomainError, NumericalFailure

SQRT_2PI = math.sqrt(2 * math.pi)


def gaussian(spec, width=1.0):
    return tg.field_from_function(spec, lambda *xs: np.exp(-0.5 * sum(x * x for x in xs) / width ** 2))


def random_smooth(spec, seed):
    rng = np.random.default_rng(seed)
    c = rng.uniform(-2, 2, spec.n)
    amp = rng.uniform(0.5, 2.0)
    return tg.field_from_function(
        spec, lambda *xs: amp * np.exp(-0.5 * sum((x - ci) ** 2 for x, ci in zip(xs, c))))


def test_spec_validation():
    for bad in ((4, 64, 1.0), (1, 100, 1.0), (1, 8, 1.0), (1, 64, 0.0)):
        with pytest.raises(DomainError):
            tg.GridSpec(*bad)
    s = tg.GridSpec(2, 64, 8.0)
    assert s.shape == (64, 64) and s.dx == 0.25 and s.dk == pytest.approx(math.pi / 8)


def test_field_shape_checked():
    with pytest.raises(DomainError):
        tg.RealField(np.zeros(10), tg.GridSpec(1, 16, 1.0))


def test_forward_gaussian_at_zero():
    spec = tg.GridSpec(1, 1024, 20.0)
    F = tg.forward(gaussian(spec)).coefficients
    assert abs(F[0] - SQRT_2PI) <= 1e-8
    # also away from the origin: e^{-ξ²/2} √(2π)
    k = 7
    assert abs(F[k] - SQRT_2PI * math.exp(-0.5 * (k * spec.dk) ** 2)) <= 1e-8


def test_zero_field():
    spec = tg.GridSpec(2, 32, 5.0)
    z = tg.RealField(np.zeros(spec.shape), spec)
    assert np.all(tg.forward(z).coefficients == 0)
    assert tg.l1_norm(z) == 0


@pytest.mark.parametrize("n,N", [(1, 512), (2, 64), (3, 32)])
def test_round_trip(n, N):
    spec = tg.GridSpec(n, N, 10.0)
    f = random_smooth(spec, 3)
    back = tg.inverse(tg.forward(f)).samples
    assert np.max(np.abs(back - f.samples)) <= 1e-10


@pytest.mark.parametrize("n,N", [(1, 256), (2, 64)])
def test_parseval(n, N):
    spec = tg.GridSpec(n, N, 7.0)
    f = random_smooth(spec, 1)
    F = tg.forward(f).coefficients
    lhs = spec.cell * np.sum(f.samples ** 2)
    rhs = (2 * math.pi) ** (-spec.n) * spec.dk ** spec.n * np.sum(np.abs(F) ** 2)
    assert rhs == pytest.approx(lhs, rel=1e-10)


def test_conjugate_symmetry():
    spec = tg.GridSpec(1, 128, 5.0)
    F = tg.forward(random_smooth(spec, 2)).coefficients
    mirror = np.conj(F[(-np.arange(spec.N)) % spec.N])
    # (-1)^k phase is symmetric in k except at the Nyquist index
    assert np.max(np.abs(F[1:] - mirror[1:])) <= 1e-12 * np.max(np.abs(F))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(seed, a, b):
    spec = tg.GridSpec(1, 256, 10.0)
    f, g = random_smooth(spec, seed), random_smooth(spec, seed + 1)
    h = tg.RealField(a * f.samples + b * g.samples, spec)
    lhs = tg.forward(h).coefficients
    rhs = a * tg.forward(f).coefficients + b * tg.forward(g).coefficients
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * (1 + np.max(np.abs(rhs)))


def test_translation_phase():
    spec = tg.GridSpec(1, 256, 10.0)
    f = random_smooth(spec, 5)
    shift = 9
    g = tg.RealField(np.roll(f.samples, shift), spec)
    xi = spec.dk * np.fft.fftfreq(spec.N, 1.0 / spec.N)
    expect = tg.forward(f).coefficients * np.exp(-1j * xi * shift * spec.dx)
    assert np.max(np.abs(tg.forward(g).coefficients - expect)) <= 1e-12


def test_identity_multiplier():
    spec = tg.GridSpec(2, 32, 4.0)
    F = tg.forward(random_smooth(spec, 0))
    assert np.array_equal(tg.apply_radial_multiplier(F, tg.riesz(0)).coefficients, F.coefficients)


def test_laplacian_eigenrelation():
    spec = tg.GridSpec(1, 128, math.pi * 8)
    k = 5
    xi = k * spec.dk
    f = tg.field_from_function(spec, lambda x: np.sin(xi * x))
    G = tg.apply_radial_multiplier(tg.forward(f), lambda r: r ** 2)
    out = tg.inverse(G).samples
    assert np.max(np.abs(out - xi ** 2 * f.samples)) <= 1e-12


def test_riesz_kills_mean():
    spec = tg.GridSpec(1, 64, 5.0)
    G = tg.apply_radial_multiplier(tg.forward(gaussian(spec)), tg.riesz(0.7))
    assert G.coefficients[0] == 0


def test_riesz_bessel_values():
    assert tg.bessel(3.0)(0.0) == 1.0
    assert tg.bessel(2.0)(1.0) == 2.0
    sigma = 1.5
    assert tg.riesz(sigma)(4 ** (1 / sigma)) == pytest.approx(4.0, rel=1e-15)
    assert tg.riesz(0)(0.0) == 1.0
    for f in (tg.riesz, tg.bessel):
        with pytest.raises(DomainError):
            f(-1)


def test_nan_multiplier_reported():
    spec = tg.GridSpec(1, 32, 3.0)
    F = tg.forward(gaussian(spec))
    with pytest.raises(NumericalFailure, match="rho="):
        tg.apply_radial_multiplier(F, lambda r: np.where(r > 1, np.nan, 1.0))


def test_radial_caching_matches_pointwise():
    spec = tg.GridSpec(2, 32, 3.0)
    m = lambda r: np.cos(r) / (1 + r)
    assert np.array_equal(tg.radial_values(spec, m), m(spec.rho()))
    assert np.array_equal(tg.radial_values(spec, m, half=True), m(spec.rho(half=True)))


def test_l1_norm_gaussian():
    spec = tg.GridSpec(1, 2048, 20.0)
    f = gaussian(spec)
    assert abs(tg.l1_norm(f) - SQRT_2PI) <= 1e-8
    g = tg.RealField(-3.5 * f.samples, spec)
    assert tg.l1_norm(g) == 3.5 * tg.l1_norm(f)


def test_l1_norm_grid_convergence():
    f = lambda x: 1.0 / np.cosh(x) * np.cos(0.5 * x)
    a = tg.l1_norm(tg.field_from_function(tg.GridSpec(1, 1024, 40.0), f))
    b = tg.l1_norm(tg.field_from_function(tg.GridSpec(1, 2048, 40.0), f))
    assert abs(a - b) < 1e-3 * b


def test_sobolev_norm_order_zero():
    spec = tg.GridSpec(1, 512, 20.0)
    f = gaussian(spec)
    assert tg.sobolev_l1_norm(f, 0) == tg.l1_norm(f)
    assert tg.sobolev_l1_norm(f, 2) > tg.l1_norm(f)


def test_pairwise_sum_deterministic():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(1000)
    assert tg.pairwise_sum(x) == tg.pairwise_sum(x.copy())
    assert tg.pairwise_sum(x) == pytest.approx(math.fsum(x), abs=1e-12)
    assert tg.pairwise_sum([]) == 0.0


def test_boundary_mass_examples():
    spec = tg.GridSpec(1, 1024, 20.0)
    delta = np.zeros(spec.shape)
    delta[spec.N // 2] = 1.0
    assert tg.boundary_mass(tg.RealField(delta, spec)) == 0.0
    uniform = tg.RealField(np.ones(spec.shape), spec)
    assert abs(tg.boundary_mass(uniform, 0.1) - 0.1) <= 1.0 / spec.N + 1e-3
    assert tg.boundary_mass(gaussian(spec)) <= 1e-10
    with pytest.raises(DomainError):
        tg.boundary_mass(uniform, 1.5)


def test_set_workers_does_not_change_results():
    spec = tg.GridSpec(2, 64, 5.0)
    f = random_smooth(spec, 4)
    tg.set_workers(1)
    a = tg.forward(f).coefficients
    tg.set_workers(4)
    b = tg.forward(f).coefficients
    tg.set_workers(1)
    assert np.array_equal(a, b)


def test_write_field_csv(tmp_path):
    spec = tg.GridSpec(2, 16, 1.0)
    f = gaussian(spec)
    path = tmp_path / "f.csv"
    tg.write_field_csv(f, path)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["x", "y", "value"]
    assert len(rows) == 1 + 16 * 16
    assert float(rows[1][2]) == f.samples[0, 0]
