import math

import numpy as np
import pytest

from sigma_lab.errors import DomainError
from sigma_lab.oracle import adaptive_simpson, kernel_consistency_sweep, max_step, phi_quadrature, rk4_mode
from sigma_lab.symbols import char_roots, kernel_values, phi


def test_rk4_examples():
    assert rk4_mode(0.0, 3.0).y == pytest.approx(3.0, abs=1e-12)
    assert rk4_mode(4.0, 1.0, y0=1.0, v0=0.0).y == pytest.approx(0.4060058, abs=1e-6)
    assert rk4_mode(1.0, 1.0).y == pytest.approx(kernel_values(1.0, 1.0).K1, abs=1e-6)


def test_rk4_validation():
    with pytest.raises(DomainError):
        rk4_mode(1.0, 1.0, steps=8)
    with pytest.raises(DomainError):
        rk4_mode(-1.0, 1.0)
    assert rk4_mode(3.0, 0.0, y0=2.0, v0=5.0).y == 2.0


def test_stiffness_guard():
    assert max_step(5.0) == 0.1 and max_step(50.0) == pytest.approx(0.02)
    # a huge M would explode with only 16 steps; the guard raises the count
    st = rk4_mode(400.0, 2.0, steps=16, y0=1.0, v0=0.0)
    assert st.y == pytest.approx(kernel_values(400.0, 2.0).K0, rel=1e-6)


def test_rk4_convergence_order():
    exact = kernel_values(1.0, 2.0).K1
    errs = [abs(rk4_mode(1.0, 2.0, steps=s).y - exact) for s in (20, 40, 80)]
    ratios = [errs[k] / errs[k + 1] for k in range(2)]
    assert all(12 <= r <= 20 for r in ratios)
    assert min(math.log2(r) for r in ratios) >= 3.8


def test_phi_quadrature_examples():
    assert phi_quadrature(8.0) == pytest.approx(0.1715729, abs=1e-7)
    assert abs(phi_quadrature(1e6)) <= 2e-6
    assert phi_quadrature(4.41) == pytest.approx(-1 - char_roots(4.41).lambda1.real, abs=1e-8)
    with pytest.raises(DomainError):
        phi_quadrature(4.0)
    with pytest.raises(DomainError):
        phi_quadrature(8.0, tol=1e-14)


def test_phi_quadrature_tightens():
    exact = phi(5.0)
    errs = [abs(phi_quadrature(5.0, tol) - exact) for tol in (1e-4, 1e-6, 1e-8, 1e-10)]
    assert all(b <= a for a, b in zip(errs, errs[1:]))
    assert errs[-1] <= 1e-10


def test_adaptive_simpson_polynomial():
    # Simpson is exact on cubics
    assert adaptive_simpson(lambda x: x ** 3 - 2 * x, 0.0, 2.0, 1e-12) == pytest.approx(0.0, abs=1e-14)
    assert adaptive_simpson(math.sin, 0.0, math.pi, 1e-10) == pytest.approx(2.0, abs=1e-10)


def test_sweep_examples():
    assert kernel_consistency_sweep([0.0, 4.0], [0.0]) == 0.0
    assert kernel_consistency_sweep([4.0], [5.0]) <= 1e-6
    with pytest.raises(DomainError):
        kernel_consistency_sweep([], [1.0])


def test_sweep_grid():
    err = kernel_consistency_sweep(np.geomspace(1e-3, 50, 40), np.geomspace(0.1, 10, 10))
    assert err <= 1e-6
