"""Brute-force references used to validate the closed-form multipliers.

Nothing here is used on the measurement path.  The RK4 integrator and the
adaptive Simpson rule deliberately share no code with ``symbols``.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError, NumericalFailure


@dataclass(frozen=True)
class ModeState:
    y: float
    v: float


def _rhs(M, y, v):
    return v, -M * v - M * y


def _rk4_block(M, y, v, h, steps):
    # classical RK4 for y'' + M y' + M y = 0, vectorised over M / y / v
    for _ in range(steps):
        k1y, k1v = _rhs(M, y, v)
        k2y, k2v = _rhs(M, y + 0.5 * h * k1y, v + 0.5 * h * k1v)
        k3y, k3v = _rhs(M, y + 0.5 * h * k2y, v + 0.5 * h * k2v)
        k4y, k4v = _rhs(M, y + h * k3y, v + h * k3v)
        y = y + h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y)
        v = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
    return y, v


def max_step(M):
    """Largest step allowed by the stiffness guard, ``min(0.1, 1/M)``."""
    M = float(np.max(M))
    return 0.1 if M <= 10.0 else 1.0 / M


def rk4_mode(M, t_end, steps=200, y0=0.0, v0=1.0):
    """Integrate one Fourier mode from ``(y0, v0)`` to ``t_end``.

    ``steps`` is raised until the step size respects :func:`max_step`.
    """
    if M < 0:
        raise DomainError("mode strength M must be >= 0")
    if t_end < 0:
        raise DomainError("t_end must be >= 0")
    if steps < 16:
        raise DomainError("rk4_mode needs at least 16 steps")
    if t_end == 0:
        return ModeState(float(y0), float(v0))
    steps = max(int(steps), math.ceil(t_end / max_step(M) - 1e-12))
    h = t_end / steps
    with np.errstate(over="raise", invalid="raise"):
        try:
            y, v = _rk4_block(float(M), float(y0), float(v0), h, steps)
        except FloatingPointError as exc:
            raise NumericalFailure(f"RK4 overflow at M={M}") from exc
    if not (math.isfinite(y) and math.isfinite(v)):
        raise NumericalFailure(f"RK4 produced non-finite state at M={M}")
    return ModeState(y, v)


def _simpson(f, a, fa, b, fb):
    m = 0.5 * (a + b)
    fm = f(m)
    return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_simpson(f, a, b, tol, max_depth=60):
    """Adaptive Simpson quadrature with Richardson correction."""
    fa, fb = f(a), f(b)
    m, fm, whole = _simpson(f, a, fa, b, fb)
    # explicit stack: (a, fa, b, fb, m, fm, whole, tol, depth)
    stack = [(a, fa, b, fb, m, fm, whole, tol, 0)]
    total = 0.0
    while stack:
        a, fa, b, fb, m, fm, whole, eps, depth = stack.pop()
        lm, flm, left = _simpson(f, a, fa, m, fm)
        rm, frm, right = _simpson(f, m, fm, b, fb)
        diff = left + right - whole
        if depth >= max_depth or abs(diff) <= 15.0 * eps:
            total += left + right + diff / 15.0
        else:
            stack.append((m, fm, b, fb, rm, frm, right, 0.5 * eps, depth + 1))
            stack.append((a, fa, m, fm, lm, flm, left, 0.5 * eps, depth + 1))
    return total


def phi_quadrature(M, tol=1e-10):
    """``-1 + ∫_0^1 (1 - 4s/M)^{-1/2} ds`` by adaptive Simpson."""
    if not M > 4:
        raise DomainError("phi_quadrature needs M > 4")
    if tol < 1e-12:
        raise DomainError("tol must be >= 1e-12")
    c = 4.0 / M
    integral = adaptive_simpson(lambda s: 1.0 / math.sqrt(1.0 - c * s), 0.0, 1.0, tol)
    return integral - 1.0


def _integrate_to_samples(M, y, v, times, h_cap):
    # march all modes together, landing exactly on each requested time
    out_y, out_v = [], []
    t_prev = 0.0
    for t in times:
        span = t - t_prev
        if span > 0:
            steps = max(1, math.ceil(span / h_cap - 1e-12))
            y, v = _rk4_block(M, y, v, span / steps, steps)
        out_y.append(y)
        out_v.append(v)
        t_prev = t
    return np.array(out_y), np.array(out_v)


def kernel_consistency_sweep(M_samples, t_samples, refine=32):
    """Max relative error between the closed-form multipliers and RK4.

    Each mode is integrated from ``(1, 0)`` (compared with ``K0, dtK0``) and
    from ``(0, 1)`` (compared with ``K1, dtK1``).  Errors are measured
    relative to the size of the exact state ``max(|K|, |dtK|)`` so that
    zero crossings of oscillating modes do not divide by zero.  ``refine``
    shrinks the step below the stiffness cap.
    """
    from .symbols import kernel_arrays

    M = np.asarray(M_samples, dtype=float).ravel()
    times = np.unique(np.asarray(t_samples, dtype=float).ravel())
    if M.size == 0 or times.size == 0:
        raise DomainError("kernel_consistency_sweep needs non-empty samples")
    if np.any(M < 0) or np.any(times < 0):
        raise DomainError("samples must be non-negative")
    h_cap = max_step(M) / refine
    ones, zeros = np.ones_like(M), np.zeros_like(M)
    y0, v0 = _integrate_to_samples(M, ones, zeros, times, h_cap)
    y1, v1 = _integrate_to_samples(M, zeros, ones, times, h_cap)
    K0, K1, dK0, dK1 = kernel_arrays(M[None, :], times[:, None])
    worst = 0.0
    for num_y, num_v, ex_y, ex_v in ((y0, v0, K0, dK0), (y1, v1, K1, dK1)):
        scale = np.maximum(np.abs(ex_y), np.abs(ex_v))
        scale = np.where(scale > 0, scale, 1.0)
        err = np.maximum(np.abs(num_y - ex_y), np.abs(num_v - ex_v)) / scale
        worst = max(worst, float(np.max(err)))
    return worst
