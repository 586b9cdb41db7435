"""Predicted decay/growth exponents, empirical rate fits, and symbol-bound audits."""

from dataclasses import dataclass, field
import math

import numpy as np

from .bands import BandThresholds
from .errors import DomainError
from .symbols import kernel_arrays, phi, split_symbols


@dataclass(frozen=True)
class TheoremRates:
    alpha_u0: float
    alpha_u1: float
    beta_u0: float
    beta_u1: float
    sob_u_data: tuple
    sob_ut_data: tuple

    def kernel_exponent(self, i, j):
        """Exponent bounding the ``∂_t^j K_i`` kernel on small frequencies."""
        return ((self.alpha_u0, self.alpha_u1), (self.beta_u0, self.beta_u1))[j][i]


def theorem_rates(n, a, sigma):
    """Exponents of ``(1+t)`` in the L1-L1 bounds for ``|D|^a u`` and ``|D|^a u_t``."""
    if int(n) != n or n < 1:
        raise DomainError(f"dimension must be a positive integer, got {n}")
    if a < 0:
        raise DomainError("a must be >= 0")
    if not sigma > 1:
        raise DomainError("sigma must exceed 1")
    h = int(n) // 2
    shift = a / (2.0 * sigma)
    excess = max(a - sigma, 0.0)
    return TheoremRates(
        alpha_u0=0.5 * (2 + h) - shift,
        alpha_u1=1.0 + 0.5 * (1 + h) - shift,
        beta_u0=0.5 * (1 + h) - shift,
        beta_u1=0.5 * (2 + h) - shift,
        sob_u_data=(float(a), excess),
        sob_ut_data=(2.0 * sigma + excess, 2.0 * sigma + excess),
    )


def data_order(i, j, a, sigma):
    """Bessel order of the data norm paired with ``∂_t^j K_i`` on large frequencies."""
    base = 2.0 * sigma * j + max(a - sigma, 0.0)
    return max(float(a), base) if i == 0 else base


@dataclass(frozen=True)
class RateFit:
    exponent: float
    intercept: float
    rms_residual: float
    window: tuple


def _window(times, values, window_fraction):
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.shape != v.shape or t.ndim != 1:
        raise DomainError("times and values must be 1-D arrays of equal length")
    if not 0 < window_fraction <= 1:
        raise DomainError("window_fraction must lie in (0, 1]")
    count = math.ceil(window_fraction * t.size - 1e-9)
    t, v = t[t.size - count:], v[v.size - count:]
    if t.size < 8:
        raise DomainError(f"need at least 8 samples in the fit window, got {t.size}")
    if np.any(~np.isfinite(v)) or np.any(v <= 0):
        raise DomainError("values must be finite and positive")
    return t, v


def _line_fit(x, y):
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return float(slope), float(intercept), float(np.sqrt(np.mean(resid ** 2)))


def fit_power_law(times, values, window_fraction=0.5):
    """Slope of ``log(values)`` against ``log(1+t)`` over the trailing window."""
    t, v = _window(times, values, window_fraction)
    slope, icpt, rms = _line_fit(np.log1p(t), np.log(v))
    return RateFit(slope, icpt, rms, (float(t[0]), float(t[-1])))


def fit_exponential(times, values, window_fraction=0.5):
    """Decay rate ``c`` of ``values ~ C e^{-ct}`` over the trailing window."""
    t, v = _window(times, values, window_fraction)
    slope, icpt, rms = _line_fit(t, np.log(v))
    return RateFit(-slope, icpt, rms, (float(t[0]), float(t[-1])))


# ---------------------------------------------------------------- audits

AUDIT_CONSTANT = 0.5
BOUND_IDS = ("B11", "B3", "B14", "B15", "B16", "B17")


@dataclass
class BoundReport:
    bound_id: str
    sup_ratio: float
    argmax: tuple
    samples_count: int
    decade_sups: list = field(default_factory=list)
    recombination_residual: float = 0.0
    passed: bool = False


def _large_band_roots(M):
    delta = np.sqrt(M) * np.sqrt(M - 4.0)
    lam2 = -0.5 * (M + delta)
    return M / lam2, lam2, delta


def audit_target(bound_id, sigma, rho, t, j=0, b=0.0, p=1.0):
    """Radial profile of the symbol named by ``bound_id`` and its claimed exponent.

    Returns ``(values, exponent_at_alpha0, time_weighted)``.
    """
    rho = np.asarray(rho, dtype=float)
    if bound_id == "B11":
        return rho ** (2.0 * p * sigma), 2.0 * p * sigma, False
    M = rho ** (2.0 * sigma)
    if bound_id == "B3":
        return phi(M), -2.0 * sigma, False
    lam1, lam2, delta = _large_band_roots(M)
    rb = rho ** b
    if bound_id == "B14":
        vals = lam1 * np.exp(lam2 * t) * lam2 ** j * rb / delta
        return vals, 2.0 * sigma * j + b - 2.0 * sigma, True
    if bound_id == "B15":
        vals = np.exp(lam2 * t) * lam2 ** j * rb / delta
        return vals, 2.0 * sigma * j + b - 2.0 * sigma, True
    if bound_id == "B16":
        vals = lam2 * np.exp(lam1 * t) * lam1 ** j * rb / delta
        return vals, b, True
    if bound_id == "B17":
        vals = np.exp(lam1 * t) * lam1 ** j * rb / delta
        return vals, b - 2.0 * sigma, True
    raise DomainError(f"unknown bound id {bound_id!r}")


_STENCILS = {
    1: ((-1, 1), (-0.5, 0.5)),
    2: ((-1, 0, 1), (1.0, -2.0, 1.0)),
    3: ((-2, -1, 1, 2), (-0.5, 1.0, -1.0, 0.5)),
}


def radial_derivative(f, rho, order):
    """Central-difference ``d^order f / d rho^order`` with step ``rho·ε^{1/(order+2)}``."""
    rho = np.asarray(rho, dtype=float)
    if order == 0:
        return np.asarray(f(rho), dtype=float)
    if order not in _STENCILS:
        raise DomainError("derivative order must be 0..3")
    h = rho * np.finfo(float).eps ** (1.0 / (order + 2))
    offsets, weights = _STENCILS[order]
    acc = np.zeros_like(rho)
    for k, w in zip(offsets, weights):
        acc = acc + w * np.asarray(f(rho + k * h), dtype=float)
    return acc / h ** order


def _decade_sups(rho, ratio):
    lo = math.floor(math.log10(rho[0]))
    decades = np.floor(np.log10(rho) - lo).astype(int)
    return [float(np.max(ratio[decades == d])) for d in np.unique(decades)]


def audit_symbol_bound(bound_id, sigma, alpha, j=0, b=0.0, rho_range=None,
                       t_range=(0.5, 10.0), p=1.0, rho_samples=160, t_samples=8):
    """Sup of ``|∂^α S| / (e^{-t/2} ρ^{claimed})`` over a (ρ, t) grid.

    Passes when every ratio is finite and the per-decade sup never jumps by a
    factor of 10 or more from one decade of ρ to the next.
    """
    if bound_id not in BOUND_IDS:
        raise DomainError(f"bound_id must be one of {BOUND_IDS}")
    if alpha not in (0, 1, 2, 3):
        raise DomainError("radial derivative order must be 0..3")
    r4 = BandThresholds.for_sigma(sigma).r4
    if rho_range is None:
        rho_range = (1.05 * r4, 1e3 * r4)
    lo, hi = map(float, rho_range)
    if not (lo > 1.05 * r4 * (1 - 1e-12) and hi > lo):
        raise DomainError(f"rho_range must lie strictly inside band 3 (> {1.05 * r4:.6g})")
    t_lo, t_hi = map(float, t_range)
    if not (t_lo > 0 and t_hi >= t_lo):
        raise DomainError("t_range must lie in (0, inf)")
    rho = np.geomspace(lo, hi, rho_samples)
    times = np.geomspace(t_lo, t_hi, t_samples) if t_hi > t_lo else np.array([t_lo])

    best = np.zeros_like(rho)
    best_t = np.full_like(rho, times[0])
    exponent = None
    timed = False
    for t in times:
        def target(r, t=t):
            return audit_target(bound_id, sigma, r, t, j, b, p)[0]
        _, e0, timed = audit_target(bound_id, sigma, rho[:1], t, j, b, p)
        exponent = e0 - alpha
        deriv = np.abs(radial_derivative(target, rho, alpha))
        weight = math.exp(-AUDIT_CONSTANT * t) if timed else 1.0
        ratio = deriv / (weight * rho ** exponent)
        better = ratio > best
        best = np.where(better, ratio, best)
        best_t = np.where(better, t, best_t)
        if not timed:
            break

    k = int(np.argmax(best))
    sups = _decade_sups(rho, best)
    finite = bool(np.all(np.isfinite(best)))
    stable = all(
        (s_next < 10.0 * s) if s > 0 else s_next == 0
        for s, s_next in zip(sups, sups[1:])
    )
    resid = _recombination_residual(sigma, rho, times)
    return BoundReport(
        bound_id=bound_id,
        sup_ratio=float(best[k]),
        argmax=(float(rho[k]), float(best_t[k]), int(alpha)),
        samples_count=int(rho.size * (times.size if timed else 1)),
        decade_sups=sups,
        recombination_residual=resid,
        passed=finite and stable and resid <= 1e-10,
    )


def _recombination_residual(sigma, rho, times):
    # the split pieces must still recombine into K0, K1 wherever we audited
    M = rho[:, None] ** (2.0 * sigma)
    t = times[None, :]
    s10, s20, s11, s21 = split_symbols(M, t)
    K0, K1, _, _ = kernel_arrays(M, t)
    r0 = np.abs((s20 - s10) - K0) / np.maximum(np.abs(K0), 1e-300)
    r1 = np.abs((s11 - s21) - K1) / np.maximum(np.abs(K1), 1e-300)
    return float(max(np.max(r0), np.max(r1)))
