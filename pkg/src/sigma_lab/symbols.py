"""Characteristic roots and solution multipliers of the damped sigma-evolution mode ODE.

Every Fourier mode of ``u_tt + (-Δ)^σ u + (-Δ)^σ u_t = 0`` solves

    y'' + M y' + M y = 0,    M = |ξ|^{2σ},

so all multipliers are functions of the single scalar ``M`` (the mode
strength) and time.  Functions here accept scalars or numpy arrays and
broadcast ``M`` against ``t``.

The roots coincide at ``M = 4``.  The quotient form of the multipliers is
0/0 there, so the kernels are evaluated through ``sin(z)/z`` (``M < 4``) and
``(1 - e^{-x})/x`` (``M >= 4``) with short Taylor series near zero.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

CONFLUENT_M = 4.0
# below this argument the truncated series is exact to double precision
SERIES_CUTOFF = 1e-4


@dataclass(frozen=True)
class SigmaParams:
    sigma: float
    n: int = 1
    a: float = 0.0

    def __post_init__(self):
        if not self.sigma > 1:
            raise DomainError(f"sigma must exceed 1, got {self.sigma}")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"dimension must be a positive integer, got {self.n}")
        if self.a < 0:
            raise DomainError(f"derivative order must be >= 0, got {self.a}")


@dataclass(frozen=True)
class RootPair:
    lambda1: complex
    lambda2: complex
    discriminant: float


@dataclass(frozen=True)
class KernelValues:
    K0: float
    K1: float
    dtK0: float
    dtK1: float


def mode_strength(rho, sigma):
    """Return ``M = rho**(2 sigma)``."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise DomainError("frequency modulus must be non-negative")
    return rho ** (2.0 * sigma)


def _check_M(M):
    M = np.asarray(M, dtype=float)
    if np.any(np.isnan(M)) or np.any(M < 0):
        raise DomainError("mode strength M must be >= 0")
    return M


def _scalar(x):
    return x.item() if np.ndim(x) == 0 else x


def _sinc(theta):
    # sin(θ)/θ, even in θ
    theta = np.abs(theta)
    small = theta < SERIES_CUTOFF
    safe = np.where(small, 1.0, theta)
    th2 = theta * theta
    return np.where(small, 1.0 - th2 / 6.0 + th2 * th2 / 120.0, np.sin(safe) / safe)


def _decay_ratio(x):
    # (1 - e^{-x})/x for x >= 0; the overdamped analogue of sinh(z)/z
    small = x < SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    series = 1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0
    return np.where(small, series, -np.expm1(-safe) / safe)


def _roots_arrays(M):
    osc = M < CONFLUENT_M
    Mo = np.where(osc, M, CONFLUENT_M)
    Md = np.where(osc, CONFLUENT_M, M)
    # oscillatory: λ = -M/2 ± iω/2
    omega = np.sqrt(Mo) * np.sqrt(CONFLUENT_M - Mo)
    # overdamped: λ2 from the non-cancelling branch, λ1 via λ1 λ2 = M
    delta = np.sqrt(Md) * np.sqrt(Md - CONFLUENT_M)
    lam2_d = -0.5 * (Md + delta)
    lam1_d = Md / lam2_d
    lam1 = np.where(osc, -0.5 * Mo + 0.5j * omega, lam1_d + 0j)
    lam2 = np.where(osc, -0.5 * Mo - 0.5j * omega, lam2_d + 0j)
    return lam1, lam2


def char_roots(M):
    """Roots of ``λ² + Mλ + M = 0``.

    ``lambda1`` is the ``+√`` branch, so on ``M > 4`` it is the slowly
    decaying root (``lambda1 -> -1``) and ``lambda2 -> -M``.
    """
    M = _check_M(M)
    lam1, lam2 = _roots_arrays(M)
    disc = M * M - 4.0 * M
    return RootPair(_scalar(lam1), _scalar(lam2), _scalar(disc))


def phi(M):
    """Shift function with ``lambda1 = -1 - phi`` on ``M > 4``.

    Closed form of ``-1 + ∫_0^1 (1 - 4s/M)^{-1/2} ds``, rearranged as
    ``4 / (M (1 + sqrt(1 - 4/M))^2)`` so it stays accurate for huge ``M``.
    """
    M = _check_M(M)
    if np.any(M <= CONFLUENT_M):
        raise DomainError("phi is defined for M > 4 only")
    s = np.sqrt(1.0 - CONFLUENT_M / M)
    return _scalar(4.0 / (M * (1.0 + s) ** 2))


def kernel_arrays(M, t):
    """Vectorised ``(K0, K1, dtK0, dtK1)`` for broadcastable ``M`` and ``t``.

    ``K0`` multiplies the initial position, ``K1`` the initial velocity.
    """
    M = _check_M(M)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(np.isnan(t)):
        raise DomainError("time must be >= 0")
    M, t = np.broadcast_arrays(M, t)
    osc = M < CONFLUENT_M

    # M < 4: damped cos/sin with θ = ωt/2
    Mo = np.where(osc, M, 0.0)
    to = np.where(osc, t, 0.0)
    omega = np.sqrt(Mo) * np.sqrt(CONFLUENT_M - Mo)
    theta = 0.5 * omega * to
    damp = np.exp(-0.5 * Mo * to)
    S = to * _sinc(theta)
    C = np.cos(theta)
    K1_o = damp * S
    K0_o = damp * (C + 0.5 * Mo * S)
    dK1_o = damp * (C - 0.5 * Mo * S)

    # M >= 4: real roots, written with e^{λ1 t} factored out
    Md = np.where(osc, CONFLUENT_M, M)
    td = np.where(osc, 0.0, t)
    delta = np.sqrt(Md) * np.sqrt(Md - CONFLUENT_M)
    lam2 = -0.5 * (Md + delta)
    lam1 = Md / lam2
    x = delta * td
    e1 = np.exp(lam1 * td)
    ex = np.exp(-x)
    K1_d = e1 * td * _decay_ratio(x)
    K0_d = 0.5 * e1 * (1.0 + ex) + 0.5 * Md * K1_d
    # K0 - M K1 cancels badly once M is large; the root form is exact there
    wide = x >= 1.0
    safe_delta = np.where(wide, delta, 1.0)
    dK1_root = e1 * (lam1 - lam2 * ex) / safe_delta
    dK1_d = np.where(wide, dK1_root, 0.5 * e1 * (1.0 + ex) - 0.5 * Md * K1_d)

    K0 = np.where(osc, K0_o, K0_d)
    K1 = np.where(osc, K1_o, K1_d)
    dK1 = np.where(osc, dK1_o, dK1_d)
    dK0 = -M * K1
    return K0, K1, dK0, dK1


def kernel_values(M, t):
    """Multipliers ``K̂0, K̂1`` and their time derivatives at ``(M, t)``.

    >>> kv = kernel_values(0.0, 2.5)
    >>> kv.K0, kv.K1
    (1.0, 2.5)
    """
    K0, K1, dK0, dK1 = kernel_arrays(M, t)
    return KernelValues(_scalar(K0), _scalar(K1), _scalar(dK0), _scalar(dK1))


def kernel_values_quotient(M, t, imag_tol=1e-12):
    """The textbook quotient formula, valid only away from ``M = 4``.

    Kept as an independent cross-check of ``kernel_values``; the complex
    roots for ``M < 4`` must combine into real values.
    """
    M = _check_M(M)
    t = np.asarray(t, dtype=float)
    if np.any(M == CONFLUENT_M):
        raise DomainError("quotient formula is singular at M = 4")
    lam1, lam2 = _roots_arrays(M)
    d = lam1 - lam2
    e1, e2 = np.exp(lam1 * t), np.exp(lam2 * t)
    K0 = (lam1 * e2 - lam2 * e1) / d
    K1 = (e1 - e2) / d
    for z in (K0, K1):
        scale = np.maximum(1.0, np.abs(z))
        if np.any(np.abs(z.imag) > imag_tol * scale):
            raise ArithmeticError("conjugate roots left an imaginary residue")
    return _scalar(K0.real), _scalar(K1.real)


def split_symbols(M, t):
    """Large-band split symbols ``(S1_0, S2_0, S1_1, S2_1)``.

    ``S2_0 - S1_0 = K̂0`` and ``S1_1 - S2_1 = K̂1``.  Only defined for
    ``M > 4`` where the roots are real and distinct.
    """
    M = _check_M(M)
    t = np.asarray(t, dtype=float)
    if np.any(M <= CONFLUENT_M):
        raise DomainError("split symbols are defined for M > 4 only")
    if np.any(t < 0):
        raise DomainError("time must be >= 0")
    delta = np.sqrt(M) * np.sqrt(M - CONFLUENT_M)
    lam2 = -0.5 * (M + delta)
    lam1 = M / lam2
    e1 = np.exp(lam1 * t)
    e2 = np.exp(lam2 * t)
    return (
        _scalar(lam2 * e1 / delta),
        _scalar(lam1 * e2 / delta),
        _scalar(e1 / delta),
        _scalar(e2 / delta),
    )
