"""Periodic box ``[-L, L)^n`` standing in for R^n.

Transform convention: ``F(ξ) = ∫ f(x) e^{-i x·ξ} dx`` and
``f(x) = (2π)^{-n} ∫ F(ξ) e^{i x·ξ} dξ``, discretised by Riemann sums on the
lattice ``x_j = -L + j Δx`` and ``ξ_k = (π/L) k`` with ``k ∈ [-N/2, N/2)``.
Coefficients are stored in FFT index order (``scipy.fft.fftfreq`` layout).
"""

from dataclasses import dataclass
from functools import cached_property
import csv
import math

import numpy as np
import scipy.fft as sfft

from .errors import DomainError, NumericalFailure

_workers = 1


def set_workers(k):
    """Thread count handed to the FFT backend (results do not depend on it)."""
    global _workers
    _workers = max(1, int(k))


@dataclass(frozen=True)
class GridSpec:
    n: int
    N: int
    L: float

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise DomainError(f"dimension must be 1, 2 or 3, got {self.n}")
        if self.N < 16 or self.N & (self.N - 1):
            raise DomainError(f"N must be a power of two >= 16, got {self.N}")
        if not self.L > 0:
            raise DomainError(f"L must be positive, got {self.L}")

    @property
    def shape(self):
        return (self.N,) * self.n

    @property
    def dx(self):
        return 2.0 * self.L / self.N

    @property
    def dk(self):
        return math.pi / self.L

    @property
    def cell(self):
        """Volume element ``Δx^n``."""
        return self.dx ** self.n

    def axis(self):
        return -self.L + self.dx * np.arange(self.N)

    def coords(self):
        """Coordinate arrays, one per axis, broadcastable to ``shape``."""
        return np.meshgrid(*([self.axis()] * self.n), indexing="ij", sparse=True)

    def _k2(self, half):
        k = np.fft.fftfreq(self.N, 1.0 / self.N)
        axes = [k] * self.n
        if half:
            axes[-1] = np.arange(self.N // 2 + 1, dtype=float)
        grids = np.meshgrid(*axes, indexing="ij", sparse=True)
        return sum(g * g for g in grids)

    @cached_property
    def k2(self):
        """Integer ``|k|^2`` on the full lattice (FFT order)."""
        return self._k2(half=False)

    @cached_property
    def k2_half(self):
        """Integer ``|k|^2`` on the half lattice used by real transforms."""
        return self._k2(half=True)

    def rho(self, half=False):
        return self.dk * np.sqrt(self.k2_half if half else self.k2)

    def radial_index(self, half=False):
        """``(rho_unique, inverse)`` with ``rho_unique[inverse]`` the lattice ρ."""
        key = "_radial_half" if half else "_radial_full"
        if key not in self.__dict__:
            k2 = self.k2_half if half else self.k2
            shape = self.shape[:-1] + (self.N // 2 + 1,) if half else self.shape
            uniq, inv = np.unique(np.broadcast_to(k2, shape), return_inverse=True)
            self.__dict__[key] = (self.dk * np.sqrt(uniq), inv.reshape(shape))
        return self.__dict__[key]

    @cached_property
    def _phase(self):
        # e^{iLξ_k} = (-1)^{k}, per axis
        idx = np.arange(self.N)
        sign = np.where(idx % 2 == 0, 1.0, -1.0)
        grids = np.meshgrid(*([sign] * self.n), indexing="ij", sparse=True)
        out = grids[0]
        for g in grids[1:]:
            out = out * g
        return out


@dataclass(frozen=True)
class RealField:
    samples: np.ndarray
    spec: GridSpec

    def __post_init__(self):
        if self.samples.shape != self.spec.shape:
            raise DomainError(f"samples shape {self.samples.shape} != grid {self.spec.shape}")


@dataclass(frozen=True)
class SpectralField:
    coefficients: np.ndarray
    spec: GridSpec


def field_from_function(spec, func):
    """Sample ``func(*coords)`` on the grid."""
    values = np.broadcast_to(func(*spec.coords()), spec.shape)
    return RealField(np.ascontiguousarray(values, dtype=float), spec)


def forward(f):
    spec = f.spec
    F = sfft.fftn(f.samples, workers=_workers) * (spec.cell * spec._phase)
    return SpectralField(F, spec)


def inverse(F, real=True):
    spec = F.spec
    scale = (spec.N / (2.0 * spec.L)) ** spec.n
    vals = sfft.ifftn(F.coefficients * spec._phase, workers=_workers) * scale
    if real:
        vals = np.ascontiguousarray(vals.real)
    return RealField(vals, spec)


def radial_values(spec, m, half=False):
    """Evaluate ``m`` once per distinct ``|ξ|`` and scatter onto the lattice."""
    rho, inv = spec.radial_index(half)
    vals = np.broadcast_to(np.asarray(m(rho), dtype=float), rho.shape)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        raise NumericalFailure(f"multiplier is not finite at rho={rho[bad][0]!r}")
    return vals[inv]


def apply_radial_multiplier(F, m):
    """Multiply coefficients by ``m(|ξ|)``; ``m`` must accept an array of ρ."""
    return SpectralField(F.coefficients * radial_values(F.spec, m), F.spec)


def radial_symbol_half(spec, m):
    """``m(|ξ|)`` on the real-transform half lattice."""
    return radial_values(spec, m, half=True)


def filter_real(f, symbol_half):
    """``F^{-1}(m F f)`` for a real field and a real radial symbol.

    The continuum phase factors cancel for multiplier application, so this
    is the plain real FFT round trip.
    """
    spec = f.spec
    axes = tuple(range(spec.n))
    F = sfft.rfftn(f.samples, axes=axes, workers=_workers)
    out = sfft.irfftn(F * symbol_half, s=spec.shape, axes=axes, workers=_workers)
    return RealField(out, spec)


def kernel_from_symbol(spec, symbol_half):
    """``F^{-1}(m)`` sampled on the grid, origin at the box centre."""
    axes = tuple(range(spec.n))
    vals = sfft.irfftn(symbol_half, s=spec.shape, axes=axes, workers=_workers)
    vals *= (spec.N / (2.0 * spec.L)) ** spec.n
    return RealField(np.fft.fftshift(vals), spec)


def riesz(a):
    """Symbol ``ρ^a`` of ``|D|^a`` (``0^0 = 1``)."""
    if a < 0:
        raise DomainError("Riesz order must be >= 0")
    if a == 0:
        return lambda rho: np.ones_like(np.asarray(rho, dtype=float))
    return lambda rho: np.asarray(rho, dtype=float) ** a


def bessel(a):
    """Symbol ``(1 + ρ²)^{a/2}`` of ``<D>^a``."""
    if a < 0:
        raise DomainError("Bessel order must be >= 0")
    return lambda rho: (1.0 + np.asarray(rho, dtype=float) ** 2) ** (0.5 * a)


def pairwise_sum(values):
    """Sum in a fixed binary-tree order, independent of threading."""
    x = np.asarray(values, dtype=float).ravel()
    if x.size == 0:
        return 0.0
    size = 1 << (x.size - 1).bit_length()
    if size != x.size:
        x = np.concatenate([x, np.zeros(size - x.size)])
    while x.size > 1:
        h = x.size // 2
        x = x[:h] + x[h:]
    return float(x[0])


def l1_norm(f):
    return f.spec.cell * pairwise_sum(np.abs(f.samples))


def sobolev_l1_norm(f, a):
    """``||<D>^a f||_{L^1}``."""
    if a == 0:
        return l1_norm(f)
    return l1_norm(filter_real(f, radial_symbol_half(f.spec, bessel(a))))


def boundary_mass(f, shell_fraction=0.05):
    """Share of the L1 norm carried within ``shell_fraction * L`` of the boundary."""
    if not 0 < shell_fraction < 1:
        raise DomainError("shell_fraction must lie in (0, 1)")
    spec = f.spec
    x = spec.axis()
    dist = np.minimum(x + spec.L, spec.L - x)
    near = dist < shell_fraction * spec.L
    mask = np.zeros(spec.shape, dtype=bool)
    for ax in range(spec.n):
        shape = [1] * spec.n
        shape[ax] = spec.N
        mask |= near.reshape(shape)
    total = pairwise_sum(np.abs(f.samples))
    if total == 0:
        return 0.0
    return pairwise_sum(np.where(mask, np.abs(f.samples), 0.0)) / total


def write_field_csv(f, path):
    """Row-major CSV with one coordinate column per axis plus the value."""
    spec = f.spec
    names = ["x", "y", "z"][: spec.n]
    grids = np.meshgrid(*([spec.axis()] * spec.n), indexing="ij")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names + ["value"])
        cols = [g.ravel() for g in grids] + [f.samples.ravel()]
        for row in zip(*cols):
            w.writerow([f"{v:.17g}" for v in row])
