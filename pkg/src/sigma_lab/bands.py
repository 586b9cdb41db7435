"""Smooth three-band partition of frequency space.

``chi1`` is 1 below ``4^{-1/σ}`` and 0 above ``3^{-1/σ}``; ``chi3`` is 0 below
``3^{1/σ}`` and 1 above ``4^{1/σ}``; ``chi2 = 1 - chi1 - chi3`` fills the
middle.  The ramps use the standard ``exp(-1/s)`` construction so every
derivative vanishes where a ramp meets a plateau.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

BANDS = (1, 2, 3)


@dataclass(frozen=True)
class BandThresholds:
    r1: float
    r2: float
    r3: float
    r4: float

    @classmethod
    def for_sigma(cls, sigma):
        if not sigma > 1:
            raise DomainError(f"sigma must exceed 1, got {sigma}")
        return cls(4.0 ** (-1.0 / sigma), 3.0 ** (-1.0 / sigma),
                   3.0 ** (1.0 / sigma), 4.0 ** (1.0 / sigma))


def _bump(s):
    # exp(-1/s) for s > 0, else 0
    s = np.asarray(s, dtype=float)
    pos = s > 0
    safe = np.where(pos, s, 1.0)
    return np.where(pos, np.exp(-1.0 / safe), 0.0)


def transition(s):
    """C^∞ ramp: 1 for ``s <= 0``, 0 for ``s >= 1``, monotone in between."""
    s = np.asarray(s, dtype=float)
    up, down = _bump(1.0 - s), _bump(s)
    out = up / np.where(up + down > 0, up + down, 1.0)
    return out.item() if out.ndim == 0 else out


def chi_all(rho, sigma):
    """Return ``(chi1, chi2, chi3)`` evaluated at ``rho``."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise DomainError("frequency modulus must be non-negative")
    r = BandThresholds.for_sigma(sigma)
    c1 = np.asarray(transition((rho - r.r1) / (r.r2 - r.r1)))
    c3 = 1.0 - np.asarray(transition((rho - r.r3) / (r.r4 - r.r3)))
    c2 = 1.0 - c1 - c3
    return c1, c2, c3


def chi(k, rho, sigma):
    """Cut-off ``chi_k(rho)`` for band ``k`` in ``{1, 2, 3}``."""
    if k not in BANDS:
        raise DomainError(f"band index must be 1, 2 or 3, got {k!r}")
    out = chi_all(rho, sigma)[k - 1]
    return out.item() if out.ndim == 0 else out


def band_weight(band, rho, sigma):
    """``chi_band(rho)``, with ``band="all"`` meaning the constant 1."""
    if band == "all":
        return np.ones_like(np.asarray(rho, dtype=float))
    return np.asarray(chi(int(band), rho, sigma))
