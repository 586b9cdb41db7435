"""Numerical laboratory for ``u_tt + (-Δ)^σ u_t + (-Δ)^σ u = 0`` on R^n.

Closed-form Fourier symbols, a smooth three-band frequency partition, exact
spectral evolution on a large periodic box, kernel L1 measurements, rate
fits, symbol-bound audits and brute-force oracles.
"""

from .errors import ConfigError, DomainError, NumericalFailure, SigmaLabError
from .symbols import SigmaParams, char_roots, kernel_values, mode_strength, phi, split_symbols
from .bands import chi, chi_all, transition
from .grid import GridSpec, forward, inverse, l1_norm
from .evolution import Propagator, evolve, kernel_field, measure_kernel
from .estimates import audit_symbol_bound, fit_exponential, fit_power_law, theorem_rates
from .oracle import kernel_consistency_sweep, phi_quadrature, rk4_mode
from .config import parse_config
from .experiment import run_experiment

__version__ = "0.1.0"
