"""Experiment configuration: JSON in, validated frozen dataclasses out."""

from dataclasses import asdict, dataclass, field
import json

import numpy as np

from .errors import ConfigError
from .estimates import BOUND_IDS

BAND_NAMES = ("1", "2", "3", "all")
DATA_KINDS = ("gaussian", "gaussian_derivative", "sum_of_gaussians")


@dataclass(frozen=True)
class GridConfig:
    N: int = 4096
    L: float = 200.0


@dataclass(frozen=True)
class TimeConfig:
    t_min: float = 1.0
    t_max: float = 100.0
    samples: int = 48
    spacing: str = "log"

    def grid(self):
        if self.spacing == "log":
            return np.geomspace(self.t_min, self.t_max, self.samples)
        return np.linspace(self.t_min, self.t_max, self.samples)


@dataclass(frozen=True)
class DataConfig:
    kind: str = "gaussian"
    width: float = 1.0
    center: float = 0.0
    which: str = "both"


@dataclass(frozen=True)
class FitConfig:
    window_fraction: float = 0.5
    growth_tol: float = 0.15
    min_decay_rate: float = 0.05


@dataclass(frozen=True)
class MonitorConfig:
    shell_fraction: float = 0.05
    abort_threshold: float = 1e-3


@dataclass(frozen=True)
class AuditConfig:
    bound: str
    alpha: tuple = (0, 1, 2)
    j: int = 0
    b: float = 0.0
    p: float = 1.0
    rho_range: tuple = None
    t_range: tuple = (0.5, 10.0)


@dataclass(frozen=True)
class OutputConfig:
    dir: str = "out"


@dataclass(frozen=True)
class ExperimentConfig:
    sigma: float
    dim: int = 1
    a_list: tuple = (0.0,)
    grid: GridConfig = field(default_factory=GridConfig)
    times: TimeConfig = field(default_factory=TimeConfig)
    data: DataConfig = field(default_factory=DataConfig)
    bands: tuple = BAND_NAMES
    kernels: tuple = ((0, 0), (1, 0), (0, 1), (1, 1))
    fits: FitConfig = field(default_factory=FitConfig)
    monitor: MonitorConfig = field(default_factory=MonitorConfig)
    audits: tuple = ()
    seed: int = 0
    output: OutputConfig = field(default_factory=OutputConfig)

    def to_dict(self):
        return asdict(self)


def default_audits(sigma):
    """The Lemma-style audit set: B11 for three powers, B3, and B14-B17 over j, b."""
    out = [AuditConfig("B11", p=p) for p in (-1.0, 0.5, 1.0)]
    out.append(AuditConfig("B3"))
    for bound in ("B14", "B15", "B16", "B17"):
        for j in (0, 1):
            for b in (0.0, float(sigma)):
                out.append(AuditConfig(bound, j=j, b=b))
    return tuple(out)


def _number(value, path, kind=float):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", path)
    if kind is int:
        if int(value) != value:
            raise ConfigError(f"expected an integer, got {value!r}", path)
        return int(value)
    return float(value)


def _section(raw, cls, path, converters):
    if raw is None:
        return cls()
    if not isinstance(raw, dict):
        raise ConfigError("expected an object", path)
    unknown = set(raw) - set(converters)
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}", path)
    kwargs = {k: conv(raw[k], f"{path}.{k}") for k, conv in converters.items() if k in raw}
    return cls(**kwargs)


def _choice(options):
    def conv(value, path):
        if value not in options:
            raise ConfigError(f"must be one of {list(options)}, got {value!r}", path)
        return value
    return conv


def _band(value, path):
    name = str(value)
    if name not in BAND_NAMES:
        raise ConfigError(f"band must be one of {list(BAND_NAMES)}, got {value!r}", path)
    return name


def _pair(value, path):
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError("expected a two-element list", path)
    return tuple(_number(v, f"{path}[{k}]") for k, v in enumerate(value))


def _audit(raw, path):
    conv = {
        "bound": _choice(BOUND_IDS),
        "alpha": lambda v, p: tuple(_number(x, p, int) for x in v),
        "j": lambda v, p: _number(v, p, int),
        "b": _number,
        "p": _number,
        "rho_range": lambda v, p: None if v is None else _pair(v, p),
        "t_range": _pair,
    }
    if not isinstance(raw, dict) or "bound" not in raw:
        raise ConfigError("each audit needs a 'bound'", path)
    audit = _section(raw, lambda **kw: AuditConfig(**kw), path, conv)
    if any(a not in (0, 1, 2, 3) for a in audit.alpha):
        raise ConfigError("alpha orders must lie in 0..3", f"{path}.alpha")
    return audit


_TOP_KEYS = {"sigma", "dim", "a_list", "grid", "times", "data", "bands", "kernels",
             "fits", "monitor", "audits", "seed", "output"}


def config_from_dict(raw):
    """Validate a decoded JSON object and fill in defaults."""
    if not isinstance(raw, dict):
        raise ConfigError("top level must be an object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}", "config")
    if "sigma" not in raw:
        raise ConfigError("sigma is required", "sigma")
    sigma = _number(raw["sigma"], "sigma")
    if not sigma > 1:
        raise ConfigError("sigma must exceed 1", "sigma")
    dim = _number(raw.get("dim", 1), "dim", int)
    if dim not in (1, 2, 3):
        raise ConfigError("dim must be 1, 2 or 3", "dim")

    a_list = tuple(_number(a, f"a_list[{k}]") for k, a in enumerate(raw.get("a_list", [0.0])))
    for k, a in enumerate(a_list):
        if a < 0:
            raise ConfigError("derivative orders must be >= 0", f"a_list[{k}]")

    grid = _section(raw.get("grid"), GridConfig, "grid",
                    {"N": lambda v, p: _number(v, p, int), "L": _number})
    if grid.N < 16 or grid.N & (grid.N - 1):
        raise ConfigError("N must be a power of two >= 16", "grid.N")
    if not grid.L > 0:
        raise ConfigError("L must be positive", "grid.L")

    times = _section(raw.get("times"), TimeConfig, "times", {
        "t_min": _number, "t_max": _number,
        "samples": lambda v, p: _number(v, p, int),
        "spacing": _choice(("log", "linear")),
    })
    if not times.t_max > 1:
        raise ConfigError("t_max must exceed 1", "times.t_max")
    if not (0 <= times.t_min < times.t_max) or (times.spacing == "log" and times.t_min <= 0):
        raise ConfigError("t_min must satisfy 0 <= t_min < t_max (> 0 for log spacing)", "times.t_min")
    if times.samples < 8:
        raise ConfigError("need at least 8 time samples", "times.samples")

    data = _section(raw.get("data"), DataConfig, "data", {
        "kind": _choice(DATA_KINDS), "width": _number, "center": _number,
        "which": _choice(("u0", "u1", "both")),
    })
    if not data.width > 0:
        raise ConfigError("width must be positive", "data.width")

    bands = tuple(_band(b, f"bands[{k}]") for k, b in enumerate(raw.get("bands", BAND_NAMES)))
    kernels = tuple(
        tuple(_number(x, f"kernels[{k}]", int) for x in _pair(v, f"kernels[{k}]"))
        for k, v in enumerate(raw.get("kernels", [[0, 0], [1, 0], [0, 1], [1, 1]]))
    )
    for k, (i, j) in enumerate(kernels):
        if i not in (0, 1) or j not in (0, 1):
            raise ConfigError("kernel indices must be 0 or 1", f"kernels[{k}]")

    fits = _section(raw.get("fits"), FitConfig, "fits", {
        "window_fraction": _number, "growth_tol": _number, "min_decay_rate": _number,
    })
    if not 0 < fits.window_fraction < 1:
        raise ConfigError("window_fraction must lie in (0, 1)", "fits.window_fraction")

    monitor = _section(raw.get("monitor"), MonitorConfig, "monitor", {
        "shell_fraction": _number, "abort_threshold": _number,
    })
    if not 0 < monitor.shell_fraction < 1:
        raise ConfigError("shell_fraction must lie in (0, 1)", "monitor.shell_fraction")

    if "audits" in raw:
        if not isinstance(raw["audits"], list):
            raise ConfigError("expected a list", "audits")
        audits = tuple(_audit(a, f"audits[{k}]") for k, a in enumerate(raw["audits"]))
    else:
        audits = default_audits(sigma)

    seed = _number(raw.get("seed", 0), "seed", int)
    output = _section(raw.get("output"), OutputConfig, "output", {
        "dir": lambda v, p: v if isinstance(v, str) else _fail("expected a string", p),
    })
    return ExperimentConfig(sigma, dim, a_list, grid, times, data, bands, kernels,
                            fits, monitor, audits, seed, output)


def _fail(msg, path):
    raise ConfigError(msg, path)


def parse_config(path):
    """Read and validate a JSON experiment file."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc}") from exc
    return config_from_dict(raw)
