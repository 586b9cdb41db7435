"""Orchestration: turn a config into measured series, fits and verdicts."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import csv
import json
import logging
import os

import numpy as np

from . import grid as tg
from .errors import NumericalFailure
from .estimates import (audit_symbol_bound, data_order, fit_exponential, fit_power_law,
                        theorem_rates)
from .evolution import Propagator, measure_kernel

log = logging.getLogger(__name__)

MODES = ("simulate", "kernel-norms", "audit-bounds")
SANITY_TOL = 1e-10


@dataclass
class Record:
    name: str
    kind: str
    a: float = 0.0
    band: str = "all"
    i: int = None
    j: int = 0
    times: list = field(default_factory=list)
    norms: list = field(default_factory=list)
    fit_kind: str = None
    fitted: float = None
    theoretical: float = None
    margin: float = None
    boundary_mass: float = 0.0
    passed: bool = False
    extra: dict = field(default_factory=dict)

    def summary(self):
        out = {k: getattr(self, k) for k in
               ("name", "kind", "a", "band", "i", "j", "fit_kind", "fitted",
                "theoretical", "margin", "boundary_mass", "passed")}
        if self.times:
            out["series"] = self.name + ".csv"
        out.update(self.extra)
        return out


@dataclass
class ExperimentReport:
    mode: str
    config: dict
    records: list
    environment: dict
    passed: bool

    def to_dict(self):
        return {
            "mode": self.mode,
            "config": self.config,
            "environment": self.environment,
            "records": [r.summary() for r in self.records],
            "pass": self.passed,
        }


def _band_arg(band):
    return "all" if band == "all" else int(band)


def make_data(config):
    """Initial data ``(u0, u1)`` as grid fields."""
    spec = tg.GridSpec(config.dim, config.grid.N, config.grid.L)
    d = config.data
    w, c = d.width, d.center

    def gauss(*xs, centre=c, width=w):
        r2 = sum((x - centre) ** 2 for x in xs)
        return np.exp(-0.5 * r2 / width ** 2)

    if d.kind == "gaussian":
        f = tg.field_from_function(spec, gauss)
    elif d.kind == "gaussian_derivative":
        f = tg.field_from_function(spec, lambda *xs: -(xs[0] - c) / w ** 2 * gauss(*xs))
    else:
        rng = np.random.default_rng(config.seed)
        parts = []
        for _ in range(3):
            centre = c + rng.uniform(-3 * w, 3 * w, size=config.dim)
            width = w * rng.uniform(0.7, 1.3)
            amp = rng.uniform(0.5, 1.5)
            parts.append((centre, width, amp))

        def mix(*xs):
            out = 0.0
            for centre, width, amp in parts:
                r2 = sum((x - cc) ** 2 for x, cc in zip(xs, centre))
                out = out + amp * np.exp(-0.5 * r2 / width ** 2)
            return out
        f = tg.field_from_function(spec, mix)
    zero = tg.RealField(np.zeros(spec.shape), spec)
    u0 = f if d.which in ("u0", "both") else zero
    u1 = f if d.which in ("u1", "both") else zero
    return u0, u1


def _verdict(rec, times, norms, config, exponent):
    fits = config.fits
    rec.times, rec.norms = [float(t) for t in times], [float(v) for v in norms]
    if rec.band in ("1", "all"):
        fit = fit_power_law(times, norms, fits.window_fraction)
        rec.fit_kind, rec.fitted, rec.theoretical = "power", fit.exponent, exponent
        rec.margin = exponent - fit.exponent
        rec.passed = fit.exponent <= exponent + fits.growth_tol
    else:
        fit = fit_exponential(times, norms, fits.window_fraction)
        rec.fit_kind, rec.fitted = "exponential", fit.exponent
        rec.theoretical = fits.min_decay_rate
        rec.margin = fit.exponent
        rec.passed = fit.exponent >= fits.min_decay_rate
    rec.extra["fit_rms"] = fit.rms_residual
    rec.extra["fit_window"] = list(fit.window)
    return rec


def _check_mass(rec, config):
    if rec.boundary_mass > config.monitor.abort_threshold:
        raise NumericalFailure(
            f"boundary mass {rec.boundary_mass:.3g} exceeds "
            f"{config.monitor.abort_threshold:g} in record {rec.name}")


def _fmt(x):
    return f"{x:g}".replace(".", "p")


def _kernel_task(config, spec, a, band, i, j):
    sigma = config.sigma
    order = data_order(i, j, a, sigma) if band in ("3", "all") else 0.0
    rec = Record(f"kernel_a{_fmt(a)}_band{band}_i{i}_j{j}", "kernel", a, band, i, j)
    rec.extra["data_order"] = order
    times = config.times.grid()
    norms = []
    for t in times:
        m = measure_kernel(spec, sigma, float(t), i, j, a, _band_arg(band), order,
                           config.monitor.shell_fraction)
        norms.append(m.norm)
        rec.boundary_mass = max(rec.boundary_mass, m.boundary_mass)
    rates = theorem_rates(config.dim, a, sigma)
    _verdict(rec, times, norms, config, rates.kernel_exponent(i, j))
    _check_mass(rec, config)
    return [rec]


def _combined(rates, j, which):
    pair = (rates.alpha_u0, rates.alpha_u1) if j == 0 else (rates.beta_u0, rates.beta_u1)
    return {"u0": pair[0], "u1": pair[1], "both": max(pair)}[which]


def _simulate_task(config, prop, a, band):
    times = config.times.grid()
    shell = config.monitor.shell_fraction
    out = []
    series = ([], [])
    masses = [0.0, 0.0]
    for t in times:
        snap = prop.snapshot(float(t), _band_arg(band), a)
        for j, f in enumerate((snap.u, snap.ut)):
            series[j].append(tg.l1_norm(f))
            masses[j] = max(masses[j], tg.boundary_mass(f, shell))
    rates = theorem_rates(config.dim, a, config.sigma)
    for j in (0, 1):
        rec = Record(f"simulate_a{_fmt(a)}_band{band}_j{j}", "simulate", a, band, None, j)
        rec.boundary_mass = masses[j]
        _verdict(rec, times, series[j], config, _combined(rates, j, config.data.which))
        _check_mass(rec, config)
        out.append(rec)
    return out


def _sanity_record(prop, u0, u1):
    snap = prop.snapshot(0.0)
    err_u = float(np.max(np.abs(snap.u.samples - u0.samples)))
    err_ut = float(np.max(np.abs(snap.ut.samples - u1.samples)))
    scale = max(1.0, float(np.max(np.abs(u0.samples))), float(np.max(np.abs(u1.samples))))
    rec = Record("sanity_t0", "sanity")
    rec.extra.update(max_error_u=err_u, max_error_ut=err_ut)
    rec.passed = max(err_u, err_ut) <= SANITY_TOL * scale
    return rec


def _audit_records(config):
    out = []
    for k, audit in enumerate(config.audits):
        for alpha in audit.alpha:
            rep = audit_symbol_bound(audit.bound, config.sigma, alpha, audit.j, audit.b,
                                     audit.rho_range, audit.t_range, audit.p)
            name = f"audit{k:02d}_{audit.bound}_alpha{alpha}_j{audit.j}_b{_fmt(audit.b)}_p{_fmt(audit.p)}"
            rec = Record(name, "audit", band="3", j=audit.j, passed=rep.passed)
            rec.fitted = rep.sup_ratio
            rec.extra.update(bound=audit.bound, alpha=alpha, b=audit.b, p=audit.p,
                             argmax=list(rep.argmax), samples=rep.samples_count,
                             decade_sups=rep.decade_sups,
                             recombination_residual=rep.recombination_residual)
            out.append(rec)
    return out


def _run_tasks(tasks, threads):
    if threads <= 1:
        results = [task() for task in tasks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda task: task(), tasks))
    return [rec for group in results for rec in group]


def run_experiment(config, mode, threads=1):
    """Run one subcommand's worth of records; records come back in a fixed order."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    spec = tg.GridSpec(config.dim, config.grid.N, config.grid.L)
    if mode == "audit-bounds":
        records = _audit_records(config)
    elif mode == "kernel-norms":
        tasks = [
            (lambda a=a, b=b, i=i, j=j: _kernel_task(config, spec, a, b, i, j))
            for a in config.a_list for b in config.bands for (i, j) in config.kernels
        ]
        records = _run_tasks(tasks, threads)
    else:
        u0, u1 = make_data(config)
        prop = Propagator(u0, u1, config.sigma)
        tasks = [(lambda a=a, b=b: _simulate_task(config, prop, a, b))
                 for a in config.a_list for b in config.bands]
        records = [_sanity_record(prop, u0, u1)] + _run_tasks(tasks, threads)
    for rec in records:
        log.info("%s: %s", rec.name, "pass" if rec.passed else "FAIL")
    env = {
        "grid": {"N": spec.N, "L": spec.L, "dx": spec.dx},
        "sigma": config.sigma,
        "n": config.dim,
        "boundary_mass_max": max((r.boundary_mass for r in records), default=0.0),
    }
    return ExperimentReport(mode, config.to_dict(), records, env,
                            all(r.passed for r in records))


def write_series(rec, out_dir):
    path = os.path.join(out_dir, rec.name + ".csv")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "norm"])
        for t, v in zip(rec.times, rec.norms):
            w.writerow([f"{t:.17g}", f"{v:.17g}"])
    return path


def dump_json(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def write_report(report, out_dir):
    """One CSV per measured record plus ``<mode>.json``; returns the JSON path."""
    os.makedirs(out_dir, exist_ok=True)
    for rec in report.records:
        if rec.times:
            write_series(rec, out_dir)
    path = os.path.join(out_dir, report.mode.replace("-", "_") + ".json")
    dump_json(report.to_dict(), path)
    return path


def merge_reports(out_dir):
    """Combine whatever subcommand reports exist in ``out_dir`` into one verdict."""
    parts = []
    for mode in MODES:
        path = os.path.join(out_dir, mode.replace("-", "_") + ".json")
        if os.path.exists(path):
            with open(path) as fh:
                parts.append(json.load(fh))
    if not parts:
        raise FileNotFoundError(f"no subcommand reports found in {out_dir}")
    merged = {
        "config": parts[0]["config"],
        "environment": {p["mode"]: p["environment"] for p in parts},
        "records": [r for p in parts for r in p["records"]],
        "pass": all(p["pass"] for p in parts),
    }
    dump_json(merged, os.path.join(out_dir, "report.json"))
    return merged
