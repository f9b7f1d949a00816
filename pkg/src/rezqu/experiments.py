"""Named experiment runners behind the command line.

Each runner takes an :class:`ExperimentConfig` and returns a
:class:`SweepResult`: a table in sweep order plus summary values and
optional side records (e.g. a MOVE design).
"""

from __future__ import annotations

import csv
import io
import json
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .basis import TWO_PI, block_labels, ghz
from .budget import (
    ArchitectureParams,
    error_budget,
    landau_zener_error,
    landau_zener_sweep,
    memory_memory_errors,
    tail_error_front_ramp,
)
from .config import ExperimentConfig
from .measurement import MeasurementParams, measurement_report
from .move import (
    ErfFamily,
    OptimizerStagnation,
    PiecewiseFamily,
    analytic_design,
    move_error,
    move_populations,
    optimize_move,
)
from .spectra import LabelingError, eigensystem, omega_zz_4th, omega_zz_exact


@dataclass
class SweepResult:
    columns: list[str]
    rows: list[tuple]
    summary: dict[str, object] = field(default_factory=dict)
    records: dict[str, dict] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError("row length does not match the header")

    def column(self, name: str) -> np.ndarray:
        k = self.columns.index(name)
        return np.array([r[k] for r in self.rows], dtype=float)


def workers_for(config: ExperimentConfig, override: int | None = None) -> int:
    if override is not None:
        return override
    if config.workers is not None:
        return config.workers
    return os.cpu_count() or 1


def pmap(fn, items: list, workers: int) -> list:
    """Order-preserving map, in worker processes when ``workers > 1``."""
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def frequency_grid(start: float, stop: float, step: float) -> np.ndarray:
    if step <= 0 or stop < start:
        raise ValueError("need step > 0 and stop >= start")
    n = int(np.floor((stop - start) / step + 1e-9))
    return np.round(start + step * np.arange(n + 1), 12)


# --------------------------------------------------------------------------
# Spectra and idling
# --------------------------------------------------------------------------

SPECTRUM_LABELS = [str(s) for s in block_labels(1)] + [str(s) for s in block_labels(2)]


def _spectrum_row(args):
    params, f_q = args
    out = [f_q]
    for n in (1, 2):
        es = eigensystem(params, ghz(f_q), n, strict=False)
        for s in block_labels(n):
            out.append(es.energy(s) / TWO_PI if s in es.labels else float("nan"))
    return tuple(out)


def run_spectrum(config: ExperimentConfig, workers: int = 1) -> SweepResult:
    p = config.params
    params = config.device.to_params()
    grid = frequency_grid(p.f_q_start_ghz, p.f_q_stop_ghz, p.f_q_step_ghz)
    rows = pmap(_spectrum_row, [(params, float(f)) for f in grid], workers)
    return SweepResult(["f_q_ghz"] + [f"e_{s}_ghz" for s in SPECTRUM_LABELS], rows)


def _idling_row(args):
    params, g, f_q = args
    base = params.replace(g_m=g, g_b=g, include_gd=False)
    w = ghz(f_q)

    def safe(fn):
        try:
            return fn() / TWO_PI * 1e3
        except (LabelingError, ZeroDivisionError):
            return float("nan")

    return (
        g,
        f_q,
        safe(lambda: omega_zz_exact(base, w)),
        safe(lambda: omega_zz_exact(base.replace(include_gd=True), w)),
        safe(lambda: omega_zz_4th(base, w)),
    )


def run_idling_sweep(config: ExperimentConfig, workers: int = 1) -> SweepResult:
    p = config.params
    params = config.device.to_params()
    if not (params.f_b < p.f_q_start_ghz and p.f_q_stop_ghz < params.f_m):
        raise ValueError("idling sweep must stay strictly between the bus and memory frequencies")
    grid = frequency_grid(p.f_q_start_ghz, p.f_q_stop_ghz, p.f_q_step_ghz)
    couplings = p.g_ghz or [params.g_m]
    items = [(params, float(g), float(f)) for g in couplings for f in grid]
    rows = pmap(_idling_row, items, workers)
    cols = ["g_ghz", "f_q_ghz", "omega_zz_exact_nogd_mhz", "omega_zz_exact_gd_mhz", "omega_zz_4th_mhz"]
    return SweepResult(cols, rows)


# --------------------------------------------------------------------------
# MOVE
# --------------------------------------------------------------------------


def family_from_block(p):
    if p.family == "piecewise":
        return PiecewiseFamily(
            f_start=p.f_start_ghz, f_end=p.f_end_ghz, slope2=p.slope2_ghz_per_ns, rear_slope=p.rear_slope_ghz_per_ns
        )
    return ErfFamily(f_start=p.f_start_ghz, f_end=p.f_end_ghz, sigma=p.sigma_ns, margin=p.margin_sigma)


def run_move(config: ExperimentConfig, workers: int = 1) -> SweepResult:
    p = config.params
    params = config.device.to_params()
    family = family_from_block(p)
    caught: list[str] = []
    design = replace(analytic_design(params, family, front=p.fixed_front, dt=p.dt_ns), direction=p.direction)
    if p.direction != "qubit_to_memory":
        design = replace(design, achieved_error=move_error(params, design.pulse(params), p.direction, p.dt_ns).err)
    if config.experiment == "move-optimize":
        with warnings.catch_warnings(record=True) as w:
            warnings.simplefilter("always", OptimizerStagnation)
            design = optimize_move(
                params,
                mode=p.mode,
                direction=p.direction,
                start=design,
                seed=config.seed,
                n_starts=p.n_starts,
                perturbation=p.perturbation,
                max_evals=p.max_evals,
                tol=p.tolerance,
                target=p.target_error,
                dt=p.dt_ns,
                workers=workers,
            )
        caught = [str(x.message) for x in w if issubclass(x.category, OptimizerStagnation)]
    pulse = design.pulse(params)
    report = move_error(params, pulse, p.direction, p.dt_ns)
    traj = move_populations(params, pulse, p.direction, p.dt_ns, p.sample_every_ns)
    cols = list(traj)
    rows = [tuple(float(traj[c][k]) for c in cols) for k in range(len(traj["t_ns"]))]
    summary = {
        "mode": design.mode,
        "achieved_error": report.err,
        "tail_gamma": report.tail_gamma,
        "D_mhz": design.D_ghz * 1e3,
        "tau_ns": design.tau,
        "varphi_rad": design.varphi,
        "duration_ns": pulse.duration,
        "converged": design.converged,
    }
    return SweepResult(cols, rows, summary, {"design": design.to_record()}, caught)


# --------------------------------------------------------------------------
# Ramp tails and crossings
# --------------------------------------------------------------------------


def _tail_row(args):
    params, p, sigma, seed = args
    fam = ErfFamily(f_start=p.f_start_ghz, f_end=p.f_end_ghz, sigma=sigma, margin=p.margin_sigma)
    design = analytic_design(params, fam, front=(0.0, 1.0), dt=p.dt_ns)
    pulse = design.pulse(params)
    predicted = tail_error_front_ramp(pulse, params.gb, params.omega_b)
    err = float("nan")
    if p.optimize:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", OptimizerStagnation)
            opt = optimize_move(params, mode="two_param", start=design, seed=seed, n_starts=p.n_starts, dt=p.dt_ns)
        err = opt.achieved_error
        predicted = tail_error_front_ramp(opt.pulse(params), params.gb, params.omega_b)
    ratio = err / predicted if predicted > 0 else float("nan")
    return (params.g_b, sigma, predicted, err, ratio)


def run_tail_sweep(config: ExperimentConfig, workers: int = 1) -> SweepResult:
    p = config.params
    base = config.device.to_params()
    items = [(base.replace(g_b=g), p, float(s), config.seed) for g in p.g_b_ghz for s in p.sigma_ns]
    rows = pmap(_tail_row, items, workers)
    return SweepResult(["g_b_ghz", "sigma_ns", "tail_error_predicted", "err_two_param", "ratio"], rows)


def run_lz_estimate(config: ExperimentConfig, workers: int = 1) -> SweepResult:
    p = config.params
    gb, gbk, db = ghz(p.g_b_ghz), ghz(p.g_bk_ghz), ghz(p.delta_b_ghz)
    gmk, dmk = ghz(p.g_mk_ghz), ghz(p.delta_mk_ghz)
    rates = [ghz(r) for r in p.sweep_rate_ghz_per_ns]
    oracle = pmap(_lz_oracle, [(gb * gbk / db, r) for r in rates], workers) if p.oracle else [float("nan")] * len(rates)
    rows = [
        (
            r / TWO_PI,
            landau_zener_error(gb, gbk, db, r),
            o,
            landau_zener_error(gb, gbk, db, r, gmk, dmk),
        )
        for r, o in zip(rates, oracle)
    ]
    return SweepResult(["sweep_rate_ghz_per_ns", "lz_qubit_qubit", "lz_qubit_qubit_oracle", "lz_qubit_memory"], rows)


def _lz_oracle(args):
    return landau_zener_sweep(*args)


# --------------------------------------------------------------------------
# Measurement and budget
# --------------------------------------------------------------------------


def run_measurement(config: ExperimentConfig, workers: int = 1) -> SweepResult:
    p = config.params
    d = config.device
    mp = MeasurementParams(f_m=d.f_m_ghz, f_q=p.f_q_ghz, g_m=d.g_m_ghz, Gamma=p.gamma_per_ns, t_meas=p.t_meas_ns)
    stride = max(1, int(round(p.sample_every_ns / p.dt_ns)))
    rep = measurement_report(mp, dt=p.dt_ns, stride=stride)
    cols = ["t_ns", "alpha2_bare", "beta2_bare", "alpha2_eigen", "beta2_eigen"]
    rows = list(zip(*(map(float, getattr(rep, c) if c != "t_ns" else rep.times) for c in cols)))
    return SweepResult(cols, rows, rep.summary())


def run_error_budget(config: ExperimentConfig, workers: int = 1) -> SweepResult:
    p = config.params
    dev = config.device.to_params()
    rows = []
    cols = [
        "N",
        "N_op",
        "idle_rezqu",
        "idle_conventional",
        "ratio_rezqu_conventional",
        "xx_memory_memory",
        "zz_memory_memory",
        "lz_qubit_qubit",
        "lz_qubit_memory",
        "omega_xx_mhz",
    ]
    for n in p.N:
        for nop in p.N_op:
            arch = ArchitectureParams(
                N=n, N_op=nop, g_m=dev.gm, g_b=dev.gb, Delta_m=ghz(p.delta_m_ghz), Delta_b=ghz(p.delta_b_ghz)
            )
            b = error_budget(arch, dev.eta_ang, ghz(p.sweep_rate_ghz_per_ns))
            mm = memory_memory_errors(arch, dev.eta_ang)
            rows.append(
                (
                    n,
                    nop,
                    b.idle_rezqu.value,
                    b.idle_conventional.value,
                    b.idle_rezqu.value / b.idle_conventional.value,
                    b.xx_memory_memory.value,
                    b.zz_memory_memory.value,
                    b.lz_qubit_qubit.value,
                    b.lz_qubit_memory.value,
                    mm.omega_xx / TWO_PI * 1e3,
                )
            )
    return SweepResult(cols, rows)


RUNNERS = {
    "spectrum": run_spectrum,
    "idling-sweep": run_idling_sweep,
    "move-analytic": run_move,
    "move-optimize": run_move,
    "tail-sweep": run_tail_sweep,
    "lz-estimate": run_lz_estimate,
    "measurement": run_measurement,
    "error-budget": run_error_budget,
}


def run(config: ExperimentConfig, workers: int = 1) -> SweepResult:
    return RUNNERS[config.experiment](config, workers)


# --------------------------------------------------------------------------
# Emission
# --------------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def metadata(config: ExperimentConfig, timestamp: str | None) -> dict[str, str]:
    meta = {
        "tool": f"rezqu {__version__}",
        "config": config.canonical_json(),
        "config_sha256": config.sha256(),
    }
    if timestamp is not None:
        meta["timestamp"] = timestamp
    return meta


def render_csv(result: SweepResult, meta: dict[str, str]) -> str:
    buf = io.StringIO()
    for k, v in meta.items():
        buf.write(f"# {k}: {v}\n")
    for k, v in result.summary.items():
        buf.write(f"# summary.{k}: {_fmt(v)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(result.columns)
    for r in result.rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if np.isfinite(v) else None
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    return v


def render_json(result: SweepResult, meta: dict[str, str]) -> str:
    doc = {
        "metadata": {**meta, "config": json.loads(meta["config"])},
        "summary": {k: _jsonable(v) for k, v in result.summary.items()},
        "columns": {c: [_jsonable(r[i]) for r in result.rows] for i, c in enumerate(result.columns)},
        "records": result.records,
    }
    return json.dumps(doc, indent=1, sort_keys=False, allow_nan=False) + "\n"


def read_preamble(text: str) -> dict[str, str]:
    """The ``# key: value`` lines heading a CSV output."""
    meta = {}
    for line in text.splitlines():
        if not line.startswith("# "):
            break
        key, _, value = line[2:].partition(": ")
        meta[key] = value
    return meta
