"""Acceptance criteria, one PASS/FAIL line each.

Run with pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

import functools
import sys
import time
from pathlib import Path

import numpy as np

from rezqu.basis import DeviceParams, ghz
from rezqu.budget import (
    ArchitectureParams,
    idle_conventional,
    idle_rezqu_worstcase,
    landau_zener_error,
    landau_zener_sweep,
    memory_memory_errors,
)
from rezqu.cli import main as cli_main
from rezqu.config import load_config
from rezqu.dynamics import StateVector, final_state, propagate, propagator_over
from rezqu.experiments import run
from rezqu.measurement import (
    MeasurementParams,
    closed_form_ratio,
    decay_eigensystem,
    measurement_report,
)
from rezqu.move import move_with_occupied_bus, transfer_error
from rezqu.pulses import ErfRamp
from rezqu.spectra import eigensystem, single_excitation_energies_4th

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
LINES: list[str] = []


def report(number: int, name: str, ok: bool, detail: str) -> bool:
    LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {name} | {detail}")
    return ok


def timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


@functools.cache
def piecewise_runs():
    cfg = load_config(CONFIGS / "move_piecewise_analytic.json")
    analytic, t_a = timed(run, cfg, 1)
    opt_cfg = load_config(CONFIGS / "move_piecewise_optimize.json")
    optimized, t_o = timed(run, opt_cfg, 1)
    return analytic, optimized, t_a + t_o, opt_cfg


# --------------------------------------------------------------------------


def test_criterion_1_idling_sweep():
    cfg = load_config(CONFIGS / "idling_sweep.json")
    res, secs = timed(run, cfg, 1)
    g, f = res.column("g_ghz"), res.column("f_q_ghz")
    ex, gd, o4 = res.column("omega_zz_exact_nogd_mhz"), res.column("omega_zz_exact_gd_mhz"), res.column("omega_zz_4th_mhz")
    sel = np.abs(ex) > 0.01
    # the 4th-order expression is undefined at its pole (NaN): counted as disagreement
    rel4 = np.abs(o4[sel] - ex[sel]) / np.abs(ex[sel])
    worst = np.nanargmax(rel4)
    agree = bool(np.all(rel4 < 0.1))
    zero = bool(np.all(o4[np.isclose(f, 6.5, atol=1e-12)] == 0.0))
    # relative change, floored at the same 0.01 MHz significance level
    gd_rel = np.abs(gd - ex) / np.maximum(np.abs(ex), 0.01)
    gd_ok = bool(np.all(gd_rel < 0.01))
    ok = agree and zero and gd_ok and secs < 10.0
    detail = (
        f"max |4th-exact|/|exact| = {rel4[worst]:.3f} at g={g[sel][worst]:.3f} GHz f_q={f[sel][worst]:.2f} GHz (need < 0.1), "
        f"points over 10%: {int(np.sum(~(rel4 < 0.1)))}/{int(sel.sum())} ({int(np.sum(np.isnan(rel4)))} at the 4th-order pole); "
        f"4th-order zero at 6.5 GHz: {zero}; max g_d change {gd_rel.max():.2e} (need < 1e-2); runtime {secs:.2f} s (need < 10)"
    )
    assert report(1, "idling ZZ sweep", ok, detail)


def test_criterion_2_piecewise_move():
    analytic, optimized, secs, _ = piecewise_runs()
    a = analytic.summary["achieved_error"]
    o = optimized.summary["achieved_error"]
    ok = 2e-4 <= a <= 1e-3 and o < 1e-10 and secs < 120.0
    detail = f"analytic err {a:.3e} (accept [2e-4, 1e-3]); four-param err {o:.3e} (need < 1e-10); runtime {secs:.1f} s (need < 120)"
    assert report(2, "piecewise MOVE", ok, detail)


def test_criterion_3_erf_move():
    cfg = load_config(CONFIGS / "move_erf_optimize.json")
    res, secs = timed(run, cfg, 1)
    err = res.summary["achieved_error"]
    mem, qub = res.column("pop_100"), res.column("pop_010")
    mem_drop = float(np.max(np.maximum.accumulate(mem) - mem))
    qub_rise = float(np.max(qub - np.minimum.accumulate(qub)))
    # co-moving amplitudes differ from bare ones by phases only
    monotone = mem_drop < 1e-3 and qub_rise < 1e-3
    tails = max(res.column("pop_eigen_010")[-1], res.column("pop_eigen_001")[-1])
    ok = err < 1e-10 and monotone and tails < 1e-3
    detail = (
        f"four-param err {err:.3e} (need < 1e-10); bare memory drop {mem_drop:.1e}, qubit rise {qub_rise:.1e}; "
        f"eigenbasis tails at t_f {tails:.1e} (need < 1e-3); runtime {secs:.0f} s"
    )
    assert report(3, "erf MOVE", ok, detail)


def test_criterion_4_tail_law():
    cfg = load_config(CONFIGS / "tail_sweep.json")
    res, secs = timed(run, cfg, 1)
    gb, sig = res.column("g_b_ghz"), res.column("sigma_ns")
    err, ratio = res.column("err_two_param"), res.column("ratio")
    within3 = bool(np.all((ratio > 1 / 3) & (ratio < 3)))
    small50 = bool(np.all(err[(gb == 0.05) & (sig > 0.5)] < 1e-4))
    small25 = bool(np.all(err[(gb == 0.025) & (sig > 0.35)] < 1e-4))
    ok = within3 and small50 and small25
    detail = (
        f"err/prediction in [{ratio.min():.2f}, {ratio.max():.2f}] (need within x3); "
        f"err < 1e-4 for sigma > 0.5 ns at 50 MHz: {small50}, for sigma > 0.35 ns at 25 MHz: {small25}; runtime {secs:.0f} s"
    )
    assert report(4, "ramp tail law", ok, detail)


def test_criterion_5_occupied_bus():
    _, optimized, _, cfg = piecewise_runs()
    from rezqu.move import MoveDesign

    design = MoveDesign.from_record(optimized.records["design"])
    err = move_with_occupied_bus(cfg.device.to_params(), design)
    ok = 2e-5 <= err <= 5e-4
    assert report(5, "MOVE with occupied bus", ok, f"err {err:.3e} (accept [2e-5, 5e-4])")


def test_criterion_6_landau_zener():
    g, d, rate = ghz(0.025), ghz(0.5), ghz(0.5)
    est = landau_zener_error(g, g, d, rate)
    oracle = landau_zener_sweep(g * g / d, rate)
    ok = 0.5e-4 <= est <= 2e-4 and 0.5 <= est / oracle <= 2.0
    detail = f"estimate {est:.4e} (expect ~1e-4); two-level propagation {oracle:.4e}; ratio {est / oracle:.4f} (need within x2)"
    assert report(6, "Landau-Zener estimate", ok, detail)


def test_criterion_7_measurement():
    mp = MeasurementParams(f_m=7.0, f_q=6.5, g_m=0.025, Gamma=1.0, t_meas=40.0)
    rep = measurement_report(mp)
    want = mp.Gamma**2 / (4 * mp.Delta_m**2)
    traj_ok = abs(rep.ratio / 0.0253 - 1) <= 0.2
    closed = closed_form_ratio(mp)
    closed_ok = float(f"{closed:.3g}") == float(f"{want:.3g}")
    es = decay_eigensystem(mp)
    sum_ok = abs(es.Gamma_m + es.Gamma_q - mp.Gamma) < 1e-10
    ok = traj_ok and closed_ok and sum_ok
    detail = (
        f"trajectory ratio {rep.ratio:.5f} (need 0.0253 +-20%); closed form {closed:.5f} vs Gamma^2/4Delta^2 {want:.5f}; "
        f"|Gamma_m + Gamma_q - Gamma| = {abs(es.Gamma_m + es.Gamma_q - mp.Gamma):.1e}"
    )
    assert report(7, "tunneling measurement", ok, detail)


def test_criterion_8_budget():
    arch = ArchitectureParams.symmetric(ghz(0.025), ghz(0.5))
    eta = ghz(0.2)
    idle = idle_rezqu_worstcase(arch, eta)
    xx = memory_memory_errors(arch, eta).err_xx
    ratio = idle / idle_conventional(arch, eta)
    ok = 0.5e-8 <= idle <= 1.5e-8 and 1e-11 <= xx <= 1e-9 and ratio <= 1e-4
    detail = f"idle_rezqu {idle:.3e} (1e-8 +-50%); XX error {xx:.3e} (order 1e-10); RezQu/conventional {ratio:.2e} (need <= 1e-4)"
    assert report(8, "error-budget golden values", ok, detail)


def test_criterion_9_properties(tmp_path):
    params = DeviceParams()
    pulse = ErfRamp(6.5, 7.0, 6.5, sigma=1.0, flat_duration=5.0)
    # RK4 order
    psi0 = eigensystem(params, pulse.omega(0.0), 1).vector("010")
    ref = final_state(params, pulse, psi0, 1, 0.05 / 8)
    e1 = np.linalg.norm(final_state(params, pulse, psi0, 1, 0.05) - ref)
    e2 = np.linalg.norm(final_state(params, pulse, psi0, 1, 0.025) - ref)
    order = e1 / e2
    # unitarity and block conservation
    unit = max(propagator_over(params.replace(include_gd=True), pulse, b).unitarity_defect() for b in (1, 2))
    rng = np.random.default_rng(0)
    amps = rng.normal(size=10) + 1j * rng.normal(size=10)
    traj = propagate(params, pulse, StateVector(amps / np.linalg.norm(amps)), tol=None)
    n = np.array([s.n_exc for s in traj.labels])
    drift = max(np.ptp(traj.populations[:, n == k].sum(axis=1)) for k in range(3))
    # phase freedom
    e_end = eigensystem(params, pulse.omega(pulse.duration), 1)
    psi = final_state(params, pulse, psi0, 1)
    target = e_end.vector("100")
    phase_dev = max(
        abs(transfer_error(psi, np.exp(1j * p) * target)[0] - transfer_error(psi, target)[0])
        for p in np.linspace(0, 2 * np.pi, 17)
    )
    # determinism
    cfg = str(CONFIGS / "measurement.json")
    outs = []
    out = tmp_path / "run.csv"
    for _ in range(2):
        assert cli_main(["measurement", "--config", cfg, "--out", str(out), "--reproducible"]) == 0
        outs.append(out.read_bytes())
    identical = outs[0] == outs[1]
    # series residual scaling
    res = []
    for g in (0.025, 0.0125):
        p = DeviceParams(g_m=g, g_b=g)
        es = eigensystem(p, ghz(6.3), 1)
        s = single_excitation_energies_4th(p, ghz(6.3))
        res.append(abs(es.energy("100") - s.epsilon_100))
    lam = res[0] / res[1]
    ok = 12 <= order <= 20 and unit < 1e-8 and drift < 1e-10 and phase_dev < 1e-14 and identical and 48 <= lam <= 80
    detail = (
        f"RK4 ratio {order:.2f} (16+-4); unitarity defect {unit:.1e} (< 1e-8); block drift {drift:.1e} (< 1e-10); "
        f"phase freedom {phase_dev:.1e} (< 1e-14); reproducible bytes identical: {identical}; series residual ratio {lam:.1f} (~64)"
    )
    assert report(9, "property suites", ok, detail)


if __name__ == "__main__":
    import tempfile

    for name, fn in list(globals().items()):
        if name.startswith("test_criterion"):
            try:
                if "tmp_path" in fn.__code__.co_varnames[: fn.__code__.co_argcount]:
                    fn(Path(tempfile.mkdtemp()))
                else:
                    fn()
            except AssertionError:
                pass
    print("\n".join(LINES))
    sys.exit(0 if all(line.startswith("[PASS]") for line in LINES) else 1)
