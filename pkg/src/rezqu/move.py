"""MOVE pulse design between the qubit and its memory resonator.

A MOVE pulse has a front ramp (two shape parameters), a flat part near the
memory frequency (overshoot ``D`` and duration) and a fixed rear ramp. The
analytic first-order design fixes the front ramp so the bus tail vanishes
and picks ``D`` and the flat duration so the Rabi half-period lands on the
dressed memory state; the numeric routes polish two or four parameters.
"""

from __future__ import annotations

import json
import logging
import warnings
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy.optimize import minimize, root

from .basis import TWO_PI, DeviceParams, assemble_hamiltonian, block_labels
from .dynamics import DEFAULT_DT, StateVector, final_state, propagate
from .pulses import ErfRamp, PiecewiseLinear, PulseShape
from .quadrature import oscillatory_integral, rate_bound
from .spectra import diagonalize_block, eigensystem

log = logging.getLogger(__name__)

QUBIT_TO_MEMORY = "qubit_to_memory"
MEMORY_TO_QUBIT = "memory_to_qubit"
DIRECTIONS = (QUBIT_TO_MEMORY, MEMORY_TO_QUBIT)

MACHINE_ZERO = 1e-10  # integrator floor standing in for "zero error"


class InvalidPulse(ValueError):
    pass


class DesignFailure(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class OptimizerStagnation(UserWarning):
    pass


# --------------------------------------------------------------------------
# Pulse families
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PiecewiseFamily:
    """Two-segment linear front ramp, flat top, linear rear ramp.

    Front parameters: slope of the first segment (GHz/ns, signed) and the
    frequency at its end (GHz). The second front segment and the rear ramp
    run at fixed slopes.
    """

    f_start: float = 6.7
    f_end: float = 6.5
    slope2: float = 0.5
    rear_slope: float = 0.5
    max_slope: float = 1.0
    max_front: float = 30.0  # ns

    name = "piecewise"
    front_names = ("slope1", "f_knee")

    def build(self, params: DeviceParams, front, flat_duration: float, D: float) -> PiecewiseLinear:
        slope1, f_knee = map(float, front)
        if flat_duration < 0:
            raise InvalidPulse("negative flat duration")
        if abs(slope1) > self.max_slope:
            raise InvalidPulse(f"first-segment slope {slope1} beyond {self.max_slope} GHz/ns")
        rise = f_knee - self.f_start
        if slope1 == 0.0:
            if rise != 0.0:
                raise InvalidPulse("zero slope cannot reach the knee")
            t_a = 0.0
        else:
            t_a = rise / slope1
        if t_a < 0:
            raise InvalidPulse("first segment runs backwards in time")
        if t_a > self.max_front:
            raise InvalidPulse(f"first segment longer than {self.max_front} ns")
        f_flat = params.f_m + D / TWO_PI
        t1 = t_a + abs(f_flat - f_knee) / self.slope2
        t2 = t1 + flat_duration
        tf = t2 + abs(f_flat - self.f_end) / self.rear_slope
        knots = ((0.0, self.f_start), (t_a, f_knee), (t1, f_flat), (t2, f_flat), (tf, self.f_end))
        return PiecewiseLinear(knots, front_end=t1, rear_start=t2)

    def default_front(self, params: DeviceParams, D: float = 0.0) -> tuple[float, float]:
        # a single straight ramp at the fixed slope
        f_flat = params.f_m + D / TWO_PI
        return (self.slope2 if f_flat >= self.f_start else -self.slope2, 0.5 * (self.f_start + f_flat))

    def flat_param(self, flat_length: float) -> float:
        return flat_length

    def front_scale(self) -> np.ndarray:
        return np.array([0.05, 0.01])


@dataclass(frozen=True)
class ErfFamily:
    """Integrated-Gaussian ramps; the front is two steps with a time shift
    and amplitude ratio."""

    f_start: float = 6.7
    f_end: float = 6.5
    sigma: float = 1.0
    margin: float = 3.0
    max_shift: float = 20.0  # ns

    name = "erf"
    front_names = ("shift", "ratio")

    def build(self, params: DeviceParams, front, flat_duration: float, D: float) -> ErfRamp:
        shift, ratio = map(float, front)
        if abs(shift) > self.max_shift:
            raise InvalidPulse(f"step shift beyond {self.max_shift} ns")
        if flat_duration < 0:
            raise InvalidPulse("negative flat duration")
        return ErfRamp(
            f_start=self.f_start,
            f_flat=params.f_m + D / TWO_PI,
            f_end=self.f_end,
            sigma=self.sigma,
            flat_duration=flat_duration,
            shift=shift,
            ratio=ratio,
            margin=self.margin,
        )

    def default_front(self, params: DeviceParams, D: float = 0.0) -> tuple[float, float]:
        return (0.0, 1.0)

    def flat_param(self, flat_length: float) -> float:
        # flat_duration counts centre to centre; the design windows end 3 sigma out
        return flat_length + 2.0 * self.margin * self.sigma

    def front_scale(self) -> np.ndarray:
        return np.array([0.1 * self.sigma, 0.05])


FAMILIES = {"piecewise": PiecewiseFamily, "erf": ErfFamily}


def family_from_dict(d: dict):
    d = dict(d)
    name = d.pop("name")
    return FAMILIES[name](**d)


def family_to_dict(family) -> dict:
    return {"name": family.name, **asdict(family)}


# --------------------------------------------------------------------------
# MOVE error
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MoveErrorReport:
    err: float
    amplitude: complex
    residual_start: float  # population left in the initial dressed state
    tail_gamma: float  # population of the dressed bus state
    direction: str


def _endpoint_labels(direction: str) -> tuple[str, str]:
    if direction == QUBIT_TO_MEMORY:
        return "010", "100"
    if direction == MEMORY_TO_QUBIT:
        return "100", "010"
    raise ValueError(f"unknown direction {direction!r}")


def transfer_error(psi: np.ndarray, target: np.ndarray) -> tuple[float, complex]:
    """(1 - |<target|psi>|^2 clipped to [0, 1], overlap)."""
    amp = complex(np.vdot(target, psi))
    return float(min(max(1.0 - abs(amp) ** 2, 0.0), 1.0)), amp


def move_error(
    params: DeviceParams,
    pulse: PulseShape,
    direction: str = QUBIT_TO_MEMORY,
    dt: float = DEFAULT_DT,
    block: int = 1,
) -> MoveErrorReport:
    """1 - |<target|U|initial>|^2 between dressed states at the pulse ends.

    The modulus makes the error blind to the final phase, so any
    ``exp(-i phi)`` on the target is allowed.
    """
    init, target = _endpoint_labels(direction)
    if block == 2:
        # the same transfer with a spectator photon on the bus
        init, target = init[:2] + "1", target[:2] + "1"
    e0 = eigensystem(params, float(pulse.omega(0.0)), block, strict=False)
    e1 = eigensystem(params, float(pulse.omega(pulse.duration)), block, strict=False)
    psi = final_state(params, pulse, e0.vector(init), block, dt)
    err, amp = transfer_error(psi, e1.vector(target))
    bus = "001" if block == 1 else "002"
    return MoveErrorReport(
        err=err,
        amplitude=amp,
        residual_start=float(abs(np.vdot(e1.vector(init), psi)) ** 2),
        tail_gamma=float(abs(np.vdot(e1.vector(bus), psi)) ** 2),
        direction=direction,
    )


# --------------------------------------------------------------------------
# First-order analytic design
# --------------------------------------------------------------------------


def _phase_rate_bound(pulse: PulseShape, offset: float, t0: float, t1: float) -> float:
    return rate_bound(lambda t: pulse.omega(t) - offset, t0, t1)


def bus_tail_residual(params: DeviceParams, pulse: PulseShape) -> complex:
    """First-order bus tail at the end of the pulse divided by g_b (ns).

    Zero when the front ramp leaves the qubit-bus tail equal to that of the
    co-moving eigenstate.
    """
    t1 = pulse.front_end
    w_b = params.omega_b

    def phase(t):
        return -(pulse.phase(t) - w_b * t)

    integral = oscillatory_integral(
        lambda t: np.ones_like(t), phase, 0.0, t1, _phase_rate_bound(pulse, w_b, 0.0, t1), pulse.breakpoints
    )
    delta_b0 = float(pulse.omega(0.0)) - w_b
    return 1.0 / delta_b0 - 1j * integral - np.exp(1j * phase(t1)) / (params.omega_m - w_b)


def overshoot_rhs(params: DeviceParams, pulse: PulseShape) -> complex:
    """Right-hand side of D / (2 g_m^2) + i tau for a given pulse (ns).

    The Rabi step over the flat part is taken in the frame symmetric about
    the flat segment, so the front and rear first-order tails carry the
    memory-qubit phase accumulated up to t1 and t2 respectively.
    """
    t1, t2, tf = pulse.front_end, pulse.rear_start, pulse.duration
    w_m = params.omega_m

    def b_phase(t):
        return w_m * t - pulse.phase(t)

    b1, b2, bf = b_phase(t1), b_phase(t2), b_phase(tf)
    bp = pulse.breakpoints
    one = np.ones_like
    front = oscillatory_integral(
        one, lambda t: b_phase(t) - b1, 0.0, t1, _phase_rate_bound(pulse, w_m, 0.0, t1), bp
    )
    rear = oscillatory_integral(
        one, lambda t: b2 - b_phase(t), t2, tf, _phase_rate_bound(pulse, w_m, t2, tf), bp
    )
    d_m0 = w_m - float(pulse.omega(0.0))
    d_mf = w_m - float(pulse.omega(tf))
    return np.exp(-1j * b1) / d_m0 + np.exp(-1j * (bf - b2)) / d_mf + 1j * front + 1j * rear


def solve_overshoot(rhs: complex, gm: float) -> tuple[float, float, float]:
    """(D, tau, flat length) from the design right-hand side; gm in rad/ns."""
    D = 2.0 * gm**2 * rhs.real
    tau = rhs.imag
    omega_r = np.sqrt(4.0 * gm**2 + D**2)
    return D, tau, np.pi / omega_r - tau


def design_front_ramp(
    params: DeviceParams, family, D: float = 0.0, flat_duration: float = 10.0, guess=None, tol: float = 1e-10
) -> tuple[tuple[float, float], bool]:
    """Front-ramp parameters zeroing the first-order bus tail.

    Returns the two parameters and a flag that is False when the bus is
    decoupled and any ramp is admissible (the default ramp comes back).
    """
    if params.g_b == 0.0:
        return tuple(family.default_front(params, D)), False
    norm = params.omega_m - params.omega_b

    def resid(x):
        try:
            r = bus_tail_residual(params, family.build(params, x, flat_duration, D)) * norm
        except InvalidPulse:
            return np.array([1e3, 1e3])
        return np.array([r.real, r.imag])

    if guess is not None:
        sol = root(resid, np.asarray(guess, dtype=float), method="hybr", options={"xtol": 1e-13})
        if np.linalg.norm(resid(sol.x)) < tol:
            return (float(sol.x[0]), float(sol.x[1])), True
    # several ramps satisfy the condition; keep the one nearest the straight ramp
    x_ref = np.asarray(family.default_front(params, D), dtype=float)
    scale = family.front_scale()
    roots, best_resid = [], np.inf
    for x0 in [x_ref] + _front_grid(params, family, D):
        sol = root(resid, x0, method="hybr", options={"xtol": 1e-13})
        r = float(np.linalg.norm(resid(sol.x)))
        best_resid = min(best_resid, r)
        if r < tol:
            roots.append(sol.x)
    if not roots:
        raise DesignFailure(f"front-ramp condition not met (normalized residual {best_resid:.2e})", best_resid)
    x = min(roots, key=lambda v: (float(np.sum(((v - x_ref) / scale) ** 2)), tuple(v)))
    return (float(x[0]), float(x[1])), True


def _front_grid(params, family, D):
    """Coarse starting points for the root finder."""
    if isinstance(family, PiecewiseFamily):
        f_flat = params.f_m + D / TWO_PI
        knees = np.linspace(family.f_start - 0.2, f_flat + 0.1, 7)
        slopes = [0.1, 0.25, 0.5, 0.75, -0.25, -0.5]
        pts = []
        for k in knees:
            for s in slopes:
                if (k - family.f_start) * s >= 0:
                    pts.append(np.array([s, k]))
        return pts
    return [np.array([s * family.sigma, r]) for s in (0.5, 1.0, 2.0, -0.5, -1.0) for r in (0.3, 0.6, 1.2)]


@dataclass(frozen=True)
class MoveDesign:
    family: object
    front: tuple[float, float]
    flat_duration: float
    D: float  # rad/ns; the flat part sits at omega_m + D
    tau: float = 0.0
    varphi: float = 0.0
    achieved_error: float = float("nan")
    mode: str = "analytic"
    direction: str = QUBIT_TO_MEMORY
    converged: bool = True
    evaluations: int = 0
    notes: tuple[str, ...] = field(default_factory=tuple)

    def pulse(self, params: DeviceParams) -> PulseShape:
        p = self.family.build(params, self.front, self.flat_duration, self.D)
        return p.reversed() if self.direction == MEMORY_TO_QUBIT else p

    @property
    def D_ghz(self) -> float:
        return self.D / TWO_PI

    def validity_flags(self, params: DeviceParams) -> dict[str, bool]:
        """Leading-order assumptions: small overshoot and small duration correction."""
        omega_r = np.sqrt(4 * params.gm**2 + self.D**2)
        return {
            "small_overshoot": bool(abs(self.D / params.gm) < 0.5),
            "small_tau": bool(abs(self.tau) < 0.2 * np.pi / omega_r),
        }

    def to_record(self) -> dict:
        return {
            "family": family_to_dict(self.family),
            "front": list(self.front),
            "flat_duration_ns": self.flat_duration,
            "D_rad_per_ns": self.D,
            "tau_ns": self.tau,
            "varphi_rad": self.varphi,
            "achieved_error": self.achieved_error,
            "mode": self.mode,
            "direction": self.direction,
            "converged": self.converged,
            "evaluations": self.evaluations,
            "notes": list(self.notes),
        }

    @classmethod
    def from_record(cls, rec: dict) -> MoveDesign:
        return cls(
            family=family_from_dict(rec["family"]),
            front=tuple(rec["front"]),
            flat_duration=rec["flat_duration_ns"],
            D=rec["D_rad_per_ns"],
            tau=rec["tau_ns"],
            varphi=rec["varphi_rad"],
            achieved_error=rec["achieved_error"],
            mode=rec["mode"],
            direction=rec["direction"],
            converged=rec["converged"],
            evaluations=rec["evaluations"],
            notes=tuple(rec["notes"]),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_record(), indent=2)

    @classmethod
    def loads(cls, text: str) -> MoveDesign:
        return cls.from_record(json.loads(text))


def design_flat_part(params: DeviceParams, pulse: PulseShape) -> tuple[float, float, float]:
    """(D, tau, varphi) for the flat part, given the ramps of ``pulse``."""
    D, tau, _ = solve_overshoot(overshoot_rhs(params, pulse), params.gm)
    return D, tau, np.pi * D / (4.0 * params.gm)


def analytic_design(
    params: DeviceParams,
    family,
    front=None,
    max_iter: int = 50,
    tol: float = 1e-12,
    dt: float = DEFAULT_DT,
) -> MoveDesign:
    """Self-consistent first-order design of front ramp, overshoot and duration.

    The ramps depend on D (they end at the flat frequency) and the flat-part
    integrals depend on the ramps, so both conditions are iterated together.
    Passing ``front`` keeps the front ramp fixed and designs the flat part only.
    """
    fixed = front is not None
    D, flat_length = 0.0, np.pi / (2.0 * params.gm)
    if fixed:
        front, constrained = tuple(float(v) for v in front), False
    else:
        front, constrained = design_front_ramp(params, family, D, family.flat_param(flat_length))
    tau = 0.0
    for _ in range(max_iter):
        pulse = family.build(params, front, family.flat_param(flat_length), D)
        D_new, tau, length_new = solve_overshoot(overshoot_rhs(params, pulse), params.gm)
        if not fixed:
            front, constrained = design_front_ramp(
                params, family, D_new, family.flat_param(length_new), guess=front
            )
        done = abs(D_new - D) < tol and abs(length_new - flat_length) < tol * 1e3
        D, flat_length = D_new, length_new
        if done:
            break
    if fixed:
        notes = ("front ramp fixed by caller",)
    else:
        notes = () if constrained else ("bus decoupled: front ramp unconstrained",)
    design = MoveDesign(
        family=family,
        front=front,
        flat_duration=family.flat_param(flat_length),
        D=D,
        tau=tau,
        varphi=np.pi * D / (4.0 * params.gm),
        notes=notes,
    )
    err = move_error(params, design.pulse(params), dt=dt).err
    return replace(design, achieved_error=err)


# --------------------------------------------------------------------------
# Numerical optimization
# --------------------------------------------------------------------------


def _unpack(design: MoveDesign, x: np.ndarray, mode: str) -> tuple[tuple[float, float], float, float]:
    if mode == "four_param":
        return (x[0], x[1]), x[2], x[3]
    return design.front, x[0], x[1]


def _pack(design: MoveDesign, mode: str) -> np.ndarray:
    if mode == "four_param":
        return np.array([*design.front, design.flat_duration, design.D])
    return np.array([design.flat_duration, design.D])


def move_objective(params: DeviceParams, design: MoveDesign, mode: str, direction: str, dt: float):
    family = design.family

    def f(x):
        front, flat, D = _unpack(design, x, mode)
        try:
            pulse = family.build(params, front, flat, D)
        except InvalidPulse:
            return 2.0
        if direction == MEMORY_TO_QUBIT:
            pulse = pulse.reversed()
        return move_error(params, pulse, direction, dt).err

    return f


def _nelder_mead(f, x0, scale, max_evals, tol):
    n = len(x0)
    simplex = np.vstack([x0] + [x0 + scale[i] * np.eye(n)[i] for i in range(n)])
    res = minimize(
        f,
        x0,
        method="Nelder-Mead",
        options={"initial_simplex": simplex, "maxfev": max_evals, "xatol": 1e-12, "fatol": tol},
    )
    return res.x, float(res.fun), int(res.nfev)


def _polish(params, start, mode, direction, dt, x0, scale, max_evals, tol, restarts):
    """One multi-start member: Nelder-Mead relaunched with a shrinking simplex
    while it keeps improving. Top-level so worker processes can run it."""
    f = move_objective(params, start, mode, direction, dt)
    x, fx = np.asarray(x0, dtype=float), f(x0)
    evals = 1
    s = np.asarray(scale, dtype=float)
    for _ in range(restarts):
        x_new, f_new, n = _nelder_mead(f, x, s, max_evals, tol)
        evals += n
        improved = f_new < fx * (1 - 1e-3)
        if f_new <= fx:
            x, fx = x_new, f_new
        if not improved or fx < 1e-15:
            break
        s = s * 0.1
    return fx, tuple(float(v) for v in x), evals


def optimize_move(
    params: DeviceParams,
    family=None,
    mode: str = "four_param",
    direction: str = QUBIT_TO_MEMORY,
    start: MoveDesign | None = None,
    seed: int = 0,
    n_starts: int = 5,
    perturbation: float = 0.05,
    max_evals: int = 2000,
    tol: float = 1e-12,
    target: float | None = None,
    dt: float = DEFAULT_DT,
    restarts: int = 4,
    workers: int = 1,
) -> MoveDesign:
    """Multi-start Nelder-Mead over the flat part (two_param) or the flat part
    and front ramp (four_param), starting from the analytic design.

    The first start is the design itself, the others are perturbed by up to
    ``perturbation`` (relative) with a seeded generator. The lowest error
    wins, ties broken by the parameter vector, so the result does not depend
    on ``workers``. Warns with :class:`OptimizerStagnation` if ``target``
    (default 1e-10 for four_param) is not reached.
    """
    if mode not in ("two_param", "four_param"):
        raise ValueError(f"unknown mode {mode!r}")
    if n_starts < 1:
        raise ValueError("need at least one start")
    if start is None:
        start = analytic_design(params, family if family is not None else PiecewiseFamily(), dt=dt)
    if target is None and mode == "four_param":
        target = MACHINE_ZERO
    x0 = _pack(start, mode)
    base_scale = np.concatenate([start.family.front_scale(), [0.2, 0.1 * params.gm]])
    scale = base_scale if mode == "four_param" else base_scale[2:]
    rng = np.random.default_rng(seed)
    starts = [x0] + [x0 * (1.0 + perturbation * rng.uniform(-1, 1, len(x0))) for _ in range(n_starts - 1)]
    jobs = [(params, start, mode, direction, dt, xs, scale, max_evals, tol, restarts) for xs in starts]
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            results = list(pool.map(_polish, *zip(*jobs)))
    else:
        results = [_polish(*job) for job in jobs]
    for k, (fx, _, _) in enumerate(results):
        log.debug("start %d: err %.3e", k, fx)
    fx, xbest, _ = min(results, key=lambda r: (r[0], r[1]))
    evals = sum(r[2] for r in results)
    front, flat, D = _unpack(start, np.array(xbest), mode)
    converged = target is None or fx < target
    if not converged:
        warnings.warn(f"{mode} optimization stalled at err={fx:.3e} (target {target:.1e})", OptimizerStagnation)
    flat_length = flat - start.family.flat_param(0.0)
    return replace(
        start,
        front=tuple(float(v) for v in front),
        flat_duration=float(flat),
        D=float(D),
        tau=float(np.pi / np.sqrt(4 * params.gm**2 + D**2) - flat_length),
        varphi=float(np.pi * D / (4.0 * params.gm)),
        achieved_error=float(fx),
        mode=mode,
        direction=direction,
        converged=converged,
        evaluations=evals,
    )


def move_with_occupied_bus(params: DeviceParams, design: MoveDesign, dt: float = DEFAULT_DT) -> float:
    """Error of the same pulse moving the qubit excitation while the bus holds a photon."""
    return move_error(params, design.pulse(params), design.direction, dt, block=2).err


# --------------------------------------------------------------------------
# Trajectories for plotting
# --------------------------------------------------------------------------


def dressed_populations(params: DeviceParams, omega_q: float, psi: np.ndarray) -> np.ndarray:
    """Populations of the single-excitation eigenstates (100, 010, 001 order).

    The bus-like state is labeled by dominant overlap; of the remaining two,
    the one with more memory weight is memory-like, which stays defined when
    qubit and memory hybridize strongly.
    """
    es = diagonalize_block(assemble_hamiltonian(params, omega_q), 1, strict=False)
    vecs = es.eigenvectors
    basis = list(es.basis)
    i_m, i_q, i_b = (basis.index(b) for b in map(lambda s: tuple(int(c) for c in s), ("100", "010", "001")))
    k_bus = int(np.argmax(np.abs(vecs[i_b, :])))
    rest = [k for k in range(3) if k != k_bus]
    k_mem = max(rest, key=lambda k: (abs(vecs[i_m, k]), -k))
    k_qub = rest[0] if rest[1] == k_mem else rest[1]
    amps = vecs.conj().T @ psi
    return np.abs(amps[[k_mem, k_qub, k_bus]]) ** 2


def move_populations(
    params: DeviceParams,
    pulse: PulseShape,
    direction: str = QUBIT_TO_MEMORY,
    dt: float = DEFAULT_DT,
    sample_every: float = 0.05,
) -> dict[str, np.ndarray]:
    """Sampled pulse and population trajectories of a MOVE from its dressed initial state."""
    init, _ = _endpoint_labels(direction)
    labels = tuple(block_labels(1))
    e0 = eigensystem(params, float(pulse.omega(0.0)), 1, strict=False)
    traj = propagate(params, pulse, StateVector(e0.vector(init), 0.0, labels), dt=dt, tol=None, store=True)
    targets = np.arange(0.0, pulse.duration, sample_every)
    idx = np.unique(np.r_[np.searchsorted(traj.times, targets - 1e-12), len(traj.times) - 1])
    idx = idx[idx < len(traj.times)]
    t = traj.times[idx]
    states = traj.states[idx]
    pos = [labels.index(tuple(int(c) for c in s)) for s in ("100", "010", "001")]
    bare = np.abs(states[:, pos]) ** 2
    dressed = np.array([dressed_populations(params, float(pulse.omega(ti)), st) for ti, st in zip(t, states)])
    return {
        "t_ns": t,
        "f_q_ghz": np.asarray(pulse.f(t), dtype=float),
        "pop_100": bare[:, 0],
        "pop_010": bare[:, 1],
        "pop_001": bare[:, 2],
        "pop_eigen_100": dressed[:, 0],
        "pop_eigen_010": dressed[:, 1],
        "pop_eigen_001": dressed[:, 2],
    }
