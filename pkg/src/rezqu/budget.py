"""Closed-form worst-case error estimates for a resonator-zero-qubit device.

All rates, couplings and detunings are angular (rad/ns); errors are
dimensionless. The estimates are order-of-magnitude formulas and are
evaluated exactly as written, without cancellations from optimal parking.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, fields

import numpy as np

from .dynamics import integrate, time_grid
from .pulses import PulseShape
from .quadrature import adaptive_oscillatory_integral, rate_bound

# (g t_op)^2 with t_op ~ 1/g_m + 1/g_b at equal couplings
OP_TIME_FACTOR = 4.0
QUAD_ATOL = 1e-12


@dataclass(frozen=True)
class ArchitectureParams:
    """Typical idling parameters of one section and, optionally, a k-th one.

    Unset k-th section values copy the first section.
    """

    N: int = 1
    N_op: int = 1
    g_m: float = 2 * np.pi * 0.025
    g_b: float = 2 * np.pi * 0.025
    Delta_m: float = 2 * np.pi * 0.5
    Delta_b: float = 2 * np.pi * 0.5
    delta_m: float | None = None  # memory spacing, default Delta_m / N
    omega_mb: float | None = None  # omega_m - omega_b, default Delta_m + Delta_b
    g_mk: float | None = None
    g_bk: float | None = None
    Delta_mk: float | None = None
    Delta_bk: float | None = None

    def __post_init__(self):
        if self.N < 1 or self.N_op < 1:
            raise ValueError("N and N_op must be at least 1")
        for name in ("g_m", "g_b", "g_mk", "g_bk"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} must be non-negative")
        defaults = {
            "delta_m": self.Delta_m / self.N,
            "omega_mb": self.Delta_m + self.Delta_b,
            "g_mk": self.g_m,
            "g_bk": self.g_b,
            "Delta_mk": self.Delta_m,
            "Delta_bk": self.Delta_b,
        }
        for name, value in defaults.items():
            if getattr(self, name) is None:
                object.__setattr__(self, name, value)
        for name in ("Delta_m", "Delta_b", "delta_m", "Delta_mk", "Delta_bk"):
            if getattr(self, name) == 0:
                raise ValueError(f"{name} must be nonzero")

    @classmethod
    def symmetric(cls, g: float, delta: float, N: int = 1, N_op: int = 1) -> ArchitectureParams:
        """Identical sections with g_m = g_b = g and Delta_m = Delta_b = delta."""
        return cls(N=N, N_op=N_op, g_m=g, g_b=g, Delta_m=delta, Delta_b=delta)


@dataclass(frozen=True)
class ErrorTerm:
    value: float
    formula: str


@dataclass(frozen=True)
class ErrorBudget:
    idle_rezqu: ErrorTerm
    idle_conventional: ErrorTerm
    xx_memory_memory: ErrorTerm
    zz_memory_memory: ErrorTerm
    lz_qubit_qubit: ErrorTerm
    lz_qubit_memory: ErrorTerm
    tail_move: ErrorTerm | None = None
    tail_qubit_k: ErrorTerm | None = None

    def as_dict(self) -> dict[str, dict]:
        out = {}
        for f in fields(self):
            term = getattr(self, f.name)
            if term is not None:
                out[f.name] = {"value": term.value, "formula": term.formula}
        return out


# --------------------------------------------------------------------------
# Idling
# --------------------------------------------------------------------------


def idling_error(omega_zz: float, t: float, amplitude11: complex | None = None) -> float:
    """Worst-case (Omega_ZZ t)^2, or |a11|^2 (1 - |a11|^2) (Omega_ZZ t)^2 for a given state."""
    phase = omega_zz * t
    if abs(phase) > 0.3:
        warnings.warn(f"|Omega_ZZ t| = {abs(phase):.2f}: quadratic estimate no longer accurate", RuntimeWarning)
    if amplitude11 is None:
        return phase**2
    p11 = abs(amplitude11) ** 2
    return p11 * (1.0 - p11) * phase**2


def _max_min(a: float, b: float) -> float:
    lo = min(a, b)
    if lo <= 0:
        raise ValueError("max/min coupling ratio needs both couplings positive")
    return max(a, b) / lo


def idle_rezqu_worstcase(arch: ArchitectureParams, eta: float, op_time_factor: float = OP_TIME_FACTOR) -> float:
    """Memory-bus idling error accumulated over N_op operations.

    ``op_time_factor`` is (g t_op)^2 for the operation time; the default
    counts t_op ~ 1/g_m + 1/g_b = 2/g.
    """
    a = arch
    ratio = _max_min(a.g_m, a.g_b)
    return (
        op_time_factor
        * a.g_m**3
        * a.g_b**3
        * eta**2
        * a.N**2
        * a.N_op**2
        / (a.Delta_m**4 * a.Delta_b**4)
        * ratio
    )


def omega_zz_conventional(g_b: float, Delta_b: float, eta: float) -> float:
    """Qubit-bus ZZ shift of a conventional bus architecture (rad/ns)."""
    if Delta_b == 0:
        raise ValueError("Delta_b must be nonzero")
    if Delta_b == eta:
        raise ZeroDivisionError("Delta_b = eta: qubit 1-2 transition resonant with the bus")
    return -2.0 * g_b**2 * eta / (Delta_b * (Delta_b - eta))


def idle_conventional(arch: ArchitectureParams, eta: float) -> float:
    return arch.g_b**2 * eta**2 * arch.N**2 * arch.N_op**2 / arch.Delta_b**4


# --------------------------------------------------------------------------
# Memory-memory
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MemoryMemory:
    omega_xx: float
    err_xx: float
    err_zz: float


def memory_memory_errors(
    arch: ArchitectureParams, eta: float, op_time_factor: float = OP_TIME_FACTOR
) -> MemoryMemory:
    """XX coupling between two memories and the resulting crowding and ZZ errors."""
    a = arch
    if a.omega_mb == 0:
        raise ValueError("omega_m - omega_b must be nonzero")
    omega_xx = 2.0 * a.g_m * a.g_mk * a.g_b * a.g_bk / (a.Delta_m * a.Delta_mk * a.omega_mb)
    err_xx = a.N**2 * a.N_op**2 * (a.g_m * a.g_mk * a.g_b * a.g_bk / (a.Delta_m * a.Delta_mk * a.Delta_b * a.Delta_bk)) ** 2
    if min(a.g_m, a.g_b) == 0:
        err_zz = 0.0
    else:
        err_zz = (
            op_time_factor
            * a.g_m**7
            * a.g_b**7
            * eta**2
            * a.N**4
            * a.N_op**2
            / (a.Delta_m**8 * a.Delta_b**8)
            * _max_min(a.g_m, a.g_b)
        )
    return MemoryMemory(omega_xx, err_xx, err_zz)


# --------------------------------------------------------------------------
# Level crossings
# --------------------------------------------------------------------------


def landau_zener_error(
    g_b: float,
    g_bk: float,
    Delta_b: float,
    domega_dt: float,
    g_mk: float | None = None,
    Delta_mk: float | None = None,
) -> float:
    """Population left in the crossed element: 2 pi g_eff^2 / |d omega_q/dt|.

    Qubit-qubit crossings use g_eff = g_b g_bk / Delta_b; passing ``g_mk`` and
    ``Delta_mk`` gives the qubit-memory crossing with one more virtual step.
    The bare formula can be off by about 2 when the trajectory is curved at
    the crossing.
    """
    if domega_dt == 0:
        raise ValueError("zero sweep rate: adiabatic limit, estimate undefined")
    g_eff = g_b * g_bk / Delta_b
    if g_mk is not None or Delta_mk is not None:
        if g_mk is None or Delta_mk is None:
            raise ValueError("qubit-memory crossing needs both g_mk and Delta_mk")
        g_eff *= g_mk / Delta_mk
    return 2.0 * np.pi * g_eff**2 / abs(domega_dt)


def landau_zener_sweep(g_eff: float, rate: float, half_window: float | None = None, dt: float = 2e-3) -> float:
    """Crossed-level population after a linear two-level sweep, by direct integration.

    Starts and ends in the dressed states dominated by level 0 at -T and T,
    so finite-window dressing does not count as a transition.
    """
    if rate == 0:
        raise ValueError("zero sweep rate")
    v = abs(rate)
    if half_window is None:
        half_window = max(20.0, 200.0 * g_eff / v)
    h0 = np.array([[0.0, g_eff], [g_eff, 0.0]])
    h1 = np.diag([0.0, 1.0])

    def detuning(t):
        return -v * t

    def adiabatic(t):
        h = h0 + detuning(t) * h1
        return np.linalg.eigh(h)[1]

    T = half_window
    v0 = adiabatic(-T)
    # the state starting on level 0 (diabatic) is the adiabatic state with most weight there
    k0 = int(np.argmax(np.abs(v0[0, :])))
    grid = time_grid(-T, T, dt)
    psi, _ = integrate(h0, v0[:, k0].astype(complex), grid, h1, detuning)
    v1 = adiabatic(T)
    # a fast sweep leaves the excitation on level 0, i.e. it switches adiabatic branch
    k1 = int(np.argmax(np.abs(v1[0, :])))
    return float(1.0 - abs(np.vdot(v1[:, k1], psi)) ** 2)


# --------------------------------------------------------------------------
# Ramp tails
# --------------------------------------------------------------------------


def tail_error_front_ramp(pulse: PulseShape, g_b: float, omega_b: float, atol: float = QUAD_ATOL) -> float:
    """Bus-tail error left by the front ramp [0, t1] of a pulse."""
    t1 = pulse.front_end

    def amp(t):
        return g_b * pulse.domega(t) / (pulse.omega(t) - omega_b) ** 2

    def phase(t):
        return -(pulse.phase(t) - omega_b * t)

    rate = rate_bound(lambda t: pulse.omega(t) - omega_b, 0.0, t1)
    return abs(adaptive_oscillatory_integral(amp, phase, 0.0, t1, rate, pulse.breakpoints, atol)) ** 2


def tail_error_kth_qubit(
    pulse: PulseShape, g_b: float, g_bk: float, omega_qk: float, omega_b: float, atol: float = QUAD_ATOL
) -> float:
    """Tail error on a spectator qubit at omega_qk coupled to the same bus."""
    t1 = pulse.front_end
    delta_bk = omega_qk - omega_b
    if delta_bk == 0:
        raise ValueError("spectator qubit resonant with the bus")

    def amp(t):
        return g_b * g_bk * pulse.domega(t) / ((pulse.omega(t) - omega_qk) ** 2 * delta_bk)

    def phase(t):
        return -(pulse.phase(t) - omega_qk * t)

    rate = rate_bound(lambda t: pulse.omega(t) - omega_qk, 0.0, t1)
    return abs(adaptive_oscillatory_integral(amp, phase, 0.0, t1, rate, pulse.breakpoints, atol)) ** 2


# --------------------------------------------------------------------------
# Assembly
# --------------------------------------------------------------------------


def error_budget(
    arch: ArchitectureParams,
    eta: float,
    domega_dt: float,
    pulse: PulseShape | None = None,
    omega_b: float | None = None,
    omega_qk: float | None = None,
) -> ErrorBudget:
    """All estimates for one architecture; ramp tails need a pulse and bus frequency."""
    mm = memory_memory_errors(arch, eta)
    tail_move = tail_k = None
    if pulse is not None and omega_b is not None:
        tail_move = ErrorTerm(tail_error_front_ramp(pulse, arch.g_b, omega_b), "ramp bus tail")
        if omega_qk is not None:
            tail_k = ErrorTerm(
                tail_error_kth_qubit(pulse, arch.g_b, arch.g_bk, omega_qk, omega_b), "ramp spectator-qubit tail"
            )
    return ErrorBudget(
        idle_rezqu=ErrorTerm(idle_rezqu_worstcase(arch, eta), "memory-bus ZZ idling"),
        idle_conventional=ErrorTerm(idle_conventional(arch, eta), "qubit-bus ZZ idling (conventional)"),
        xx_memory_memory=ErrorTerm(mm.err_xx, "memory-memory XX crowding"),
        zz_memory_memory=ErrorTerm(mm.err_zz, "memory-memory ZZ idling"),
        lz_qubit_qubit=ErrorTerm(landau_zener_error(arch.g_b, arch.g_bk, arch.Delta_b, domega_dt), "LZ qubit-qubit"),
        lz_qubit_memory=ErrorTerm(
            landau_zener_error(arch.g_b, arch.g_bk, arch.Delta_b, domega_dt, arch.g_mk, arch.Delta_mk),
            "LZ qubit-memory",
        ),
        tail_move=tail_move,
        tail_qubit_k=tail_k,
    )
