"""Time-dependent Schroedinger propagation on the truncated basis.

Integration is fixed-step classical RK4 in a frame rotating at a constant
reference frequency times the excitation number. The RWA Hamiltonian
conserves excitation number, so the frame change is exact and only removes
the ~7 GHz carrier that would otherwise set the step size.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numba
import numpy as np

from .basis import (
    BASIS,
    BasisLabel,
    DeviceParams,
    block_indices,
    block_labels,
    excitation_number,
    hamiltonian_parts,
)
from .pulses import PulseShape

DEFAULT_DT = 1e-3  # ns
NORM_TOL = 1e-9


class StepSizeError(RuntimeError):
    """Integration did not meet its accuracy target; refine ``dt``."""


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray
    t: float = 0.0
    labels: tuple[BasisLabel, ...] = BASIS

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", np.asarray(self.amplitudes, dtype=complex))
        if self.amplitudes.shape != (len(self.labels),):
            raise ValueError("amplitude count does not match the basis")

    @classmethod
    def basis_state(cls, label, labels: tuple[BasisLabel, ...] = BASIS, t: float = 0.0) -> StateVector:
        label = BasisLabel(*(int(c) for c in label)) if isinstance(label, str) else BasisLabel(*label)
        amps = np.zeros(len(labels), dtype=complex)
        amps[labels.index(label)] = 1.0
        return cls(amps, t, labels)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def amplitude(self, label) -> complex:
        label = BasisLabel(*(int(c) for c in label)) if isinstance(label, str) else BasisLabel(*label)
        return complex(self.amplitudes[self.labels.index(label)])


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n_times, dim)
    labels: tuple[BasisLabel, ...]

    def __len__(self) -> int:
        return len(self.times)

    def __getitem__(self, k: int) -> StateVector:
        return StateVector(self.states[k], float(self.times[k]), self.labels)

    @property
    def final(self) -> StateVector:
        return self[-1]

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.states) ** 2

    def to_csv(self, path, extra: dict[str, np.ndarray] | None = None) -> None:
        write_trajectory_csv(path, self, extra)


@dataclass(frozen=True)
class Propagator:
    matrix: np.ndarray
    t0: float
    t1: float
    labels: tuple[BasisLabel, ...]

    def unitarity_defect(self) -> float:
        u = self.matrix
        return float(np.max(np.abs(u.conj().T @ u - np.eye(len(u)))))


# --------------------------------------------------------------------------
# RK4 kernel
# --------------------------------------------------------------------------


@numba.njit(cache=True)
def _deriv(h0, h1, h2, a, b, psi, out):
    n, m = psi.shape
    for i in range(n):
        for c in range(m):
            acc = 0.0j
            for j in range(n):
                hij = h0[i, j] + a * h1[i, j] + b * h2[i, j]
                if hij != 0.0:
                    acc += hij * psi[j, c]
            out[i, c] = -1.0j * acc


@numba.njit(cache=True)
def _rk4(h0, h1, h2, a, b, steps, psi0, store):
    n, m = psi0.shape
    nsteps = steps.shape[0]
    psi = psi0.copy()
    k1 = np.empty_like(psi)
    k2 = np.empty_like(psi)
    k3 = np.empty_like(psi)
    k4 = np.empty_like(psi)
    tmp = np.empty_like(psi)
    if store:
        traj = np.empty((nsteps + 1, n, m), dtype=np.complex128)
        traj[0] = psi
    else:
        traj = np.empty((0, n, m), dtype=np.complex128)
    for k in range(nsteps):
        h = steps[k]
        a0, am, a1 = a[2 * k], a[2 * k + 1], a[2 * k + 2]
        b0, bm, b1 = b[2 * k], b[2 * k + 1], b[2 * k + 2]
        _deriv(h0, h1, h2, a0, b0, psi, k1)
        for i in range(n):
            for c in range(m):
                tmp[i, c] = psi[i, c] + 0.5 * h * k1[i, c]
        _deriv(h0, h1, h2, am, bm, tmp, k2)
        for i in range(n):
            for c in range(m):
                tmp[i, c] = psi[i, c] + 0.5 * h * k2[i, c]
        _deriv(h0, h1, h2, am, bm, tmp, k3)
        for i in range(n):
            for c in range(m):
                tmp[i, c] = psi[i, c] + h * k3[i, c]
        _deriv(h0, h1, h2, a1, b1, tmp, k4)
        for i in range(n):
            for c in range(m):
                psi[i, c] += h / 6.0 * (k1[i, c] + 2.0 * k2[i, c] + 2.0 * k3[i, c] + k4[i, c])
        if store:
            traj[k + 1] = psi
    return psi, traj


def time_grid(t0: float, t1: float, dt: float, breakpoints=()) -> np.ndarray:
    """Step boundaries from t0 to t1 with every interior breakpoint on the grid."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t1 < t0:
        raise ValueError("t1 must not precede t0")
    edges = [t0] + sorted(b for b in np.asarray(breakpoints, dtype=float) if t0 < b < t1) + [t1]
    pieces = [np.array([t0])]
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi - lo <= 0:
            continue
        n = max(1, int(np.ceil((hi - lo) / dt - 1e-9)))
        pieces.append(np.linspace(lo, hi, n + 1)[1:])
    return np.concatenate(pieces)


def _nodes(grid: np.ndarray) -> np.ndarray:
    """Step boundaries interleaved with midpoints: t0, t0+h/2, t1, ..."""
    nodes = np.empty(2 * len(grid) - 1)
    nodes[0::2] = grid
    nodes[1::2] = 0.5 * (grid[:-1] + grid[1:])
    return nodes


def integrate(
    h0: np.ndarray,
    psi0: np.ndarray,
    grid: np.ndarray,
    h1: np.ndarray | None = None,
    drive=None,
    h2: np.ndarray | None = None,
    drive2=None,
    store: bool = False,
):
    """Integrate i dpsi/dt = [h0 + a(t) h1 + b(t) h2] psi over ``grid``.

    ``drive``/``drive2`` are vectorized callables a(t), b(t). ``psi0`` may be a
    vector or a matrix of column states. Returns the final state(s) and, if
    ``store``, the states at every grid point (time first).
    """
    h0 = np.ascontiguousarray(h0, dtype=complex)
    n = h0.shape[0]
    zero = np.zeros((n, n), dtype=complex)
    h1 = zero if h1 is None else np.ascontiguousarray(h1, dtype=complex)
    h2 = zero if h2 is None else np.ascontiguousarray(h2, dtype=complex)
    nodes = _nodes(np.asarray(grid, dtype=float))
    a = np.zeros(len(nodes)) if drive is None else np.asarray(drive(nodes), dtype=float)
    b = np.zeros(len(nodes)) if drive2 is None else np.asarray(drive2(nodes), dtype=float)
    psi = np.asarray(psi0, dtype=complex)
    vector = psi.ndim == 1
    psi = np.ascontiguousarray(psi.reshape(n, -1))
    final, traj = _rk4(h0, h1, h2, a, b, np.diff(grid), psi, store)
    if vector:
        return final[:, 0], (traj[:, :, 0] if store else None)
    return final, (traj if store else None)


# --------------------------------------------------------------------------
# Device propagation
# --------------------------------------------------------------------------


def _restrict(params: DeviceParams, block: int | None):
    h0, h1, h2 = hamiltonian_parts(params)
    nexc = excitation_number()
    if block is None:
        idx = np.arange(len(BASIS))
        labels = BASIS
    else:
        idx = block_indices(block)
        labels = tuple(block_labels(block))
    sel = np.ix_(idx, idx)
    return h0[sel], h1[sel], h2[sel], nexc[idx], labels


def reference_frequency(params: DeviceParams) -> float:
    return 0.5 * (params.omega_m + params.omega_b)


def _device_drives(params: DeviceParams, pulse: PulseShape):
    gmgb2 = 2.0 * params.gm * params.gb

    def gd(t):
        return gmgb2 / pulse.omega(t)

    return pulse.omega, (gd if params.include_gd else None)


def _run(params, pulse, psi0, grid, block, store):
    h0, h1, h2, nexc, labels = _restrict(params, block)
    w_ref = reference_frequency(params)
    h0 = h0 - np.diag(w_ref * nexc)
    drive, drive2 = _device_drives(params, pulse)
    final, traj = integrate(h0, psi0, grid, h1, drive, h2 if drive2 else None, drive2, store)
    # back to the Schroedinger picture of the full RWA Hamiltonian
    rot = np.exp(-1j * w_ref * nexc * (grid[-1] - grid[0]))
    final = (rot * final.T).T if final.ndim == 2 else rot * final
    if store:
        rots = np.exp(-1j * w_ref * np.outer(grid - grid[0], nexc))
        traj = traj * (rots[:, :, None] if traj.ndim == 3 else rots)
    return final, traj, labels


def propagate(
    params: DeviceParams,
    pulse: PulseShape,
    psi0: StateVector,
    t_span: tuple[float, float] | None = None,
    dt: float = DEFAULT_DT,
    tol: float | None = 1e-10,
    max_halvings: int = 6,
    store: bool = True,
) -> Trajectory:
    """Evolve ``psi0`` under H(omega_q(t)) and return the trajectory.

    The grid is aligned to the pulse breakpoints. With ``tol`` set, ``dt`` is
    halved until two successive final states agree to ``tol`` in norm
    distance; pass ``tol=None`` for a single fixed-step run.
    """
    t0, t1 = (0.0, pulse.duration) if t_span is None else t_span
    if abs(psi0.norm - 1.0) > NORM_TOL:
        raise ValueError("initial state must be normalized")
    labels = psi0.labels
    block = _block_of(labels)

    def run(step):
        grid = time_grid(t0, t1, step, pulse.breakpoints)
        final, traj, _ = _run(params, pulse, psi0.amplitudes, grid, block, store)
        return grid, final, traj

    grid, final, traj = run(dt)
    if tol is not None:
        for _ in range(max_halvings):
            dt /= 2.0
            grid2, final2, traj2 = run(dt)
            diff = np.linalg.norm(final2 - final)
            grid, final, traj = grid2, final2, traj2
            if diff < tol:
                break
        else:
            raise StepSizeError(f"no convergence to {tol:g} after {max_halvings} halvings (last change {diff:.2e})")
    drift = abs(np.linalg.norm(final) - 1.0)
    if drift > NORM_TOL:
        raise StepSizeError(f"norm drift {drift:.2e} exceeds {NORM_TOL:g}; reduce dt")
    if not store:
        return Trajectory(np.array([t1]), final[None, :], labels)
    return Trajectory(grid, traj, labels)


def final_state(
    params: DeviceParams,
    pulse: PulseShape,
    psi0: np.ndarray,
    block: int = 1,
    dt: float = DEFAULT_DT,
) -> np.ndarray:
    """Fixed-step final state(s) in block coordinates; the optimizer hot path."""
    grid = time_grid(0.0, pulse.duration, dt, pulse.breakpoints)
    final, _, _ = _run(params, pulse, psi0, grid, block, False)
    return final


def _block_of(labels: tuple[BasisLabel, ...]) -> int | None:
    if tuple(labels) == BASIS:
        return None
    counts = {s.n_exc for s in labels}
    if len(counts) != 1 or tuple(labels) != tuple(block_labels(counts.pop())):
        raise ValueError("state must live on the full basis or on one excitation block")
    return labels[0].n_exc


def propagator_over(
    params: DeviceParams,
    pulse: PulseShape,
    block: int = 1,
    t_span: tuple[float, float] | None = None,
    dt: float = DEFAULT_DT,
) -> Propagator:
    """Propagator of one excitation block; columns are evolved basis states."""
    t0, t1 = (0.0, pulse.duration) if t_span is None else t_span
    idx = block_indices(block)
    grid = time_grid(t0, t1, dt, pulse.breakpoints)
    eye = np.eye(len(idx), dtype=complex)
    if len(grid) == 1:
        return Propagator(eye, t0, t1, tuple(block_labels(block)))
    h0, h1, h2, nexc, labels = _restrict(params, block)
    w_ref = reference_frequency(params)
    drive, drive2 = _device_drives(params, pulse)
    u, _ = integrate(h0 - np.diag(w_ref * nexc), eye, grid, h1, drive, h2 if drive2 else None, drive2)
    # the rotating frame only contributes a phase relative to t0
    u = np.exp(-1j * w_ref * block * (t1 - t0)) * u
    return Propagator(u, t0, t1, labels)


# --------------------------------------------------------------------------
# Co-moving frame
# --------------------------------------------------------------------------


def comoving_phases(params: DeviceParams, pulse: PulseShape, t, labels=BASIS) -> np.ndarray:
    """Phases theta_j(t) with amplitude_tilde = amplitude * exp(i theta_j).

    Memory and bus photons rotate at their fixed frequencies; the qubit's
    first level at the integrated omega_q and the second level at the
    integral of 2 omega_q - eta.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    phi_q = pulse.phase(t)
    out = np.empty((len(t), len(labels)))
    for j, s in enumerate(labels):
        q = (0.0, 1.0, 2.0)[s.n_q] * phi_q - (params.eta_ang * t if s.n_q == 2 else 0.0)
        out[:, j] = s.n_m * params.omega_m * t + s.n_b * params.omega_b * t + q
    return out


def to_comoving(state: StateVector, pulse: PulseShape, params: DeviceParams) -> StateVector:
    ph = comoving_phases(params, pulse, state.t, state.labels)[0]
    return StateVector(state.amplitudes * np.exp(1j * ph), state.t, state.labels)


def from_comoving(state: StateVector, pulse: PulseShape, params: DeviceParams) -> StateVector:
    ph = comoving_phases(params, pulse, state.t, state.labels)[0]
    return StateVector(state.amplitudes * np.exp(-1j * ph), state.t, state.labels)


def comoving_trajectory(traj: Trajectory, pulse: PulseShape, params: DeviceParams) -> Trajectory:
    ph = comoving_phases(params, pulse, traj.times, traj.labels)
    return Trajectory(traj.times, traj.states * np.exp(1j * ph), traj.labels)


# --------------------------------------------------------------------------
# Export
# --------------------------------------------------------------------------


def write_trajectory_csv(path, traj: Trajectory, extra: dict[str, np.ndarray] | None = None) -> None:
    names = [str(s) for s in traj.labels]
    header = ["t_ns"]
    header += [f"re_{n}" for n in names] + [f"im_{n}" for n in names] + [f"pop_{n}" for n in names]
    extra = extra or {}
    header += list(extra)
    pops = traj.populations
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for k, t in enumerate(traj.times):
            row = [t, *traj.states[k].real, *traj.states[k].imag, *pops[k]]
            row += [v[k] for v in extra.values()]
            w.writerow([format(float(x), ".17g") for x in row])
