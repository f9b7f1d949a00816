"""Tunneling readout of a qubit coupled to its memory resonator.

The single-excitation memory-qubit pair is described by a non-Hermitian
2x2 Hamiltonian whose qubit level decays at rate Gamma. The survival
probability <psi|psi> after the measurement time is the chance of
misreading "1" as "0". Basis order is (|10>, |01>) = (memory, qubit).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .basis import TWO_PI
from .dynamics import DEFAULT_DT, integrate, time_grid

MEMORY, QUBIT = 0, 1
EXCEPTIONAL_COND = 1e6  # rounding alone keeps cond near 1e7 at the coalescence point


class ExceptionalPointError(RuntimeError):
    pass


@dataclass(frozen=True)
class MeasurementParams:
    f_m: float = 7.0  # GHz
    f_q: float = 6.5  # GHz
    g_m: float = 0.025  # GHz
    Gamma: float = 1.0  # 1/ns
    t_meas: float = 40.0  # ns

    def __post_init__(self):
        if self.Gamma <= 0:
            raise ValueError("Gamma must be positive")
        if self.g_m < 0:
            raise ValueError("g_m must be non-negative")
        if self.t_meas < 0:
            raise ValueError("t_meas must be non-negative")

    @property
    def omega_m(self) -> float:
        return TWO_PI * self.f_m

    @property
    def omega_q(self) -> float:
        return TWO_PI * self.f_q

    @property
    def gm(self) -> float:
        return TWO_PI * self.g_m

    @property
    def Delta_m(self) -> float:
        return self.omega_m - self.omega_q

    def weak_coupling_flags(self) -> dict[str, bool]:
        return {
            "g_small_vs_detuning": self.gm < 0.1 * abs(self.Delta_m),
            "g_small_vs_gamma": self.gm < 0.1 * self.Gamma,
        }


def hamiltonian(mp: MeasurementParams, gamma: float | None = None) -> np.ndarray:
    g = mp.Gamma if gamma is None else gamma
    return np.array([[mp.omega_m, mp.gm], [mp.gm, mp.omega_q - 0.5j * g]], dtype=complex)


@dataclass(frozen=True)
class DecayEigensystem:
    energies: np.ndarray  # complex, (memory-like, qubit-like)
    vectors: np.ndarray  # columns, unit norm
    Gamma_m: float
    Gamma_q: float
    Gamma_m_weak: float
    Gamma_q_weak: float

    def coefficients(self, psi0: np.ndarray) -> np.ndarray:
        """Expansion of psi0 over the (non-orthogonal) eigenvectors."""
        return np.linalg.solve(self.vectors, psi0)


def decay_eigensystem(mp: MeasurementParams) -> DecayEigensystem:
    vals, vecs = np.linalg.eig(hamiltonian(mp))
    vecs = vecs / np.linalg.norm(vecs, axis=0)
    if np.linalg.cond(vecs) > EXCEPTIONAL_COND:
        raise ExceptionalPointError("eigenvectors coalesce (exceptional point); decay rates undefined")
    order = np.argsort(-np.abs(vecs[MEMORY, :]))  # memory-like first
    if order[0] == order[1]:
        order = np.array([0, 1])
    vals, vecs = vals[order], vecs[:, order]
    rates = -2.0 * vals.imag
    gm_weak = mp.gm**2 * mp.Gamma / (mp.Delta_m**2 + 0.25 * mp.Gamma**2)
    return DecayEigensystem(vals, vecs, float(rates[0]), float(rates[1]), gm_weak, mp.Gamma - gm_weak)


def initial_state(mp: MeasurementParams, kind: str) -> np.ndarray:
    """Bare |01> or the qubit-like eigenstate of the undamped pair."""
    if kind == "bare":
        return np.array([0.0, 1.0], dtype=complex)
    if kind == "eigen":
        _, vecs = np.linalg.eigh(hamiltonian(mp, gamma=0.0))
        k = int(np.argmax(np.abs(vecs[QUBIT, :])))
        v = vecs[:, k]
        return (v * np.sign(v[QUBIT].real)).astype(complex)
    raise ValueError(f"unknown initial state {kind!r}")


def _frame(mp: MeasurementParams) -> np.ndarray:
    # a global phase leaves every population unchanged
    return hamiltonian(mp) - mp.omega_q * np.eye(2)


def decay_trajectories(
    mp: MeasurementParams, initial: str, t_end: float | None = None, dt: float = DEFAULT_DT
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(t, |alpha|^2, |beta|^2) by RK4 propagation of the non-Hermitian model."""
    t_end = mp.t_meas if t_end is None else t_end
    grid = time_grid(0.0, t_end, dt)
    psi0 = initial_state(mp, initial)
    if len(grid) == 1:
        return grid, np.abs(psi0[None, MEMORY]) ** 2, np.abs(psi0[None, QUBIT]) ** 2
    _, traj = integrate(_frame(mp), psi0, grid, store=True)
    pops = np.abs(traj) ** 2
    return grid, pops[:, MEMORY], pops[:, QUBIT]


def propagate_expm(mp: MeasurementParams, psi0: np.ndarray, t) -> np.ndarray:
    """Matrix-exponential oracle; returns states as rows for each time."""
    h = _frame(mp)
    return np.array([expm(-1j * h * ti) @ psi0 for ti in np.atleast_1d(t)])


def survival_error(mp: MeasurementParams, initial: str, method: str = "rk4", dt: float = DEFAULT_DT) -> float:
    """Probability <psi|psi> of no tunneling event by t_meas."""
    if method == "rk4":
        _, a2, b2 = decay_trajectories(mp, initial, dt=dt)
        return float(a2[-1] + b2[-1])
    if method == "expm":
        psi = propagate_expm(mp, initial_state(mp, initial), mp.t_meas)[0]
        return float(np.vdot(psi, psi).real)
    raise ValueError(f"unknown method {method!r}")


def long_time_error(mp: MeasurementParams, initial: str, t: float | None = None) -> float:
    """Surviving memory-like component |C_m|^2 e^{-Gamma_m t} from the exact eigensystem."""
    es = decay_eigensystem(mp)
    c = es.coefficients(initial_state(mp, initial))
    t = mp.t_meas if t is None else t
    return float(abs(c[MEMORY]) ** 2 * np.exp(-es.Gamma_m * t))


def closed_form_bare_error(mp: MeasurementParams, t: float | None = None) -> float:
    t = mp.t_meas if t is None else t
    es = decay_eigensystem(mp)
    return float(np.exp(-es.Gamma_m_weak * t) * mp.gm**2 / (mp.Delta_m**2 + 0.25 * mp.Gamma**2))


def closed_form_ratio(mp: MeasurementParams) -> float:
    """Eigen-to-bare error ratio Gamma^2 / (4 Delta_m^2)."""
    return mp.Gamma**2 / (4.0 * mp.Delta_m**2)


@dataclass(frozen=True)
class DecayReport:
    Gamma_m: float
    Gamma_q: float
    err_bare: float
    err_eigen: float
    ratio: float
    ratio_closed_form: float
    err_bare_closed_form: float
    times: np.ndarray
    alpha2_bare: np.ndarray
    beta2_bare: np.ndarray
    alpha2_eigen: np.ndarray
    beta2_eigen: np.ndarray

    def summary(self) -> dict[str, float]:
        return {
            "Gamma_m_per_ns": self.Gamma_m,
            "Gamma_q_per_ns": self.Gamma_q,
            "err_bare": self.err_bare,
            "err_eigen": self.err_eigen,
            "ratio": self.ratio,
            "ratio_closed_form": self.ratio_closed_form,
            "err_bare_closed_form": self.err_bare_closed_form,
        }

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t_ns", "alpha2_bare", "beta2_bare", "alpha2_eigen", "beta2_eigen"])
            for row in zip(self.times, self.alpha2_bare, self.beta2_bare, self.alpha2_eigen, self.beta2_eigen):
                w.writerow([f"{v:.17g}" for v in row])


def measurement_report(mp: MeasurementParams, dt: float = DEFAULT_DT, stride: int = 10) -> DecayReport:
    """Both initial states propagated to t_meas; trajectories kept every ``stride`` steps."""
    es = decay_eigensystem(mp)
    t, a_b, b_b = decay_trajectories(mp, "bare", dt=dt)
    _, a_e, b_e = decay_trajectories(mp, "eigen", dt=dt)
    err_b, err_e = float(a_b[-1] + b_b[-1]), float(a_e[-1] + b_e[-1])
    sl = slice(None, None, stride)
    keep = np.r_[np.arange(len(t))[sl], len(t) - 1] if (len(t) - 1) % stride else np.arange(len(t))[sl]
    return DecayReport(
        Gamma_m=es.Gamma_m,
        Gamma_q=es.Gamma_q,
        err_bare=err_b,
        err_eigen=err_e,
        ratio=err_e / err_b if err_b > 0 else float("nan"),
        ratio_closed_form=closed_form_ratio(mp),
        err_bare_closed_form=closed_form_bare_error(mp),
        times=t[keep],
        alpha2_bare=a_b[keep],
        beta2_bare=b_b[keep],
        alpha2_eigen=a_e[keep],
        beta2_eigen=b_e[keep],
    )
