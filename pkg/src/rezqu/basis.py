"""Truncated memory-qubit-bus basis and the RWA Hamiltonian.

Public inputs are linear frequencies in GHz and times in ns; every matrix
produced here is in angular units (rad/ns).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

TWO_PI = 2.0 * np.pi


def ghz(f: float) -> float:
    """Linear GHz -> angular rad/ns."""
    return TWO_PI * f


def to_ghz(omega: float) -> float:
    return omega / TWO_PI


class BasisLabel(NamedTuple):
    n_m: int
    n_q: int
    n_b: int

    @property
    def n_exc(self) -> int:
        return self.n_m + self.n_q + self.n_b

    def __str__(self) -> str:
        return f"{self.n_m}{self.n_q}{self.n_b}"


@dataclass(frozen=True)
class DeviceParams:
    """Static parameters of a memory-qubit-bus section (GHz)."""

    f_m: float = 7.0
    f_b: float = 6.0
    eta: float = 0.2
    g_m: float = 0.025
    g_b: float = 0.025
    include_gd: bool = False

    def __post_init__(self):
        if not self.f_m > self.f_b > 0:
            raise ValueError(f"need f_m > f_b > 0, got f_m={self.f_m}, f_b={self.f_b}")
        if self.g_m < 0 or self.g_b < 0:
            raise ValueError("couplings must be non-negative")
        if self.eta < 0:
            raise ValueError("anharmonicity must be non-negative")

    @property
    def omega_m(self) -> float:
        return ghz(self.f_m)

    @property
    def omega_b(self) -> float:
        return ghz(self.f_b)

    @property
    def eta_ang(self) -> float:
        return ghz(self.eta)

    @property
    def gm(self) -> float:
        return ghz(self.g_m)

    @property
    def gb(self) -> float:
        return ghz(self.g_b)

    def replace(self, **changes) -> DeviceParams:
        fields = {k: getattr(self, k) for k in self.__dataclass_fields__}
        fields.update(changes)
        return DeviceParams(**fields)


def enumerate_basis(max_excitation: int = 2) -> list[BasisLabel]:
    """Bare basis ordered by excitation number, then lexicographically.

    >>> [str(b) for b in enumerate_basis(1)]
    ['000', '001', '010', '100']
    """
    if max_excitation not in (1, 2):
        raise ValueError(f"max_excitation must be 1 or 2, got {max_excitation!r}")
    labels = [
        BasisLabel(m, q, b)
        for m in range(3)
        for q in range(3)
        for b in range(3)
        if m + q + b <= max_excitation
    ]
    return sorted(labels, key=lambda s: (s.n_exc, s.n_m, s.n_q, s.n_b))


BASIS = tuple(enumerate_basis(2))
INDEX = {label: i for i, label in enumerate(BASIS)}


def block_indices(n_exc: int) -> np.ndarray:
    """Positions of the ``n_exc`` block inside the 10-state basis."""
    if n_exc not in (0, 1, 2):
        raise ValueError(f"n_exc must be 0, 1 or 2, got {n_exc!r}")
    return np.array([i for i, s in enumerate(BASIS) if s.n_exc == n_exc])


def block_labels(n_exc: int) -> list[BasisLabel]:
    return [BASIS[i] for i in block_indices(n_exc)]


def gd_coupling(params: DeviceParams, omega_q: float) -> float:
    """Direct memory-bus coupling 2 g_m g_b / omega_q (rad/ns)."""
    return 2.0 * params.gm * params.gb / omega_q


def _qubit_diag(omega_q: float, eta: float, n_q: int) -> float:
    return (0.0, omega_q, 2.0 * omega_q - eta)[n_q]


def _ladder(n: int) -> float:
    return np.sqrt(n)


def coupling_operators() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Unit-strength operators (N_q, memory-qubit, qubit-bus, memory-bus).

    The qubit-number operator carries the second-level diagonal entry 2, so
    the diagonal of H is ``static + omega_q * N_q`` with the anharmonic
    shift folded into ``static``.
    """
    n = len(BASIS)
    nq = np.zeros((n, n))
    mq = np.zeros((n, n))
    qb = np.zeros((n, n))
    mb = np.zeros((n, n))
    for j, s in enumerate(BASIS):
        nq[j, j] = s.n_q
        # a_m^dag sigma_q^- : qubit down, memory up
        if s.n_q > 0 and s.n_m < 2:
            t = BasisLabel(s.n_m + 1, s.n_q - 1, s.n_b)
            if t in INDEX:
                mq[INDEX[t], j] = _ladder(s.n_m + 1) * _ladder(s.n_q)
        # sigma_q^- a_b^dag : qubit down, bus up
        if s.n_q > 0 and s.n_b < 2:
            t = BasisLabel(s.n_m, s.n_q - 1, s.n_b + 1)
            if t in INDEX:
                qb[INDEX[t], j] = _ladder(s.n_b + 1) * _ladder(s.n_q)
        # a_m^dag a_b : bus down, memory up
        if s.n_b > 0 and s.n_m < 2:
            t = BasisLabel(s.n_m + 1, s.n_q, s.n_b - 1)
            if t in INDEX:
                mb[INDEX[t], j] = _ladder(s.n_m + 1) * _ladder(s.n_b)
    return nq, mq + mq.T, qb + qb.T, mb + mb.T


_NQ, _MQ, _QB, _MB = coupling_operators()


def hamiltonian_parts(params: DeviceParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split H(omega_q) = H0 + omega_q * H1 + g_d(omega_q) * H2.

    ``H2`` is the zero matrix when ``include_gd`` is off.
    """
    static = np.diag(
        [
            s.n_m * params.omega_m
            + s.n_b * params.omega_b
            - (params.eta_ang if s.n_q == 2 else 0.0)
            for s in BASIS
        ]
    )
    h0 = (static + params.gm * _MQ + params.gb * _QB).astype(complex)
    h1 = _NQ.astype(complex)
    h2 = _MB.astype(complex) if params.include_gd else np.zeros_like(h0)
    return h0, h1, h2


def assemble_hamiltonian(params: DeviceParams, omega_q: float, gd: float | None = None) -> np.ndarray:
    """Dense 10x10 RWA Hamiltonian at qubit frequency ``omega_q`` (rad/ns).

    With ``include_gd`` the direct coupling is recomputed from ``omega_q``
    unless ``gd`` (rad/ns) overrides it.
    """
    if not omega_q > 0:
        raise ValueError(f"omega_q must be positive, got {omega_q!r}")
    h0, h1, h2 = hamiltonian_parts(params)
    h = h0 + omega_q * h1
    if params.include_gd:
        h = h + (gd_coupling(params, omega_q) if gd is None else gd) * h2
    return h


def bare_energies(params: DeviceParams, omega_q: float) -> np.ndarray:
    return np.array(
        [
            s.n_m * params.omega_m
            + s.n_b * params.omega_b
            + _qubit_diag(omega_q, params.eta_ang, s.n_q)
            for s in BASIS
        ]
    )


def excitation_number() -> np.ndarray:
    return np.array([s.n_exc for s in BASIS], dtype=float)
