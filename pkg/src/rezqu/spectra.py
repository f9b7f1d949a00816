"""Dressed-state spectra of the memory-qubit-bus section and the ZZ shift."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .basis import (
    BasisLabel,
    DeviceParams,
    assemble_hamiltonian,
    block_indices,
    block_labels,
)

# Detunings smaller than this multiple of the largest coupling are flagged.
NEAR_DEGENERATE_FACTOR = 10.0


class LabelingError(RuntimeError):
    """No bare state dominates an eigenvector (overlap <= 1/2)."""

    def __init__(self, message: str, pair: tuple[BasisLabel, BasisLabel] | None = None):
        super().__init__(message)
        self.pair = pair


@dataclass(frozen=True)
class EigenSystem:
    n_exc: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, block coordinates
    basis: tuple[BasisLabel, ...]
    labels: dict[BasisLabel, tuple[int, float]] = field(default_factory=dict)

    def index(self, label: BasisLabel | tuple | str) -> int:
        key = _as_label(label)
        if key not in self.labels:
            raise LabelingError(f"no eigenvector is dominated by |{key}>")
        return self.labels[key][0]

    def energy(self, label: BasisLabel | tuple | str) -> float:
        return float(self.eigenvalues[self.index(label)])

    def vector(self, label: BasisLabel | tuple | str) -> np.ndarray:
        return self.eigenvectors[:, self.index(label)]

    def overlap(self, label: BasisLabel | tuple | str) -> float:
        return self.labels[_as_label(label)][1]


def _as_label(label) -> BasisLabel:
    if isinstance(label, str):
        return BasisLabel(*(int(c) for c in label))
    return BasisLabel(*label)


def fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    out = np.array(vectors, dtype=complex)
    for k in range(out.shape[1]):
        j = np.argmax(np.abs(out[:, k]))
        out[:, k] *= np.exp(-1j * np.angle(out[j, k]))
    return out


def label_eigenvectors(
    vectors: np.ndarray, basis: tuple[BasisLabel, ...], strict: bool = True
) -> dict[BasisLabel, tuple[int, float]]:
    """Map each bare state to the eigenvector it dominates (weight > 1/2).

    A weight above 1/2 is unique per column and per row, so the map is
    injective; non-strict mode just leaves ambiguous states unlabeled.
    """
    weights = np.abs(vectors) ** 2  # weights[bare, eigen]
    labels: dict[BasisLabel, tuple[int, float]] = {}
    for k in range(vectors.shape[1]):
        j = int(np.argmax(weights[:, k]))
        w = float(weights[j, k])
        if w <= 0.5:
            if not strict:
                continue
            order = np.argsort(weights[:, k])[::-1]
            pair = (basis[order[0]], basis[order[1]])
            raise LabelingError(
                f"eigenvector {k} has no dominant bare state "
                f"(max overlap {w:.3f} between |{pair[0]}> and |{pair[1]}>)",
                pair,
            )
        labels[basis[j]] = (k, w)
    return labels


def diagonalize_block(h: np.ndarray, n_exc: int, strict: bool = True) -> EigenSystem:
    """Diagonalize the ``n_exc`` block of a full 10x10 Hamiltonian.

    Eigenvalues come back ascending. With ``strict`` any eigenvector without
    a dominant bare state raises :class:`LabelingError`; otherwise the error
    is deferred until such a label is requested.
    """
    idx = block_indices(n_exc)
    sub = h[np.ix_(idx, idx)]
    vals, vecs = np.linalg.eigh(sub)
    vecs = fix_phases(vecs)
    basis = tuple(block_labels(n_exc))
    return EigenSystem(n_exc, vals, vecs, basis, label_eigenvectors(vecs, basis, strict))


def eigensystem(
    params: DeviceParams, omega_q: float, n_exc: int, gd: float | None = None, strict: bool = True
) -> EigenSystem:
    return diagonalize_block(assemble_hamiltonian(params, omega_q, gd=gd), n_exc, strict)


class SingleExcitation4th(NamedTuple):
    epsilon_100: float
    epsilon_001: float
    near_degenerate: bool


def _detunings(params: DeviceParams, omega_q: float) -> tuple[float, float, float]:
    d_m = params.omega_m - omega_q
    d_b = omega_q - params.omega_b
    d_mb = params.omega_m - params.omega_b
    if d_m == 0 or d_b == 0 or d_mb == 0:
        raise ZeroDivisionError("zero detuning: perturbation series undefined")
    return d_m, d_b, d_mb


def _near_degenerate(params: DeviceParams, omega_q: float) -> bool:
    d_m, d_b, d_mb = _detunings(params, omega_q)
    g = max(params.gm, params.gb)
    return min(abs(d_m), abs(d_b), abs(d_mb)) <= NEAR_DEGENERATE_FACTOR * g


def single_excitation_energies_4th(params: DeviceParams, omega_q: float) -> SingleExcitation4th:
    """Fourth-order memory-like and bus-like energies, direct coupling neglected."""
    d_m, d_b, d_mb = _detunings(params, omega_q)
    gm2, gb2 = params.gm**2, params.gb**2
    e100 = params.omega_m + gm2 / d_m - gm2**2 / d_m**3 + gm2 * gb2 / (d_m**2 * d_mb)
    e001 = params.omega_b - gb2 / d_b + gb2**2 / d_b**3 - gm2 * gb2 / (d_b**2 * d_mb)
    return SingleExcitation4th(e100, e001, _near_degenerate(params, omega_q))


def second_order_amplitudes(params: DeviceParams, omega_q: float) -> tuple[float, float, float]:
    """Amplitudes of |200>, |020>, |002> in the dressed |101> state."""
    d_m, d_b, d_mb = _detunings(params, omega_q)
    gg = params.gm * params.gb * np.sqrt(2.0)
    a200 = gg / (d_b * d_mb)
    a002 = gg / (d_m * d_mb)
    a020 = -gg / (d_m * d_b) * _second_fraction(params, omega_q)
    return a200, a020, a002


def _second_fraction(params: DeviceParams, omega_q: float) -> float:
    s = params.omega_m + params.omega_b
    den = s - (2.0 * omega_q - params.eta_ang)
    if den == 0:
        raise ZeroDivisionError("|020> degenerate with |101>: fourth-order pole")
    return (s - 2.0 * omega_q) / den


def omega_zz_4th(params: DeviceParams, omega_q: float) -> float:
    d_m, d_b, _ = _detunings(params, omega_q)
    lead = -2.0 * params.gm**2 * params.gb**2 * params.eta_ang / (d_m**2 * d_b**2)
    return lead * _second_fraction(params, omega_q)


def omega_zz_exact(params: DeviceParams, omega_q: float, gd: float | None = None) -> float:
    """eps_101 + eps_000 - eps_100 - eps_001 from exact block diagonalization."""
    h = assemble_hamiltonian(params, omega_q, gd=gd)
    e0 = diagonalize_block(h, 0).eigenvalues[0]
    one = diagonalize_block(h, 1, strict=False)
    two = diagonalize_block(h, 2, strict=False)
    return two.energy("101") + e0 - one.energy("100") - one.energy("001")


@dataclass(frozen=True)
class ZZReport:
    omega_zz_exact: float
    omega_zz_4th: float
    omega_zz_eta_pert: float
    alpha_200: float
    alpha_020: float
    alpha_002: float
    near_degenerate: bool


def omega_zz(params: DeviceParams, omega_q: float) -> ZZReport:
    """Exact ZZ shift (primary) with the fourth-order and eta-perturbative values."""
    exact = omega_zz_exact(params, omega_q)
    a200, a020, a002 = second_order_amplitudes(params, omega_q)
    return ZZReport(
        omega_zz_exact=exact,
        omega_zz_4th=omega_zz_4th(params, omega_q),
        omega_zz_eta_pert=-params.eta_ang * a020**2,
        alpha_200=a200,
        alpha_020=a020,
        alpha_002=a002,
        near_degenerate=_near_degenerate(params, omega_q),
    )


def gd_shift_cancellation(params: DeviceParams, omega_q: float, gd: float | None = None) -> tuple[float, float]:
    """Shifts of eps_100 + eps_001 and of eps_101 caused by the direct coupling.

    ``gd`` overrides the default 2 g_m g_b / omega_q.
    """

    def energies(p: DeviceParams, g: float | None) -> tuple[float, float]:
        h = assemble_hamiltonian(p, omega_q, gd=g)
        one = diagonalize_block(h, 1, strict=False)
        two = diagonalize_block(h, 2, strict=False)
        return one.energy("100") + one.energy("001"), two.energy("101")

    off = energies(params.replace(include_gd=False), None)
    on = energies(params.replace(include_gd=True), gd)
    return on[0] - off[0], on[1] - off[1]
