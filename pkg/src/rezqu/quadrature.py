"""Composite Gauss-Legendre quadrature for phase-oscillating integrands."""

from __future__ import annotations

import numpy as np

PHASE_STEP = np.pi / 4  # max phase advance per panel
ORDER = 10

_X, _W = np.polynomial.legendre.leggauss(ORDER)


def panels(t0: float, t1: float, rate_max: float, breakpoints=()) -> np.ndarray:
    """Panel edges: every breakpoint inside (t0, t1) plus enough cuts that the
    phase advances by at most ``PHASE_STEP`` per panel."""
    edges = [t0] + sorted(b for b in np.asarray(breakpoints, dtype=float) if t0 < b < t1) + [t1]
    out = [np.array([t0])]
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi <= lo:
            continue
        n = max(1, int(np.ceil(abs(rate_max) * (hi - lo) / PHASE_STEP)))
        out.append(np.linspace(lo, hi, n + 1)[1:])
    return np.concatenate(out)


def oscillatory_integral(amplitude, phase, t0: float, t1: float, rate_max: float, breakpoints=()) -> complex:
    """Integral of amplitude(t) * exp(i * phase(t)) over [t0, t1].

    ``amplitude`` and ``phase`` must accept numpy arrays; ``rate_max`` bounds
    |d phase / dt| on the interval.
    """
    if t1 == t0:
        return 0.0j
    edges = panels(t0, t1, rate_max, breakpoints)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    t = (0.5 * (hi + lo))[:, None] + half[:, None] * _X[None, :]
    vals = amplitude(t) * np.exp(1j * phase(t))
    return complex(np.sum(half[:, None] * _W[None, :] * vals))


def rate_bound(rate, t0: float, t1: float, samples: int = 400) -> float:
    """Generous bound on |rate(t)| from dense sampling."""
    if t1 <= t0:
        return 0.0
    t = np.linspace(t0, t1, samples)
    return 1.1 * float(np.max(np.abs(rate(t)))) + 1e-9


def adaptive_oscillatory_integral(
    amplitude, phase, t0: float, t1: float, rate_max: float, breakpoints=(), atol: float = 1e-12, max_levels: int = 8
) -> complex:
    """:func:`oscillatory_integral` with panels halved until two successive
    estimates agree to ``atol``."""
    rate = max(abs(rate_max), PHASE_STEP / max(t1 - t0, 1e-300))
    prev = oscillatory_integral(amplitude, phase, t0, t1, rate, breakpoints)
    for _ in range(max_levels):
        rate *= 2.0
        cur = oscillatory_integral(amplitude, phase, t0, t1, rate, breakpoints)
        if abs(cur - prev) < atol:
            return cur
        prev = cur
    raise RuntimeError(f"quadrature did not reach {atol:g} (last change {abs(cur - prev):.2e})")
