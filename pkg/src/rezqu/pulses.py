"""Qubit-frequency trajectories omega_q(t) for tune/detune pulses.

Pulse parameters are stored in GHz and ns; ``omega``, ``domega`` and
``phase`` return angular values (rad/ns, rad/ns^2, rad).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .basis import TWO_PI

SQRT2 = np.sqrt(2.0)


class PulseShape:
    """Common interface; subclasses fill in the GHz-valued pieces."""

    duration: float

    def f(self, t):  # GHz
        raise NotImplementedError

    def df(self, t):  # GHz/ns
        raise NotImplementedError

    def f_integral(self, t):  # GHz*ns, integral of f from 0 to t
        raise NotImplementedError

    @property
    def breakpoints(self) -> np.ndarray:
        """Times where omega_q or its derivative has a kink (including ends)."""
        return np.array([0.0, self.duration])

    # Boundaries of the front ramp and rear ramp, used by the design formulas.
    front_end: float
    rear_start: float

    def omega(self, t):
        return TWO_PI * self.f(t)

    def domega(self, t):
        return TWO_PI * self.df(t)

    def phase(self, t):
        """Integral of omega_q from 0 to t (rad)."""
        return TWO_PI * self.f_integral(t)

    @property
    def f_initial(self) -> float:
        return float(self.f(0.0))

    @property
    def f_final(self) -> float:
        return float(self.f(self.duration))

    def reversed(self) -> PulseShape:
        return TimeReversed(self)


@dataclass(frozen=True)
class PiecewiseLinear(PulseShape):
    """Linear interpolation through ``(t_ns, f_ghz)`` knots.

    ``front_end`` and ``rear_start`` mark the flat part; when omitted they
    default to the first and last knots' neighbours.
    """

    knots: tuple[tuple[float, float], ...]
    front_end: float | None = None
    rear_start: float | None = None

    def __post_init__(self):
        t = np.array([k[0] for k in self.knots], dtype=float)
        if len(t) < 2:
            raise ValueError("need at least two knots")
        if t[0] != 0.0:
            raise ValueError("first knot must sit at t=0")
        if np.any(np.diff(t) < 0):
            raise ValueError("knot times must be non-decreasing")
        if self.front_end is None:
            object.__setattr__(self, "front_end", float(t[min(1, len(t) - 1)]))
        if self.rear_start is None:
            object.__setattr__(self, "rear_start", float(t[max(len(t) - 2, 0)]))

    @property
    def _t(self) -> np.ndarray:
        return np.array([k[0] for k in self.knots], dtype=float)

    @property
    def _f(self) -> np.ndarray:
        return np.array([k[1] for k in self.knots], dtype=float)

    @property
    def duration(self) -> float:
        return float(self.knots[-1][0])

    @property
    def breakpoints(self) -> np.ndarray:
        return np.unique(self._t)

    def f(self, t):
        return np.interp(t, self._t, self._f)

    def _segment(self, t):
        tk, fk = self._t, self._f
        keep = np.concatenate([[True], np.diff(tk) > 0])
        tk, fk = tk[keep], fk[keep]
        i = np.clip(np.searchsorted(tk, t, side="right") - 1, 0, len(tk) - 2)
        return tk, fk, i

    def df(self, t):
        t = np.asarray(t, dtype=float)
        tk, fk, i = self._segment(t)
        slope = np.diff(fk) / np.diff(tk)
        return slope[i]

    def f_integral(self, t):
        t = np.asarray(t, dtype=float)
        tk, fk, i = self._segment(t)
        seg = 0.5 * (fk[1:] + fk[:-1]) * np.diff(tk)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        tau = t - tk[i]
        slope = (fk[i + 1] - fk[i]) / (tk[i + 1] - tk[i])
        return cum[i] + fk[i] * tau + 0.5 * slope * tau**2


def _step(x, sigma):
    """Integrated unit Gaussian of width sigma (0 -> 1)."""
    return 0.5 * (1.0 + erf(x / (SQRT2 * sigma)))


def _step_integral(x, sigma):
    """Antiderivative of :func:`_step` in x."""
    return 0.5 * (
        x + x * erf(x / (SQRT2 * sigma)) + np.sqrt(2.0 / np.pi) * sigma * np.exp(-0.5 * (x / sigma) ** 2)
    )


def _gauss(x, sigma):
    return np.exp(-0.5 * (x / sigma) ** 2) / (np.sqrt(2.0 * np.pi) * sigma)


@dataclass(frozen=True)
class ErfRamp(PulseShape):
    """Flat-top pulse whose ramps are integrated Gaussians of width ``sigma``.

    The front ramp is the weighted sum of two steps centred ``shift`` ns
    apart (weight ``ratio`` on the earlier one when ``shift >= 0``); the rear
    ramp is a single step. ``flat_duration`` runs between the later front
    centre and the rear centre. The pulse starts ``margin * sigma`` before the
    earliest centre and ends ``margin * sigma`` after the rear centre.
    """

    f_start: float
    f_flat: float
    f_end: float
    sigma: float = 1.0
    flat_duration: float = 10.0
    shift: float = 0.0
    ratio: float = 1.0
    margin: float = 3.0
    rear_sigma: float | None = None

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.flat_duration < 0:
            raise ValueError("flat_duration must be non-negative")

    @property
    def _rear_sigma(self) -> float:
        return self.sigma if self.rear_sigma is None else self.rear_sigma

    @property
    def centers(self) -> tuple[float, float, float]:
        first = self.margin * self.sigma + max(0.0, -self.shift)
        second = first + self.shift
        rear = max(first, second) + self.flat_duration
        return first, second, rear

    @property
    def duration(self) -> float:
        return self.centers[2] + self.margin * self._rear_sigma

    @property
    def front_end(self) -> float:
        c1, c2, _ = self.centers
        return max(c1, c2) + self.margin * self.sigma

    @property
    def rear_start(self) -> float:
        return self.centers[2] - self.margin * self._rear_sigma

    def f(self, t):
        t = np.asarray(t, dtype=float)
        c1, c2, c3 = self.centers
        s, rs = self.sigma, self._rear_sigma
        up = self.f_flat - self.f_start
        return (
            self.f_start
            + up * (self.ratio * _step(t - c1, s) + (1.0 - self.ratio) * _step(t - c2, s))
            + (self.f_end - self.f_flat) * _step(t - c3, rs)
        )

    def df(self, t):
        t = np.asarray(t, dtype=float)
        c1, c2, c3 = self.centers
        s, rs = self.sigma, self._rear_sigma
        up = self.f_flat - self.f_start
        return up * (self.ratio * _gauss(t - c1, s) + (1.0 - self.ratio) * _gauss(t - c2, s)) + (
            self.f_end - self.f_flat
        ) * _gauss(t - c3, rs)

    def f_integral(self, t):
        t = np.asarray(t, dtype=float)
        c1, c2, c3 = self.centers
        s, rs = self.sigma, self._rear_sigma
        up = self.f_flat - self.f_start

        def si(c, w):
            return _step_integral(t - c, w) - _step_integral(-c, w)

        return (
            self.f_start * t
            + up * (self.ratio * si(c1, s) + (1.0 - self.ratio) * si(c2, s))
            + (self.f_end - self.f_flat) * si(c3, rs)
        )


@dataclass(frozen=True)
class TimeReversed(PulseShape):
    """omega_q(t_f - t) of another pulse."""

    inner: PulseShape

    @property
    def duration(self) -> float:
        return self.inner.duration

    @property
    def breakpoints(self) -> np.ndarray:
        return np.sort(self.duration - self.inner.breakpoints)

    @property
    def front_end(self) -> float:
        return self.duration - self.inner.rear_start

    @property
    def rear_start(self) -> float:
        return self.duration - self.inner.front_end

    def f(self, t):
        return self.inner.f(self.duration - np.asarray(t, dtype=float))

    def df(self, t):
        return -self.inner.df(self.duration - np.asarray(t, dtype=float))

    def f_integral(self, t):
        total = self.inner.f_integral(self.duration)
        return total - self.inner.f_integral(self.duration - np.asarray(t, dtype=float))

    def reversed(self) -> PulseShape:
        return self.inner


def constant(f_ghz: float, duration: float) -> PiecewiseLinear:
    return PiecewiseLinear(((0.0, f_ghz), (duration, f_ghz)), front_end=0.0, rear_start=duration)
