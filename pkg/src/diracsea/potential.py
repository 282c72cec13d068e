"""External electric potentials V(z, t) with a hard time window.

Every potential vanishes outside the open interval (t_on, t_off); the
switch-on and switch-off are discontinuous by contract and are never
smoothed. Standard construction uses t_on = 0. The charge q rides along
with the potential so that solvers and energy functionals consistently
couple through q*V.

Spatial profiles are periodic with the domain, so characteristic curves
may be followed without explicit wrapping.
"""

from __future__ import annotations

import abc
import csv
from dataclasses import dataclass, replace

import numpy as np


class Potential(abc.ABC):
    """Time-windowed potential; subclasses supply the in-window profile."""

    q: float
    t_on: float
    t_off: float

    def evaluate(self, z, t: float):
        """V at (z, t); zero for t outside the open window."""
        arr = np.asarray(z, dtype=float)
        if t <= self.t_on or t >= self.t_off:
            out = np.zeros_like(arr)
        else:
            out = self._profile(arr, t)
        if np.ndim(z) == 0:
            return float(out)
        return out

    @abc.abstractmethod
    def _profile(self, z: np.ndarray, t: float) -> np.ndarray: ...

    @abc.abstractmethod
    def shifted(self, s: float) -> "Potential":
        """The potential seen by a clock started s later: V'(z,t) = V(z, t+s)."""


def evaluate(V: Potential, z, t: float):
    return V.evaluate(z, t)


@dataclass(frozen=True)
class ZeroPotential(Potential):
    q: float = 1.0
    t_on: float = 0.0
    t_off: float = 0.0

    def _profile(self, z, t):
        return np.zeros_like(z)

    def shifted(self, s):
        return self


@dataclass(frozen=True)
class ConstantPotential(Potential):
    v0: float
    t_off: float
    q: float = 1.0
    t_on: float = 0.0

    def _profile(self, z, t):
        return np.full_like(z, self.v0)

    def shifted(self, s):
        return replace(self, t_on=self.t_on - s, t_off=self.t_off - s)


@dataclass(frozen=True)
class TravelingWavePotential(Potential):
    """V(z, t) = amplitude * sin(delta_p * (z - t) - phase) inside the window.

    A right-moving wave: a function of z - t only, so it is constant along
    right-moving characteristics. delta_p * length / (2 pi) must be a
    nonzero integer for periodicity.
    """

    amplitude: float
    delta_p: float
    t_off: float
    length: float
    q: float = 1.0
    t_on: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        r = self.delta_p * self.length / (2.0 * np.pi)
        if abs(r - round(r)) > 1e-9 or round(r) == 0:
            raise ValueError(
                f"delta_p*L/(2 pi) must be a nonzero integer, got {r}"
            )

    def _profile(self, z, t):
        return self.amplitude * np.sin(self.delta_p * (z - t) - self.phase)

    def shifted(self, s):
        return replace(
            self,
            t_on=self.t_on - s,
            t_off=self.t_off - s,
            phase=self.phase + self.delta_p * s,
        )


@dataclass(frozen=True, eq=False)
class TabulatedPotential(Potential):
    """Potential sampled on a (time x space) table, bilinearly interpolated.

    Column i sits at z_i = -length/2 + i*length/n_cols; interpolation is
    linear in z with periodic wrap and linear in t between sample rows
    (clamped to the edge rows outside the sampled times).
    """

    t_samples: np.ndarray
    values: np.ndarray
    length: float
    t_off: float
    q: float = 1.0
    t_on: float = 0.0

    def __post_init__(self):
        ts = np.asarray(self.t_samples, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if ts.ndim != 1 or len(ts) < 2:
            raise ValueError("need at least two time samples")
        if np.any(np.diff(ts) <= 0):
            raise ValueError("time samples must be strictly increasing")
        if vals.shape[0] != len(ts) or vals.ndim != 2 or vals.shape[1] < 2:
            raise ValueError("values must have shape (n_t, n_cols >= 2)")
        object.__setattr__(self, "t_samples", ts)
        object.__setattr__(self, "values", vals)

    def _profile(self, z, t):
        ts, vals = self.t_samples, self.values
        k = int(np.searchsorted(ts, t, side="right")) - 1
        if k < 0:
            row = vals[0]
        elif k >= len(ts) - 1:
            row = vals[-1]
        else:
            w = (t - ts[k]) / (ts[k + 1] - ts[k])
            row = (1.0 - w) * vals[k] + w * vals[k + 1]
        m = vals.shape[1]
        dz = self.length / m
        x = np.mod(z + 0.5 * self.length, self.length) / dz
        i0 = np.floor(x).astype(int) % m
        frac = x - np.floor(x)
        i1 = (i0 + 1) % m
        return (1.0 - frac) * row[i0] + frac * row[i1]

    def shifted(self, s):
        return replace(
            self, t_samples=self.t_samples - s, t_on=self.t_on - s, t_off=self.t_off - s
        )


def extraction_from_packet(
    p: float, p_prime: float, g: float, q: float, length: float, t_f: float
) -> Potential:
    """Potential engineered to drain the two-mode packet's free energy.

    The packet's free current is J(z,t) = (q/L)(1 + cos(dp (z - t))) with
    dp = p' - p; taking V = -g * dJ/dz gives a traveling wave

        V(z, t) = g * (q/L) * dp * sin(dp (z - t)),

    windowed to (0, t_f). g = 0 degenerates to the zero potential.
    """
    if p <= 0 or p_prime <= 0:
        raise ValueError("packet momenta must be positive")
    if p == p_prime:
        raise ValueError("p = p' rejected: the extraction potential would vanish")
    if g < 0:
        raise ValueError("coupling g must be nonnegative")
    if g == 0:
        return ZeroPotential(q=q)
    dp = p_prime - p
    return TravelingWavePotential(
        amplitude=g * (q / length) * dp,
        delta_p=dp,
        t_off=t_f,
        length=length,
        q=q,
    )


def load_tabulated_csv(
    path, length: float, q: float = 1.0, t_off: float | None = None
) -> TabulatedPotential:
    """Read a tabulated potential: header `t,z0,z1,...`, one row per time."""
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and not row[0].startswith("#")]
    if not rows or rows[0][0].strip() != "t":
        raise ValueError("expected header row starting with 't'")
    n_cols = len(rows[0]) - 1
    ts, vals = [], []
    for row in rows[1:]:
        if len(row) != n_cols + 1:
            raise ValueError(f"row has {len(row)} fields, expected {n_cols + 1}")
        ts.append(float(row[0]))
        vals.append([float(x) for x in row[1:]])
    ts_arr = np.asarray(ts)
    return TabulatedPotential(
        t_samples=ts_arr,
        values=np.asarray(vals),
        length=length,
        t_off=float(ts_arr[-1]) if t_off is None else t_off,
        q=q,
    )
