"""Eigenmodes and energetics of the free massless Dirac Hamiltonian.

H0 = -i sigma_3 d/dz on the ring. Its eigenmodes are

    phi_{lam,p}(z) = 1/(2 sqrt(L)) * (1 + lam*p/|p|, 1 - lam*p/|p|)^T e^{ipz}

with p = 2*pi*r/L, r a nonzero integer, and energy lam*|p|. The sign lam
picks the energy branch; p/|p| picks the chirality, so each mode lives
entirely in one component. p = 0 is excluded everywhere: the spinor
contains p/|p| and is undefined there.

Free evolution translates the upper component rigidly by +t and the lower
by -t, giving each eigenmode exactly the phase e^{-i lam |p| t}.

The interaction term is read as q*V: the total energy of a field is
xi = <psi|H0|psi> + q * integral V |psi|^2 dz, and with the default q = 1
the bare-V and q*V conventions coincide.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import Grid, SpinorField, translate_component
from .potential import Potential


@dataclass(frozen=True)
class ModeIndex:
    """(lam, r): energy branch lam = +-1 and integer momentum number r != 0."""

    lam: int
    r: int

    def __post_init__(self):
        if self.lam not in (-1, 1):
            raise ValueError(f"lam must be +1 or -1, got {self.lam}")
        if self.r == 0:
            raise ValueError("r = 0 excluded: the mode spinor is undefined at p = 0")


def mode_momentum(m: ModeIndex, grid: Grid) -> float:
    return 2.0 * np.pi * m.r / grid.length


def mode_energy(m: ModeIndex, grid: Grid) -> float:
    """Energy eigenvalue lam * |p|."""
    return m.lam * abs(mode_momentum(m, grid))


def eigenmode(m: ModeIndex, grid: Grid) -> SpinorField:
    """Normalized eigenmode of H0; lives in a single chiral component."""
    if abs(m.r) > grid.nyquist_r:
        raise ValueError(f"mode r={m.r} exceeds the Nyquist bound {grid.nyquist_r}")
    sign = 1 if m.r > 0 else -1
    wave = np.exp(1j * mode_momentum(m, grid) * grid.z) / (2.0 * np.sqrt(grid.length))
    return SpinorField(grid, (1 + m.lam * sign) * wave, (1 - m.lam * sign) * wave)


def free_propagate(f: SpinorField, t: float) -> SpinorField:
    """Evolve under H0 alone: upper shifts by +t, lower by -t (exact)."""
    return SpinorField(
        f.grid,
        translate_component(f.upper, t, f.grid),
        translate_component(f.lower, -t, f.grid),
    )


def free_energy(f: SpinorField) -> float:
    """<psi|H0|psi> as the spectral sum over components of p * |amplitude|^2.

    For a normalized field this is the free-field energy; otherwise it is
    the unnormalized quadratic form.
    """
    g = f.grid
    up = np.fft.fft(f.upper)
    lo = np.fft.fft(f.lower)
    weight = g.length / g.n_z**2
    return float(weight * np.sum(g.momenta * (np.abs(up) ** 2 - np.abs(lo) ** 2)))


def total_energy(f: SpinorField, V: Potential, t: float) -> float:
    """Free energy plus the instantaneous interaction q * int V |psi|^2 dz."""
    g = f.grid
    density = np.abs(f.upper) ** 2 + np.abs(f.lower) ** 2
    interaction = V.q * g.spacing * float(np.sum(V.evaluate(g.z, t) * density))
    return free_energy(f) + interaction
