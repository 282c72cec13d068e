"""Periodic 1D lattice and two-component spinor fields.

Fields live on n_z uniform sites z_j = -L/2 + j*L/n_z of a ring of
circumference L (natural units, hbar = c = 1). Momenta are quantized as
p_r = 2*pi*r/L with integer mode numbers r kept in FFT bin order.

All integrals are plain Riemann sums with weight = spacing. On a periodic
uniform grid this quadrature is exact for trigonometric polynomials below
the Nyquist frequency, which covers the entire working set of this
library, so no fancier rule is wanted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid: n_z sites on a ring of the given length."""

    n_z: int
    length: float

    def __post_init__(self):
        if self.n_z < 4 or self.n_z % 2 != 0:
            raise ValueError(f"n_z must be even and >= 4, got {self.n_z}")
        if not self.length > 0:
            raise ValueError(f"length must be positive, got {self.length}")

    @property
    def spacing(self) -> float:
        return self.length / self.n_z

    @property
    def z(self) -> np.ndarray:
        """Site coordinates from -L/2, right endpoint excluded."""
        return -0.5 * self.length + self.spacing * np.arange(self.n_z)

    @property
    def mode_numbers(self) -> np.ndarray:
        """Integer mode numbers r in FFT bin order."""
        return np.fft.fftfreq(self.n_z, d=1.0 / self.n_z).astype(int)

    @property
    def momenta(self) -> np.ndarray:
        """Angular momenta p_r = 2*pi*r/length in FFT bin order."""
        return (2.0 * np.pi / self.length) * self.mode_numbers

    @property
    def nyquist_r(self) -> int:
        """Largest |r| a constructed mode may carry without aliasing."""
        return self.n_z // 2 - 1


def make_grid(n_z: int, length: float) -> Grid:
    return Grid(n_z=int(n_z), length=float(length))


@dataclass(frozen=True, eq=False)
class SpinorField:
    """Two-component field: upper is the right-moving chiral component,
    lower the left-moving one."""

    grid: Grid
    upper: np.ndarray
    lower: np.ndarray

    def __post_init__(self):
        upper = np.asarray(self.upper, dtype=complex)
        lower = np.asarray(self.lower, dtype=complex)
        if upper.shape != (self.grid.n_z,) or lower.shape != (self.grid.n_z,):
            raise ValueError("component arrays must have shape (n_z,)")
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "lower", lower)


def zero_field(grid: Grid) -> SpinorField:
    n = grid.n_z
    return SpinorField(grid, np.zeros(n, dtype=complex), np.zeros(n, dtype=complex))


def inner_product(a: SpinorField, b: SpinorField) -> complex:
    """<a, b> = spacing * sum_j (conj(a_u) b_u + conj(a_l) b_l).

    Exact for band-limited fields; agrees with the continuum integral
    from -L/2 to L/2 on the working set.
    """
    if a.grid != b.grid:
        raise ValueError("inner_product requires fields on the same grid")
    s = np.vdot(a.upper, b.upper) + np.vdot(a.lower, b.lower)
    return complex(a.grid.spacing * s)


def norm(f: SpinorField) -> float:
    return float(np.sqrt(inner_product(f, f).real))


@dataclass(frozen=True, eq=False)
class ModeAmplitudes:
    """Plane-wave coefficients per chiral component, FFT bin order.

    upper[k] is the amplitude of e^{i p_r z} in the upper component for
    r = mode_numbers[k], so a unit plane wave analyzes to a single 1.
    """

    grid: Grid
    upper: np.ndarray
    lower: np.ndarray


def _analysis_phase(grid: Grid) -> np.ndarray:
    # exp(-i p_r z_0) with z_0 = -L/2 is exactly (-1)^r; use integer parity
    return np.where(grid.mode_numbers % 2 == 0, 1.0, -1.0)


def mode_amplitudes(f: SpinorField) -> ModeAmplitudes:
    g = f.grid
    phase = _analysis_phase(g)
    up = phase * np.fft.fft(f.upper) / g.n_z
    lo = phase * np.fft.fft(f.lower) / g.n_z
    return ModeAmplitudes(g, up, lo)


def synthesize(amps: ModeAmplitudes) -> SpinorField:
    g = amps.grid
    phase = _analysis_phase(g)
    up = np.fft.ifft(g.n_z * amps.upper * phase)
    lo = np.fft.ifft(g.n_z * amps.lower * phase)
    return SpinorField(g, up, lo)


def translate_component(values: np.ndarray, shift: float, grid: Grid) -> np.ndarray:
    """Exact spectral translation: f(z) -> f(z - shift) on the ring."""
    if not np.isfinite(shift):
        raise ValueError("shift must be finite")
    return np.fft.ifft(np.exp(-1j * grid.momenta * shift) * np.fft.fft(values))


def spectral_derivative(values: np.ndarray, grid: Grid) -> np.ndarray:
    """d/dz via the Fourier multiplier i*p; exact below Nyquist.

    The (unsigned) Nyquist bin is zeroed so derivatives of real fields
    stay real. Real input yields real output.
    """
    p = grid.momenta.copy()
    p[grid.n_z // 2] = 0.0
    out = np.fft.ifft(1j * p * np.fft.fft(values))
    if np.isrealobj(values):
        return out.real
    return out
