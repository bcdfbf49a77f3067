"""Uniform periodic grid, discrete Fourier transforms, and multiplier operators.

Everything downstream (fluxes, norms, diagnostics) is built on the three
value types defined here: ``PeriodicGrid``, ``RealField`` and
``SpectralField``.  All operators are pure functions; fields are never
mutated in place.

Conventions
-----------
Sample points are x_j = j*L/N, j = 0..N-1.  Spectral coefficients follow
the series normalization f(x) = sum_k c_k exp(i*xi_k*x) with physical
wavenumbers xi_k = 2*pi*k/L, k in {-N/2, ..., N/2-1} (numpy fft ordering),
so c = fft(samples)/N.  The Nyquist mode k = -N/2 is zeroed by every odd
multiplier (Hilbert transform, odd-order derivatives): it has no
well-defined sign under -i*sgn(xi) and zeroing keeps outputs real.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PeriodicGrid",
    "RealField",
    "SpectralField",
    "forward_transform",
    "inverse_transform",
    "apply_lambda_s",
    "hilbert",
    "derivative",
    "translate",
    "mean_remove",
]


class GridError(ValueError):
    """Invalid grid or field construction."""


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform grid of ``n_points`` samples on a torus of period ``length``."""

    n_points: int
    length: float

    def __post_init__(self):
        if self.n_points < 8 or not _is_power_of_two(self.n_points):
            raise GridError(f"n_points must be a power of two >= 8, got {self.n_points}")
        if not (self.length > 0 and np.isfinite(self.length)):
            raise GridError(f"length must be positive and finite, got {self.length}")

    @property
    def spacing(self) -> float:
        return self.length / self.n_points

    @property
    def nodes(self) -> np.ndarray:
        """Sample points x_j = j*spacing."""
        return np.arange(self.n_points) * self.spacing

    @property
    def wavenumbers(self) -> np.ndarray:
        """Physical wavenumbers xi_k = 2*pi*k/L in fft ordering."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.spacing)

    @property
    def nyquist_index(self) -> int:
        return self.n_points // 2


@dataclass(frozen=True)
class RealField:
    """Real samples of a function on a :class:`PeriodicGrid`."""

    grid: PeriodicGrid
    samples: np.ndarray
    mean_removed: bool = False

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.shape != (self.grid.n_points,):
            raise GridError(
                f"samples shape {samples.shape} does not match grid with "
                f"{self.grid.n_points} points"
            )
        object.__setattr__(self, "samples", samples)
        if self.mean_removed:
            scale = np.max(np.abs(samples))
            if scale > 0 and abs(np.mean(samples)) > 1e-12 * scale:
                raise GridError("field flagged mean_removed but has nonzero mean")

    def mean(self) -> float:
        return float(np.mean(self.samples))

    def with_samples(self, samples, mean_removed=False) -> "RealField":
        return RealField(self.grid, samples, mean_removed=mean_removed)


@dataclass(frozen=True)
class SpectralField:
    """Fourier-series coefficients c_k (fft ordering, c = fft(samples)/N)."""

    grid: PeriodicGrid
    coefficients: np.ndarray

    def __post_init__(self):
        coeff = np.asarray(self.coefficients, dtype=complex)
        if coeff.shape != (self.grid.n_points,):
            raise GridError("coefficient count does not match grid")
        object.__setattr__(self, "coefficients", coeff)

    def hermitian_defect(self) -> float:
        """Max |c(-k) - conj(c(k))|; zero for transforms of real fields."""
        c = self.coefficients
        n = self.grid.n_points
        idx = (-np.arange(n)) % n
        return float(np.max(np.abs(c[idx] - np.conj(c))))


def forward_transform(f: RealField) -> SpectralField:
    return SpectralField(f.grid, np.fft.fft(f.samples) / f.grid.n_points)


def inverse_transform(F: SpectralField) -> RealField:
    samples = np.fft.ifft(F.coefficients * F.grid.n_points)
    return RealField(F.grid, np.real(samples))


def zero_mean_samples(samples: np.ndarray) -> np.ndarray:
    """Subtract the mean twice: one pass can leave a uniform roundoff residue
    that dominates an (almost) constant field."""
    out = samples - np.mean(samples)
    out -= np.mean(out)
    return out


def mean_remove(f: RealField) -> RealField:
    if f.mean_removed:
        return f
    return RealField(f.grid, zero_mean_samples(f.samples), mean_removed=True)


def _apply_multiplier(f: RealField, mult: np.ndarray, mean_removed: bool) -> RealField:
    coeff = np.fft.fft(f.samples) / f.grid.n_points
    out = np.real(np.fft.ifft(mult * coeff * f.grid.n_points))
    return RealField(f.grid, out, mean_removed=mean_removed)


def apply_lambda_s(f: RealField, s: float) -> RealField:
    """Fractional dissipation operator: multiplier |xi|^s, zero mean mode for s > 0."""
    if s < 0:
        raise ValueError(f"apply_lambda_s requires s >= 0, got {s}")
    xi = f.grid.wavenumbers
    if s == 0:
        return RealField(f.grid, f.samples.copy(), mean_removed=f.mean_removed)
    mult = np.abs(xi) ** s
    mult[0] = 0.0
    return _apply_multiplier(f, mult, mean_removed=True)


def hilbert(f: RealField) -> RealField:
    """Hilbert transform: multiplier -i*sgn(xi), Nyquist mode zeroed."""
    xi = f.grid.wavenumbers
    mult = -1j * np.sign(xi)
    mult[f.grid.nyquist_index] = 0.0
    return _apply_multiplier(f, mult, mean_removed=True)


def derivative(f: RealField, order: int = 1) -> RealField:
    """Spectral derivative of the given order (1..4)."""
    if not (1 <= order <= 4):
        raise ValueError(f"derivative order must be in 1..4, got {order}")
    xi = f.grid.wavenumbers
    mult = (1j * xi) ** order
    if order % 2 == 1:
        mult[f.grid.nyquist_index] = 0.0
    return _apply_multiplier(f, mult, mean_removed=True)


def translate(f: RealField, shift: float) -> RealField:
    """Samples of x -> f(x - shift), evaluated by Fourier phase shift.

    The Nyquist coefficient is phase-shifted by cos(xi_N*shift), the real-signal
    interpretation of that mode; grid-aligned shifts reduce to exact rolls.
    """
    n = f.grid.n_points
    h = f.grid.spacing
    steps = shift / h
    j = int(round(steps))
    if abs(steps - j) < 1e-12:
        return RealField(f.grid, np.roll(f.samples, j), mean_removed=f.mean_removed)
    xi = f.grid.wavenumbers
    phase = np.exp(-1j * xi * shift)
    phase[f.grid.nyquist_index] = np.cos(xi[f.grid.nyquist_index] * shift)
    coeff = np.fft.fft(f.samples)
    out = np.real(np.fft.ifft(phase * coeff))
    return RealField(f.grid, out, mean_removed=f.mean_removed)
