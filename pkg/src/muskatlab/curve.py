"""General parametrized interface evolution and turning detection.

Curves are stored as (z1, z2) samples over a parameter torus, with
z1(a) - a periodic, so a curve is a periodic perturbation of the flat
parametrization.  The velocity integral couples the scalar kernel
(z1(a) - z1(b)) / |z(a) - z(b)|^2 to the tangent difference and is
evaluated with the same midpoint principal-value layout as the graph
fluxes; the diagonal b = a is replaced by the Taylor limit
z1'(a) * z''(a) / |z'(a)|^2 computed from spectral derivatives.

Turning is monitored through min_a d_a z1: the curve ceases to be a graph
exactly when that minimum reaches zero, and the sign of d_a v1 at the
near-vertical point predicts whether the minimum keeps falling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import PeriodicGrid, RealField, derivative
from .graph import QuadratureSpec, quad_nodes, shift_matrix, NonFiniteFlux

__all__ = [
    "InterfaceCurve",
    "ChordArcViolation",
    "NoCriticalPoint",
    "curve_velocity",
    "turning_indicator",
    "dalpha_v1_at_critical",
    "chord_arc_minimum",
    "parametrization_quality",
]


class ChordArcViolation(ArithmeticError):
    """Chord-arc minimum fell below the configured floor."""


class NoCriticalPoint(ValueError):
    """No near-vertical tangent to evaluate the turning criterion at."""


@dataclass(frozen=True)
class InterfaceCurve:
    """Sampled interface (z1(a), z2(a)) over a parameter grid."""

    grid: PeriodicGrid
    z1: np.ndarray
    z2: np.ndarray
    time: float = 0.0
    rho_bar: float = np.pi

    def __post_init__(self):
        z1 = np.asarray(self.z1, dtype=float)
        z2 = np.asarray(self.z2, dtype=float)
        n = self.grid.n_points
        if z1.shape != (n,) or z2.shape != (n,):
            raise ValueError("curve sample arrays must match the parameter grid")
        object.__setattr__(self, "z1", z1)
        object.__setattr__(self, "z2", z2)

    @property
    def perturbation(self) -> np.ndarray:
        """Periodic part p(a) = z1(a) - a."""
        return self.z1 - self.grid.nodes


def chord_arc_minimum(curve: InterfaceCurve) -> float:
    """min over distinct grid pairs of |z(a) - z(b)| / dist_torus(a, b)."""
    a = curve.grid.nodes
    L = curve.grid.length
    d1 = curve.z1[:, None] - curve.z1[None, :]
    d2 = curve.z2[:, None] - curve.z2[None, :]
    da = np.abs(a[:, None] - a[None, :])
    da = np.minimum(da, L - da)
    np.fill_diagonal(da, 1.0)
    ratio = np.sqrt(d1**2 + d2**2) / da
    np.fill_diagonal(ratio, np.inf)
    return float(np.min(ratio))


def parametrization_quality(curve: InterfaceCurve) -> float:
    """max |z'(a)| / min |z'(a)| over the grid."""
    p = RealField(curve.grid, curve.perturbation)
    z2f = RealField(curve.grid, curve.z2)
    t1 = 1.0 + derivative(p, 1).samples
    t2 = derivative(z2f, 1).samples
    speed = np.hypot(t1, t2)
    lo = float(np.min(speed))
    if lo <= 0.0:
        return np.inf
    return float(np.max(speed)) / lo


def curve_velocity(
    curve: InterfaceCurve,
    quad: QuadratureSpec | None = None,
    chord_arc_floor: float = 0.05,
) -> tuple[RealField, RealField]:
    """Both velocity components of the interface ODE.

    Raises :class:`ChordArcViolation` when the chord-arc minimum drops below
    ``chord_arc_floor`` (imminent self-intersection at grid resolution).
    """
    quad = quad or QuadratureSpec()
    if chord_arc_minimum(curve) < chord_arc_floor:
        raise ChordArcViolation("chord-arc minimum below floor")
    grid = curve.grid
    nodes, weights, cut = quad_nodes(grid, quad)
    p_field = RealField(grid, curve.perturbation)
    z2_field = RealField(grid, curve.z2)
    p = p_field.samples
    z2 = curve.z2
    t1_field = RealField(grid, 1.0 + derivative(p_field, 1).samples)
    t2_field = RealField(grid, derivative(z2_field, 1).samples)
    t1 = t1_field.samples
    t2 = t2_field.samples
    z1pp = derivative(p_field, 2).samples
    z2pp = derivative(z2_field, 2).samples

    speed_sq = t1**2 + t2**2
    core1 = 2.0 * cut * t1 * z1pp / speed_sq
    core2 = 2.0 * cut * t1 * z2pp / speed_sq

    acc1 = np.zeros(grid.n_points)
    acc2 = np.zeros(grid.n_points)
    for sign in (1.0, -1.0):
        shifts = sign * nodes
        p_s = shift_matrix(p_field, shifts)
        z2_s = shift_matrix(z2_field, shifts)
        t1_s = shift_matrix(t1_field, shifts)
        t2_s = shift_matrix(t2_field, shifts)
        n1 = p[None, :] - p_s + shifts[:, None]
        n2 = z2[None, :] - z2_s
        dist_sq = n1**2 + n2**2
        kernel = n1 / dist_sq
        acc1 = acc1 + np.sum(weights[:, None] * kernel * (t1[None, :] - t1_s), axis=0)
        acc2 = acc2 + np.sum(weights[:, None] * kernel * (t2[None, :] - t2_s), axis=0)

    scale = curve.rho_bar / np.pi
    v1 = scale * (core1 + acc1)
    v2 = scale * (core2 + acc2)
    if not (np.all(np.isfinite(v1)) and np.all(np.isfinite(v2))):
        raise NonFiniteFlux("curve velocity produced non-finite samples")
    return RealField(grid, v1), RealField(grid, v2)


def turning_indicator(curve: InterfaceCurve) -> float:
    """min_a d_a z1; nonpositive means the curve is not a graph."""
    p = RealField(curve.grid, curve.perturbation)
    return float(np.min(1.0 + derivative(p, 1).samples))


def dalpha_v1_at_critical(
    curve: InterfaceCurve,
    quad: QuadratureSpec | None = None,
    critical_tol: float = 0.15,
) -> float:
    """d_a v1 at the near-vertical tangent point; negative predicts breaking."""
    p = RealField(curve.grid, curve.perturbation)
    slope = 1.0 + derivative(p, 1).samples
    if float(np.min(slope)) > critical_tol:
        raise NoCriticalPoint(
            f"min d_a z1 = {np.min(slope):.4f} exceeds critical_tol = {critical_tol}"
        )
    idx = int(np.argmin(slope))
    v1, _ = curve_velocity(curve, quad)
    dv1 = derivative(v1, 1).samples
    return float(dv1[idx])
