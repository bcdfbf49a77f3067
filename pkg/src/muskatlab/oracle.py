"""Slow trusted reference quadrature and resolution studies.

The oracle never touches the spectral machinery: derivatives are
sixth-order centered finite differences, shifts are exact grid rolls, and
the principal-value integral uses grid-aligned trapezoid sums with a
symmetric exclusion ball shrunk over eps in {4h, 2h, 1h} followed by
Richardson extrapolation (the symmetric exclusion kills the odd-order
error term, so the extrapolation assumes a quadratic leading error).
Agreement between this path and the fast fluxes is the package's main
cross-check; the oracle is single-threaded on purpose.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import PeriodicGrid, RealField
from .graph import GraphState, NonFiniteFlux, flux_arctan, QuadratureSpec

__all__ = ["ConvergenceReport", "pv_flux_direct", "pv_flux_ladder", "convergence_study"]

_FD6 = (
    (-3, -1.0 / 60.0),
    (-2, 3.0 / 20.0),
    (-1, -3.0 / 4.0),
    (1, 3.0 / 4.0),
    (2, -3.0 / 20.0),
    (3, 1.0 / 60.0),
)


def _fd_derivative(samples: np.ndarray, h: float) -> np.ndarray:
    out = np.zeros_like(samples)
    for offset, coeff in _FD6:
        # roll(+k) shifts samples so position i reads samples[i-k] = f(x - k*h)
        out += coeff * np.roll(samples, -offset)
    return out / h


_ROUNDOFF_FLOOR = 1e-14


@dataclass(frozen=True)
class ConvergenceReport:
    """Self-convergence of the fast flux against the finest resolution."""

    resolutions: list
    errors: list
    rate: float

    def __post_init__(self):
        errs = list(self.errors)
        for e1, e2 in zip(errs, errs[1:]):
            if e2 >= e1 and e1 > _ROUNDOFF_FLOOR:
                raise ValueError("convergence errors must decrease with resolution")


def pv_flux_ladder(state: GraphState) -> list[np.ndarray]:
    """Shift integrals G_eps for eps = 4h, 2h, 1h (before the x-derivative)."""
    f = state.f.samples
    grid = state.grid
    n, h = grid.n_points, grid.spacing
    fx = _fd_derivative(f, h)
    jmax = n // 2
    ladder = []
    for m in (4, 2, 1):
        acc = 2.0 * (m * h) * np.arctan(fx)
        for j in range(m, jmax + 1):
            w = 0.5 * h if j in (m, jmax) else h
            a = j * h
            dplus = (f - np.roll(f, j)) / a
            dminus = (np.roll(f, -j) - f) / a
            acc = acc + w * (np.arctan(dplus) + np.arctan(dminus))
        ladder.append(acc)
    return ladder


def pv_flux_direct(state: GraphState) -> RealField:
    """Reference flux by direct trapezoid quadrature and eps-extrapolation."""
    g4, g2, g1 = pv_flux_ladder(state)
    g = g1 + (g1 - g2) / 3.0  # Richardson step assuming O(eps^2) error
    out = (state.rho_bar / np.pi) * _fd_derivative(g, state.grid.spacing)
    if not np.all(np.isfinite(out)):
        raise NonFiniteFlux("pv_flux_direct produced non-finite samples")
    return RealField(state.grid, out)


def eps_sequence_ratio(state: GraphState) -> float:
    """Max-norm ratio |G4 - G2| / |G2 - G1|; near 4 for a clean O(eps^2) error."""
    g4, g2, g1 = pv_flux_ladder(state)
    num = float(np.max(np.abs(g4 - g2)))
    den = float(np.max(np.abs(g2 - g1)))
    if den == 0.0:
        return np.inf if num > 0 else 1.0
    return num / den


def _subsample(f: RealField, n_coarse: int) -> RealField:
    stride = f.grid.n_points // n_coarse
    coarse = PeriodicGrid(n_coarse, f.grid.length)
    return RealField(coarse, f.samples[::stride].copy())


def convergence_study(
    initial: RealField,
    resolutions: list[int],
    rho_bar: float = np.pi,
    quad: QuadratureSpec | None = None,
    node_matched: bool = False,
) -> ConvergenceReport:
    """Fast-flux error against the finest grid, with fitted log-log order.

    ``initial`` must live on the finest resolution and be band-limited below
    the coarsest Nyquist so subsampling is exact.  By default each resolution
    uses its own shift nodes (the production evaluation), so the fitted rate
    reflects the quadrature order.  With ``node_matched`` every resolution
    reuses the coarsest grid's nodes; a fully resolved integrand (single
    mode) then reproduces identical shift sums everywhere and the error
    isolates the per-resolution representation error alone.
    """
    res = sorted(set(int(r) for r in resolutions))
    if len(res) < 3:
        raise ValueError("need at least three resolutions to fit a rate")
    if initial.grid.n_points != res[-1]:
        raise ValueError("initial data must be sampled on the finest resolution")
    eval_quad = quad or QuadratureSpec()
    if node_matched:
        eval_quad = QuadratureSpec(
            inner_cut=eval_quad.inner_cut,
            alpha_max=eval_quad.alpha_max,
            rule=eval_quad.rule,
            cell_width=initial.grid.length / res[0],
        )
    fluxes = {}
    for n in res:
        state = GraphState(f=_subsample(initial, n), rho_bar=rho_bar)
        fluxes[n] = flux_arctan(state, eval_quad)
    finest = fluxes[res[-1]]
    errors = []
    for n in res[:-1]:
        stride = res[-1] // n
        errors.append(float(np.max(np.abs(fluxes[n].samples - finest.samples[::stride]))))
    if max(errors) <= _ROUNDOFF_FLOOR:
        return ConvergenceReport(resolutions=res[:-1], errors=errors, rate=np.inf)
    logn = np.log(np.array(res[:-1], dtype=float))
    loge = np.log(np.maximum(errors, 1e-300))
    slope = np.polyfit(logn, loge, 1)[0]
    return ConvergenceReport(resolutions=res[:-1], errors=errors, rate=float(-slope))
