"""Seminorms: Lebesgue, homogeneous Sobolev, Wiener, and difference-quotient Besov.

The Besov seminorm is defined through first differences for 0 < s < 1 and
symmetrized second differences for 1 <= s < 2, q-integrated over a
logarithmic ladder of shifts y in [spacing, L/2] against the measure dy/|y|.
The raw difference-quotient value is divided by the exact L2-equivalence
constant (computed once per s by adaptive quadrature), so that B^s_{2,2}
coincides with the multiplier-side H^s seminorm up to discretization error.
Without that normalization the two differ by sqrt(2*pi) at s = 1/2 and the
equivalence-band checks would be meaningless.

Inequality evaluators (interpolation, commutator) return dimensionless
ratios; pass/fail thresholds live with the recorded corpus constants in the
test suite, because the underlying constants are not explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .grid import RealField, apply_lambda_s, derivative, hilbert, translate, zero_mean_samples

__all__ = [
    "BesovIndex",
    "NormReport",
    "norm_lp",
    "norm_homog_sobolev",
    "norm_wiener",
    "besov_seminorm",
    "check_interpolation",
    "commutator_ratio",
    "report_from_field",
    "REPORT_KEYS",
]


def norm_lp(f: RealField, p: float) -> float:
    """Discrete L^p norm; p = inf gives max|samples|, finite p the Riemann sum."""
    if p < 1:
        raise ValueError(f"norm_lp requires p >= 1, got {p}")
    a = np.abs(f.samples)
    if np.isinf(p):
        return float(np.max(a)) if a.size else 0.0
    h = f.grid.spacing
    return float((h * np.sum(a**p)) ** (1.0 / p))


def norm_homog_sobolev(f: RealField, s: float) -> float:
    """Homogeneous Sobolev seminorm,: L2 norm of the |xi|^s multiplier output."""
    if s < 0:
        raise ValueError(f"norm_homog_sobolev requires s >= 0, got {s}")
    return norm_lp(apply_lambda_s(f, s), 2.0)


def norm_wiener(f: RealField, alpha: float) -> float:
    """Weighted absolute coefficient sum sum_{k!=0} |xi_k|^alpha |c_k|."""
    if alpha < 0:
        raise ValueError(f"norm_wiener requires alpha >= 0, got {alpha}")
    coeff = np.fft.fft(f.samples) / f.grid.n_points
    xi = np.abs(f.grid.wavenumbers)
    weights = np.where(xi > 0, xi**alpha, 0.0)
    return float(np.sum(weights * np.abs(coeff)))


@dataclass(frozen=True)
class BesovIndex:
    """Smoothness/integrability indices for the difference-quotient seminorm."""

    s: float
    p: float
    q: float

    def __post_init__(self):
        if not (0.0 < self.s < 2.0):
            raise ValueError(f"Besov s must lie in (0, 2), got {self.s}")
        if self.p < 1 or self.q < 1:
            raise ValueError("Besov p and q must lie in [1, inf]")


@lru_cache(maxsize=None)
def _besov_l2_constant(s: float) -> float:
    """Exact constant C(s) with int_R ||D_y f||_{L2}^2 |y|^{-1-2s} dy = C(s)||f||_{H^s}^2.

    First differences (s < 1): C = 4*int_0^inf (1-cos u) u^{-1-2s} du.
    Second symmetrized differences (s >= 1): C = 4*int_0^inf (3-4cos u+cos 2u) u^{-1-2s} du.
    Oscillatory tails are integrated with QAWF weights; known values
    C(1/2) = 2*pi, C(1) = 8*ln 2, C(3/2) = 4*pi/3 are recovered to 1e-12.
    """

    def cos_tail(w: float) -> float:
        val, _ = quad(lambda u: u ** (-1.0 - 2.0 * s), 1.0, np.inf, weight="cos", wvar=w)
        return val

    if s < 1.0:
        # 1 - cos u written as 2 sin^2(u/2) to avoid cancellation near u = 0
        head, _ = quad(lambda u: 2.0 * np.sin(u / 2.0) ** 2 * u ** (-1.0 - 2.0 * s), 0.0, 1.0)
        tail = 1.0 / (2.0 * s) - cos_tail(1.0)
        return 4.0 * (head + tail)
    # 3 - 4 cos u + cos 2u = 8 sin^4(u/2), stable near u = 0
    head, _ = quad(lambda u: 8.0 * np.sin(u / 2.0) ** 4 * u ** (-1.0 - 2.0 * s), 0.0, 1.0)
    tail = 3.0 / (2.0 * s) - 4.0 * cos_tail(1.0) + cos_tail(2.0)
    return 4.0 * (head + tail)


def _difference_field(f: RealField, y: float, second: bool) -> np.ndarray:
    back = translate(f, y).samples  # f(x - y)
    if not second:
        return f.samples - back
    fwd = translate(f, -y).samples  # f(x + y)
    return 2.0 * f.samples - back - fwd


def besov_seminorm(f: RealField, idx: BesovIndex, shift_count: int = 48) -> float:
    """Difference-quotient Besov seminorm on a logarithmic shift ladder.

    Shifts run from one grid spacing to L/2; the dy/|y| measure is uniform in
    log y, so the q-integral uses trapezoid weights in log y (factor 2 for the
    two signs of y).  Non-grid shifts are evaluated spectrally.  Below the
    first rung the difference is its leading Taylor term (y f' or y^2 f''),
    whose contribution to the q-integral is added in closed form; dropping it
    biases the seminorm low by O(spacing) on slope-heavy fields.
    """
    if shift_count < 2:
        raise ValueError("shift_count must be at least 2")
    s, p, q = idx.s, idx.p, idx.q
    second = s >= 1.0
    grid = f.grid
    ys = np.geomspace(grid.spacing, grid.length / 2.0, shift_count)
    g = np.empty(shift_count)
    for i, y in enumerate(ys):
        diff = RealField(grid, _difference_field(f, y, second))
        g[i] = norm_lp(diff, p) / y**s
    scale = math.sqrt(_besov_l2_constant(s))
    if np.isinf(q):
        return float(np.max(g)) / scale
    logy = np.log(ys)
    integral = 2.0 * np.trapezoid(g**q, logy)
    # analytic y < spacing completion from the Taylor limit of the difference
    gap = (1.0 - s) if not second else (2.0 - s)
    lead = norm_lp(derivative(f, 1 if not second else 2), p)
    integral += 2.0 * lead**q * ys[0] ** (gap * q) / (gap * q)
    return float(integral ** (1.0 / q)) / scale


def check_interpolation(
    f: RealField,
    s1: float,
    s2: float,
    theta: float,
    p: float,
    r: float,
    shift_count: int = 48,
) -> float:
    """Ratio tested against the Besov interpolation inequality.

    Returns ||f||_{B^{th*s1+(1-th)*s2}_{p,1}} / (||f||_{B^{s1}_{p,r}}^th *
    ||f||_{B^{s2}_{p,r}}^{1-th}).  The s = 0 endpoint is identified with L^p
    (the difference-quotient definition does not extend to s = 0).
    """
    if not (s1 < s2):
        raise ValueError("interpolation requires s1 < s2")
    if not (0.0 < theta < 1.0):
        raise ValueError("theta must lie in (0, 1)")

    def endpoint(s: float) -> float:
        if s == 0.0:
            return norm_lp(f, p)
        return besov_seminorm(f, BesovIndex(s, p, r), shift_count)

    s_mid = theta * s1 + (1.0 - theta) * s2
    num = besov_seminorm(f, BesovIndex(s_mid, p, 1.0), shift_count)
    den = endpoint(s1) ** theta * endpoint(s2) ** (1.0 - theta)
    if den == 0.0:
        return 0.0
    return num / den


def commutator_ratio(phi: RealField, f: RealField, k: int, l: int, p: float) -> float:
    """Size of [H, phi] d^k f in W^{l,p} relative to ||phi||_{W^{k+l,inf}} ||f||_{L^p}.

    Returns 0 when the commutator vanishes identically (constant phi).
    """
    if p <= 1 or np.isinf(p):
        raise ValueError("commutator_ratio requires p in (1, inf)")
    if k < 0 or l < 0 or k + l > 2:
        raise ValueError("commutator_ratio requires k, l >= 0 with k + l <= 2")
    g = derivative(f, k) if k > 0 else f
    comm = RealField(
        phi.grid,
        hilbert(phi.with_samples(phi.samples * g.samples)).samples
        - phi.samples * hilbert(g).samples,
    )
    num_field = derivative(comm, l) if l > 0 else comm
    num = norm_lp(num_field, p)
    phi_part = derivative(phi, k + l) if k + l > 0 else phi
    den = norm_lp(phi_part, np.inf) * norm_lp(f, p)
    if den == 0.0:
        return 0.0
    return num / den


REPORT_KEYS = (
    "time",
    "l_inf",
    "l2",
    "lipschitz",
    "wiener1",
    "hs_half",
    "hs_one",
    "hs_three_half",
    "blowup_proxy",
)


@dataclass(frozen=True)
class NormReport:
    """All monitored seminorms of one field at one instant."""

    time: float
    l_inf: float
    l2: float
    lipschitz: float
    wiener1: float
    hs_half: float
    hs_one: float
    hs_three_half: float
    blowup_proxy: float

    def __post_init__(self):
        vals = self.as_tuple()
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("NormReport entries must be finite")
        if any(v < 0 for v in vals[1:]):
            raise ValueError("NormReport seminorms must be nonnegative")
        # log-convexity of H^s in s (Cauchy-Schwarz on the multiplier side)
        if self.hs_half > math.sqrt(self.hs_one * self.l2) + 1e-9:
            raise ValueError("NormReport violates H^{1/2} log-convexity")

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, k) for k in REPORT_KEYS)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in REPORT_KEYS}


def _hoelder_tail(f: RealField, exponent: float = 2.5) -> float:
    """sup_k |xi_k|^e |c_k|: spectral-decay stand-in for C^{2+1/2} growth."""
    coeff = np.abs(np.fft.fft(f.samples)) / f.grid.n_points
    xi = np.abs(f.grid.wavenumbers)
    weighted = np.where(xi > 0, xi**exponent * coeff, 0.0)
    return float(np.max(weighted))


def report_from_field(f: RealField, time: float) -> NormReport:
    """Evaluate every monitored seminorm of one interface snapshot."""
    g = f if f.mean_removed else RealField(f.grid, zero_mean_samples(f.samples), True)
    fx = derivative(g, 1)
    fxx = derivative(g, 2)
    return NormReport(
        time=time,
        l_inf=norm_lp(f, np.inf),
        l2=norm_lp(g, 2.0),
        lipschitz=norm_lp(fx, np.inf),
        wiener1=norm_wiener(g, 1.0),
        hs_half=norm_homog_sobolev(g, 0.5),
        hs_one=norm_homog_sobolev(g, 1.0),
        hs_three_half=norm_homog_sobolev(g, 1.5),
        blowup_proxy=norm_lp(fxx, np.inf) + _hoelder_tail(g),
    )
