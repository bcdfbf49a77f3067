"""Run configuration: parsing, validation, and initial-data construction.

Config files are TOML (or JSON); unknown keys anywhere are rejected so a
typo cannot silently fall back to a default.  ``wavenumber`` for cosine
data is the integer mode index n, giving physical wavenumber 2*pi*n/L.

The turning profile is the one-parameter family frozen after a numerical
search over odd trigonometric curves: with u = a - L/2,

    z1 = a - s*sin(u),   z2 = 1.5*sin(u) + 3*sin(2u),

where s is the steepness knob.  The minimum of d_a z1 is 1 - s at
mid-domain; for s in [0.9, 1) the horizontal-velocity criterion there is
negative (about -1.2 to -1.4) and the curve genuinely overturns, while the
parametrization speed ratio stays below the 20x halt threshold.  The
first-harmonic height term keeps the parametrization speed bounded away
from zero; the second harmonic supplies the turning asymmetry.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field, asdict

import numpy as np

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover - py310 path
    import tomli as tomllib

from .curve import InterfaceCurve
from .grid import PeriodicGrid, RealField
from .graph import QuadratureSpec, RULES, SCHEMES

__all__ = ["SimConfig", "ConfigError", "parse_config", "build_initial", "TURNING_SHAPE_COEFF"]

MODES = ("graph", "curve", "norms", "verify", "convergence")
INITIAL_KINDS = ("zero", "cosine", "slope_profile", "turning_profile", "from_csv")

# height harmonics (sin u, sin 2u) of the frozen turning family
TURNING_SHAPE_COEFF = (1.5, 3.0)


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


@dataclass
class SimConfig:
    mode: str
    n_points: int
    t_final: float = 0.0
    length: float | None = None
    rho_bar: float = math.pi
    cfl_factor: float = 0.3
    scheme: str | None = None
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)
    initial_data: dict = field(default_factory=lambda: {"kind": "zero"})
    report_interval: float | None = None
    snapshot_interval: float | None = None
    blowup_threshold: float = 1e3
    unstable: bool = False
    chord_arc_floor: float = 0.05
    critical_tol: float = 0.15
    output_dir: str | None = None
    seed: int = 0
    resolutions: list = field(default_factory=list)  # convergence mode only

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        n = self.n_points
        if n < 8 or (n & (n - 1)) != 0:
            raise ConfigError(f"n_points must be a power of two >= 8, got {n}")
        if self.length is None:
            self.length = 2.0 * math.pi if self.mode == "curve" else 64.0 * math.pi
        if self.length <= 0:
            raise ConfigError("length must be positive")
        if self.rho_bar <= 0 and not self.unstable:
            raise ConfigError("rho_bar <= 0 requires unstable = true")
        if self.scheme is None:
            self.scheme = "rk4_explicit" if self.mode == "curve" else "rk4_integrating_factor"
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.mode in ("graph", "curve"):
            if self.t_final <= 0:
                raise ConfigError("t_final must be positive")
            if self.report_interval is None:
                self.report_interval = self.t_final / 100.0
            if self.snapshot_interval is None:
                self.snapshot_interval = self.report_interval
            if self.report_interval <= 0 or self.snapshot_interval <= 0:
                raise ConfigError("report and snapshot intervals must be positive")
        kind = self.initial_data.get("kind")
        if kind not in INITIAL_KINDS:
            raise ConfigError(f"initial_data.kind must be one of {INITIAL_KINDS}, got {kind!r}")
        if not (0 < self.cfl_factor <= 1):
            raise ConfigError("cfl_factor must lie in (0, 1]")

    @property
    def grid(self) -> PeriodicGrid:
        return PeriodicGrid(self.n_points, self.length)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["quad"] = {
            "inner_cut": self.quad.inner_cut,
            "alpha_max": self.quad.alpha_max,
            "rule": self.quad.rule,
        }
        return d


_TOP_KEYS = {
    "mode", "n_points", "t_final", "length", "rho_bar", "cfl_factor", "scheme",
    "quad", "initial_data", "report_interval", "snapshot_interval",
    "blowup_threshold", "unstable", "chord_arc_floor", "critical_tol",
    "output_dir", "seed", "resolutions",
}
_QUAD_KEYS = {"inner_cut", "alpha_max", "rule"}
_INITIAL_KEYS = {
    "zero": {"kind"},
    "cosine": {"kind", "amplitude", "wavenumber"},
    "slope_profile": {"kind", "slope"},
    "turning_profile": {"kind", "steepness"},
    "from_csv": {"kind", "path"},
}


def _reject_unknown(mapping: dict, allowed: set, where: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")


def config_from_dict(raw: dict) -> SimConfig:
    _reject_unknown(raw, _TOP_KEYS, "config")
    raw = dict(raw)
    quad_raw = raw.pop("quad", {})
    if not isinstance(quad_raw, dict):
        raise ConfigError("quad must be a table")
    _reject_unknown(quad_raw, _QUAD_KEYS, "quad")
    init_raw = raw.pop("initial_data", {"kind": "zero"})
    if not isinstance(init_raw, dict) or "kind" not in init_raw:
        raise ConfigError("initial_data must be a table with a 'kind' key")
    kind = init_raw["kind"]
    if kind not in _INITIAL_KEYS:
        raise ConfigError(f"initial_data.kind must be one of {INITIAL_KINDS}, got {kind!r}")
    _reject_unknown(init_raw, _INITIAL_KEYS[kind], f"initial_data ({kind})")
    try:
        quad = QuadratureSpec(**quad_raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid quadrature settings: {exc}") from exc
    try:
        return SimConfig(quad=quad, initial_data=dict(init_raw), **raw)
    except TypeError as exc:
        raise ConfigError(f"invalid config: {exc}") from exc


def parse_config(path: str) -> SimConfig:
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    if path.endswith(".json"):
        with open(path) as fh:
            raw = json.load(fh)
    else:
        with open(path, "rb") as fh:
            try:
                raw = tomllib.load(fh)
            except tomllib.TOMLDecodeError as exc:
                raise ConfigError(f"malformed TOML in {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a table")
    return config_from_dict(raw)


def slope_profile_field(grid: PeriodicGrid, slope: float) -> RealField:
    """Localized wave packet rescaled so its maximum slope is exactly ``slope``.

    The envelope width L/10 keeps the Gaussian seam mismatch at exp(-25), so
    the profile is band-limited to ~1e-11 and decays well inside the domain.
    """
    x = grid.nodes
    center = grid.length / 2.0
    width = grid.length / 10.0
    k0 = 16.0 * math.pi / grid.length
    raw = np.sin(k0 * (x - center)) * np.exp(-(((x - center) / width) ** 2))
    xi = grid.wavenumbers
    deriv = np.real(np.fft.ifft(1j * xi * np.fft.fft(raw)))
    peak = float(np.max(np.abs(deriv)))
    samples = (slope / peak) * raw
    samples -= np.mean(samples)
    return RealField(grid, samples, mean_removed=True)


def turning_curve(grid: PeriodicGrid, steepness: float, rho_bar: float = math.pi) -> InterfaceCurve:
    """Frozen turning family; see module docstring."""
    a = grid.nodes
    u = a - grid.length / 2.0
    b1, b2 = TURNING_SHAPE_COEFF
    z1 = a - steepness * np.sin(u)
    z2 = b1 * np.sin(u) + b2 * np.sin(2.0 * u)
    return InterfaceCurve(grid, z1, z2, rho_bar=rho_bar)


def _field_from_csv(path: str) -> RealField:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    x, f = data[:, 0], data[:, 1]
    n = len(x)
    h = x[1] - x[0]
    if not np.allclose(np.diff(x), h, rtol=1e-9, atol=1e-12):
        raise ConfigError(f"{path}: x column is not uniformly spaced")
    grid = PeriodicGrid(n, float(n * h))
    return RealField(grid, f)


def _curve_from_csv(path: str, rho_bar: float) -> InterfaceCurve:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] < 3:
        raise ConfigError(f"{path}: curve CSV needs alpha,z1,z2 columns")
    alpha, z1, z2 = data[:, 0], data[:, 1], data[:, 2]
    n = len(alpha)
    h = alpha[1] - alpha[0]
    grid = PeriodicGrid(n, float(n * h))
    return InterfaceCurve(grid, z1, z2, rho_bar=rho_bar)


def build_initial(config: SimConfig):
    """Construct the initial RealField (graph mode) or InterfaceCurve (curve mode)."""
    kind = config.initial_data["kind"]
    grid = config.grid
    if config.mode == "curve":
        if kind == "zero":
            return InterfaceCurve(grid, grid.nodes.copy(), np.zeros(grid.n_points),
                                  rho_bar=config.rho_bar)
        if kind == "turning_profile":
            return turning_curve(grid, float(config.initial_data["steepness"]), config.rho_bar)
        if kind == "from_csv":
            return _curve_from_csv(config.initial_data["path"], config.rho_bar)
        raise ConfigError(f"initial_data.kind {kind!r} is not valid for curve mode")
    if kind == "zero":
        return RealField(grid, np.zeros(grid.n_points), mean_removed=True)
    if kind == "cosine":
        amp = float(config.initial_data["amplitude"])
        mode = int(config.initial_data["wavenumber"])
        xi = 2.0 * math.pi * mode / grid.length
        return RealField(grid, amp * np.cos(xi * grid.nodes))
    if kind == "slope_profile":
        return slope_profile_field(grid, float(config.initial_data["slope"]))
    if kind == "from_csv":
        f = _field_from_csv(config.initial_data["path"])
        if f.grid.n_points != config.n_points:
            raise ConfigError("from_csv field resolution does not match n_points")
        return f
    raise ConfigError(f"initial_data.kind {kind!r} is not valid for graph mode")
