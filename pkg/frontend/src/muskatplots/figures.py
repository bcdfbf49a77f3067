"""The five figure kinds rendered from run-log directories.

All figures are batch artifacts: fixed style, no timestamps, deterministic
output for identical inputs.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .logdir import LogDir, SchemaError

__all__ = ["FigureSpec", "render", "FIGURE_KINDS"]

FIGURE_KINDS = ("norm_decay", "snapshots", "turning", "h12_compare", "convergence")

_STYLE = {
    "figure.figsize": (7.0, 4.5),
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 10,
    "svg.hashsalt": "muskatplots",
}

_NORM_KEYS = ("l_inf", "lipschitz", "wiener1", "hs_half", "hs_one", "hs_three_half")


@dataclass
class FigureSpec:
    kind: str
    log_dirs: list
    output: str
    log_scale: bool = False

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"kind must be one of {FIGURE_KINDS}, got {self.kind!r}")
        if not self.log_dirs:
            raise ValueError("log_dirs must be nonempty")
        for d in self.log_dirs:
            if not os.path.isdir(d):
                raise SchemaError(f"log directory does not exist: {d}")


def _save(fig, output: str) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(output)), exist_ok=True)
    fig.savefig(output, metadata={"Software": "muskatplots"})
    plt.close(fig)


def _norm_decay(spec: FigureSpec):
    fig, ax = plt.subplots()
    for path in spec.log_dirs:
        log = LogDir.load(path)
        t = log.norms["time"]
        for key in _NORM_KEYS:
            ax.plot(t, log.norms[key], label=f"{log.label}:{key}", linewidth=1.0)
        rate = log.linear_overlay()
        if rate is not None and log.norms["hs_one"][0] > 0:
            overlay = log.norms["hs_one"][0] * np.exp(-rate * t)
            ax.plot(t, overlay, "k--", linewidth=1.4,
                    label=f"exp(-{rate:.3g} t) reference")
    if spec.log_scale:
        ax.set_yscale("log")
    ax.set_xlabel("time")
    ax.set_ylabel("seminorm")
    ax.legend(fontsize=7, ncol=2)
    ax.set_title("norm decay")
    return fig


def _snapshots(spec: FigureSpec):
    fig, ax = plt.subplots()
    for path in spec.log_dirs:
        log = LogDir.load(path)
        if not log.snapshots:
            raise SchemaError(f"{path}: no snapshots to draw")
        cmap = plt.get_cmap("viridis")
        t_max = max(t for t, _ in log.snapshots) or 1.0
        for t, cols in log.snapshots:
            color = cmap(0.9 * t / t_max)
            if "f" in cols:
                ax.plot(cols["x"], cols["f"], color=color, linewidth=0.9)
            elif "z1" in cols and "z2" in cols:
                ax.plot(cols["z1"], cols["z2"], color=color, linewidth=0.9)
            else:
                raise SchemaError(f"{path}: snapshot lacks x,f or z1,z2 columns")
    ax.set_xlabel("x")
    ax.set_ylabel("interface height")
    ax.set_title("interface snapshots (light = late)")
    return fig


def _turning(spec: FigureSpec):
    fig, ax = plt.subplots()
    for path in spec.log_dirs:
        log = LogDir.load(path)
        if "turning_indicator" not in log.norms:
            raise SchemaError(f"{path}: log has no turning_indicator column")
        t = log.norms["time"]
        ax.plot(t, log.norms["turning_indicator"], label=log.label, linewidth=1.2)
        crossing = log.status.get("turning_time")
        if crossing is not None:
            ax.axvline(crossing, color="crimson", linestyle=":",
                       label=f"turning at t={crossing:.4g}")
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("time")
    ax.set_ylabel("min d_a z1")
    ax.legend(fontsize=8)
    ax.set_title("turning indicator")
    return fig


def _h12_trajectories(log: LogDir):
    """LHS/RHS of the critical-space energy inequality per report time."""
    t = log.norms["time"]
    hs_half = log.norms["hs_half"]
    hs_one = log.norms["hs_one"]
    hs_3half = log.norms["hs_three_half"]
    lip = log.norms["lipschitz"]
    lhs, rhs = [], []
    for i in range(1, len(t)):
        k = np.max(lip[: i + 1])
        integral = np.trapezoid(hs_one[: i + 1] ** 2, t[: i + 1])
        lhs.append(hs_half[i] ** 2 + np.pi / (1.0 + k**2) * integral)
        x = np.max(hs_3half[: i + 1])
        rhs.append(hs_half[0] ** 2 + (x + x**2) * integral)
    return t[1:], np.array(lhs), np.array(rhs)


def _h12_compare(spec: FigureSpec):
    fig, ax = plt.subplots()
    for path in spec.log_dirs:
        log = LogDir.load(path)
        t, lhs, rhs = _h12_trajectories(log)
        if len(t) == 0:
            raise SchemaError(f"{path}: not enough reports for the energy comparison")
        ax.plot(t, lhs, label=f"{log.label}: left side", linewidth=1.3)
        ax.plot(t, rhs, "--", label=f"{log.label}: right side", linewidth=1.3)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(rhs > 0, lhs / rhs, np.nan)
        finite = ratio[np.isfinite(ratio)]
        if len(finite):
            ax.annotate(f"max implied constant {np.max(finite):.3f}",
                        xy=(0.02, 0.95), xycoords="axes fraction", fontsize=8)
    if spec.log_scale:
        ax.set_yscale("log")
    ax.set_xlabel("horizon T")
    ax.set_ylabel("energy terms")
    ax.legend(fontsize=8)
    ax.set_title("critical-space energy inequality")
    return fig


def _convergence(spec: FigureSpec):
    fig, ax = plt.subplots()
    for path in spec.log_dirs:
        study = os.path.join(path, "convergence.json")
        try:
            with open(study) as fh:
                payload = json.load(fh)
            res = np.asarray(payload["resolutions"], dtype=float)
            errs = np.asarray(payload["errors"], dtype=float)
            rate = float(payload["rate"])
        except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
            raise SchemaError(f"{study}: {exc}") from exc
        label = os.path.basename(os.path.normpath(path))
        ax.loglog(res, errs, "o-", label=f"{label} (order {rate:.2f})")
        ref = errs[0] * (res / res[0]) ** (-2.0)
        ax.loglog(res, ref, "k:", linewidth=0.9, label="second-order reference")
    ax.set_xlabel("resolution N")
    ax.set_ylabel("max error vs finest")
    ax.legend(fontsize=8)
    ax.set_title("flux resolution study")
    return fig


_RENDERERS = {
    "norm_decay": _norm_decay,
    "snapshots": _snapshots,
    "turning": _turning,
    "h12_compare": _h12_compare,
    "convergence": _convergence,
}


def render(spec: FigureSpec) -> str:
    """Render the figure described by ``spec``; returns the output path."""
    with plt.rc_context(_STYLE):
        fig = _RENDERERS[spec.kind](spec)
        _save(fig, spec.output)
    return spec.output
