"""Read-only access to run-log directories.

The on-disk contract (owned by the simulator, consumed here):

    config.json            resolved run configuration
    norms.csv              header time,l_inf,l2,lipschitz,wiener1,hs_half,
                           hs_one,hs_three_half,blowup_proxy
                           (+ turning_indicator on curve runs)
    snapshots/t_<time>.csv columns x,f (graph) or alpha,z1,z2 (curve)
    status.json            status, turning_time, halted_at

Nothing here mutates a log directory.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

__all__ = ["LogDir", "SchemaError", "NORM_COLUMNS"]

NORM_COLUMNS = (
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


class SchemaError(ValueError):
    """Run-log directory does not match the persistence contract."""


@dataclass
class LogDir:
    path: str
    config: dict = field(repr=False, default_factory=dict)
    status: dict = field(repr=False, default_factory=dict)
    norms: dict = field(repr=False, default_factory=dict)
    snapshots: list = field(repr=False, default_factory=list)  # (time, {col: array})

    @classmethod
    def load(cls, path: str) -> "LogDir":
        if not os.path.isdir(path):
            raise SchemaError(f"not a run-log directory: {path}")
        try:
            with open(os.path.join(path, "config.json")) as fh:
                config = json.load(fh)
            with open(os.path.join(path, "status.json")) as fh:
                status = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise SchemaError(f"{path}: {exc}") from exc

        norms_path = os.path.join(path, "norms.csv")
        try:
            with open(norms_path) as fh:
                header = fh.readline().strip().split(",")
                data = np.loadtxt(fh, delimiter=",", ndmin=2)
        except (OSError, ValueError) as exc:
            raise SchemaError(f"{norms_path}: {exc}") from exc
        if tuple(header[: len(NORM_COLUMNS)]) != NORM_COLUMNS:
            raise SchemaError(f"{norms_path}: unexpected header {header!r}")
        if data.size == 0:
            raise SchemaError(f"{norms_path}: no rows")
        norms = {name: data[:, i].copy() for i, name in enumerate(header)}

        snapshots = []
        snap_dir = os.path.join(path, "snapshots")
        if os.path.isdir(snap_dir):
            for name in sorted(os.listdir(snap_dir)):
                if not (name.startswith("t_") and name.endswith(".csv")):
                    continue
                try:
                    with open(os.path.join(snap_dir, name)) as fh:
                        cols = fh.readline().strip().split(",")
                        body = np.loadtxt(fh, delimiter=",", ndmin=2)
                    t = float(name[2:-4])
                except ValueError as exc:
                    raise SchemaError(f"{snap_dir}/{name}: {exc}") from exc
                snapshots.append((t, {c: body[:, i].copy() for i, c in enumerate(cols)}))
        snapshots.sort(key=lambda item: item[0])
        return cls(path=path, config=config, status=status, norms=norms, snapshots=snapshots)

    @property
    def is_curve(self) -> bool:
        return self.status.get("mode", self.config.get("mode")) == "curve"

    @property
    def label(self) -> str:
        return os.path.basename(os.path.normpath(self.path))

    def linear_overlay(self):
        """(rate, initial amplitude) for single-mode runs, else None."""
        init = self.config.get("initial_data", {})
        if init.get("kind") != "cosine":
            return None
        rho = float(self.config.get("rho_bar", np.pi))
        length = float(self.config.get("length", 2.0 * np.pi))
        xi = 2.0 * np.pi * float(init.get("wavenumber", 1)) / length
        return rho * xi
