"""Run records and their on-disk layout.

A RunLog directory is self-describing and consumed by the verify command
and the plotting frontend:

    config.json            verbatim echo of the resolved configuration
    norms.csv              one NormReport per row, fixed header names
                           (curve runs append a turning_indicator column)
    snapshots/t_<time>.csv field snapshots, columns x,f or alpha,z1,z2
    status.json            final status, halt time, turning_time if any

All numbers are written with 17 significant digits so doubles round-trip
exactly and reruns with identical config are bitwise identical.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .norms import NormReport, REPORT_KEYS

__all__ = ["RunLog", "Snapshot", "save_runlog", "load_runlog", "FMT"]

FMT = "%.17g"

STATUS_COMPLETED = "Completed"
STATUS_BLOWUP = "BlowupSuspected"
STATUS_SELF_INTERSECTION = "SelfIntersectionSuspected"
STATUS_DEGRADED = "ParametrizationDegraded"
STATUS_FAILED = "NumericalFailure"


@dataclass
class Snapshot:
    time: float
    columns: dict  # name -> ndarray, insertion order is the CSV order


@dataclass
class RunLog:
    """Time series of norm reports plus periodic field snapshots."""

    mode: str
    config: dict
    reports: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    turning: list = field(default_factory=list)  # parallel to reports, curve runs
    status: str = STATUS_COMPLETED
    turning_time: float | None = None
    halted_at: float | None = None

    @property
    def times(self) -> np.ndarray:
        return np.array([r.time for r in self.reports])

    def column(self, key: str) -> np.ndarray:
        if key == "turning_indicator":
            return np.array(self.turning)
        return np.array([getattr(r, key) for r in self.reports])


def _fmt(v: float) -> str:
    return FMT % v


def save_runlog(log: RunLog, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    snap_dir = os.path.join(out_dir, "snapshots")
    os.makedirs(snap_dir, exist_ok=True)

    with open(os.path.join(out_dir, "config.json"), "w") as fh:
        json.dump(log.config, fh, indent=2, sort_keys=True)
        fh.write("\n")

    header = list(REPORT_KEYS)
    has_turning = log.mode == "curve" and len(log.turning) == len(log.reports)
    if has_turning:
        header.append("turning_indicator")
    with open(os.path.join(out_dir, "norms.csv"), "w") as fh:
        fh.write(",".join(header) + "\n")
        for i, rep in enumerate(log.reports):
            row = [_fmt(getattr(rep, k)) for k in REPORT_KEYS]
            if has_turning:
                row.append(_fmt(log.turning[i]))
            fh.write(",".join(row) + "\n")

    for snap in log.snapshots:
        path = os.path.join(snap_dir, f"t_{FMT % snap.time}.csv")
        names = list(snap.columns)
        arrays = [np.asarray(snap.columns[n]) for n in names]
        with open(path, "w") as fh:
            fh.write(",".join(names) + "\n")
            for row in zip(*arrays):
                fh.write(",".join(_fmt(v) for v in row) + "\n")

    status = {
        "status": log.status,
        "mode": log.mode,
        "turning_time": log.turning_time,
        "halted_at": log.halted_at,
    }
    with open(os.path.join(out_dir, "status.json"), "w") as fh:
        json.dump(status, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_runlog(run_dir: str) -> RunLog:
    with open(os.path.join(run_dir, "config.json")) as fh:
        config = json.load(fh)
    with open(os.path.join(run_dir, "status.json")) as fh:
        status = json.load(fh)

    reports = []
    turning = []
    with open(os.path.join(run_dir, "norms.csv")) as fh:
        header = fh.readline().strip().split(",")
        base = list(REPORT_KEYS)
        if header[: len(base)] != base:
            raise ValueError(f"unexpected norms.csv header in {run_dir}")
        has_turning = "turning_indicator" in header
        for line in fh:
            vals = [float(v) for v in line.strip().split(",")]
            reports.append(NormReport(*vals[: len(base)]))
            if has_turning:
                turning.append(vals[header.index("turning_indicator")])

    snapshots = []
    snap_dir = os.path.join(run_dir, "snapshots")
    if os.path.isdir(snap_dir):
        for name in sorted(os.listdir(snap_dir)):
            if not (name.startswith("t_") and name.endswith(".csv")):
                continue
            path = os.path.join(snap_dir, name)
            with open(path) as fh:
                cols = fh.readline().strip().split(",")
                data = np.loadtxt(fh, delimiter=",", ndmin=2)
            columns = {c: data[:, i].copy() for i, c in enumerate(cols)}
            snapshots.append(Snapshot(time=float(name[2:-4]), columns=columns))
    snapshots.sort(key=lambda s: s.time)

    return RunLog(
        mode=status.get("mode", config.get("mode", "graph")),
        config=config,
        reports=reports,
        snapshots=snapshots,
        turning=turning,
        status=status["status"],
        turning_time=status.get("turning_time"),
        halted_at=status.get("halted_at"),
    )
