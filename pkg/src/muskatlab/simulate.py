"""Experiment drivers: advance a configured run and collect its RunLog.

Event scheduling is drift-free: report and snapshot instants are integer
multiples of their intervals and each step is clipped to land exactly on
the next event, so reruns with identical configuration produce bitwise
identical logs.  Halting conditions (blow-up proxy crossing, chord-arc
failure, parametrization degradation, non-finite flux) stamp the log with
a status and return the partial record instead of raising.
"""

from __future__ import annotations

import numpy as np

from .config import SimConfig, build_initial
from .curve import (
    ChordArcViolation,
    InterfaceCurve,
    curve_velocity,
    parametrization_quality,
    turning_indicator,
)
from .graph import CflViolation, GraphState, NonFiniteFlux, cfl_dt, step
from .grid import RealField
from .norms import report_from_field
from .runlog import (
    RunLog,
    Snapshot,
    STATUS_BLOWUP,
    STATUS_COMPLETED,
    STATUS_DEGRADED,
    STATUS_FAILED,
    STATUS_SELF_INTERSECTION,
)

__all__ = ["run_graph", "run_curve"]

_PARAM_QUALITY_LIMIT = 20.0


def _capped_t_final(config: SimConfig) -> float:
    if config.unstable and config.rho_bar != 0.0:
        # unstable demonstrations are illustrative only; cap at ten crossings
        cap = 10.0 * config.length / abs(config.rho_bar)
        return min(config.t_final, cap)
    return config.t_final


def _event_times(t_final: float, interval: float) -> list:
    n = int(np.floor(t_final / interval + 1e-9))
    times = [j * interval for j in range(n + 1)]
    if times[-1] < t_final - 1e-12 * max(1.0, t_final):
        times.append(t_final)
    return times


def run_graph(config: SimConfig) -> RunLog:
    """Advance the graph-form interface from t = 0 to t_final."""
    if config.mode != "graph":
        raise ValueError("run_graph requires a graph-mode config")
    t_final = _capped_t_final(config)
    state = GraphState(f=build_initial(config), time=0.0, rho_bar=config.rho_bar)
    log = RunLog(mode="graph", config=config.as_dict())

    report_times = _event_times(t_final, config.report_interval)
    snap_times = _event_times(t_final, config.snapshot_interval)
    events = sorted(set(report_times) | set(snap_times))

    def record(t: float) -> bool:
        """Log due events; returns False when the run must halt."""
        if any(abs(t - st) < 1e-9 for st in snap_times):
            log.snapshots.append(
                Snapshot(time=t, columns={"x": state.grid.nodes, "f": state.f.samples.copy()})
            )
        if any(abs(t - rt) < 1e-9 for rt in report_times):
            rep = report_from_field(state.f, t)
            log.reports.append(rep)
            if rep.blowup_proxy > config.blowup_threshold:
                log.status = STATUS_BLOWUP
                log.halted_at = t
                return False
        return True

    if not record(0.0):
        return log
    t = 0.0
    for t_next in events:
        if t_next <= 1e-12:
            continue
        while t < t_next - 1e-12:
            dt = min(cfl_dt(state, config.cfl_factor), t_next - t)
            try:
                state = step(state, dt, config.scheme, config.quad, config.cfl_factor)
            except (NonFiniteFlux, CflViolation):
                log.status = STATUS_FAILED
                log.halted_at = t
                return log
            t = state.time
        t = t_next
        if not record(t):
            return log
    log.status = STATUS_COMPLETED
    return log


def _curve_rhs(curve: InterfaceCurve, config: SimConfig):
    v1, v2 = curve_velocity(curve, config.quad, config.chord_arc_floor)
    return v1.samples, v2.samples


def _rk4_curve(curve: InterfaceCurve, dt: float, config: SimConfig, k1) -> InterfaceCurve:
    def at(z1, z2):
        return _curve_rhs(
            InterfaceCurve(curve.grid, z1, z2, rho_bar=curve.rho_bar), config
        )

    k11, k12 = k1
    k21, k22 = at(curve.z1 + 0.5 * dt * k11, curve.z2 + 0.5 * dt * k12)
    k31, k32 = at(curve.z1 + 0.5 * dt * k21, curve.z2 + 0.5 * dt * k22)
    k41, k42 = at(curve.z1 + dt * k31, curve.z2 + dt * k32)
    z1 = curve.z1 + dt / 6.0 * (k11 + 2.0 * k21 + 2.0 * k31 + k41)
    z2 = curve.z2 + dt / 6.0 * (k12 + 2.0 * k22 + 2.0 * k32 + k42)
    return InterfaceCurve(curve.grid, z1, z2, time=curve.time + dt, rho_bar=curve.rho_bar)


def run_curve(config: SimConfig) -> RunLog:
    """Advance the parametrized curve, tracking the turning indicator."""
    if config.mode != "curve":
        raise ValueError("run_curve requires a curve-mode config")
    t_final = _capped_t_final(config)
    curve = build_initial(config)
    log = RunLog(mode="curve", config=config.as_dict())

    report_times = _event_times(t_final, config.report_interval)
    snap_times = _event_times(t_final, config.snapshot_interval)
    events = sorted(set(report_times) | set(snap_times))
    h = curve.grid.spacing

    def record(t: float) -> bool:
        if any(abs(t - st) < 1e-9 for st in snap_times):
            log.snapshots.append(
                Snapshot(
                    time=t,
                    columns={
                        "alpha": curve.grid.nodes,
                        "z1": curve.z1.copy(),
                        "z2": curve.z2.copy(),
                    },
                )
            )
        if any(abs(t - rt) < 1e-9 for rt in report_times):
            z2_field = RealField(curve.grid, curve.z2)
            log.reports.append(report_from_field(z2_field, t))
            ind = turning_indicator(curve)
            log.turning.append(ind)
            if log.turning_time is None and len(log.turning) >= 2:
                prev, cur = log.turning[-2], log.turning[-1]
                if prev > 0.0 >= cur:
                    t_prev = log.reports[-2].time
                    log.turning_time = t_prev + (t - t_prev) * prev / (prev - cur)
            elif log.turning_time is None and ind <= 0.0:
                log.turning_time = t
            if parametrization_quality(curve) > _PARAM_QUALITY_LIMIT:
                log.status = STATUS_DEGRADED
                log.halted_at = t
                return False
        return True

    if not record(0.0):
        return log
    t = 0.0
    for t_next in events:
        if t_next <= 1e-12:
            continue
        while t < t_next - 1e-12:
            try:
                k1 = _curve_rhs(curve, config)
                vmax = float(np.max(np.hypot(*k1)))
                # |rho| term keeps the stiff dissipative part inside the
                # explicit RK4 stability region even as the velocity decays
                dt = min(config.cfl_factor * h / (abs(curve.rho_bar) + vmax), t_next - t)
                curve = _rk4_curve(curve, dt, config, k1)
            except ChordArcViolation:
                log.status = STATUS_SELF_INTERSECTION
                log.halted_at = t
                return log
            except NonFiniteFlux:
                log.status = STATUS_FAILED
                log.halted_at = t
                return log
            t = curve.time
        t = t_next
        if not record(t):
            return log
    log.status = STATUS_COMPLETED
    return log
