"""Pseudo-spectral simulator and verification lab for porous-media interface flow."""

from .grid import (
    PeriodicGrid,
    RealField,
    SpectralField,
    forward_transform,
    inverse_transform,
    apply_lambda_s,
    hilbert,
    derivative,
    translate,
    mean_remove,
)
from .norms import (
    BesovIndex,
    NormReport,
    norm_lp,
    norm_homog_sobolev,
    norm_wiener,
    besov_seminorm,
    check_interpolation,
    commutator_ratio,
    report_from_field,
)
from .graph import (
    GraphState,
    QuadratureSpec,
    NonFiniteFlux,
    CflViolation,
    flux_arctan,
    flux_rational,
    linearized_rhs,
    cfl_dt,
    step,
)
from .curve import (
    InterfaceCurve,
    ChordArcViolation,
    NoCriticalPoint,
    curve_velocity,
    turning_indicator,
    dalpha_v1_at_critical,
    chord_arc_minimum,
)
from .oracle import ConvergenceReport, pv_flux_direct, convergence_study
from .diagnostics import (
    TheoremVerdict,
    KernelIdentityReport,
    all_verdicts,
    kernel_identity_check,
    rescale_runlog,
)
from .config import SimConfig, ConfigError, parse_config, build_initial
from .runlog import RunLog, Snapshot, save_runlog, load_runlog
from .simulate import run_graph, run_curve

__version__ = "0.1.0"
