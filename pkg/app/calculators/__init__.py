# trace-tool/app/calculators/__init__.py
"""
Trace-Tool calculators package.

Exact and asymptotic computation for the trace statistic of plane partitions
and for plane overpartitions:

    PP(z; q)    = prod_{k>=1} (1 - z q^k)^{-k}
    PPbar(z; q) = prod_{k>=1} ((1 - z q^k)/(1 - q^k))^k

evaluated at roots of unity z = e^{2 pi i a/b}.

Modules:
    exact_qseries: exact coefficient tables, residue-class counts, brute-force enumerator
    polylog_unit: Li_s on the unit circle, dominance functions, theta_12 / theta_1 solves
    asymptotics: closed-form main terms, cosine model for class differences, ratio reports
    circle_diag: Farey arcs, error terms on the arcs, regrouped series, arc quadrature
"""

# Package metadata
__version__ = "0.1.0"
__author__ = "Trace-Tool contributors"
__license__ = "MIT"

from .exact_qseries import (
    OverTable,
    PlanePartition,
    ResidueCounts,
    RootOfUnity,
    TraceTable,
    build_over_table,
    build_trace_table,
    difference_series,
    enumerate_plane_partitions,
    equidistribution_ratios,
    evaluation_dps,
    eval_over_poly,
    eval_trace_poly,
    over_polynomial,
    residue_counts_direct,
    residue_counts_via_roots,
    trace_histogram,
    trace_polynomial,
)
from .polylog_unit import (
    Constants,
    PrecisionSpec,
    Rotation,
    abs_li_unit,
    arg_gap,
    certify_forward_difference,
    constants,
    dominance_L,
    dominance_ratio_bound,
    forward_difference,
    hurwitz_zeta,
    li,
    li3_rational,
    over_dominance,
    prop_sequence_A,
    re_cbrt_gap,
    re_cbrt_li3,
    solve_theta1,
    solve_theta12,
)
from .asymptotics import (
    MainTermEstimate,
    OscillationModel,
    normalized_differences,
    over_main_term,
    overpp_main_term,
    oscillation_model,
    predicted_difference,
    ratio_report,
    trace_main_term,
    wright_pp_main_term,
)
from .circle_diag import (
    FareyArc,
    SaddleParam,
    arc_intervals,
    error_term_E,
    f1,
    f2,
    farey,
    g_jk,
    lemma41_deviation,
    lemma42_identity_residual,
    log_pp_direct,
    loglog_slope,
    major_arc_quadrature,
    phi,
    t_n_trace,
    tiling_defect,
    twisted_harmonic_G,
)

# Define public API
__all__ = [
    # Exact tables
    "OverTable",
    "PlanePartition",
    "ResidueCounts",
    "RootOfUnity",
    "TraceTable",
    "build_over_table",
    "build_trace_table",
    "difference_series",
    "enumerate_plane_partitions",
    "equidistribution_ratios",
    "evaluation_dps",
    "eval_over_poly",
    "eval_trace_poly",
    "over_polynomial",
    "residue_counts_direct",
    "residue_counts_via_roots",
    "trace_histogram",
    "trace_polynomial",

    # Polylogarithms and phase analysis
    "Constants",
    "PrecisionSpec",
    "Rotation",
    "abs_li_unit",
    "arg_gap",
    "certify_forward_difference",
    "constants",
    "dominance_L",
    "dominance_ratio_bound",
    "forward_difference",
    "hurwitz_zeta",
    "li",
    "li3_rational",
    "over_dominance",
    "prop_sequence_A",
    "re_cbrt_gap",
    "re_cbrt_li3",
    "solve_theta1",
    "solve_theta12",

    # Main terms
    "MainTermEstimate",
    "OscillationModel",
    "normalized_differences",
    "over_main_term",
    "overpp_main_term",
    "oscillation_model",
    "predicted_difference",
    "ratio_report",
    "trace_main_term",
    "wright_pp_main_term",

    # Circle method diagnostics
    "FareyArc",
    "SaddleParam",
    "arc_intervals",
    "error_term_E",
    "f1",
    "f2",
    "farey",
    "g_jk",
    "lemma41_deviation",
    "lemma42_identity_residual",
    "log_pp_direct",
    "loglog_slope",
    "major_arc_quadrature",
    "phi",
    "t_n_trace",
    "tiling_defect",
    "twisted_harmonic_G",
]
