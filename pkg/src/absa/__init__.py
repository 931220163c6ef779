"""Sensitivity analysis for stochastic agent-based simulators.

Consistency analysis picks the replicate count n*, one-at-a-time robustness
sweeps each parameter around its calibrated value, and a Latin hypercube
campaign measures global parameter-output correlation.
"""

from absa.consistency import ConsistencyConfig, ConsistencyResult, find_n_star, run_consistency
from absa.lhs import LhsDesign, LhsResult, classify_correlation, design, run_lhs, scale_design
from absa.parameters import ParameterSpec
from absa.robustness import RobustnessResult, run_robustness, significance_curve
from absa.stats_core import (
    COHEN,
    AMeasureResult,
    BoxplotSummary,
    Distribution,
    SignificanceClass,
    Thresholds,
    a_measure,
    boxplot_summary,
    classify_significance,
    pearson_r,
    scale_a,
)

__version__ = "0.1.0"

__all__ = [
    "AMeasureResult",
    "BoxplotSummary",
    "COHEN",
    "ConsistencyConfig",
    "ConsistencyResult",
    "Distribution",
    "LhsDesign",
    "LhsResult",
    "ParameterSpec",
    "RobustnessResult",
    "SignificanceClass",
    "Thresholds",
    "a_measure",
    "boxplot_summary",
    "classify_correlation",
    "classify_significance",
    "design",
    "find_n_star",
    "pearson_r",
    "run_consistency",
    "run_lhs",
    "run_robustness",
    "scale_a",
    "scale_design",
    "significance_curve",
]
