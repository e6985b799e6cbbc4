"""
ForestWise domain models.

Frozen value types for degree sequences, lattice paths, forests, grid paths
and metric spaces, plus the pydantic experiment config and report.
"""

from .continuum import ExcursionList, ExcursionPath, ExcursionStats, GridPath
from .degrees import DegreeSequence, DegreeStats, RegimeDiagnostics
from .forests import PlaneForest, PlaneTree, TreeMetrics
from .metric import FiniteMetricMeasureSpace
from .paths import BridgeStats, LatticePath
from .report import DegreeFamily, ExperimentConfig, ExperimentReport, Verdict

__all__ = [
    "DegreeSequence",
    "DegreeStats",
    "RegimeDiagnostics",
    "LatticePath",
    "BridgeStats",
    "PlaneTree",
    "PlaneForest",
    "TreeMetrics",
    "GridPath",
    "ExcursionList",
    "ExcursionPath",
    "ExcursionStats",
    "FiniteMetricMeasureSpace",
    "DegreeFamily",
    "ExperimentConfig",
    "ExperimentReport",
    "Verdict",
]
