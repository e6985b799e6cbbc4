"""
Report assembly for experiments.

Experiments record parameters, statistics, tables and verdicts on a
ReportBuilder and build the validated ExperimentReport once at the end.
"""

import operator
from typing import Any, Dict, Mapping, Sequence

import numpy as np
from loguru import logger

from app.models.report import ExperimentReport, Verdict
from app.services.statistics import bound_excess
from app.utils.tables import table_csv

_COMPARISONS = {
    "<": operator.lt,
    "<=": operator.le,
    ">=": operator.ge,
    "==": operator.eq,
}


class ReportBuilder:
    """Collects the pieces of one ExperimentReport."""

    def __init__(self, name: str, parameters: Mapping[str, Any] = ()):
        self.name = name
        self.parameters: Dict[str, Any] = dict(parameters)
        self.statistics: Dict[str, float] = {}
        self.tables: Dict[str, str] = {}
        self.verdicts: Dict[str, Verdict] = {}

    def parameter(self, key: str, value: Any) -> None:
        self.parameters[key] = value

    def statistic(self, key: str, value: float) -> None:
        self.statistics[key] = float(value)

    def table(self, key: str, columns: Mapping[str, Sequence]) -> None:
        self.tables[key] = table_csv(columns)

    def check(self, key: str, value: float, threshold_key: str, threshold: float,
              comparison: str = "<=") -> bool:
        """
        Record `value <comparison> threshold` as a verdict.

        The threshold is stored in the parameters under `threshold_key`.
        """
        self.parameters[threshold_key] = float(threshold)
        passed = bool(_COMPARISONS[comparison](value, threshold))
        self.verdicts[key] = Verdict(
            passed=passed, value=float(value), threshold_key=threshold_key, comparison=comparison
        )
        if not passed:
            logger.warning(f"{self.name}: verdict {key} failed ({value} {comparison} {threshold} is false)")
        return passed

    def check_bound_grid(self, key: str, empirical: np.ndarray, bounds: np.ndarray,
                         replicates: int, se_multiplier: float) -> bool:
        """
        One-sided check that every empirical frequency is at most its bound
        plus se_multiplier binomial standard errors (taken at the bound).

        The verdict value is the largest excess over the allowance.
        """
        excess = bound_excess(empirical, bounds, replicates, se_multiplier)
        value = float(excess.max()) if excess.size else 0.0
        return self.check(key, value, "bound_excess_tolerance", 0.0, "<=")

    def build(self) -> ExperimentReport:
        report = ExperimentReport(
            name=self.name,
            parameters=self.parameters,
            statistics=self.statistics,
            tables=self.tables,
            verdicts=self.verdicts,
        )
        logger.info(
            f"{self.name}: {len(self.verdicts) - len(report.failed())}/{len(self.verdicts)} verdicts passed"
        )
        return report


__all__ = ["ReportBuilder"]
