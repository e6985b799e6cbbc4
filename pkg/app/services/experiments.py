"""
Experiment registry.

Maps the names accepted by the CLI to experiment runners and runs them with
logging around each phase.
"""

from typing import Callable, Dict, Optional

from loguru import logger

from app.core.exceptions import ConfigurationError
from app.core.pool import ReplicatePool
from app.models.report import ExperimentConfig, ExperimentReport
from app.services.concentration import (
    exp_degree_concentration,
    exp_height_tail,
    exp_small_tree_heights,
    exp_variance_bound,
)
from app.services.convergence import exp_largest_tree_scaling, exp_tree_sizes, exp_walk_convergence

Runner = Callable[[ExperimentConfig, Optional[ReplicatePool]], ExperimentReport]

EXPERIMENTS: Dict[str, Runner] = {
    "walk_convergence": exp_walk_convergence,
    "tree_sizes": exp_tree_sizes,
    "height_tail": exp_height_tail,
    "variance_bound": exp_variance_bound,
    "degree_concentration": exp_degree_concentration,
    "small_tree_heights": exp_small_tree_heights,
    "largest_tree_scaling": exp_largest_tree_scaling,
}


def run_experiment(name: str, cfg: ExperimentConfig, pool: Optional[ReplicatePool] = None) -> ExperimentReport:
    """
    Run the experiment registered under `name`.

    Raises:
        ConfigurationError: If no experiment has that name
    """
    try:
        runner = EXPERIMENTS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown experiment {name!r}; choose from {', '.join(sorted(EXPERIMENTS))}"
        ) from None

    logger.info(f"Running experiment {name} with seed {cfg.seed}")
    try:
        report = runner(cfg, pool)
    except Exception as e:
        logger.error(f"Experiment {name} failed: {e}")
        raise
    if not report.passed:
        logger.warning(f"Experiment {name}: failed verdicts {report.failed()}")
    return report


__all__ = ["EXPERIMENTS", "run_experiment"]
