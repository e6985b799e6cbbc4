"""
Handler for the `experiment` command.

Loads (or defaults) an experiment config, applies command-line overrides,
runs the experiment and writes report.json plus its tables.
"""

from typing import Optional

from loguru import logger

from app.config import settings
from app.core.pool import ReplicatePool
from app.models.report import ExperimentConfig
from app.services.experiments import run_experiment
from app.utils.loaders import load_experiment_config, write_report


def experiment_command(name: str, config_path: Optional[str], seed: Optional[int],
                       out_dir: Optional[str], workers: int) -> int:
    """
    Run one registered experiment.

    Args:
        name: Registered experiment name
        config_path: Experiment config JSON; built-in defaults if None
        seed: Overrides the config seed
        out_dir: Overrides the config output directory
        workers: Replicate worker processes

    Returns:
        0 if every verdict passed, 1 otherwise
    """
    if config_path:
        cfg = load_experiment_config(config_path)
    else:
        cfg = ExperimentConfig(
            seed=settings.default_seed,
            output_dir=settings.output_dir,
            grid_m=settings.default_grid_m,
            excursion_grid_m=settings.excursion_grid_m,
            ks_alpha=settings.ks_alpha,
            ks_grid_margin=settings.ks_grid_margin,
        )
    overrides = {}
    if seed is not None:
        overrides["seed"] = seed
    if out_dir is not None:
        overrides["output_dir"] = out_dir
    if overrides:
        cfg = ExperimentConfig.model_validate({**cfg.model_dump(), **overrides})

    report = run_experiment(name, cfg, ReplicatePool(workers=workers))
    write_report(report, cfg.output_dir)
    if not report.passed:
        logger.error(f"Experiment {name} has failed verdicts: {', '.join(report.failed())}")
        return 1
    return 0
