"""
Data-file utilities for ForestWise.

Loads degree sequences and experiment configs from JSON files and writes
experiment reports with their CSV tables.
"""

import json
from pathlib import Path
from typing import Union

from loguru import logger
from pydantic import ValidationError

from app.core.exceptions import ConfigurationError, ForestWiseError
from app.models.degrees import DegreeSequence
from app.models.report import ExperimentConfig, ExperimentReport

PathLike = Union[str, Path]


def load_degree_sequence(path: PathLike) -> DegreeSequence:
    """
    Load a degree sequence from a `{"counts": {"0": 7, ...}}` file.

    Raises:
        ConfigurationError: If the file is missing or not valid JSON
        ForestWiseError: If the counts do not describe a forest
    """
    file_path = Path(path)
    if not file_path.exists():
        raise ConfigurationError(f"Degree sequence file not found: {file_path}")
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            degrees = DegreeSequence.from_json(f.read())
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Invalid JSON in {file_path}: {e}") from e
    logger.debug(f"Loaded degree sequence {degrees} from {file_path}")
    return degrees


def load_experiment_config(path: PathLike) -> ExperimentConfig:
    """
    Parse and validate an experiment config JSON file.

    Raises:
        ConfigurationError: If the file is missing or fails validation
    """
    file_path = Path(path)
    if not file_path.exists():
        raise ConfigurationError(f"Experiment config not found: {file_path}")
    try:
        config = ExperimentConfig.model_validate_json(file_path.read_text(encoding="utf-8"))
    except ValidationError as e:
        raise ConfigurationError(f"Invalid experiment config {file_path}: {e}") from e
    logger.info(f"Loaded experiment config from {file_path}")
    return config


def write_report(report: ExperimentReport, out_dir: PathLike) -> Path:
    """
    Write report.json and one CSV file per table into `out_dir`.

    Returns:
        Path of the written report.json
    """
    directory = Path(out_dir)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        report_path = directory / "report.json"
        report_path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
        for name, table in report.tables.items():
            (directory / f"{name}.csv").write_text(table, encoding="utf-8")
    except OSError as e:
        logger.error(f"Failed to write report {report.name} to {directory}: {e}")
        raise ForestWiseError(f"cannot write report to {directory}: {e}") from e
    logger.info(f"Report {report.name} written to {report_path} with {len(report.tables)} tables")
    return report_path


__all__ = ["load_degree_sequence", "load_experiment_config", "write_report"]
