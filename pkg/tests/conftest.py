"""Shared fixtures for the ForestWise test suite."""

import pytest

from app.core.rng import SeededRng
from app.models.degrees import DegreeSequence
from app.models.report import DegreeFamily, ExperimentConfig


@pytest.fixture
def mixed_degrees() -> DegreeSequence:
    """Twelve vertices, three trees."""
    return DegreeSequence.validate({0: 7, 1: 2, 2: 2, 3: 1})


@pytest.fixture
def ten_trees() -> DegreeSequence:
    """d(s) = (0, 0, 0, 1, 1, 3): ten plane trees."""
    return DegreeSequence.validate({0: 3, 1: 2, 3: 1})


@pytest.fixture
def three_forests() -> DegreeSequence:
    """Two trees on four vertices: three plane forests."""
    return DegreeSequence.validate({0: 2, 1: 2})


@pytest.fixture
def rng() -> SeededRng:
    return SeededRng(seed=20240601, stream_id=7)


@pytest.fixture
def small_config(tmp_path):
    """Factory for fast experiment configs."""
    def make(**overrides) -> ExperimentConfig:
        values = dict(
            degree_family=DegreeFamily(kind="binary"),
            n_list=[200],
            lambda_target=1.0,
            replicates=200,
            grid_m=256,
            excursion_grid_m=1024,
            excursion_replicates=20,
            seed=11,
            output_dir=str(tmp_path / "out"),
        )
        values.update(overrides)
        return ExperimentConfig(**values)
    return make
