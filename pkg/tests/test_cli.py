import json
import sys
from pathlib import Path

import pytest
from click.testing import CliRunner
from loguru import logger

from app.main import cli
from app.models.forests import PlaneForest
from app.models.paths import LatticePath
from app.models.report import ExperimentReport

DEGREES = Path(__file__).resolve().parents[1] / "data" / "degrees"


@pytest.fixture
def runner():
    yield CliRunner()
    # the app binds its sink to the runner's stderr
    logger.remove()
    logger.add(sys.stderr, level="WARNING")


def invoke(runner, *args):
    return runner.invoke(cli, ["--log-level", "WARNING", *args])


def test_sample_prints_forests(runner):
    result = invoke(runner, "sample", "--degrees", str(DEGREES / "mixed_12.json"), "--seed", "5", "--count", "3")
    assert result.exit_code == 0
    lines = result.stdout.strip().splitlines()
    assert len(lines) == 3
    for line in lines:
        forest = PlaneForest.from_json(line)
        assert forest.n == 12 and len(forest.trees) == 3


def test_sample_prefix_is_stable(runner):
    args = ("sample", "--degrees", str(DEGREES / "mixed_12.json"), "--seed", "9")
    short = invoke(runner, *args, "--count", "2").stdout.splitlines()
    longer = invoke(runner, *args, "--count", "4").stdout.splitlines()
    assert longer[:2] == short


def test_enumerate_kinds(runner):
    path = str(DEGREES / "three_forests.json")
    forests = invoke(runner, "enumerate", "--degrees", path).stdout.splitlines()
    bridges = invoke(runner, "enumerate", "--degrees", path, "--kind", "bridges").stdout.splitlines()
    fp = invoke(runner, "enumerate", "--degrees", path, "--kind", "fp-bridges").stdout.splitlines()
    assert (len(forests), len(bridges), len(fp)) == (3, 6, 3)
    assert all(LatticePath.from_json(line).is_first_passage() for line in fp)
    assert json.loads(forests[0])["trees"]


def test_verify_writes_report(runner, tmp_path):
    result = invoke(runner, "verify", "--max-n", "4", "--max-degree", "3", "--out", str(tmp_path), "--workers", "1")
    assert result.exit_code == 0
    report = ExperimentReport.model_validate_json((tmp_path / "report.json").read_text())
    assert report.passed
    assert (tmp_path / "sequences.csv").exists()


def test_experiment_with_config(runner, tmp_path):
    config = tmp_path / "height.json"
    config.write_text(json.dumps({
        "degree_family": {"kind": "single_tree"},
        "n_list": [100],
        "replicates": 100,
        "output_dir": str(tmp_path / "ignored"),
    }))
    out = tmp_path / "out"
    result = invoke(runner, "experiment", "height_tail", "--config", str(config), "--seed", "3",
                    "--out", str(out), "--workers", "1")
    assert result.exit_code == 0
    report = ExperimentReport.model_validate_json((out / "report.json").read_text())
    assert report.parameters["seed"] == 3
    assert (out / "height_tail_n100.csv").exists()
    assert not (tmp_path / "ignored").exists()


def test_domain_errors_exit_with_two(runner, tmp_path):
    cyclic = tmp_path / "cyclic.json"
    cyclic.write_text(json.dumps({"counts": {"1": 3}}))
    assert invoke(runner, "sample", "--degrees", str(cyclic)).exit_code == 2
    assert invoke(runner, "enumerate", "--degrees", str(tmp_path / "missing.json")).exit_code == 2


def test_unknown_experiment_is_a_usage_error(runner):
    assert invoke(runner, "experiment", "nonsense").exit_code == 2
