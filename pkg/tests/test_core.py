import json
from functools import partial

import numpy as np
import pytest
from pydantic import ValidationError

from app.config import Settings
from app.core.exceptions import ConfigurationError, ForestWiseError
from app.core.pool import ReplicatePool
from app.core.rng import SeededRng, StreamPurpose
from app.models.report import DegreeFamily, ExperimentConfig, ExperimentReport, Verdict
from app.services.harness import ReportBuilder
from app.services.statistics import bound_excess, one_sided_ok
from app.utils import load_degree_sequence, load_experiment_config, table_csv, write_report


class TestSeededRng:
    def test_same_stream_same_draws(self):
        a = SeededRng(7, 3).generator().random(5)
        b = SeededRng(7, 3).generator().random(5)
        assert a.tolist() == b.tolist()

    def test_streams_differ(self):
        forest = SeededRng.for_replicate(1, StreamPurpose.FOREST, 0)
        continuum = SeededRng.for_replicate(1, StreamPurpose.CONTINUUM, 0)
        assert forest.stream_id != continuum.stream_id
        assert forest.generator().random() != continuum.generator().random()
        assert SeededRng.for_replicate(1, StreamPurpose.FOREST, 1) != forest

    def test_seed_range(self):
        SeededRng(2 ** 64 - 1)
        with pytest.raises(ValueError):
            SeededRng(-1)
        with pytest.raises(ValueError):
            SeededRng(2 ** 64)


class TestReplicatePool:
    def test_in_process_order(self):
        assert ReplicatePool(workers=1).map(partial(pow, exp=2), range(6)) == [0, 1, 4, 9, 16, 25]

    def test_worker_processes_match_in_process(self):
        task = partial(pow, exp=3)
        expected = ReplicatePool(workers=1).map(task, range(10))
        assert ReplicatePool(workers=2, chunksize=3).map(task, range(10)) == expected


class TestSettings:
    def test_defaults(self):
        s = Settings(_env_file=None)
        assert s.workers >= 1
        assert s.default_grid_m == 2 ** 14

    def test_log_level_is_normalized(self):
        assert Settings(_env_file=None, log_level="debug").log_level == "DEBUG"
        with pytest.raises(ValidationError):
            Settings(_env_file=None, log_level="chatty")

    def test_grid_must_be_power_of_two(self):
        with pytest.raises(ValidationError):
            Settings(_env_file=None, default_grid_m=1000)

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("WORKERS", "3")
        assert Settings(_env_file=None).workers == 3


class TestExperimentConfig:
    def test_rejects_bad_values(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(n_list=[])
        with pytest.raises(ValidationError):
            ExperimentConfig(times=[0.0, 0.5])
        with pytest.raises(ValidationError):
            DegreeFamily(kind="file")

    def test_continuum_draws_default_to_replicates(self):
        assert ExperimentConfig(replicates=30).continuum_draws == 30
        assert ExperimentConfig(replicates=30, continuum_replicates=5).continuum_draws == 5

    def test_report_verdicts_need_thresholds(self):
        with pytest.raises(ValidationError):
            ExperimentReport(name="x", verdicts={"a": Verdict(passed=True, value=0.0, threshold_key="t")})


class TestReportBuilder:
    def test_check_records_threshold(self):
        report = ReportBuilder("demo", {"seed": 1})
        assert report.check("small", 0.1, "limit", 0.5, "<")
        assert not report.check("equal", 2, "allowed_failures", 0, "==")
        built = report.build()
        assert built.parameters["limit"] == 0.5
        assert built.failed() == ["equal"]
        assert not built.passed

    def test_bound_grid_uses_standard_errors(self):
        report = ReportBuilder("demo")
        empirical = np.array([0.105, 0.5])
        bounds = np.array([0.1, 0.6])
        assert report.check_bound_grid("grid", empirical, bounds, 10_000, 3.0)
        assert not report.check_bound_grid("tight", empirical, bounds, 10_000, 1.0)
        assert report.build().parameters["bound_excess_tolerance"] == 0.0

    def test_bound_grid_agrees_with_cellwise_check(self):
        report = ReportBuilder("demo")
        empirical = np.array([[0.02, 0.3], [0.11, 0.0]])
        bounds = np.array([[0.01, 0.35], [0.1, 1.7]])
        passed = report.check_bound_grid("grid", empirical, bounds, 2_000, 3.0)
        cells = [one_sided_ok(e, b, 2_000, 3.0) for e, b in zip(empirical.ravel(), bounds.ravel())]
        assert passed == all(cells)
        assert not passed
        assert report.verdicts["grid"].value == pytest.approx(
            float(bound_excess(empirical, bounds, 2_000, 3.0).max())
        )
        assert report.verdicts["grid"].value == pytest.approx(0.02 - 0.01 - 3.0 * np.sqrt(0.01 * 0.99 / 2_000))


class TestTables:
    def test_table_csv(self):
        text = table_csv({"k": np.array([1, 2]), "p": [0.5, np.float64(0.25)]})
        assert text == "k,p\n1,0.5\n2,0.25\n"

    def test_columns_must_match(self):
        with pytest.raises(ValueError):
            table_csv({"a": [1], "b": [1, 2]})


class TestLoaders:
    def test_degree_sequence_file(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text(json.dumps({"counts": {"0": 2, "1": 2}}))
        assert load_degree_sequence(path).as_dict == {0: 2, 1: 2}

    def test_bad_degree_files(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_degree_sequence(tmp_path / "missing.json")
        broken = tmp_path / "broken.json"
        broken.write_text("{")
        with pytest.raises(ConfigurationError):
            load_degree_sequence(broken)
        cyclic = tmp_path / "cyclic.json"
        cyclic.write_text(json.dumps({"counts": {"1": 3}}))
        with pytest.raises(ForestWiseError):
            load_degree_sequence(cyclic)

    def test_experiment_config_file(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"n_list": [100], "replicates": 10}))
        cfg = load_experiment_config(path)
        assert (cfg.n_list, cfg.replicates) == ([100], 10)
        path.write_text(json.dumps({"replicates": 0}))
        with pytest.raises(ConfigurationError):
            load_experiment_config(path)

    def test_write_report(self, tmp_path):
        report = ReportBuilder("demo", {"seed": 1})
        report.table("grid", {"m": [1, 2], "value": [0.5, 0.25]})
        report.check("ok", 0.0, "limit", 1.0)
        path = write_report(report.build(), tmp_path / "out")
        assert ExperimentReport.model_validate_json(path.read_text()).passed
        assert (tmp_path / "out" / "grid.csv").read_text() == "m,value\n1,0.5\n2,0.25\n"
