#
# Copyright 2025 The Apache Software Foundation
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

"""Unit tests for result tables, the ordered pool and the experiment runners."""

import json

import pytest
from pydantic import ValidationError

from ssm_lab.allocation import write_dataset
from ssm_lab.config import ExperimentPresets
from ssm_lab.harness import ResultTable, run_ordered, to_csv, write_metadata, write_results
from ssm_lab.harness.experiments import (
    BER_COLUMNS,
    SR_COLUMNS,
    ExperimentConfig,
    ExperimentKind,
    load_config,
    run_experiment,
)
from ssm_lab.harness.output import sidecar_path


@pytest.fixture
def presets(tmp_path):
    """Presets file with one BER preset."""
    path = tmp_path / "experiments.toml"
    path.write_text(
        '[presets.quick-ber]\nkind = "ber-sweep"\ntrials = 50\nsnr_db = [5.0]\n',
        encoding="utf-8",
    )
    return ExperimentPresets(path)


class TestResultTable:
    """Tests for the in-memory table."""

    def test_add_and_query(self):
        """Test rows are kept in order and can be filtered."""
        table = ResultTable(("a", "b"))
        table.add(a=1, b="x")
        table.add(a=2, b="y")
        assert table.column("a") == [1, 2]
        assert table.where(b="y") == [{"a": 2, "b": "y"}]

    def test_rejects_wrong_keys(self):
        """Test rows must match the schema exactly."""
        with pytest.raises(ValueError, match="do not match"):
            ResultTable(("a", "b")).add(a=1)

    def test_csv_format(self):
        """Test header, bool and float rendering."""
        table = ResultTable(("n", "ok", "value"))
        table.add(n=3, ok=True, value=0.1)
        assert to_csv(table) == "n,ok,value\n3,true,0.1\n"

    def test_empty_csv_is_header_only(self):
        """Test a table without rows renders its header."""
        assert to_csv(ResultTable(SR_COLUMNS)) == ",".join(SR_COLUMNS) + "\n"


class TestOutput:
    """Tests for CSV files and metadata sidecars."""

    def test_sidecar_path(self, tmp_path):
        """Test the sidecar sits next to the output."""
        assert sidecar_path(tmp_path / "ber.csv") == tmp_path / "ber.meta.json"

    def test_write_results(self, tmp_path):
        """Test the CSV and its metadata are both written."""
        table = ResultTable(("x",))
        table.add(x=1)
        meta_path = write_results(
            table, tmp_path / "out" / "run.csv", {"kind": "test"}, seed=7, wall_time_s=1.23456,
            gates={"ok": True}, extra={"note": "n"},
        )
        assert (tmp_path / "out" / "run.csv").read_text() == "x\n1\n"
        meta = json.loads(meta_path.read_text())
        assert meta["seed"] == 7
        assert meta["rows"] == 1
        assert meta["wall_time_s"] == 1.235
        assert meta["gates"] == {"ok": True}
        assert meta["config"] == {"kind": "test"}
        assert meta["output"] == "run.csv"

    def test_stdout(self, capsys):
        """Test '-' writes CSV to stdout and no sidecar."""
        table = ResultTable(("x",))
        table.add(x=2)
        assert write_results(table, "-", {}, seed=0, wall_time_s=0.0) is None
        assert capsys.readouterr().out == "x\n2\n"

    def test_metadata_for_other_files(self, tmp_path):
        """Test metadata can describe a non-CSV output."""
        path = tmp_path / "set.jsonl"
        write_dataset([], path)
        meta_path = write_metadata(path, {}, seed=1, wall_time_s=0.0, rows=0)
        assert meta_path.name == "set.meta.json"


class TestRunOrdered:
    """Tests for the ordered process-pool map."""

    def test_in_process(self):
        """Test a single worker maps in order."""
        assert run_ordered(abs, [-3, 1, -2]) == [3, 1, 2]

    def test_pool_keeps_order(self):
        """Test results come back in task order from a pool."""
        tasks = list(range(-20, 0))
        assert run_ordered(abs, tasks, workers=2) == [abs(t) for t in tasks]

    def test_rejects_zero_workers(self):
        """Test workers must be positive."""
        with pytest.raises(ValueError, match="workers"):
            run_ordered(abs, [1], workers=0)


class TestLoadConfig:
    """Tests for presets, files and overrides."""

    def test_preset_with_override(self, presets):
        """Test overrides win over preset values and None is ignored."""
        cfg = load_config("ber-sweep", "quick-ber", overrides={"trials": 10, "seed": None},
                          presets=presets)
        assert cfg.trials == 10
        assert cfg.snr_db == [5.0]

    def test_preset_for_another_experiment(self, presets):
        """Test running a preset under the wrong command fails."""
        with pytest.raises(ValueError, match="not tas-compare"):
            load_config("tas-compare", "quick-ber", presets=presets)

    def test_unknown_preset(self, presets):
        """Test unknown preset names raise KeyError."""
        with pytest.raises(KeyError):
            load_config("ber-sweep", "nope", presets=presets)

    def test_config_file(self, tmp_path):
        """Test a TOML file of fields."""
        path = tmp_path / "run.toml"
        path.write_text("channels = 3\nn_a = 6\n", encoding="utf-8")
        cfg = load_config("tas-compare", config_file=path)
        assert (cfg.channels, cfg.n_a) == (3, 6)

    def test_unknown_field(self):
        """Test misspelled fields are rejected."""
        with pytest.raises(ValidationError):
            load_config("ber-sweep", overrides={"trails": 5})


class TestConfigValidation:
    """Tests for cross-field checks."""

    def test_n_t_above_n_a(self):
        """Test N_t may not exceed N_a."""
        with pytest.raises(ValidationError, match="exceeds"):
            ExperimentConfig(kind="ber-sweep", n_a=2, n_t=4)

    def test_no_an_dimensions(self):
        """Test secrecy experiments need N_t > N_b."""
        with pytest.raises(ValidationError, match="AN dimensions"):
            ExperimentConfig(kind="tas-compare", n_t=2, n_b=2)

    def test_pa_uses_all_antennas(self):
        """Test pa-compare requires N_a = N_t."""
        with pytest.raises(ValidationError, match="every antenna"):
            ExperimentConfig(kind="pa-compare", n_a=6, n_t=4)

    def test_training_needs_dataset(self):
        """Test dnn-train without a dataset file is rejected."""
        with pytest.raises(ValidationError, match="dataset"):
            ExperimentConfig(kind="dnn-train")

    def test_fixed_beta_in_bracket(self):
        """Test fixed betas must lie inside the bracket."""
        with pytest.raises(ValidationError):
            ExperimentConfig(kind="pa-compare", fixed_betas=[1.2])

    def test_bad_order(self):
        """Test non-square QAM orders are rejected."""
        with pytest.raises(ValidationError):
            ExperimentConfig(kind="ber-sweep", order=8)

    def test_echo_is_json_ready(self):
        """Test the echoed config serializes."""
        cfg = ExperimentConfig(kind="complexity-table")
        assert json.loads(json.dumps(cfg.echo()))["kind"] == "complexity-table"


class TestRunners:
    """Small end-to-end runs of each experiment."""

    def test_complexity_table(self):
        """Test measured counts match the closed forms."""
        cfg = ExperimentConfig(kind="complexity-table", n_t_values=[2, 4], n_r_values=[4],
                               orders=[4, 16])
        result = run_experiment(cfg)
        assert result.passed
        assert len(result.table.rows) == 12
        row = result.table.where(n_t=4, m=16, detector="proposed")[0]
        assert row["measured_cm"] == 56

    def test_ber_sweep(self):
        """Test BER rows per detector and the equivalence gate."""
        cfg = ExperimentConfig(
            kind="ber-sweep", order=16, snr_db=[0.0, 15.0], trials=300, n_t=4, n_r=4
        )
        result = run_experiment(cfg)
        assert result.table.columns == BER_COLUMNS
        assert len(result.table.rows) == 6
        assert result.gates == {"proposed_matches_joint_ml": True}
        low, high = (result.table.where(snr_db=s, detector="joint-ml")[0]["ber"]
                     for s in (0.0, 15.0))
        assert high < low
        ml = result.table.where(detector="joint-ml")
        proposed = result.table.where(detector="proposed")
        assert [r["bit_errors"] for r in ml] == [r["bit_errors"] for r in proposed]

    def test_tas_compare(self):
        """Test every strategy gets a row and exhaustive search dominates."""
        cfg = ExperimentConfig(
            kind="tas-compare", n_a=6, n_t=4, snr_db=[0.0, 10.0], channels=3, noise_samples=40
        )
        result = run_experiment(cfg)
        assert len(result.table.rows) == 8
        assert result.gates == {"es_dominates": True}
        assert set(result.extra["crests"]) == {"random", "es", "max-slnr", "edas"}

    def test_tas_compare_independent_of_workers(self):
        """Test one and two workers give identical tables."""
        fields = dict(kind="tas-compare", n_a=5, n_t=4, snr_db=[5.0], channels=3,
                      noise_samples=30, tas_strategies=["random", "max-slnr"])
        serial = run_experiment(ExperimentConfig(**fields, workers=1))
        pooled = run_experiment(ExperimentConfig(**fields, workers=2))
        assert to_csv(serial.table) == to_csv(pooled.table)

    def test_zero_channels(self):
        """Test no channel draws give a header-only table and no gates."""
        cfg = ExperimentConfig(kind="sr-snr-sweep", channels=0)
        result = run_experiment(cfg)
        assert result.table.rows == []
        assert result.passed

    def test_sr_snr_sweep(self):
        """Test one row per SNR point for the configured selection."""
        cfg = ExperimentConfig(kind="sr-snr-sweep", n_a=6, n_t=4, snr_db=[0.0, 10.0, 20.0],
                               channels=2, noise_samples=30, beta=0.8)
        result = run_experiment(cfg)
        assert result.table.column("strategy") == ["max-slnr"] * 3
        assert all(v >= 0.0 for v in result.table.column("sr_mean"))

    def test_pa_compare(self):
        """Test the grid search dominates every fixed beta on shared banks."""
        cfg = ExperimentConfig(kind="pa-compare", snr_db=[10.0], channels=2, noise_samples=30,
                               gd_max_iters=2)
        result = run_experiment(cfg)
        assert result.gates == {"es_dominates_fixed": True}
        assert result.table.column("strategy") == [
            "es", "fixed-0.1", "fixed-0.5", "fixed-0.9", "gd", "max-p-sinr-ansnr",
        ]
        evaluations = result.extra["mean_sr_evaluations"]
        assert evaluations["es"] == 19.0
        assert evaluations["es"] >= evaluations["gd"] >= evaluations["max-p-sinr-ansnr"]

    def test_dnn_dataset(self):
        """Test the label summary of a generated dataset."""
        cfg = ExperimentConfig(kind="dnn-dataset", samples=3, noise_samples=20, grid_step=0.15)
        result = run_experiment(cfg)
        assert len(result.samples) == 3
        row = result.table.rows[0]
        assert row["n_samples"] == 3
        assert 0.05 <= row["label_min"] <= row["label_max"] <= 0.95
