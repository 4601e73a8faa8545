import json
import subprocess
import sys
from pathlib import Path

import pytest

from asympoly.cli import EXIT_CONFIG, EXIT_HYPOTHESIS, EXIT_OK, EXIT_SIMULATION, ExperimentConfig, run
from asympoly.errors import ConfigError

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "asympoly" / "fixtures"


def fixture_text(name):
    return (FIXTURES / name).read_text(encoding="utf-8")


class TestExperimentConfig:
    def test_round_trip_is_byte_stable(self):
        for name in ("t1_case_a_m2.json", "t2_regular_m3.json"):
            text = fixture_text(name)
            cfg = ExperimentConfig.from_json(text)
            assert cfg.to_json() == text
            assert ExperimentConfig.from_json(cfg.to_json()).to_json() == text

    def test_unknown_top_level_key_rejected(self):
        raw = json.loads(fixture_text("t1_case_a_m1.json"))
        raw["extra"] = 1
        with pytest.raises(ConfigError, match="extra"):
            ExperimentConfig.from_json(json.dumps(raw))

    def test_unknown_spec_key_rejected(self):
        raw = json.loads(fixture_text("t1_case_a_m1.json"))
        raw["spec"]["tau"] = 0.1
        with pytest.raises(ConfigError, match="tau"):
            ExperimentConfig.from_json(json.dumps(raw))

    def test_unknown_threshold_key_rejected(self):
        raw = json.loads(fixture_text("t1_case_a_m1.json"))
        raw["thresholds"]["tau_typo"] = 0.1
        with pytest.raises(ConfigError, match="tau_typo"):
            ExperimentConfig.from_json(json.dumps(raw))

    def test_missing_required_key_rejected(self):
        raw = json.loads(fixture_text("t1_case_a_m1.json"))
        del raw["seeds"]
        with pytest.raises(ConfigError, match="seeds"):
            ExperimentConfig.from_json(json.dumps(raw))

    def test_bad_case_rejected(self):
        raw = json.loads(fixture_text("t1_case_a_m1.json"))
        raw["case"] = "z"
        with pytest.raises(ConfigError, match="case"):
            ExperimentConfig.from_json(json.dumps(raw))


class TestRunCommand:
    def test_passing_instance_writes_reports(self, tmp_path):
        out = tmp_path / "out"
        code = run(str(FIXTURES / "t1_case_a_m2.json"), out_dir=str(out))
        assert code == EXIT_OK
        csv = (out / "trace.csv").read_text(encoding="utf-8")
        lines = csv.splitlines()
        assert lines[0] == "n,x,z,delta_m_z"
        assert lines[1].startswith("2,")
        # last m rows carry no m-th difference
        assert lines[-1].endswith(",")
        verdict = json.loads((out / "verdict.json").read_text())
        assert verdict["passed"] is True
        decomposition = json.loads((out / "decomposition.json").read_text())
        assert "psi" in decomposition["x"] and "psi" in decomposition["z"]

    def test_unit_c_exits_one_naming_c(self, tmp_path, capsys):
        code = run(str(FIXTURES / "bad_c_unit.json"), out_dir=str(tmp_path / "o"))
        assert code == EXIT_CONFIG
        assert "c" in capsys.readouterr().err

    def test_future_sigma_exits_three(self, tmp_path, capsys):
        code = run(str(FIXTURES / "causality_violation.json"), out_dir=str(tmp_path / "o"))
        assert code == EXIT_SIMULATION
        err = capsys.readouterr().err
        assert "sigma" in err

    def test_failed_hypothesis_exits_two(self, tmp_path):
        out = tmp_path / "o"
        code = run(str(FIXTURES / "fail_b_summability.json"), out_dir=str(out))
        assert code == EXIT_HYPOTHESIS
        verdict = json.loads((out / "verdict.json").read_text())
        assert verdict["failed_check"] == "b-summability"

    def test_horizon_override(self, tmp_path):
        out = tmp_path / "o"
        code = run(str(FIXTURES / "t1_case_a_m1.json"), horizon=2000, out_dir=str(out))
        assert code == EXIT_OK
        lines = (out / "trace.csv").read_text().splitlines()
        assert lines[-1].split(",")[0] == "2000"

    def test_missing_config_file(self, tmp_path, capsys):
        assert run(str(tmp_path / "nope.json")) == EXIT_CONFIG

    def test_deterministic_outputs(self, tmp_path):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        assert run(str(FIXTURES / "t1_case_b_m2.json"), out_dir=str(out1)) == EXIT_OK
        assert run(str(FIXTURES / "t1_case_b_m2.json"), out_dir=str(out2)) == EXIT_OK
        for artifact in ("trace.csv", "decomposition.json", "verdict.json"):
            assert (out1 / artifact).read_bytes() == (out2 / artifact).read_bytes()


class TestCatalogCommand:
    def test_contains_required_identifiers(self):
        out = subprocess.run(
            [sys.executable, "-m", "asympoly.cli", "catalog"],
            capture_output=True, text=True, check=True,
        )
        assert "sigmoid" in out.stdout
        assert "floor_log" in out.stdout

    def test_listing_identical_across_invocations(self):
        runs = [
            subprocess.run(
                [sys.executable, "-m", "asympoly.cli", "catalog"],
                capture_output=True, text=True, check=True,
            ).stdout
            for _ in range(2)
        ]
        assert runs[0] == runs[1]


def test_manifest_covers_all_exit_codes():
    manifest = json.loads((FIXTURES / "manifest.json").read_text())
    codes = {entry["expect_exit"] for entry in manifest["fixtures"]}
    assert codes == {0, 1, 2, 3}
