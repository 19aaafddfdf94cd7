"""CLI tests: scripted runs, exit codes, and interactive-mode parity."""

import json

import pytest

from statguide import load_csv, sample_path
from statguide.cli import _make_session, interactive_loop, main


def write_script(tmp_path, doc):
    path = tmp_path / "script.json"
    path.write_text(json.dumps(doc))
    return str(path)


MPG_SCRIPT = str(sample_path("auto_mpg").parent.parent / "scripts" / "mpg_ttest.json")
HOUSING_SCRIPT = str(sample_path("housing").parent.parent / "scripts" / "housing_regression.json")


class TestRun:
    def test_bundled_mpg_script(self, tmp_path):
        report_path = tmp_path / "report.json"
        model_path = tmp_path / "model.json"
        code = main([
            "run", "--data", str(sample_path("auto_mpg")), "--script", MPG_SCRIPT,
            "--report", str(report_path), "--model", str(model_path),
        ])
        assert code == 0
        report = json.loads(report_path.read_text())
        assert report["final_results"]["ttest"]["t"] == pytest.approx(-8.9147, abs=0.01)
        model = json.loads(model_path.read_text())
        assert model["schema_version"] == 1

    def test_empty_script_reports_step_one_only(self, tmp_path):
        script = write_script(tmp_path, {"workflow": "two_sample_ttest", "decisions": []})
        report_path = tmp_path / "r.json"
        code = main([
            "run", "--data", str(sample_path("auto_mpg")), "--script", script,
            "--report", str(report_path),
        ])
        assert code == 0
        report = json.loads(report_path.read_text())
        done = [s["step_id"] for s in report["steps"] if s["status"] == "done"]
        assert done == ["load_data"]

    def test_strict_exits_two_on_unresolved_violation(self, tmp_path):
        script = write_script(tmp_path, {
            "workflow": "linear_regression",
            "decisions": [
                {"submit": {"step": "select_dependent",
                            "inputs": {"column": "median_house_value"}}},
            ],
        })
        code = main([
            "run", "--data", str(sample_path("housing")), "--script", script,
            "--strict",
        ])
        assert code == 2

    def test_strict_passes_when_resolved(self, tmp_path):
        code = main([
            "run", "--data", str(sample_path("auto_mpg")), "--script", MPG_SCRIPT,
            "--strict",
        ])
        assert code == 0

    def test_schema_violation_aborts_naming_param(self, tmp_path, capsys):
        script = write_script(tmp_path, {
            "workflow": "two_sample_ttest",
            "decisions": [
                {"submit": {"step": "select_variable", "inputs": {"column": "nope"}}},
            ],
        })
        code = main(["run", "--data", str(sample_path("auto_mpg")), "--script", script])
        assert code == 1
        err = capsys.readouterr().err
        assert "select_variable" in err and "column" in err

    def test_model_before_fit_fails(self, tmp_path):
        script = write_script(tmp_path, {"workflow": "two_sample_ttest", "decisions": []})
        code = main([
            "run", "--data", str(sample_path("auto_mpg")), "--script", script,
            "--model", str(tmp_path / "m.json"),
        ])
        assert code == 1

    def test_json_output_parses(self, tmp_path, capsys):
        code = main([
            "run", "--data", str(sample_path("auto_mpg")), "--script", MPG_SCRIPT,
            "--json",
        ])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["session"]["active_step"] is None
        assert payload["report"]["workflow_id"] == "two_sample_ttest"

    def test_missing_file_exit_one(self, capsys):
        code = main(["run", "--data", "/nope.csv", "--script", MPG_SCRIPT])
        assert code == 1

    def test_seed_flag_fills_split_seed(self, tmp_path):
        script = write_script(tmp_path, {
            "workflow": "linear_regression",
            "decisions": [
                {"submit": {"step": "select_dependent",
                            "inputs": {"column": "median_house_value"}}},
                {"submit": {"step": "select_predictors",
                            "inputs": {"columns": ["median_income"]}}},
                {"submit": {"step": "split_data", "inputs": {"ratio": 0.8}}},
                {"submit": {"step": "specify_model", "inputs": {}}},
            ],
        })
        report_path = tmp_path / "r.json"
        code = main([
            "run", "--data", str(sample_path("housing")), "--script", script,
            "--seed", "7", "--report", str(report_path),
        ])
        assert code == 0
        report = json.loads(report_path.read_text())
        by_id = {s["step_id"]: s for s in report["steps"]}
        assert by_id["split_data"]["effective_inputs"]["seed"] == 7


class TestInteractive:
    def feed(self, lines):
        it = iter(lines)
        return lambda: next(it)

    def test_interactive_matches_scripted_report_bytes(self, tmp_path):
        scripted_path = tmp_path / "scripted.json"
        main([
            "run", "--data", str(sample_path("auto_mpg")), "--script", MPG_SCRIPT,
            "--report", str(scripted_path),
        ])

        interactive_path = tmp_path / "interactive.json"
        session = _make_session("two_sample_ttest", load_csv(str(sample_path("auto_mpg"))))
        lines = [
            "mpg",            # select_variable.column
            "",               # continue past outlier suggestions
            "origin", "US", "Europe",  # select_groups
            "1",              # apply the Levene preset suggestion
            "2",              # normality notice (group A)
            "3",              # normality notice (group B)
            "",               # continue
            "two-sided", "0.05", "",   # specify_test (flag left to preset)
            "",               # continue past evaluation output
            f"report {interactive_path}",
            "quit",
        ]
        out = []
        interactive_loop(session, in_fn=self.feed(lines), out_fn=out.append)
        assert scripted_path.read_bytes() == interactive_path.read_bytes()

    def test_invalid_column_reprompts(self):
        session = _make_session("two_sample_ttest", load_csv(str(sample_path("auto_mpg"))))
        lines = [
            "not_a_column",   # rejected, re-prompted
            "mpg",
            "",               # continue
            "quit",
        ]
        out = []
        interactive_loop(session, in_fn=self.feed(lines), out_fn=out.append)
        text = "\n".join(out)
        assert "invalid column" in text
        assert session.states[1].status == "done"

    def test_unknown_command_reprompts(self):
        session = _make_session("two_sample_ttest", load_csv(str(sample_path("auto_mpg"))))
        lines = ["mpg", "frobnicate", "", "quit"]
        out = []
        interactive_loop(session, in_fn=self.feed(lines), out_fn=out.append)
        assert any("unrecognized" in line for line in out)

    def test_selecting_numbered_column_advances(self):
        session = _make_session("two_sample_ttest", load_csv(str(sample_path("auto_mpg"))))
        # mpg is the first numeric column in the list
        lines = ["1", "", "quit"]
        out = []
        interactive_loop(session, in_fn=self.feed(lines), out_fn=out.append)
        assert session.states[1].effective_inputs == {"column": "mpg"}
