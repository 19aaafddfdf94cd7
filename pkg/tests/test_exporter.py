"""Tests for snippet rendering and report serialization."""

import json

import pytest

from statguide import (
    DataError,
    UnknownIdError,
    create_session,
    render_report_json,
    render_report_text,
    render_snippet,
)
from statguide.exporter import template_registry
from statguide.workflows import get_workflow


class TestSnippets:
    def test_registry_ships_four_templates(self):
        assert set(template_registry()) == {
            "descriptive-analysis",
            "drop-outlier-rows",
            "log-transform",
            "drop-highest-vif",
        }

    def test_descriptive_mentions_column_verbatim(self):
        s = render_snippet("descriptive-analysis", {"column": "median_house_value"})
        assert "median_house_value" in s.rendered_text
        assert "{" not in s.rendered_text

    def test_drop_outlier_rows_binds_fences(self):
        s = render_snippet(
            "drop-outlier-rows",
            {"column": "x", "lower_fence": -1.5, "upper_fence": 2.5},
        )
        assert "-1.5" in s.rendered_text and "2.5" in s.rendered_text

    def test_drop_highest_vif_names_variable(self):
        s = render_snippet("drop-highest-vif", {"variable": "avg_rooms"})
        assert "avg_rooms" in s.rendered_text

    def test_unbound_slot_named_in_error(self):
        with pytest.raises(DataError, match="lower_fence"):
            render_snippet("drop-outlier-rows", {"column": "x", "upper_fence": 1})

    def test_unknown_template(self):
        with pytest.raises(UnknownIdError):
            render_snippet("nope", {})

    def test_rendering_deterministic(self):
        a = render_snippet("log-transform", {"column": "v"})
        b = render_snippet("log-transform", {"column": "v"})
        assert a == b

    def test_every_reachable_emit_snippet_is_registered(self):
        registry = template_registry()
        for wid in ("linear_regression", "two_sample_ttest"):
            for step in get_workflow(wid).steps:
                for spec in step.explanation.suggestion_templates:
                    if spec.action["type"] == "emit_snippet":
                        assert spec.action["template_id"] in registry


class TestReports:
    def _session(self, auto_mpg):
        s = create_session("two_sample_ttest", auto_mpg)
        s.submit_inputs("select_variable", {"column": "mpg"})
        s.submit_inputs("select_groups",
                        {"column": "origin", "group_a": "US", "group_b": "Europe"})
        s.apply_action("variance_homogeneity",
                       s.states[4].active_suggestions[0]["id"])
        s.submit_inputs("specify_test", {})
        return s

    def test_completed_ttest_report_contents(self, auto_mpg):
        s = self._session(auto_mpg)
        report = render_report_json(s)
        text = render_report_text(report)
        assert "Levene" in text
        assert "t = -8.91" in text
        by_id = {st["step_id"]: st for st in report["steps"]}
        assert by_id["variance_homogeneity"]["outputs"]["levene"]["p"] == pytest.approx(0.90, abs=0.03)
        assert by_id["normality_a"]["outputs"]["large_sample"]
        assert by_id["normality_b"]["outputs"]["large_sample"]
        assert report["final_results"]["ttest"]["t"] == pytest.approx(-8.9147, abs=0.01)

    def test_text_stable_under_rerendering(self, auto_mpg):
        s = self._session(auto_mpg)
        report = render_report_json(s)
        assert render_report_text(report) == render_report_text(report)
        again = render_report_json(s)
        assert render_report_text(report) == render_report_text(again)

    def test_json_round_trips(self, auto_mpg):
        s = self._session(auto_mpg)
        report = render_report_json(s)
        once = json.dumps(report, sort_keys=True)
        assert json.dumps(json.loads(once), sort_keys=True) == once

    def test_fresh_session_report_step_one_only(self, auto_mpg):
        s = create_session("two_sample_ttest", auto_mpg)
        report = render_report_json(s)
        done = [st["step_id"] for st in report["steps"] if st["status"] == "done"]
        assert done == ["load_data"]
        render_report_text(report)  # renders without error
