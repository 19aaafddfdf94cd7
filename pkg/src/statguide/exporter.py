"""Rendering of code snippets, session reports, and the serialized model.

Snippet bodies live in a JSON registry bundled with the package; they are
written in a neutral dataframe-scripting idiom and can be swapped without
touching engine code.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import DataError, UnknownIdError


@dataclass(frozen=True)
class SnippetTemplate:
    template_id: str
    slots: tuple[str, ...]
    body: str

    def __post_init__(self):
        placeholders = {
            name for _, name, _, _ in string.Formatter().parse(self.body) if name
        }
        undeclared = placeholders - set(self.slots)
        if undeclared:
            raise DataError(
                f"template {self.template_id!r} uses undeclared slot(s): "
                + ", ".join(sorted(undeclared))
            )


@dataclass(frozen=True)
class CodeSnippet:
    template_id: str
    rendered_text: str
    bindings: dict

    def to_dict(self) -> dict:
        return {
            "template_id": self.template_id,
            "rendered_text": self.rendered_text,
            "bindings": dict(self.bindings),
        }


def _data_text(name: str) -> str:
    return (resources.files("statguide") / "data" / name).read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def template_registry() -> dict[str, SnippetTemplate]:
    doc = json.loads(_data_text("templates.json"))
    registry = {}
    for entry in doc["templates"]:
        t = SnippetTemplate(entry["template_id"], tuple(entry["slots"]), entry["body"])
        registry[t.template_id] = t
    return registry


def render_snippet(template_id: str, bindings: dict) -> CodeSnippet:
    """Render a registered template with every slot bound."""
    registry = template_registry()
    if template_id not in registry:
        raise UnknownIdError(f"unknown snippet template {template_id!r}")
    template = registry[template_id]
    missing = [s for s in template.slots if s not in bindings]
    if missing:
        raise DataError(
            f"template {template_id!r} is missing binding(s): " + ", ".join(missing)
        )
    text = template.body.format(**{k: str(v) for k, v in bindings.items()})
    return CodeSnippet(template_id, text, dict(bindings))


# -- report rendering -------------------------------------------------------------


def render_report_json(session) -> dict:
    return session.export_report()


def render_report_text(report: dict) -> str:
    """Deterministic human-readable rendering of a report document."""
    lines = []
    out = lines.append
    out(f"Report: {report['workflow_name']}")
    out(f"Session: {report['session_id']}")
    ds = report["dataset"]
    out(f"Dataset: version {ds['version']}, {ds['row_count']} rows")
    for note in ds["provenance"]:
        out(f"  - {note}")
    out("")
    for step in report["steps"]:
        out(f"[{step['status'].upper()}] {step['title']} ({step['kind']})")
        if step["inputs"]:
            out(f"  inputs: {json.dumps(step['inputs'], sort_keys=True)}")
        if step["assumption_outcome"]:
            out(f"  assumption: {step['assumption_outcome']}")
        if step["actions_taken"]:
            out(f"  actions taken: {', '.join(step['actions_taken'])}")
        for line in _result_lines(step):
            out(f"  {line}")
        out("")
    if report["unresolved_violations"]:
        out("Unresolved assumption violations: " + ", ".join(report["unresolved_violations"]))
    else:
        out("No unresolved assumption violations.")
    final = report.get("final_results")
    if final:
        out("")
        out("Final results:")
        for line in _final_lines(final):
            out(f"  {line}")
    return "\n".join(lines) + "\n"


def _fmt_num(v) -> str:
    if v is None:
        return "inf"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _result_lines(step: dict) -> list[str]:
    outputs = step.get("outputs") or {}
    lines = []
    if "outlier_count" in outputs:
        lines.append(f"outliers: {outputs['outlier_count']}"
                     f" ({outputs.get('outlier_fraction', 0) * 100:.2f}% of rows)")
    if "reports" in outputs:
        for r in outputs["reports"]:
            lines.append(
                f"{r['variable']}: {r['outlier_count']} outliers"
                f" ({r['outlier_fraction'] * 100:.2f}%)"
            )
    if "entries" in outputs:
        for e in outputs["entries"]:
            lines.append(f"VIF {e['variable']}: {_fmt_num(e['vif'])}")
    if "levene" in outputs:
        lv = outputs["levene"]
        lines.append(f"Levene W = {_fmt_num(lv['w'])}, p = {_fmt_num(lv['p'])}"
                     f" ({lv['center']}-centered)")
    if "normality" in outputs:
        nr = outputs["normality"]
        lines.append(
            f"n = {nr['n']}, skewness = {_fmt_num(nr['skewness'])}, "
            f"excess kurtosis = {_fmt_num(nr['excess_kurtosis'])}, "
            f"large sample: {nr['large_sample']}"
        )
    return lines


def _final_lines(final: dict) -> list[str]:
    lines = []
    if "model" in final:
        m = final["model"]
        lines.append(f"R^2 = {_fmt_num(m['r_squared'])}, "
                     f"adjusted R^2 = {_fmt_num(m['adj_r_squared'])}, "
                     f"n = {m['n_obs']}")
        if final.get("heldout_r_squared") is not None:
            lines.append(f"held-out R^2 = {_fmt_num(final['heldout_r_squared'])}")
        for t in m["terms"]:
            lines.append(
                f"{t['name']}: coef = {_fmt_num(t['coefficient'])}, "
                f"se = {_fmt_num(t['std_error'])}, t = {_fmt_num(t['t_value'])}, "
                f"p = {_fmt_num(t['p_value'])}"
            )
    if "ttest" in final:
        t = final["ttest"]
        lines.append(
            f"t = {_fmt_num(t['t'])}, df = {_fmt_num(t['df'])}, p = {_fmt_num(t['p'])}"
        )
        lines.append(
            f"mean difference = {_fmt_num(t['mean_diff'])} "
            f"(95% CI [{_fmt_num(t['ci_low'])}, {_fmt_num(t['ci_high'])}])"
        )
        lines.append(f"reject null at alpha={_fmt_num(t['alpha'])}: {t['reject_null']}")
    if "interpretation" in final:
        lines.append(final["interpretation"])
    return lines
