"""The bundled workflow library: step bindings plus the declarative
definitions for the linear-regression and two-sample t-test workflows.

Step definitions (schemas, explanation texts, suggestion rules) load from
``data/workflows.json``; the functions here are the compute bindings those
definitions name. Bindings are pure functions of (dataset, resolved args)
and return JSON-safe output dicts.
"""

from __future__ import annotations

import json
import math
from functools import lru_cache
from importlib import resources

import numpy as np

from . import kernel
from .dataset import Dataset, column_summary, histogram, kde
from .engine import (
    Explanation,
    ParamSpec,
    Session,
    StepDef,
    SuggestionSpec,
    WorkflowDef,
)
from .errors import DataError, UnknownIdError

#: An assumption step reports "violated" when more than this fraction of a
#: column's values fall outside the IQR fences.
OUTLIER_FRACTION_THRESHOLD = 0.05

#: VIF above this is flagged as significant multicollinearity.
VIF_THRESHOLD = 10.0


# -- shared helpers ------------------------------------------------------------


def _group_values(dataset: Dataset, value_column: str, group_column: str, group_value):
    """Non-missing values of ``value_column`` on rows matching the group."""
    vals = dataset.numeric_values(value_column)
    col = dataset.column(group_column)
    if col.dtype == "numeric":
        mask = col.values == float(group_value)
    else:
        mask = np.array([v == group_value for v in col.values], dtype=bool)
    out = vals[mask]
    return out[~np.isnan(out)]


def _outlier_payload(dataset: Dataset, column: str) -> dict:
    vals = dataset.numeric_values(column)
    report = kernel.iqr_outliers(vals)
    n = int((~np.isnan(vals)).sum())
    fraction = report.outlier_count / n
    return {
        "column": column,
        "n": n,
        "report": report.to_dict(),
        "outlier_count": report.outlier_count,
        "outlier_fraction": fraction,
        "verdict": "violated" if fraction > OUTLIER_FRACTION_THRESHOLD else "pass",
    }


# -- step bindings ----------------------------------------------------------------


def dataset_overview(dataset: Dataset) -> dict:
    # lineage metadata (version, provenance) is session-level, not a step
    # result: re-importing identical data must give identical step outputs
    overview = dataset.overview()
    return {k: overview[k] for k in ("row_count", "columns", "preview")}


def echo_selection(dataset: Dataset, **selected) -> dict:
    return {"selected": selected}


def select_column(dataset: Dataset, column: str) -> dict:
    summary = column_summary(dataset, column)
    return {"column": column, "summary": summary.to_dict()}


def outlier_check(dataset: Dataset, column: str) -> dict:
    """Outlier screen for a single variable with plot data."""
    payload = _outlier_payload(dataset, column)
    vals = dataset.numeric_values(column)
    clean = vals[~np.isnan(vals)]
    summary = column_summary(dataset, column)
    payload["histogram"] = histogram(clean).to_dict()
    payload["summary"] = summary.to_dict()
    payload["box"] = {
        "q1": payload["report"]["q1"],
        "median": summary.median,
        "q3": payload["report"]["q3"],
        "lower_fence": payload["report"]["lower_fence"],
        "upper_fence": payload["report"]["upper_fence"],
    }
    return payload


def multi_outlier_check(dataset: Dataset, columns: list[str]) -> dict:
    """Per-variable outlier screen over the selected predictors."""
    reports = []
    for name in columns:
        p = _outlier_payload(dataset, name)
        reports.append({
            "variable": name,
            "outlier_count": p["outlier_count"],
            "outlier_fraction": p["outlier_fraction"],
            "report": p["report"],
        })
    offending = [r["variable"] for r in reports
                 if r["outlier_fraction"] > OUTLIER_FRACTION_THRESHOLD]
    worst = max(reports, key=lambda r: r["outlier_fraction"])
    return {
        "columns": list(columns),
        "reports": reports,
        "offending": offending,
        "offending_text": ", ".join(offending) if offending else "none",
        "worst_variable": worst["variable"],
        "worst_fraction_pct": worst["outlier_fraction"] * 100.0,
        "verdict": "violated" if offending else "pass",
    }


def _complete_rows(dataset: Dataset, columns: list[str]):
    """Column arrays restricted to rows complete in all ``columns``."""
    arrays = {name: dataset.numeric_values(name) for name in columns}
    mask = np.ones(dataset.row_count, dtype=bool)
    for a in arrays.values():
        mask &= ~np.isnan(a)
    dropped = int(dataset.row_count - mask.sum())
    return {name: a[mask] for name, a in arrays.items()}, dropped


def vif_check(dataset: Dataset, columns: list[str]) -> dict:
    """Variance inflation factors over the selected predictors."""
    if len(columns) < 2:
        return {
            "columns": list(columns),
            "entries": [],
            "max_vif": None,
            "max_vif_variable": None,
            "max_vif_text": "n/a",
            "rows_dropped_missing": 0,
            "threshold": VIF_THRESHOLD,
            "verdict": "pass",
            "note": "only one predictor selected; multicollinearity does not apply",
        }
    arrays, dropped = _complete_rows(dataset, columns)
    entries = kernel.vif(arrays)
    worst = max(entries, key=lambda e: e.vif)
    violated = any(e.vif > VIF_THRESHOLD for e in entries)
    if violated:
        interpretation = (
            "high VIF values indicate significant multicollinearity, though the "
            "results may still be valid depending on the context"
        )
    else:
        interpretation = "no significant multicollinearity between the selected variables"
    return {
        "columns": list(columns),
        "entries": [e.to_dict() for e in entries],
        "max_vif": None if worst.is_infinite else worst.vif,
        "max_vif_variable": worst.variable,
        "max_vif_text": "infinite" if worst.is_infinite else f"{worst.vif:.2f}",
        "rows_dropped_missing": dropped,
        "threshold": VIF_THRESHOLD,
        "verdict": "violated" if violated else "pass",
        "interpretation": interpretation,
    }


def split_preview(dataset: Dataset, ratio: float, seed: int) -> dict:
    n = dataset.row_count
    return {
        "ratio": ratio,
        "seed": seed,
        "n_rows": n,
        "n_train": math.floor(ratio * n),
        "n_test": n - math.floor(ratio * n),
    }


def group_select(dataset: Dataset, value_column: str, group_column: str,
                 group_a, group_b) -> dict:
    """Validate the two comparison groups and report their sizes."""
    if group_a == group_b:
        raise DataError("the two groups must be different values")
    a = _group_values(dataset, value_column, group_column, group_a)
    b = _group_values(dataset, value_column, group_column, group_b)
    if a.size < 2 or b.size < 2:
        raise DataError(
            f"each group needs at least 2 observations of {value_column!r}; "
            f"got {a.size} for {group_a!r} and {b.size} for {group_b!r}"
        )
    return {
        "value_column": value_column,
        "group_column": group_column,
        "group_a": group_a,
        "group_b": group_b,
        "n_a": int(a.size),
        "n_b": int(b.size),
    }


def levene_check(dataset: Dataset, value_column: str, group_column: str,
                 group_a, group_b, center: str = "median",
                 alpha: float = 0.05) -> dict:
    """Homogeneity of variance between the two groups, with density plots."""
    a = _group_values(dataset, value_column, group_column, group_a)
    b = _group_values(dataset, value_column, group_column, group_b)
    result = kernel.levene_test(a, b, center=center)
    plausible = result.p >= alpha
    return {
        "value_column": value_column,
        "group_a": group_a,
        "group_b": group_b,
        "n_a": int(a.size),
        "n_b": int(b.size),
        "levene": result.to_dict(),
        "alpha": alpha,
        "equal_variances_plausible": plausible,
        "density_a": kde(a).to_dict(),
        "density_b": kde(b).to_dict(),
        "verdict": "pass" if plausible else "violated",
    }


def normality_group(dataset: Dataset, value_column: str, group_column: str,
                    group_value, other_value) -> dict:
    """Normality report for one group, with the other group's size for context."""
    vals = _group_values(dataset, value_column, group_column, group_value)
    other = _group_values(dataset, value_column, group_column, other_value)
    report = kernel.normality_check(vals)
    n_other = int(other.size)
    if report.large_sample and n_other > kernel.LARGE_SAMPLE_THRESHOLD:
        robust_case = "both"
    elif report.large_sample:
        robust_case = "own"
    else:
        robust_case = "none"
    return {
        "value_column": value_column,
        "group_value": group_value,
        "n": report.n,
        "n_other": n_other,
        "normality": report.to_dict(),
        "large_sample": report.large_sample,
        "robust_case": robust_case,
        "density": kde(vals).to_dict(),
        "verdict": "pass" if report.large_sample else "violated",
    }


def ttest_eval(dataset: Dataset, value_column: str, group_column: str,
               group_a, group_b, alternative: str, alpha: float,
               equal_variance: bool) -> dict:
    """Run the t-test and present the result with mean-difference plot data."""
    a = _group_values(dataset, value_column, group_column, group_a)
    b = _group_values(dataset, value_column, group_column, group_b)
    result = kernel.two_sample_ttest(
        a, b, equal_variance=equal_variance, alternative=alternative, alpha=alpha
    )
    diff = kernel.mean_difference_summary(a, b, equal_variance=equal_variance)
    decision = "rejected" if result.reject_null else "not rejected"
    interpretation = (
        f"The mean {value_column} is {result.mean_a:.4g} for {group_a} and "
        f"{result.mean_b:.4g} for {group_b} (difference {result.mean_diff:.4g}). "
        f"With t = {result.t:.4f} and p = {result.p:.3g}, the null hypothesis of "
        f"equal means is {decision} at alpha = {alpha:g}."
    )
    return {
        "value_column": value_column,
        "group_a": group_a,
        "group_b": group_b,
        "ttest": result.to_dict(),
        "mean_difference": diff,
        "interpretation": interpretation,
    }


def regression_eval(dataset: Dataset, response: str, predictors: list[str],
                    ratio: float, seed: int, intercept: bool) -> dict:
    """Fit on the training partition and present coefficients and fit quality."""
    if response in predictors:
        raise DataError("the response cannot also be a predictor")
    involved = [response] + list(predictors)
    arrays, dropped = _complete_rows(dataset, involved)
    n_complete = arrays[response].size
    if n_complete <= len(predictors) + (1 if intercept else 0):
        raise DataError("not enough complete rows to fit the model")
    # split the complete rows deterministically, then fit on the train side
    perm = np.random.default_rng(int(seed)).permutation(n_complete)
    n_train = math.floor(ratio * n_complete)
    train_idx = np.sort(perm[:n_train])
    test_idx = np.sort(perm[n_train:])
    x_train = {name: arrays[name][train_idx] for name in predictors}
    y_train = arrays[response][train_idx]
    model = kernel.ols_fit(x_train, y_train, intercept=intercept)

    heldout = None
    if test_idx.size >= 2:
        y_test = arrays[response][test_idx]
        pred = model.predict({name: arrays[name][test_idx] for name in predictors})
        rss = float(((y_test - pred) ** 2).sum())
        tss = float(((y_test - y_test.mean()) ** 2).sum())
        heldout = 1.0 - rss / tss if tss > 0 else None

    signs = []
    for t in model.terms:
        if t.name == "intercept":
            continue
        direction = "increases" if t.coefficient > 0 else "decreases"
        signs.append(f"{response} {direction} as {t.name} increases "
                     f"(coefficient {t.coefficient:.4g})")
    interpretation = (
        f"R^2 = {model.r_squared:.3f}: about {model.r_squared * 100:.1f}% of the "
        f"variance in {response} is explained by the selected variables. "
        + "; ".join(signs) + "."
    )
    return {
        "response": response,
        "predictors": list(predictors),
        "rows_dropped_missing": dropped,
        "n_train": int(n_train),
        "n_test": int(test_idx.size),
        "model": model.to_dict(),
        "heldout_r_squared": heldout,
        "interpretation": interpretation,
    }


REGISTRY = {
    "dataset_overview": dataset_overview,
    "echo_selection": echo_selection,
    "select_column": select_column,
    "outlier_check": outlier_check,
    "multi_outlier_check": multi_outlier_check,
    "vif_check": vif_check,
    "split_preview": split_preview,
    "group_select": group_select,
    "levene_check": levene_check,
    "normality_group": normality_group,
    "ttest_eval": ttest_eval,
    "regression_eval": regression_eval,
}


# -- loading the declarative definitions ----------------------------------------


def _parse_step(raw: dict) -> StepDef:
    schema = tuple(
        ParamSpec(
            name=p["name"],
            kind=p["kind"],
            required=p.get("required", True),
            default=p.get("default"),
            choices=tuple(p["choices"]) if p.get("choices") else None,
            constraints=p.get("constraints", {}),
        )
        for p in raw.get("input_schema", [])
    )
    suggestions = tuple(
        SuggestionSpec(s["id"], s["when"], s["message"], s["action"])
        for s in raw.get("suggestions", [])
    )
    explanation = Explanation(
        objective=raw["explanation"]["objective"],
        concepts=raw["explanation"]["concepts"],
        suggestion_templates=suggestions,
    )
    compute = raw["compute"]
    if compute["fn"] not in REGISTRY:
        raise DataError(f"step {raw['id']!r} names unknown binding {compute['fn']!r}")
    return StepDef(
        id=raw["id"],
        kind=raw["kind"],
        title=raw["title"],
        explanation=explanation,
        input_schema=schema,
        compute_fn=compute["fn"],
        compute_args=compute.get("args", {}),
    )


@lru_cache(maxsize=1)
def load_workflows() -> dict[str, WorkflowDef]:
    """Parse and validate the bundled workflow definitions."""
    from .exporter import template_registry

    text = (resources.files("statguide") / "data" / "workflows.json").read_text("utf-8")
    doc = json.loads(text)
    templates = template_registry()
    out: dict[str, WorkflowDef] = {}
    for raw in doc["workflows"]:
        steps = tuple(_parse_step(s) for s in raw["steps"])
        wf = WorkflowDef(
            id=raw["id"],
            name=raw["name"],
            steps=steps,
            model_output_key=raw.get("model_output_key", "model"),
        )
        for step in steps:
            for spec in step.explanation.suggestion_templates:
                action = spec.action
                if action.get("type") == "emit_snippet":
                    if action.get("template_id") not in templates:
                        raise DataError(
                            f"suggestion {spec.id!r} names unknown template "
                            f"{action.get('template_id')!r}"
                        )
        out[wf.id] = wf
    return out


def get_workflow(workflow_id: str) -> WorkflowDef:
    workflows = load_workflows()
    if workflow_id not in workflows:
        raise UnknownIdError(f"unknown workflow {workflow_id!r}")
    return workflows[workflow_id]


def list_workflows() -> list[dict]:
    return [wf.summary() for wf in load_workflows().values()]


def create_session(workflow_id: str, dataset: Dataset,
                   load_options: dict | None = None) -> Session:
    return Session(get_workflow(workflow_id), dataset, REGISTRY,
                   load_options=load_options)


def sample_path(name: str):
    """Path to a bundled sample dataset by short name."""
    samples = {"housing": "housing.csv", "auto_mpg": "auto_mpg.csv"}
    if name not in samples:
        raise UnknownIdError(f"unknown sample dataset {name!r}")
    return resources.files("statguide") / "data" / "samples" / samples[name]
