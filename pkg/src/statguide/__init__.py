"""statguide: a guided statistical analysis engine.

Stepwise workflows (linear regression, two-sample t-test) that walk an
analyst through input decisions, verify model assumptions automatically,
explain every step, and suggest concrete remediations when an assumption
is violated.
"""

from .dataset import (
    CATEGORICAL,
    NUMERIC,
    Column,
    Dataset,
    DensityCurve,
    HistogramData,
    Predicate,
    SummaryStats,
    column_summary,
    histogram,
    kde,
    load_csv,
    quantile,
)
from .engine import Session, WorkflowDef, replay
from .errors import (
    ColumnTypeError,
    CsvFormatError,
    DataError,
    DegenerateDataError,
    LifecycleError,
    SchemaError,
    SingularDesignError,
    StatGuideError,
    UnknownIdError,
)
from .exporter import CodeSnippet, render_report_json, render_report_text, render_snippet
from .kernel import (
    LeveneResult,
    NormalityReport,
    OutlierReport,
    RegressionModel,
    TTestResult,
    VifEntry,
    iqr_outliers,
    levene_test,
    mean_difference_summary,
    normality_check,
    ols_fit,
    two_sample_ttest,
    vif,
)
from .special import f_cdf, reg_incomplete_beta, t_cdf, t_quantile
from .workflows import create_session, get_workflow, list_workflows, sample_path

__version__ = "0.1.0"

__all__ = [
    "CATEGORICAL",
    "NUMERIC",
    "Column",
    "Dataset",
    "DensityCurve",
    "HistogramData",
    "Predicate",
    "SummaryStats",
    "column_summary",
    "histogram",
    "kde",
    "load_csv",
    "quantile",
    "Session",
    "WorkflowDef",
    "replay",
    "ColumnTypeError",
    "CsvFormatError",
    "DataError",
    "DegenerateDataError",
    "LifecycleError",
    "SchemaError",
    "SingularDesignError",
    "StatGuideError",
    "UnknownIdError",
    "CodeSnippet",
    "render_report_json",
    "render_report_text",
    "render_snippet",
    "LeveneResult",
    "NormalityReport",
    "OutlierReport",
    "RegressionModel",
    "TTestResult",
    "VifEntry",
    "iqr_outliers",
    "levene_test",
    "mean_difference_summary",
    "normality_check",
    "ols_fit",
    "two_sample_ttest",
    "vif",
    "f_cdf",
    "reg_incomplete_beta",
    "t_cdf",
    "t_quantile",
    "create_session",
    "get_workflow",
    "list_workflows",
    "sample_path",
]
