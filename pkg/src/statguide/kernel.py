"""Numerical statistics kernel: IQR outlier detection, OLS regression, VIF,
two-sample t-tests, Levene's test, and moment-based normality reporting.

All functions are pure. Single-sample operations skip missing (nan) values;
the regression-style operations require callers to have dropped incomplete
rows already, because silently dropping per column would misalign rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import quantile
from .errors import DataError, DegenerateDataError, SingularDesignError
from .special import f_sf, t_cdf, t_quantile, t_sf

#: Relative pivot magnitude below which a design matrix counts as rank deficient.
RANK_TOLERANCE = 1e-10

#: An auxiliary R^2 within this distance of 1 marks a VIF as infinite.
VIF_R2_TOLERANCE = 1e-12


def _clean(values) -> np.ndarray:
    v = np.asarray(values, dtype=float).ravel()
    return v[~np.isnan(v)]


# -- outliers -----------------------------------------------------------------


@dataclass(frozen=True)
class OutlierReport:
    q1: float
    q3: float
    iqr: float
    lower_fence: float
    upper_fence: float
    outlier_count: int
    outlier_row_indices: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "q1": self.q1,
            "q3": self.q3,
            "iqr": self.iqr,
            "lower_fence": self.lower_fence,
            "upper_fence": self.upper_fence,
            "outlier_count": self.outlier_count,
            "outlier_row_indices": list(self.outlier_row_indices),
        }


def iqr_outliers(values) -> OutlierReport:
    """Flag values strictly outside [Q1 - 1.5*IQR, Q3 + 1.5*IQR].

    Quartiles use the same linear-interpolation convention as
    ``dataset.quantile``. Indices refer to positions in the input sequence;
    missing values are skipped but keep their positions.
    """
    v = np.asarray(values, dtype=float).ravel()
    present = ~np.isnan(v)
    clean = v[present]
    if clean.size < 4:
        raise DataError(f"outlier check needs at least 4 values, got {clean.size}")
    q1 = quantile(clean, 0.25)
    q3 = quantile(clean, 0.75)
    iqr = q3 - q1
    lo = q1 - 1.5 * iqr
    hi = q3 + 1.5 * iqr
    flagged = present & ((v < lo) | (v > hi))
    idx = tuple(int(i) for i in np.nonzero(flagged)[0])
    return OutlierReport(q1, q3, iqr, lo, hi, len(idx), idx)


# -- ordinary least squares -----------------------------------------------------


@dataclass(frozen=True)
class TermStats:
    name: str
    coefficient: float
    std_error: float
    t_value: float
    p_value: float

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "coefficient": self.coefficient,
            "std_error": self.std_error,
            "t_value": self.t_value,
            "p_value": self.p_value,
        }


@dataclass(frozen=True)
class RegressionModel:
    terms: tuple[TermStats, ...]
    has_intercept: bool
    r_squared: float
    adj_r_squared: float
    n_obs: int
    df_resid: int

    @property
    def coefficients(self) -> dict[str, float]:
        return {t.name: t.coefficient for t in self.terms}

    def predict(self, predictors: dict[str, np.ndarray]) -> np.ndarray:
        names = [t.name for t in self.terms if t.name != "intercept"]
        cols = [np.asarray(predictors[n], dtype=float) for n in names]
        n = len(cols[0]) if cols else 0
        out = np.zeros(n)
        if self.has_intercept:
            out += self.coefficients["intercept"]
        for name, col in zip(names, cols):
            out = out + self.coefficients[name] * col
        return out

    def to_dict(self) -> dict:
        return {
            "terms": [t.to_dict() for t in self.terms],
            "has_intercept": self.has_intercept,
            "r_squared": self.r_squared,
            "adj_r_squared": self.adj_r_squared,
            "n_obs": self.n_obs,
            "df_resid": self.df_resid,
        }


def _design_matrix(predictors: dict[str, np.ndarray], intercept: bool):
    names = list(predictors.keys())
    cols = [np.asarray(predictors[n], dtype=float).ravel() for n in names]
    if not cols:
        raise DataError("regression needs at least one predictor")
    n = cols[0].size
    for name, c in zip(names, cols):
        if c.size != n:
            raise DataError(f"predictor {name!r} has length {c.size}, expected {n}")
        if np.isnan(c).any():
            raise DataError(
                f"predictor {name!r} contains missing values; drop incomplete rows first"
            )
    if intercept:
        names = ["intercept"] + names
        cols = [np.ones(n)] + cols
    return names, np.column_stack(cols)


def _check_rank(names: list[str], a: np.ndarray, r: np.ndarray) -> None:
    norms = np.sqrt((a * a).sum(axis=0))
    bad = [
        names[j]
        for j in range(a.shape[1])
        if abs(r[j, j]) < RANK_TOLERANCE * max(norms[j], 1e-30)
    ]
    if bad:
        raise SingularDesignError(
            "design matrix is rank deficient; linearly dependent column(s): "
            + ", ".join(bad),
            columns=tuple(bad),
        )


def ols_fit(
    predictors: dict[str, np.ndarray], response, intercept: bool = True
) -> RegressionModel:
    """Least-squares fit via QR decomposition.

    Standard errors come from sigma^2 * (X'X)^-1 with sigma^2 = RSS/df_resid;
    p-values are two-sided Student-t. R^2 uses the centered total sum of
    squares when an intercept is present and the uncentered one otherwise.
    """
    y = np.asarray(response, dtype=float).ravel()
    if np.isnan(y).any():
        raise DataError("response contains missing values; drop incomplete rows first")
    names, a = _design_matrix(predictors, intercept)
    n, p = a.shape
    if y.size != n:
        raise DataError(f"response has length {y.size}, expected {n}")
    if n <= p:
        raise DataError(f"need more observations ({n}) than terms ({p})")

    q, r = np.linalg.qr(a, mode="reduced")
    _check_rank(names, a, r)
    beta = np.linalg.solve(r, q.T @ y)
    resid = y - a @ beta
    rss = float(resid @ resid)
    df_resid = n - p
    sigma2 = rss / df_resid
    r_inv = np.linalg.inv(r)
    cov_unscaled = r_inv @ r_inv.T
    se = np.sqrt(np.maximum(sigma2 * np.diag(cov_unscaled), 0.0))

    terms = []
    for name, b, s in zip(names, beta, se):
        if s > 0:
            t = float(b / s)
            pval = min(2.0 * t_sf(abs(t), df_resid), 1.0)
        else:  # perfect fit: no residual variance
            t = math.inf if b > 0 else (-math.inf if b < 0 else 0.0)
            pval = 1.0 if b == 0 else 0.0
        terms.append(TermStats(name, float(b), float(s), t, pval))

    if intercept:
        tss = float(((y - y.mean()) ** 2).sum())
    else:
        tss = float(y @ y)
    if tss > 0:
        r2 = 1.0 - rss / tss
    else:
        r2 = 1.0 if rss <= 1e-30 else 0.0
    scale = (n - 1) if intercept else n
    adj = 1.0 - (1.0 - r2) * scale / df_resid
    return RegressionModel(tuple(terms), intercept, float(r2), float(adj), n, df_resid)


# -- variance inflation factors ---------------------------------------------------


@dataclass(frozen=True)
class VifEntry:
    variable: str
    vif: float  # math.inf marks perfect collinearity

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.vif)

    def to_dict(self) -> dict:
        return {
            "variable": self.variable,
            "vif": None if self.is_infinite else self.vif,
            "infinite": self.is_infinite,
        }


def vif(predictors: dict[str, np.ndarray], intercept: bool = False) -> list[VifEntry]:
    """Variance inflation factors from auxiliary regressions.

    Each predictor is regressed on all the others. With ``intercept=False``
    (the default) the auxiliary fit has no constant term and R^2 is computed
    against the uncentered total sum of squares, which is the convention many
    deployed analyses use on raw, uncentered data; ``intercept=True`` gives
    the textbook centered variant. An auxiliary R^2 of 1 (within tolerance)
    reports an infinite VIF.
    """
    names = list(predictors.keys())
    if len(names) < 2:
        raise DataError(f"vif needs at least 2 predictors, got {len(names)}")
    cols = {}
    n = None
    for name in names:
        c = np.asarray(predictors[name], dtype=float).ravel()
        if np.isnan(c).any():
            raise DataError(
                f"predictor {name!r} contains missing values; drop incomplete rows first"
            )
        if n is None:
            n = c.size
        elif c.size != n:
            raise DataError(f"predictor {name!r} has length {c.size}, expected {n}")
        cols[name] = c

    entries = []
    for name in names:
        yj = cols[name]
        others = np.column_stack([cols[m] for m in names if m != name])
        if intercept:
            others = np.column_stack([np.ones(n), others])
            tss = float(((yj - yj.mean()) ** 2).sum())
        else:
            tss = float(yj @ yj)
        beta, *_ = np.linalg.lstsq(others, yj, rcond=None)
        resid = yj - others @ beta
        rss = float(resid @ resid)
        if tss <= 0:
            entries.append(VifEntry(name, math.inf))
            continue
        r2 = 1.0 - rss / tss
        if r2 >= 1.0 - VIF_R2_TOLERANCE:
            entries.append(VifEntry(name, math.inf))
        else:
            entries.append(VifEntry(name, float(max(1.0 / (1.0 - r2), 1.0))))
    return entries


# -- two-sample t-test -----------------------------------------------------------

ALTERNATIVES = ("two-sided", "less", "greater")


@dataclass(frozen=True)
class TTestResult:
    t: float
    df: float
    p: float
    mean_a: float
    mean_b: float
    mean_diff: float
    ci_low: float
    ci_high: float
    alternative: str
    equal_variance: bool
    alpha: float
    reject_null: bool

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "df": self.df,
            "p": self.p,
            "mean_a": self.mean_a,
            "mean_b": self.mean_b,
            "mean_diff": self.mean_diff,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "alternative": self.alternative,
            "equal_variance": self.equal_variance,
            "alpha": self.alpha,
            "reject_null": self.reject_null,
        }


def _diff_machinery(a, b, equal_variance: bool):
    """Means, standard error of the mean difference, and degrees of freedom."""
    xa, xb = _clean(a), _clean(b)
    if xa.size < 2 or xb.size < 2:
        raise DataError(
            f"each group needs at least 2 values, got {xa.size} and {xb.size}"
        )
    na, nb = xa.size, xb.size
    ma, mb = float(xa.mean()), float(xb.mean())
    va, vb = float(xa.var(ddof=1)), float(xb.var(ddof=1))
    if equal_variance:
        df = float(na + nb - 2)
        sp2 = ((na - 1) * va + (nb - 1) * vb) / df
        se = math.sqrt(sp2 * (1.0 / na + 1.0 / nb))
    else:
        sa, sb = va / na, vb / nb
        se = math.sqrt(sa + sb)
        if sa + sb > 0:
            df = (sa + sb) ** 2 / (sa * sa / (na - 1) + sb * sb / (nb - 1))
        else:
            df = float(na + nb - 2)
    return ma, mb, se, df


def two_sample_ttest(
    a,
    b,
    equal_variance: bool = False,
    alternative: str = "two-sided",
    alpha: float = 0.05,
) -> TTestResult:
    """Independent two-sample t-test (pooled or Welch).

    The reported confidence interval for the mean difference is always the
    central (two-sided) interval at level 1 - alpha.
    """
    if alternative not in ALTERNATIVES:
        raise DataError(f"alternative must be one of {ALTERNATIVES}, got {alternative!r}")
    if not 0.0 < alpha < 1.0:
        raise DataError(f"alpha must be in (0, 1), got {alpha}")
    ma, mb, se, df = _diff_machinery(a, b, equal_variance)
    diff = ma - mb
    if se == 0.0:
        if diff == 0.0:
            raise DegenerateDataError(
                "both groups have zero variance and equal means; t is undefined"
            )
        t = math.inf if diff > 0 else -math.inf
        p = 0.0
        ci_low = ci_high = diff
    else:
        t = diff / se
        if alternative == "two-sided":
            p = min(2.0 * t_sf(abs(t), df), 1.0)
        elif alternative == "less":
            p = t_cdf(t, df)
        else:
            p = t_sf(t, df)
        crit = t_quantile(1.0 - alpha / 2.0, df)
        ci_low, ci_high = diff - crit * se, diff + crit * se
    return TTestResult(
        t=float(t),
        df=float(df),
        p=float(p),
        mean_a=ma,
        mean_b=mb,
        mean_diff=float(diff),
        ci_low=float(ci_low),
        ci_high=float(ci_high),
        alternative=alternative,
        equal_variance=equal_variance,
        alpha=alpha,
        reject_null=bool(p < alpha),
    )


def mean_difference_summary(a, b, equal_variance: bool = False) -> dict:
    """Mean difference of two groups with its standard error and a 95% CI."""
    ma, mb, se, df = _diff_machinery(a, b, equal_variance)
    diff = ma - mb
    if se > 0:
        crit = t_quantile(0.975, df)
        lo, hi = diff - crit * se, diff + crit * se
    else:
        lo = hi = diff
    return {
        "mean_a": ma,
        "mean_b": mb,
        "diff": float(diff),
        "se_diff": float(se),
        "ci_low": float(lo),
        "ci_high": float(hi),
    }


# -- Levene's test ---------------------------------------------------------------


@dataclass(frozen=True)
class LeveneResult:
    w: float
    df1: int
    df2: int
    p: float
    center: str

    def to_dict(self) -> dict:
        return {"w": self.w, "df1": self.df1, "df2": self.df2, "p": self.p, "center": self.center}


def levene_test(a, b, center: str = "median") -> LeveneResult:
    """Levene's test for equal variances of two groups.

    ``center`` picks the deviation center: "median" (the Brown-Forsythe
    variant, robust and the default here) or "mean" (Levene's original).
    """
    if center not in ("mean", "median"):
        raise DataError(f"center must be 'mean' or 'median', got {center!r}")
    groups = [_clean(a), _clean(b)]
    for g in groups:
        if g.size < 2:
            raise DataError(f"each group needs at least 2 values, got {g.size}")
    k = len(groups)
    n_total = sum(g.size for g in groups)
    z_groups = []
    for g in groups:
        c = float(np.median(g)) if center == "median" else float(g.mean())
        z_groups.append(np.abs(g - c))
    z_means = [float(z.mean()) for z in z_groups]
    grand = sum(z.sum() for z in z_groups) / n_total
    numer = sum(g.size * (zm - grand) ** 2 for g, zm in zip(groups, z_means))
    denom = sum(float(((z - zm) ** 2).sum()) for z, zm in zip(z_groups, z_means))
    df1, df2 = k - 1, n_total - k
    if denom == 0.0:
        w = 0.0 if numer == 0.0 else math.inf
    else:
        w = (df2 / df1) * (numer / denom)
    p = 0.0 if math.isinf(w) else f_sf(w, df1, df2)
    return LeveneResult(float(w), df1, df2, float(p), center)


# -- normality reporting -----------------------------------------------------------

LARGE_SAMPLE_THRESHOLD = 30


@dataclass(frozen=True)
class NormalityReport:
    n: int
    skewness: float
    excess_kurtosis: float
    large_sample: bool
    verdict: str

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "skewness": self.skewness,
            "excess_kurtosis": self.excess_kurtosis,
            "large_sample": self.large_sample,
            "verdict": self.verdict,
        }


def normality_check(values) -> NormalityReport:
    """Moment-based normality report with the n > 30 large-sample rule.

    Skewness and excess kurtosis are the bias-uncorrected moment estimators.
    """
    v = _clean(values)
    if v.size < 3:
        raise DataError(f"normality check needs at least 3 values, got {v.size}")
    centered = v - v.mean()
    m2 = float((centered**2).mean())
    if m2 == 0.0:
        raise DegenerateDataError("sample is constant; normality moments undefined")
    m3 = float((centered**3).mean())
    m4 = float((centered**4).mean())
    skew = m3 / m2**1.5
    exkurt = m4 / (m2 * m2) - 3.0
    n = int(v.size)
    large = n > LARGE_SAMPLE_THRESHOLD
    if large:
        verdict = (
            f"sample size {n} exceeds {LARGE_SAMPLE_THRESHOLD}; by the rule of "
            "thumb the t-test is robust to departures from normality"
        )
    else:
        verdict = (
            f"sample size {n} is at most {LARGE_SAMPLE_THRESHOLD}; the rule of "
            "thumb does not apply and normality cannot be assumed"
        )
    return NormalityReport(n, float(skew), float(exkurt), large, verdict)
