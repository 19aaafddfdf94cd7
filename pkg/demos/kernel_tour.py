"""Tour of the statistics kernel, independent of the workflow engine.

Shows the numeric primitives directly: quantiles, IQR outliers, OLS with
standard errors, VIF, the two t-test variants, Levene's test, and the
special functions behind the p-values. Run with:

    python demos/kernel_tour.py
"""

import numpy as np

import statguide as sg

rng = np.random.default_rng(0)

print("-- quantiles (linear interpolation between order statistics)")
v = [1, 2, 3, 4]
print(f"q1/median/q3 of {v}: {sg.quantile(v, .25)}, {sg.quantile(v, .5)}, {sg.quantile(v, .75)}")

print("\n-- IQR outlier fences")
data = [1, 2, 2, 3, 3, 3, 4, 100]
report = sg.iqr_outliers(data)
print(f"data {data}: fences [{report.lower_fence}, {report.upper_fence}], "
      f"outliers at rows {list(report.outlier_row_indices)}")

print("\n-- OLS with standard errors and p-values")
n = 200
x1 = rng.normal(size=n)
x2 = rng.normal(size=n)
y = 3.0 + 2.0 * x1 - 1.0 * x2 + rng.normal(scale=0.5, size=n)
model = sg.ols_fit({"x1": x1, "x2": x2}, y)
for term in model.terms:
    print(f"  {term.name:10s} coef={term.coefficient: .4f} se={term.std_error:.4f} "
          f"t={term.t_value: .2f} p={term.p_value:.2g}")
print(f"  R^2 = {model.r_squared:.4f}, adjusted = {model.adj_r_squared:.4f}")

print("\n-- variance inflation factors")
base = rng.normal(size=n)
near_copy = base + rng.normal(scale=0.1, size=n)
entries = sg.vif({"a": base, "b": near_copy, "c": rng.normal(size=n)})
for e in entries:
    print(f"  VIF {e.variable}: {e.vif:.2f}")

print("\n-- two-sample t-tests (pooled vs Welch)")
a = rng.normal(loc=0.0, scale=1.0, size=40)
b = rng.normal(loc=0.8, scale=3.0, size=55)
pooled = sg.two_sample_ttest(a, b, equal_variance=True)
welch = sg.two_sample_ttest(a, b, equal_variance=False)
print(f"  pooled: t={pooled.t:.3f} df={pooled.df:.0f} p={pooled.p:.4f}")
print(f"  welch : t={welch.t:.3f} df={welch.df:.1f} p={welch.p:.4f}")

print("\n-- Levene's test flags the variance mismatch above")
lev = sg.levene_test(a, b)
print(f"  W={lev.w:.3f}, p={lev.p:.2g} ({lev.center}-centered)")

print("\n-- normality report with the large-sample rule")
skewed = rng.lognormal(size=100)
norm = sg.normality_check(skewed)
print(f"  n={norm.n}, skewness={norm.skewness:.2f}, "
      f"excess kurtosis={norm.excess_kurtosis:.2f}")
print(f"  verdict: {norm.verdict}")

print("\n-- special functions")
print(f"  I_0.5(3, 3) = {sg.reg_incomplete_beta(0.5, 3, 3)}")
print(f"  t_cdf(1, df=1) = {sg.t_cdf(1.0, 1)}  (Cauchy: 0.75 exactly)")
print(f"  f_cdf(1, 5, 10) = {sg.f_cdf(1.0, 5, 10):.6f}")
print(f"  t quantile at 97.5%, df=317: {sg.t_quantile(0.975, 317):.4f}")
