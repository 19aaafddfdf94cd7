"""Walkthrough: guided two-sample t-test on the auto-mpg sample.

Tests whether mean fuel economy differs between US and European cars,
letting the assumption checks drive the test configuration. Run with:

    python demos/mpg_ttest_walkthrough.py
"""

import statguide as sg

print("=" * 72)
print("Guided two-sample t-test on the auto-mpg data")
print("=" * 72)

dataset = sg.load_csv(str(sg.sample_path("auto_mpg")))
print(f"\nLoaded {dataset.row_count} rows; origin values: "
      f"{dataset.distinct_values('origin')}")

session = sg.create_session("two_sample_ttest", dataset)

# Step 2: the variable under test
session.submit_inputs("select_variable", {"column": "mpg"})
outliers = session.states[2].outputs
print(f"\nOutlier check on mpg: {outliers['outlier_count']} outlier "
      f"(verdict: {outliers['verdict']})")

# Step 4: the two groups; the variance and normality checks run on submit
session.submit_inputs("select_groups",
                      {"column": "origin", "group_a": "US", "group_b": "Europe"})

levene = session.states[4].outputs
print(f"\nHomogeneity of variance: Levene p = {levene['levene']['p']:.2f} "
      f"({levene['n_a']} vs {levene['n_b']} cars)")
suggestion = session.states[4].active_suggestions[0]
print(f"  suggestion: {suggestion['message']}")

# Take the action: pre-set 'equal variance' = True on the model step
effect = session.apply_action("variance_homogeneity", suggestion["id"])
print(f"  applied: preset {effect['param']} = {effect['value']} on {effect['target_step']}")

for step_id in ("normality_a", "normality_b"):
    out = session.states[session.workflow.step_index(step_id)].outputs
    print(f"\nNormality of group {out['group_value']}: n = {out['n']}, "
          f"skewness = {out['normality']['skewness']:.2f}")
    notice = session.apply_action(step_id, "robustness_notice")
    print(f"  notice: {notice['text']}")

# Step 8: hypotheses; equal_variance falls through from the preset
explanation = session.get_explanation("specify_test")
print(f"\nStep 8 objective: {explanation['objective']}")
session.submit_inputs("specify_test", {"alternative": "two-sided", "alpha": 0.05})

result = session.states[8].outputs
t = result["ttest"]
print(f"\nResult: t = {t['t']:.4f}, df = {t['df']:.0f}, p = {t['p']:.3g}")
print(f"95% CI for the mean difference: [{t['ci_low']:.3f}, {t['ci_high']:.3f}]")
print(result["interpretation"])

report = session.export_report()
outcomes = {s["step_id"]: s["assumption_outcome"] for s in report["steps"]
            if s["assumption_outcome"]}
print(f"\nAssumption outcomes: {outcomes}")
