"""Walkthrough: guided linear regression on the California housing sample.

Follows an analyst who regresses median house value on neighborhood
characteristics, hits the clipped-value outliers and a multicollinearity
violation, and iterates to a cleaner model. Run with:

    python demos/housing_regression_walkthrough.py
"""

import statguide as sg
from statguide.dataset import Predicate

print("=" * 72)
print("Guided linear regression on the California housing data")
print("=" * 72)

dataset = sg.load_csv(str(sg.sample_path("housing")))
print(f"\nLoaded {dataset.row_count} rows, columns: {', '.join(dataset.column_names)}")

session = sg.create_session("linear_regression", dataset)
print(f"Workflow has {len(session.workflow.steps)} steps; active: {session.active_step_id}")

# Step 2: pick the dependent variable
session.submit_inputs("select_dependent", {"column": "median_house_value"})

# Step 3 ran automatically: outliers in the dependent variable
check = session.states[2].outputs
print(f"\nOutlier check on median_house_value: {check['outlier_count']} outliers "
      f"({check['outlier_fraction']:.2%}), verdict: {check['verdict']}")
for s in session.states[2].active_suggestions:
    print(f"  suggestion [{s['id']}]: {s['message']}")

# The descriptive-analysis action exports a code snippet
effect = session.apply_action("dv_outliers", "describe_column")
print("\nExported snippet:")
print(effect["snippet"]["rendered_text"])

# The summary shows the value 500001 dominating the right tail (the data
# were clipped there), so drop those rows and re-import
print(f"Most frequent value: {check['summary']['mode_value']:.0f} "
      f"(x{check['summary']['mode_frequency']})")
cleaned = session.dataset.drop_rows_where(Predicate("median_house_value", "==", 500001))
session.replace_dataset(cleaned)
recheck = session.states[2].outputs
print(f"After dropping the clipped rows: {session.dataset.row_count} rows, "
      f"outlier check verdict: {recheck['verdict']}")

# Step 4: first predictor set uses the raw count variables
session.submit_inputs("select_predictors", {
    "columns": ["median_income", "total_rooms", "total_bedrooms", "housing_median_age"],
})
iv = session.states[4].outputs
print(f"\nPredictor outlier check: offending variables: {iv['offending_text']}")

# Per-block averages are more meaningful than raw totals; derive them
derived = (session.dataset
           .derive_column("avg_rooms", "total_rooms", "/", "population")
           .derive_column("avg_bedrooms", "total_bedrooms", "/", "population"))
session.replace_dataset(derived)
session.edit_step("select_predictors", {
    "columns": ["median_income", "avg_rooms", "avg_bedrooms", "housing_median_age"],
})

vif_out = session.states[5].outputs
print("\nVIF check on the averaged predictors:")
for entry in vif_out["entries"]:
    print(f"  {entry['variable']}: {entry['vif']:.2f}")
print(f"verdict: {vif_out['verdict']}")
for s in session.states[5].active_suggestions:
    print(f"  suggestion: {s['message']}")

# Steps 7-9: full-data fit to inspect the coefficients
session.submit_inputs("split_data", {"ratio": 1.0, "seed": 42})
session.submit_inputs("specify_model", {"intercept": True})
model = session.states[8].outputs
print(f"\nFirst model: R^2 = {model['model']['r_squared']:.4f}")
print(model["interpretation"])

# The bedroom/room coefficients fight each other (that is the
# multicollinearity talking), so iterate on the predictor set
session.edit_step("select_predictors", {
    "columns": ["median_income", "avg_rooms", "housing_median_age", "households"],
})
final = session.states[8].outputs
final_vif = session.states[5].outputs
print(f"\nFinal model: R^2 = {final['model']['r_squared']:.4f} "
      f"(VIF verdict now: {final_vif['verdict']})")

report = session.export_report()
print(f"\nUnresolved violations: {report['unresolved_violations'] or 'none'}")
print(f"Model record: {session.export_model()['result']['terms'][1]}")
print("\nDone. Export the full report with session.export_report().")
