"""Drive the HTTP session API end to end against an in-process service.

Uses the FastAPI test client so no port is needed; the same requests work
against `statguide serve` with any HTTP client. Run with:

    python demos/service_client_demo.py
"""

from fastapi.testclient import TestClient

from statguide.service import create_app

client = TestClient(create_app())

print("-- GET /workflows")
catalog = client.get("/workflows").json()["workflows"]
for w in catalog:
    print(f"  {w['id']}: {len(w['steps'])} steps")

print("\n-- POST /sessions (named sample dataset)")
resp = client.post("/sessions", json={"workflow_id": "two_sample_ttest",
                                      "sample": "auto_mpg"})
session = resp.json()["session"]
token = session["session_id"]
print(f"  created session, {session['dataset']['row_count']} rows, "
      f"active step: {session['active_step']}")

print("\n-- submit step inputs")
resp = client.post(f"/sessions/{token}/steps/select_variable/inputs",
                   json={"inputs": {"column": "mpg"}})
steps = {s["def_id"]: s for s in resp.json()["session"]["steps"]}
print(f"  outlier check ran automatically: "
      f"{steps['variable_outliers']['outputs']['outlier_count']} outlier(s)")

resp = client.post(f"/sessions/{token}/steps/select_groups/inputs",
                   json={"inputs": {"column": "origin",
                                    "group_a": "US", "group_b": "Europe"}})
steps = {s["def_id"]: s for s in resp.json()["session"]["steps"]}
levene = steps["variance_homogeneity"]
print(f"  Levene p = {levene['outputs']['levene']['p']:.2f}")

print("\n-- apply the suggested action (preset equal variance)")
suggestion_id = levene["active_suggestions"][0]["id"]
resp = client.post(
    f"/sessions/{token}/steps/variance_homogeneity/actions/{suggestion_id}")
print(f"  effect: {resp.json()['effect']}")

print("\n-- finish and fetch the report")
client.post(f"/sessions/{token}/steps/specify_test/inputs", json={"inputs": {}})
report = client.get(f"/sessions/{token}/report").json()
t = report["final_results"]["ttest"]
print(f"  t = {t['t']:.4f}, p = {t['p']:.3g}, reject: {t['reject_null']}")

print("\n-- plain-text rendering")
text = client.get(f"/sessions/{token}/report", params={"format": "text"}).text
print("\n".join("  " + line for line in text.splitlines()[:12]))

print("\n-- model export")
model = client.get(f"/sessions/{token}/export/model").json()
print(f"  schema_version={model['schema_version']}, "
      f"workflow={model['workflow_id']}")
