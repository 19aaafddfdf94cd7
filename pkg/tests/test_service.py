"""HTTP service tests over the FastAPI test client."""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from statguide.service import create_app


@pytest.fixture()
def client():
    return TestClient(create_app())


def small_csv(n=40, seed=0):
    rng = np.random.default_rng(seed)
    rows = ["y,g"]
    for i in range(n):
        g = "p" if i % 2 else "q"
        rows.append(f"{rng.normal() + (1 if g == 'p' else 0):.5f},{g}")
    return "\n".join(rows)


def create_ttest_session(client, **kwargs):
    body = {"workflow_id": "two_sample_ttest", "csv_text": small_csv(), **kwargs}
    r = client.post("/sessions", json=body)
    assert r.status_code == 201, r.text
    return r.json()


class TestCatalog:
    def test_two_workflows_nine_steps(self, client):
        r = client.get("/workflows")
        assert r.status_code == 200
        workflows = r.json()["workflows"]
        assert len(workflows) == 2
        for w in workflows:
            assert len(w["steps"]) == 9
            for s in w["steps"]:
                assert {"id", "title", "kind"} <= set(s)

    def test_unknown_route_404(self, client):
        assert client.get("/nope").status_code == 404


class TestCreateSession:
    def test_create_with_sample(self, client):
        r = client.post("/sessions", json={"workflow_id": "linear_regression",
                                           "sample": "housing"})
        assert r.status_code == 201
        session = r.json()["session"]
        assert len(session["steps"]) == 9
        assert session["steps"][0]["status"] == "done"
        assert session["dataset"]["row_count"] == 20640

    def test_create_with_csv_upload(self, client):
        payload = create_ttest_session(client)
        assert payload["session"]["active_step"] == "select_variable"

    def test_malformed_csv_names_line(self, client):
        r = client.post("/sessions", json={"workflow_id": "two_sample_ttest",
                                           "csv_text": "a,b\n1,2\n3\n"})
        assert r.status_code == 400
        body = r.json()
        assert body["code"] == "bad_request"
        assert "line 3" in body["message"]

    def test_unknown_workflow_404(self, client):
        r = client.post("/sessions", json={"workflow_id": "anova", "sample": "housing"})
        assert r.status_code == 404

    def test_unknown_sample_404(self, client):
        r = client.post("/sessions", json={"workflow_id": "linear_regression",
                                           "sample": "nope"})
        assert r.status_code == 404

    def test_missing_dataset_400(self, client):
        r = client.post("/sessions", json={"workflow_id": "linear_regression"})
        assert r.status_code == 400


class TestSessionFlow:
    def test_full_ttest_flow(self, client):
        token = create_ttest_session(client)["session"]["session_id"]

        r = client.post(f"/sessions/{token}/steps/select_variable/inputs",
                        json={"inputs": {"column": "y"}})
        assert r.status_code == 200
        steps = {s["def_id"]: s for s in r.json()["session"]["steps"]}
        assert steps["variable_outliers"]["status"] == "done"

        r = client.post(f"/sessions/{token}/steps/select_groups/inputs",
                        json={"inputs": {"column": "g", "group_a": "p", "group_b": "q"}})
        steps = {s["def_id"]: s for s in r.json()["session"]["steps"]}
        suggestion = steps["variance_homogeneity"]["active_suggestions"][0]

        r = client.post(
            f"/sessions/{token}/steps/variance_homogeneity/actions/{suggestion['id']}"
        )
        assert r.status_code == 200
        effect = r.json()["effect"]
        assert effect["type"] == "preset_parameter"
        steps = {s["def_id"]: s for s in r.json()["session"]["steps"]}
        assert steps["specify_test"]["preset_inputs"]["equal_variance"] == effect["value"]

        r = client.post(f"/sessions/{token}/steps/specify_test/inputs",
                        json={"inputs": {}})
        session = r.json()["session"]
        assert session["active_step"] is None
        final = {s["def_id"]: s for s in session["steps"]}["evaluate"]
        assert final["outputs"]["ttest"]["equal_variance"] == effect["value"]

        r = client.get(f"/sessions/{token}/report")
        assert r.status_code == 200
        assert r.json()["final_results"]["ttest"]["p"] is not None

        r = client.get(f"/sessions/{token}/report", params={"format": "text"})
        assert r.status_code == 200
        assert "Report:" in r.text

        r = client.get(f"/sessions/{token}/export/model")
        assert r.status_code == 200
        assert r.json()["schema_version"] == 1

    def test_explanation_endpoint(self, client):
        token = create_ttest_session(client)["session"]["session_id"]
        r = client.get(f"/sessions/{token}/steps/specify_test/explanation")
        assert r.status_code == 200
        assert r.json()["objective"].startswith("Formulate the null")

    def test_replace_dataset_reruns(self, client):
        token = create_ttest_session(client)["session"]["session_id"]
        client.post(f"/sessions/{token}/steps/select_variable/inputs",
                    json={"inputs": {"column": "y"}})
        r = client.post(f"/sessions/{token}/dataset",
                        json={"csv_text": small_csv(seed=9)})
        assert r.status_code == 200
        session = r.json()["session"]
        assert session["dataset"]["version"] == 1
        steps = {s["def_id"]: s for s in session["steps"]}
        assert steps["variable_outliers"]["status"] == "done"
        assert session["active_step"] == "select_groups"

    def test_lifecycle_error_409(self, client):
        token = create_ttest_session(client)["session"]["session_id"]
        r = client.post(f"/sessions/{token}/steps/specify_test/inputs",
                        json={"inputs": {}})
        assert r.status_code == 409
        assert r.json()["code"] == "lifecycle"

    def test_schema_error_422_with_details(self, client):
        token = create_ttest_session(client)["session"]["session_id"]
        r = client.post(f"/sessions/{token}/steps/select_variable/inputs",
                        json={"inputs": {"column": "nope"}})
        assert r.status_code == 422
        body = r.json()
        assert body["code"] == "schema"
        assert body["details"][0]["param"] == "column"

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope").status_code == 404

    def test_unknown_step_404(self, client):
        token = create_ttest_session(client)["session"]["session_id"]
        r = client.post(f"/sessions/{token}/steps/nope/inputs", json={"inputs": {}})
        assert r.status_code == 404

    def test_model_export_before_fit_409(self, client):
        token = create_ttest_session(client)["session"]["session_id"]
        assert client.get(f"/sessions/{token}/export/model").status_code == 409


class TestIdempotency:
    def test_submit_retry_with_key_replays_response(self, client):
        token = create_ttest_session(client)["session"]["session_id"]
        url = f"/sessions/{token}/steps/select_variable/inputs"
        body = {"inputs": {"column": "y"}}
        headers = {"Idempotency-Key": "k1"}
        first = client.post(url, json=body, headers=headers)
        assert first.status_code == 200
        second = client.post(url, json=body, headers=headers)
        assert second.status_code == 200
        assert second.json() == first.json()
        # without the key, the retry hits the lifecycle guard
        third = client.post(url, json=body)
        assert third.status_code == 409

    def test_create_retry_with_key_returns_same_session(self, client):
        body = {"workflow_id": "two_sample_ttest", "csv_text": small_csv()}
        headers = {"Idempotency-Key": "create-1"}
        a = client.post("/sessions", json=body, headers=headers)
        b = client.post("/sessions", json=body, headers=headers)
        assert a.json()["session"]["session_id"] == b.json()["session"]["session_id"]


class TestResponseInvariants:
    """Random operation sequences: every response must satisfy the lifecycle
    invariants (at most one active step, done-prefix ordering)."""

    def _assert_invariants(self, session):
        statuses = [s["status"] for s in session["steps"]]
        assert statuses.count("active") <= 1
        frontier = next((i for i, s in enumerate(statuses) if s != "done"), len(statuses))
        assert all(s == "done" for s in statuses[:frontier])
        assert all(s == "pending" for s in statuses[frontier + 1:])
        for s in session["steps"]:
            if s["outputs"] is not None:
                assert s["status"] == "done"

    def test_random_operation_sequences(self, client):
        rng = np.random.default_rng(7)
        for trial in range(15):
            token = create_ttest_session(client)["session"]["session_id"]
            state = client.get(f"/sessions/{token}").json()["session"]
            for _ in range(12):
                op = rng.integers(5)
                if op == 0 and state["active_step"] == "select_variable":
                    r = client.post(
                        f"/sessions/{token}/steps/select_variable/inputs",
                        json={"inputs": {"column": "y"}})
                elif op == 1 and state["active_step"] == "select_groups":
                    r = client.post(
                        f"/sessions/{token}/steps/select_groups/inputs",
                        json={"inputs": {"column": "g", "group_a": "p", "group_b": "q"}})
                elif op == 2 and state["active_step"] == "specify_test":
                    r = client.post(
                        f"/sessions/{token}/steps/specify_test/inputs",
                        json={"inputs": {"alpha": float(rng.choice([0.01, 0.05, 0.1]))}})
                elif op == 3:
                    r = client.post(f"/sessions/{token}/dataset",
                                    json={"csv_text": small_csv(seed=int(rng.integers(100)))})
                else:
                    done = [s for s in state["steps"]
                            if s["status"] == "done" and s["active_suggestions"]]
                    if not done:
                        continue
                    pick = done[int(rng.integers(len(done)))]
                    sid = pick["active_suggestions"][0]["id"]
                    r = client.post(
                        f"/sessions/{token}/steps/{pick['def_id']}/actions/{sid}")
                assert r.status_code in (200, 400, 409, 422)
                if r.status_code == 200:
                    state = r.json()["session"]
                    self._assert_invariants(state)
