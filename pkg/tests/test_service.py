from __future__ import annotations

import json
import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from audit_agent.service import create_app


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as test_client:
        yield test_client


@pytest.fixture()
def ask_script(tmp_path):
    path = tmp_path / "script.json"
    path.write_text(json.dumps([
        {"reply": "Thought: check the account\nAction: WindowsTask\nAction Input: net user Patrick"},
        {"reply": "Final Answer: Patrick is compliant.", "expect_substring": "Password last set"},
    ]))
    return str(path)


class TestHealth:
    def test_health(self, client):
        body = client.get("/health").json()
        assert body["status"] == "ok"
        assert "version" in body


class TestAsk:
    def test_scripted_ask(self, client, ask_script, tmp_path):
        response = client.post("/ask", json={
            "prompt": "Did user account Patrick change password for the past 90 days",
            "script_path": ask_script,
            "date": "2024-12-01",
            "report_dir": str(tmp_path / "reports"),
        })
        assert response.status_code == 200
        body = response.json()
        assert body["status"] == "completed"
        assert body["output"] == "Patrick is compliant."
        assert body["task_query"].startswith("Did user account Patrick")
        assert body["steps"][0]["action_name"] == "WindowsTask"

    def test_missing_script_is_400(self, client):
        response = client.post("/ask", json={"prompt": "x", "backend": "scripted"})
        assert response.status_code == 400
        assert "script" in response.json()["detail"]

    def test_http_backend_without_endpoint_is_400(self, client):
        response = client.post("/ask", json={"prompt": "x", "backend": "http"})
        assert response.status_code == 400

    def test_bad_backend_is_422(self, client):
        response = client.post("/ask", json={"prompt": "x", "backend": "psychic"})
        assert response.status_code == 422

    def test_missing_fixture_dir_is_400(self, client, ask_script):
        response = client.post("/ask", json={
            "prompt": "x", "script_path": ask_script, "fixtures": "/no/such/dir",
        })
        assert response.status_code == 400


class TestScenarios:
    def test_listing(self, client):
        body = client.get("/scenarios").json()
        assert [entry["id"] for entry in body] == ["1a", "1b", "2a", "2b", "3a", "3b"]
        assert all(entry["prompt"] for entry in body)

    def test_run_all_scripted(self, client, tmp_path):
        response = client.post("/scenarios/run", json={"report_dir": str(tmp_path)})
        assert response.status_code == 200
        body = response.json()
        assert body["mode"] == "scripted"
        assert body["all_pass"] is True
        assert body["gating"] is True
        assert len(body["rows"]) == 6

    def test_run_subset(self, client, tmp_path):
        response = client.post(
            "/scenarios/run", json={"ids": ["1b"], "report_dir": str(tmp_path)}
        )
        rows = response.json()["rows"]
        assert len(rows) == 1
        assert rows[0]["scenario"] == "1b"
        assert rows[0]["compliance_status"] == "Compliant"

    def test_unknown_id_is_400(self, client):
        assert client.post("/scenarios/run", json={"ids": ["zz"]}).status_code == 400

    def test_live_without_endpoint_is_400(self, client):
        response = client.post("/scenarios/run", json={"mode": "live"})
        assert response.status_code == 400
        assert "endpoint_url" in response.json()["detail"]


class TestCheck:
    def test_machine_after_is_compliant(self, client):
        response = client.post("/check", json={
            "subject": "machine", "state": "after", "date": "2024-12-01",
        })
        body = response.json()
        assert response.status_code == 200
        assert body["overall"] == "compliant"
        assert body["schema_version"] == "1"
        assert len(body["verdicts"]) == 6

    def test_account_gap_surface(self, client):
        response = client.post("/check", json={"subject": "Penny", "date": "2024-12-01"})
        body = response.json()
        assert body["overall"] == "non-compliant"
        gaps = [v for v in body["verdicts"] if not v["compliant"]]
        assert gaps and gaps[0]["gap"]

    def test_unknown_subject_is_400(self, client):
        response = client.post("/check", json={"subject": "Ghost"})
        assert response.status_code == 400

    def test_report_written_when_requested(self, client, tmp_path):
        response = client.post("/check", json={
            "subject": "Patrick", "date": "2024-12-01", "report_dir": str(tmp_path),
        })
        assert response.status_code == 200
        assert list(tmp_path.glob("*.txt")) and list(tmp_path.glob("*.json"))
