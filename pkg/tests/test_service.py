import re

import pytest
from fastapi.testclient import TestClient

from breakrisk.fixtures import builtin_fixture
from breakrisk.model import build_snapshot
from breakrisk.service import ServiceConfig, SnapshotHolder, create_app


@pytest.fixture()
def holder():
    return SnapshotHolder(builtin_fixture("mce0"))


@pytest.fixture()
def client(holder):
    return TestClient(create_app(holder))


class TestSnapshotEndpoint:
    def test_summary(self, client):
        response = client.get("/api/v1/snapshot")
        assert response.status_code == 200
        doc = response.json()
        assert doc["grand_total"] == 385
        assert len(doc["paths"]) == 4
        assert doc["services"] == ["A", "B", "C", "D", "E", "F", "G"]

    def test_mce2_branch_row(self):
        client = TestClient(create_app(SnapshotHolder(builtin_fixture("mce2"))))
        doc = client.get("/api/v1/snapshot").json()
        path1 = next(p for p in doc["paths"] if p["id"] == 1)
        assert path1["branches"]["OPA1;OPB1;OPC1"] == 290

    def test_no_snapshot_503(self):
        client = TestClient(create_app(SnapshotHolder(None)))
        response = client.get("/api/v1/snapshot")
        assert response.status_code == 503
        assert response.json()["code"] == "no_snapshot"

    def test_empty_snapshot_503(self):
        client = TestClient(create_app(SnapshotHolder(build_snapshot([]))))
        assert client.get("/api/v1/snapshot").status_code == 503


class TestRiskEndpoint:
    def test_score(self, client):
        response = client.post(
            "/api/v1/risk", json={"operations": ["OPE1"], "mode": "affected-paths"}
        )
        assert response.status_code == 200
        assert re.search(r'"total":0\.4286[,}]', response.text)
        assert response.json()["unmatched"] == []

    def test_saturating_set_renders_one_point_zero_zero_zero_zero(self, client):
        response = client.post("/api/v1/risk", json={"operations": ["OPC1", "OPE1"]})
        assert '"total":1.0000' in response.text

    def test_empty_operations_400(self, client):
        response = client.post("/api/v1/risk", json={"operations": []})
        assert response.status_code == 400
        assert response.json()["code"] == "empty_operations"
        assert client.post("/api/v1/risk", json={}).status_code == 400

    def test_unknown_mode_422(self, client):
        response = client.post("/api/v1/risk", json={"operations": ["OPE1"], "mode": "x"})
        assert response.status_code == 422
        assert response.json()["code"] == "unknown_mode"

    def test_unknown_operation_is_zero_risk(self, client):
        response = client.post("/api/v1/risk", json={"operations": ["OPZ9"]})
        assert response.status_code == 200
        doc = response.json()
        assert doc["total"] == 0.0
        assert doc["unmatched"] == ["OPZ9"]

    def test_malformed_body_400(self, client):
        response = client.post(
            "/api/v1/risk", content=b"{oops", headers={"content-type": "application/json"}
        )
        assert response.status_code == 400
        assert response.json()["code"] in {"invalid_request", "empty_operations"}

    def test_default_mode_from_config(self, holder):
        client = TestClient(create_app(holder, ServiceConfig(default_mode="literal")))
        doc = client.post("/api/v1/risk", json={"operations": ["OPE1"]}).json()
        assert doc["mode"] == "literal"


class TestSweepEndpoint:
    def test_mce2_top_entry_is_on_the_heavy_path(self):
        client = TestClient(create_app(SnapshotHolder(builtin_fixture("mce2"))))
        doc = client.get("/api/v1/sweep?mode=affected-paths").json()
        assert doc["results"][0]["op"] in {"OPA1", "OPB1", "OPC1"}

    def test_unknown_mode_422(self, client):
        assert client.get("/api/v1/sweep?mode=bogus").status_code == 422

    def test_empty_snapshot_503(self):
        client = TestClient(create_app(SnapshotHolder(build_snapshot([]))))
        assert client.get("/api/v1/sweep").status_code == 503


class TestServiceBehaviour:
    def test_identical_requests_identical_bodies(self, client):
        first = client.post("/api/v1/risk", json={"operations": ["OPB1"]})
        second = client.post("/api/v1/risk", json={"operations": ["OPB1"]})
        assert first.content == second.content

    def test_atomic_reload_swaps_answers(self, holder, client):
        before = client.get("/api/v1/snapshot").json()["grand_total"]
        holder.set(builtin_fixture("mce1"))
        after = client.get("/api/v1/snapshot").json()["grand_total"]
        assert (before, after) == (385, 424)

    def test_error_bodies_are_uniform(self, client):
        response = client.get("/api/v1/missing")
        assert response.status_code == 404
        assert set(response.json()) == {"code", "message"}

    def test_cors_header_present(self, holder):
        client = TestClient(create_app(holder, ServiceConfig(cors_origin="http://ui.local")))
        response = client.get("/api/v1/snapshot", headers={"Origin": "http://ui.local"})
        assert response.headers.get("access-control-allow-origin") == "http://ui.local"
