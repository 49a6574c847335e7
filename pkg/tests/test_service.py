import json
import time
from pathlib import Path

import numpy as np
import pytest
from fastapi.testclient import TestClient

from rulelens.service import ServiceConfig, create_app

from service_flow import normalize, run_flow, seed_data_dir

GOLDEN = Path(__file__).parent / "data" / "golden_flow.json"


@pytest.fixture
def client(tmp_path):
    seed_data_dir(tmp_path / "data")
    config = ServiceConfig(data_dir=str(tmp_path / "data"),
                           mcmc_iterations=3000, mcmc_chains=1)
    with TestClient(create_app(config)) as c:
        yield c


def make_session(client, **overrides):
    body = {"dataset": "toy", "teacher": "mlp:8", "teacher_seed": 0, "epochs": 30}
    body.update(overrides)
    response = client.post("/api/v1/sessions", json=body)
    assert response.status_code == 201
    return response.json()["session_id"]


def induce_and_wait(client, sid, **params):
    body = {"sampling_rate": 2.0, "seed": 11, "iterations": 3000, "chains": 1}
    body.update(params)
    response = client.post(f"/api/v1/sessions/{sid}/induce", json=body)
    assert response.status_code == 202
    job = response.json()["job_id"]
    for _ in range(1000):
        state = client.get(f"/api/v1/jobs/{job}").json()
        if state["state"] in ("done", "error"):
            return state
        time.sleep(0.02)
    raise AssertionError("job never finished")


class TestBasics:
    def test_health(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        body = response.json()
        assert body["status"] == "ok"
        assert "version" in body

    def test_unknown_dataset_404(self, client):
        response = client.post("/api/v1/sessions", json={"dataset": "nope"})
        assert response.status_code == 404

    def test_unknown_session_404(self, client):
        assert client.get("/api/v1/sessions/zzz/matrix").status_code == 404
        assert client.get("/api/v1/jobs/zzz").status_code == 404

    def test_matrix_before_induce_conflicts(self, client):
        sid = make_session(client)
        assert client.get(f"/api/v1/sessions/{sid}/matrix").status_code == 409

    def test_list_datasets(self, client):
        body = client.get("/api/v1/datasets").json()
        assert "iris" in body["builtin"]


class TestInduction:
    def test_job_completes(self, client):
        sid = make_session(client)
        state = induce_and_wait(client, sid)
        assert state["state"] == "done"
        assert state["progress"] == 1.0

    def test_busy_session_conflicts(self, client):
        sid = make_session(client)
        first = client.post(f"/api/v1/sessions/{sid}/induce", json={
            "sampling_rate": 4.0, "seed": 0, "iterations": 400000, "chains": 1,
        })
        assert first.status_code == 202
        second = client.post(f"/api/v1/sessions/{sid}/induce", json={
            "sampling_rate": 1.0, "seed": 1,
        })
        assert second.status_code == 409
        job = first.json()["job_id"]
        for _ in range(3000):
            if client.get(f"/api/v1/jobs/{job}").json()["state"] in ("done", "error"):
                break
            time.sleep(0.05)

    def test_snapshot_written(self, client, tmp_path):
        sid = make_session(client)
        induce_and_wait(client, sid)
        snapshot = tmp_path / "data" / "sessions" / f"{sid}.json"
        assert snapshot.exists()
        doc = json.loads(snapshot.read_text())
        assert doc["bundle"]["v"] == 1


class TestReads:
    def test_repeated_matrix_reads_identical(self, client):
        sid = make_session(client)
        induce_and_wait(client, sid)
        a = client.get(f"/api/v1/sessions/{sid}/matrix?dataset=train")
        b = client.get(f"/api/v1/sessions/{sid}/matrix?dataset=train")
        assert a.content == b.content

    def test_train_test_views_differ_in_n(self, client):
        sid = make_session(client)
        induce_and_wait(client, sid)
        train = client.get(f"/api/v1/sessions/{sid}/matrix?dataset=train").json()
        test = client.get(f"/api/v1/sessions/{sid}/matrix?dataset=test").json()
        assert train["n"] == 60
        assert test["n"] == 20

    def test_conditional_toggle_changes_cells(self, client):
        sid = make_session(client)
        induce_and_wait(client, sid)
        plain = client.get(f"/api/v1/sessions/{sid}/matrix?conditional=false").json()
        cond = client.get(f"/api/v1/sessions/{sid}/matrix?conditional=true").json()
        assert plain["conditional"] is False
        assert cond["conditional"] is True

    def test_empty_selection_zero_state(self, client):
        sid = make_session(client)
        induce_and_wait(client, sid)
        response = client.post(f"/api/v1/sessions/{sid}/filters", json={
            "data_filter": {"u": {"lo": 1e9, "hi": None}},
        })
        assert response.status_code == 200
        assert response.json().get("empty_selection") is True

    def test_data_pagination(self, client):
        sid = make_session(client)
        induce_and_wait(client, sid)
        page = client.get(
            f"/api/v1/sessions/{sid}/data?dataset=train&page=1&page_size=25").json()
        assert page["total"] == 60
        assert len(page["rows"]) == 25
        assert page["rows"][0]["index"] >= 25

    def test_data_filter_query(self, client):
        sid = make_session(client)
        induce_and_wait(client, sid)
        flt = json.dumps({"u": {"lo": 0.0, "hi": None}})
        page = client.get(
            f"/api/v1/sessions/{sid}/data?dataset=train&filter={flt}").json()
        assert 0 < page["total"] < 60

    def test_data_bad_filter_422(self, client):
        sid = make_session(client)
        induce_and_wait(client, sid)
        response = client.get(f"/api/v1/sessions/{sid}/data?filter=notjson")
        assert response.status_code == 422

    def test_probe_roundtrip(self, client):
        sid = make_session(client)
        induce_and_wait(client, sid)
        response = client.post(f"/api/v1/sessions/{sid}/probe",
                               json={"instance": [0.1, 0.2]})
        assert response.status_code == 200
        body = response.json()
        assert body["fired_rule"] >= 0
        assert body["teacher_label"] in ("lo", "hi")

    def test_probe_schema_mismatch_422(self, client):
        sid = make_session(client)
        induce_and_wait(client, sid)
        response = client.post(f"/api/v1/sessions/{sid}/probe",
                               json={"instance": [0.1]})
        assert response.status_code == 422


class TestGoldenFlow:
    def test_flow_matches_recording(self, client):
        got = normalize(run_flow(client))
        want = GOLDEN.read_text(encoding="utf-8")
        assert got == want


class TestServeGuards:
    def test_port_in_use(self, tmp_path):
        import socket

        from rulelens.errors import PortInUse
        from rulelens.service import ServiceConfig, serve

        holder = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        holder.bind(("127.0.0.1", 0))
        holder.listen(1)
        port = holder.getsockname()[1]
        try:
            with pytest.raises(PortInUse):
                serve(ServiceConfig(port=port, data_dir=str(tmp_path)))
        finally:
            holder.close()

    def test_bad_port_config(self, tmp_path):
        from rulelens.errors import BadConfig
        from rulelens.service import ServiceConfig, serve

        with pytest.raises(BadConfig):
            serve(ServiceConfig(port=0, data_dir=str(tmp_path)))

    def test_missing_static_dir(self, tmp_path):
        from rulelens.errors import BadConfig
        from rulelens.service import ServiceConfig, serve

        with pytest.raises(BadConfig):
            serve(ServiceConfig(port=18321, data_dir=str(tmp_path),
                                static_dir=str(tmp_path / "missing")))
