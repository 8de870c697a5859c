"""HTTP service: session lifecycle, persistence, determinism, error codes."""

import pytest
from starlette.testclient import TestClient

from opera.service import create_app


@pytest.fixture
def data_dir(tmp_path):
    return tmp_path / "sessions"


@pytest.fixture
def client(data_dir):
    return TestClient(create_app(data_dir))


def upload(client, fixture_csv, fmt="csv") -> str:
    response = client.post(
        "/sessions",
        files={"file": ("fixture.csv", fixture_csv.encode(), "text/csv")},
        data={"format": fmt},
    )
    assert response.status_code == 201, response.text
    return response.json()["session_id"]


def analyze(client, sid, measures, window=None):
    body = {"measures": measures}
    if window is not None:
        body["window"] = {"from": window[0], "to": window[1]}
    return client.post(f"/sessions/{sid}/analyze", json=body)


class TestSessions:
    def test_healthz(self, client):
        assert client.get("/healthz").json() == {"status": "ok"}

    def test_upload_csv(self, client, fixture_csv):
        sid = upload(client, fixture_csv)
        assert sid

    def test_upload_malformed_json(self, client):
        response = client.post(
            "/sessions",
            files={"file": ("broken.json", b'{"ocel:events": ', "application/json")},
            data={"format": "json"},
        )
        assert response.status_code == 400
        body = response.json()
        assert body["error"] == "ParseError"
        assert "position" in body

    def test_format_inferred_from_filename(self, client, fixture_csv):
        response = client.post(
            "/sessions",
            files={"file": ("fixture.csv", fixture_csv.encode(), "text/csv")},
        )
        assert response.status_code == 201

    def test_log_round_trip_across_restart(self, data_dir, fixture_csv):
        first = TestClient(create_app(data_dir))
        sid = upload(first, fixture_csv)
        original = first.get(f"/sessions/{sid}/log").content

        restarted = TestClient(create_app(data_dir))
        assert restarted.get(f"/sessions/{sid}/log").content == original

    def test_unknown_session(self, client):
        assert client.get("/sessions/nope/log").status_code == 404
        assert client.post("/sessions/nope/discover").status_code == 404


class TestDiscover:
    def test_fixture_model(self, client, fixture_csv):
        sid = upload(client, fixture_csv)
        response = client.post(f"/sessions/{sid}/discover")
        assert response.status_code == 200
        body = response.json()
        assert body["places"] > 0 and body["transitions"] > 0
        model = body["model"]
        place_types = {p["id"]: p["type"] for p in model["places"]}
        for arc in model["arcs"]:
            place = arc["source"] if arc["source"] in place_types else arc["target"]
            touches_conduct = "conduct test" in (arc["source"], arc["target"])
            if touches_conduct and place_types[place] == "sample":
                assert arc["variable"]
            else:
                assert not arc["variable"]

    def test_deterministic(self, client, fixture_csv):
        sid = upload(client, fixture_csv)
        first = client.post(f"/sessions/{sid}/discover").json()
        second = client.post(f"/sessions/{sid}/discover").json()
        assert first == second

    def test_empty_log_conflict(self, client):
        response = client.post(
            "/sessions",
            files={"file": ("empty.json",
                            b'{"ocel:events": {}, "ocel:objects": {}}',
                            "application/json")},
            data={"format": "json"},
        )
        sid = response.json()["session_id"]
        assert client.post(f"/sessions/{sid}/discover").status_code == 409


class TestAnalyze:
    def test_sync_value(self, client, fixture_csv):
        sid = upload(client, fixture_csv)
        client.post(f"/sessions/{sid}/discover")
        response = analyze(client, sid, ["sync"])
        assert response.status_code == 200
        doc = response.json()
        assert doc["transitions"]["conduct test"]["sync"]["mean"] == 135.0

    def test_empty_measures(self, client, fixture_csv):
        sid = upload(client, fixture_csv)
        client.post(f"/sessions/{sid}/discover")
        doc = analyze(client, sid, []).json()
        assert all(measures == {} for measures in doc["transitions"].values())

    def test_excluding_window(self, client, fixture_csv):
        sid = upload(client, fixture_csv)
        client.post(f"/sessions/{sid}/discover")
        doc = analyze(client, sid, ["sync"], window=(300, 400)).json()
        for measures in doc["transitions"].values():
            assert measures["sync"]["count"] == 0

    def test_no_model_conflict(self, client, fixture_csv):
        sid = upload(client, fixture_csv)
        assert analyze(client, sid, ["sync"]).status_code == 409

    def test_unknown_measure(self, client, fixture_csv):
        sid = upload(client, fixture_csv)
        client.post(f"/sessions/{sid}/discover")
        assert analyze(client, sid, ["velocity"]).status_code == 422

    def test_unknown_aggregation(self, client, fixture_csv):
        sid = upload(client, fixture_csv)
        client.post(f"/sessions/{sid}/discover")
        response = client.post(f"/sessions/{sid}/analyze",
                               json={"measures": ["sync"], "aggregations": ["p95"]})
        assert response.status_code == 422

    def test_invalid_window(self, client, fixture_csv):
        sid = upload(client, fixture_csv)
        client.post(f"/sessions/{sid}/discover")
        assert analyze(client, sid, ["sync"], window=(400, 300)).status_code == 400

    def test_byte_identical_responses(self, client, fixture_csv):
        sid = upload(client, fixture_csv)
        client.post(f"/sessions/{sid}/discover")
        first = analyze(client, sid, ["sync", "wait", "pool"]).content
        second = analyze(client, sid, ["sync", "wait", "pool"]).content
        assert first == second

    def test_report_survives_restart(self, data_dir, fixture_csv):
        first = TestClient(create_app(data_dir))
        sid = upload(first, fixture_csv)
        first.post(f"/sessions/{sid}/discover")
        report = analyze(first, sid, ["sync"]).content
        model = first.get(f"/sessions/{sid}/model").content

        restarted = TestClient(create_app(data_dir))
        assert restarted.get(f"/sessions/{sid}/model").content == model
        assert analyze(restarted, sid, ["sync"]).content == report


class TestExportDot:
    def test_annotated(self, client, fixture_csv):
        sid = upload(client, fixture_csv)
        client.post(f"/sessions/{sid}/discover")
        analyze(client, sid, ["sojourn"])
        response = client.get(
            f"/sessions/{sid}/model.dot",
            params={"measure": "sojourn", "aggregation": "mean"},
        )
        assert response.status_code == 200
        assert "sojourn mean: 1m 30s" in response.text

    def test_plain_dot_needs_model_only(self, client, fixture_csv):
        sid = upload(client, fixture_csv)
        client.post(f"/sessions/{sid}/discover")
        response = client.get(f"/sessions/{sid}/model.dot")
        assert response.status_code == 200
        assert response.text.startswith("digraph")

    def test_no_report_conflict(self, client, fixture_csv):
        sid = upload(client, fixture_csv)
        client.post(f"/sessions/{sid}/discover")
        response = client.get(
            f"/sessions/{sid}/model.dot",
            params={"measure": "sojourn", "aggregation": "mean"},
        )
        assert response.status_code == 409

    def test_count_zero_transitions_not_annotated(self, client, fixture_csv):
        sid = upload(client, fixture_csv)
        client.post(f"/sessions/{sid}/discover")
        analyze(client, sid, ["sync"], window=(300, 400))
        response = client.get(
            f"/sessions/{sid}/model.dot",
            params={"measure": "sync", "aggregation": "mean"},
        )
        assert response.status_code == 200
        assert "sync mean" not in response.text


class TestStaticUi:
    def test_ui_mounted_when_configured(self, tmp_path, monkeypatch, fixture_csv):
        ui = tmp_path / "ui"
        ui.mkdir()
        (ui / "index.html").write_text("<html><body>analyst ui</body></html>")
        monkeypatch.setenv("OPERA_UI_DIR", str(ui))
        client = TestClient(create_app(tmp_path / "sessions"))
        assert "analyst ui" in client.get("/").text
        # API routes still win over the static mount
        assert client.get("/healthz").json() == {"status": "ok"}
        assert upload(client, fixture_csv)
