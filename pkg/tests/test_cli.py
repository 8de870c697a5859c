"""CLI subcommands, exit codes, and parity with the service."""

import json

import pytest
from starlette.testclient import TestClient

from opera.cli import EXIT_DATA, EXIT_NON_FITTING, EXIT_OK, EXIT_USAGE, main
from opera.service import create_app

MEASURES = "flow,sojourn,wait,service,sync,pool,lag,object_freq,object_type_freq"


@pytest.fixture
def fixture_path(tmp_path, fixture_csv):
    path = tmp_path / "fixture.csv"
    path.write_text(fixture_csv)
    return path


class TestValidate:
    def test_fixture_stats(self, fixture_path, capsys):
        assert main(["validate", str(fixture_path)]) == EXIT_OK
        stats = json.loads(capsys.readouterr().out)
        assert stats["events"] == 4
        assert stats["object_types"] == {"sample": 2, "test": 1}

    def test_empty_log(self, tmp_path, capsys):
        path = tmp_path / "empty.json"
        path.write_text('{"ocel:events": {}, "ocel:objects": {}}')
        assert main(["validate", str(path)]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["events"] == 0

    def test_malformed_is_data_error(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"ocel:events": ')
        assert main(["validate", str(path)]) == EXIT_DATA

    def test_missing_file_is_usage_error(self):
        assert main(["validate", "no-such-file.csv"]) == EXIT_USAGE

    def test_unknown_subcommand(self):
        assert main(["frobnicate"]) == EXIT_USAGE


class TestDiscoverCommand:
    def test_writes_model_json(self, fixture_path, tmp_path):
        out = tmp_path / "model.json"
        assert main(["discover", str(fixture_path), "--out", str(out)]) == EXIT_OK
        model = json.loads(out.read_text())
        assert {p["type"] for p in model["places"]} == {"test", "sample"}


class TestAnalyzeCommand:
    def test_sync_and_wait(self, fixture_path, capsys):
        code = main(["analyze", str(fixture_path), "--measures", "sync,wait"])
        assert code == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        conduct = doc["transitions"]["conduct test"]
        assert conduct["sync"]["mean"] == 135.0
        assert conduct["wait"]["mean"] == 30.0

    def test_window(self, fixture_path, capsys):
        code = main(["analyze", str(fixture_path), "--measures", "sync",
                     "--from", "0", "--to", "160"])
        assert code == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["transitions"]["conduct test"]["sync"]["count"] == 0

    def test_mismatched_model_is_non_fitting(self, fixture_path, tmp_path, capsys):
        from loggen import traces_to_ocel
        from opera.discovery import discover_ocpn
        from opera.ocpn import model_to_json

        wrong = discover_ocpn(
            traces_to_ocel([["conduct test", "prepare test"]], ot="test")
        )
        model_path = tmp_path / "wrong.json"
        model_path.write_bytes(model_to_json(wrong))
        code = main(["analyze", str(fixture_path), "--model", str(model_path)])
        assert code == EXIT_NON_FITTING

    def test_unknown_measure_is_data_error(self, fixture_path):
        assert main(["analyze", str(fixture_path), "--measures", "speed"]) == EXIT_DATA

    def test_bad_aggregation_is_usage_error(self, fixture_path):
        code = main(["analyze", str(fixture_path), "--aggregations", "p99"])
        assert code == EXIT_USAGE


class TestDotCommand:
    def test_annotated(self, fixture_path, capsys):
        code = main(["dot", str(fixture_path), "--measures", "sojourn"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("digraph")
        assert "sojourn mean: 1m 30s" in out

    def test_plain(self, fixture_path, capsys):
        assert main(["dot", str(fixture_path)]) == EXIT_OK
        assert "digraph" in capsys.readouterr().out


class TestServiceParity:
    def test_analyze_bytes_match(self, fixture_path, fixture_csv, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(["analyze", str(fixture_path), "--measures", MEASURES,
                     "--out", str(out)])
        assert code == EXIT_OK
        cli_bytes = out.read_bytes()

        client = TestClient(create_app(tmp_path / "sessions"))
        response = client.post(
            "/sessions",
            files={"file": ("fixture.csv", fixture_csv.encode(), "text/csv")},
            data={"format": "csv"},
        )
        sid = response.json()["session_id"]
        client.post(f"/sessions/{sid}/discover")
        service_bytes = client.post(
            f"/sessions/{sid}/analyze",
            json={"measures": MEASURES.split(",")},
        ).content
        assert cli_bytes == service_bytes


class TestServeCommand:
    def test_invokes_uvicorn(self, monkeypatch):
        calls = {}

        def fake_run(app, host, port):
            calls["host"] = host
            calls["port"] = port

        import uvicorn
        monkeypatch.setattr(uvicorn, "run", fake_run)
        monkeypatch.setenv("OPERA_PORT", "9191")
        monkeypatch.setenv("OPERA_DATA_DIR", "/tmp/opera-serve-test")
        assert main(["serve"]) == EXIT_OK
        assert calls["port"] == 9191
