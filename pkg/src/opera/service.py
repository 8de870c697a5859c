"""HTTP service: session-based import, discovery, analysis, and DOT export.

Sessions are directories of flat files under the data root (log.json,
model.json, report.json, replay.jsonl), all written in canonical byte
form, so every endpoint is stateless given the session directory and
responses are byte-identical across restarts. Replay results are cached
in memory keyed by (log hash, model hash, window) and recomputed on
demand after a restart.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import uuid
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.responses import JSONResponse, Response

from . import __version__
from .discovery import discover_ocpn
from .errors import (
    EmptyLog,
    InvalidWindow,
    NonFittingLog,
    OperaError,
    ParseError,
    SchemaError,
    TimestampError,
    TypeConflict,
    UnknownMeasure,
    UnknownObjectType,
)
from .metrics import (
    AGGREGATIONS,
    PerformanceReport,
    analyze,
    dot_annotations,
    expand_measures,
    report_to_json,
)
from .ocel import OCEL, filter_window
from .ocel_io import FORMATS, import_log, serialize_log
from .ocpn import OCPN, model_from_json, model_to_json
from .replay import ReplayResult, dump_replay, replay
from .timefmt import parse_point
from .viz import to_dot

DEFAULT_PORT = 8080

_STATUS = {
    ParseError: 400,
    SchemaError: 400,
    TypeConflict: 400,
    TimestampError: 400,
    InvalidWindow: 400,
    UnknownObjectType: 400,
    UnknownMeasure: 422,
    EmptyLog: 409,
    NonFittingLog: 409,
}


class ApiError(Exception):
    def __init__(self, status: int, error: str, detail: str, position=None):
        self.status = status
        self.error = error
        self.detail = detail
        self.position = position
        super().__init__(detail)

    @classmethod
    def wrap(cls, exc: OperaError) -> "ApiError":
        status = _STATUS.get(type(exc), 400)
        position = getattr(exc, "position", None)
        return cls(status, type(exc).__name__, str(exc), position)

    def body(self) -> dict:
        out = {"error": self.error, "detail": self.detail}
        if self.position is not None:
            out["position"] = self.position
        return out


@dataclass
class _CacheEntry:
    key: tuple
    result: ReplayResult


class SessionStore:
    """Flat-file session persistence with per-session locking."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._registry_lock = threading.Lock()
        self._locks: dict[str, threading.Lock] = {}
        self._replay_cache: dict[str, _CacheEntry] = {}

    def lock(self, sid: str) -> threading.Lock:
        with self._registry_lock:
            if sid not in self._locks:
                self._locks[sid] = threading.Lock()
            return self._locks[sid]

    def path(self, sid: str) -> Path:
        return self.root / sid

    def exists(self, sid: str) -> bool:
        return (self.path(sid) / "log.json").is_file()

    def create(self, data: bytes, fmt: str) -> str:
        log = import_log(data, fmt)
        sid = uuid.uuid4().hex
        session_dir = self.path(sid)
        session_dir.mkdir(parents=True)
        (session_dir / "log.json").write_bytes(serialize_log(log))
        meta = {"session_id": sid, "format": fmt, "created_at": _now_rfc3339()}
        (session_dir / "meta.json").write_text(
            json.dumps(meta, sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )
        return sid

    def log_bytes(self, sid: str) -> bytes:
        return (self.path(sid) / "log.json").read_bytes()

    def load_log(self, sid: str) -> OCEL:
        return import_log(self.log_bytes(sid), "json")

    def save_model(self, sid: str, model: OCPN) -> bytes:
        data = model_to_json(model)
        (self.path(sid) / "model.json").write_bytes(data)
        return data

    def model_bytes(self, sid: str) -> bytes | None:
        path = self.path(sid) / "model.json"
        return path.read_bytes() if path.is_file() else None

    def load_model(self, sid: str) -> OCPN | None:
        data = self.model_bytes(sid)
        return model_from_json(data) if data is not None else None

    def save_report(self, sid: str, report: PerformanceReport) -> bytes:
        data = report_to_json(report)
        (self.path(sid) / "report.json").write_bytes(data)
        return data

    def report_dict(self, sid: str) -> dict | None:
        path = self.path(sid) / "report.json"
        if not path.is_file():
            return None
        return json.loads(path.read_text(encoding="utf-8"))

    def replay_for(self, sid: str, log: OCEL, net: OCPN,
                   window: tuple[float, float] | None) -> ReplayResult:
        key = (
            hashlib.sha256(self.log_bytes(sid)).hexdigest(),
            hashlib.sha256(model_to_json(net)).hexdigest(),
            window,
        )
        cached = self._replay_cache.get(sid)
        if cached is not None and cached.key == key:
            return cached.result
        windowed = filter_window(log, *window) if window is not None else log
        result = replay(windowed, net)
        self._replay_cache[sid] = _CacheEntry(key=key, result=result)
        (self.path(sid) / "replay.jsonl").write_text(dump_replay(result), encoding="utf-8")
        return result


def _now_rfc3339() -> str:
    from .timefmt import format_rfc3339
    import time

    return format_rfc3339(time.time())


def _parse_window(body: dict) -> tuple[float, float] | None:
    window = body.get("window")
    if window is None:
        return None
    if not isinstance(window, dict) or "from" not in window or "to" not in window:
        raise ApiError(400, "InvalidWindow", "window needs 'from' and 'to'")
    try:
        lo = parse_point(window["from"])
        hi = parse_point(window["to"])
    except TimestampError as exc:
        raise ApiError(400, "InvalidWindow", str(exc)) from None
    if lo > hi:
        raise ApiError(400, "InvalidWindow", f"window start {lo} after end {hi}")
    return (lo, hi)


def create_app(data_dir: str | os.PathLike | None = None) -> FastAPI:
    root = Path(data_dir or os.environ.get("OPERA_DATA_DIR", "opera_data"))
    store = SessionStore(root)
    app = FastAPI(title="opera", version=__version__)
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.body())

    def require_session(sid: str) -> None:
        if not store.exists(sid):
            raise ApiError(404, "UnknownSession", f"no session {sid!r}")

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    def create_session(file: UploadFile = File(...), format: str | None = Form(None)):
        fmt = format or _infer_format(file.filename)
        if fmt not in FORMATS:
            raise ApiError(400, "UnknownFormat",
                           f"format must be one of {', '.join(FORMATS)}")
        data = file.file.read()
        try:
            sid = store.create(data, fmt)
        except OperaError as exc:
            raise ApiError.wrap(exc) from None
        return {"session_id": sid}

    @app.get("/sessions/{sid}/log")
    def get_log(sid: str):
        require_session(sid)
        return Response(content=store.log_bytes(sid), media_type="application/json")

    @app.post("/sessions/{sid}/discover")
    def discover(sid: str):
        require_session(sid)
        with store.lock(sid):
            log = store.load_log(sid)
            try:
                model = discover_ocpn(log)
            except EmptyLog as exc:
                raise ApiError.wrap(exc) from None
            store.save_model(sid, model)
            return {
                "places": len(model.net.places),
                "transitions": len(model.net.transitions),
                "arcs": len(model.net.arcs),
                "variable_arcs": len(model.variable_arcs),
                "model": json.loads(model_to_json(model)),
            }

    @app.get("/sessions/{sid}/model")
    def get_model(sid: str):
        require_session(sid)
        data = store.model_bytes(sid)
        if data is None:
            raise ApiError(409, "NoModel", "run discover first")
        return Response(content=data, media_type="application/json")

    @app.post("/sessions/{sid}/analyze")
    def analyze_session(sid: str, body: dict):
        require_session(sid)
        with store.lock(sid):
            net = store.load_model(sid)
            if net is None:
                raise ApiError(409, "NoModel", "run discover first")
            measures = body.get("measures", [])
            if not isinstance(measures, list):
                raise ApiError(422, "UnknownMeasure", "measures must be a list")
            aggregations = body.get("aggregations", list(AGGREGATIONS))
            for agg in aggregations:
                if agg not in AGGREGATIONS:
                    raise ApiError(422, "UnknownMeasure",
                                   f"unknown aggregation {agg!r}")
            log = store.load_log(sid)
            try:
                kinds = expand_measures(measures, log.object_types)
                window = _parse_window(body)
                rr = store.replay_for(sid, log, net, window)
                report = analyze(log, net, kinds, window=window, replay_result=rr)
            except OperaError as exc:
                raise ApiError.wrap(exc) from None
            data = store.save_report(sid, report)
            return Response(content=data, media_type="application/json")

    @app.get("/sessions/{sid}/model.dot")
    def export_dot(sid: str, measure: str | None = None, aggregation: str | None = None):
        require_session(sid)
        net = store.load_model(sid)
        if net is None:
            raise ApiError(409, "NoModel", "run discover first")
        annotations: dict[str, str] = {}
        if measure is not None or aggregation is not None:
            if measure is None or aggregation is None:
                raise ApiError(422, "UnknownMeasure",
                               "annotation needs both measure and aggregation")
            if aggregation not in AGGREGATIONS:
                raise ApiError(422, "UnknownMeasure",
                               f"unknown aggregation {aggregation!r}")
            report = store.report_dict(sid)
            if report is None:
                raise ApiError(409, "NoReport", "run analyze first")
            annotated = dot_annotations(report, measure, aggregation)
            if annotated is None:
                raise ApiError(409, "NoReport",
                               f"measure {measure!r} is not part of the last analysis")
            annotations = annotated
        return Response(content=to_dot(net, annotations), media_type="text/vnd.graphviz")

    ui_dir = os.environ.get("OPERA_UI_DIR")
    if ui_dir and Path(ui_dir).is_dir():
        from starlette.staticfiles import StaticFiles

        # mounted last so API routes take precedence
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _infer_format(filename: str | None) -> str:
    suffix = Path(filename or "").suffix.lower().lstrip(".")
    return {"jsonocel": "json", "xmlocel": "xml"}.get(suffix, suffix)


def main() -> None:
    import uvicorn

    port = int(os.environ.get("OPERA_PORT", str(DEFAULT_PORT)))
    uvicorn.run(create_app(), host="0.0.0.0", port=port)


if __name__ == "__main__":
    main()
