"""Import/export of object-centric event logs (JSON, XML, CSV).

The JSON layout uses `ocel:`-prefixed keys: `ocel:global-log` (declared
object types and attribute names), `ocel:events` (id -> activity,
timestamp, omap, vmap) and `ocel:objects` (id -> type). The complete
timestamp lives in `ocel:timestamp`; a start timestamp may be given as
the `start_timestamp` attribute in `ocel:vmap` and defaults to the
complete timestamp when absent.

The XML layout mirrors the JSON structure element for element. The CSV
layout has columns event_id, activity, start_timestamp,
complete_timestamp, then one column per object type holding
";"-separated object ids.
"""

from __future__ import annotations

import csv
import io
import json
import xml.etree.ElementTree as ET

from .errors import ParseError, SchemaError, TypeConflict
from .ocel import OCEL, Event
from .timefmt import format_rfc3339, parse_rfc3339

FORMATS = ("json", "xml", "csv")

CSV_FIXED_COLUMNS = ("event_id", "activity", "start_timestamp", "complete_timestamp")


def import_log(source, format: str) -> OCEL:
    """Parse a log from bytes, text, or a readable in the given format."""
    text = _as_text(source)
    if format == "json":
        return _import_json(text)
    if format == "xml":
        return _import_xml(text)
    if format == "csv":
        return _import_csv(text)
    raise ValueError(f"unknown log format {format!r}; expected one of {FORMATS}")


def serialize_log(log: OCEL) -> bytes:
    """Render a log as canonical JSON bytes (stable across runs)."""
    events = {}
    for e in log.events:
        events[e.ei] = {
            "ocel:activity": e.act,
            "ocel:timestamp": format_rfc3339(e.ct),
            "ocel:omap": sorted(e.objects),
            "ocel:vmap": {"start_timestamp": format_rfc3339(e.st)},
        }
    doc = {
        "ocel:global-log": {
            "ocel:object-types": list(log.object_types),
            "ocel:attribute-names": ["start_timestamp"],
        },
        "ocel:events": events,
        "ocel:objects": {
            oi: {"ocel:type": ot} for oi, ot in sorted(log.objects.items())
        },
    }
    text = json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    return text.encode("utf-8")


def _as_text(source) -> str:
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, (bytes, bytearray)):
        try:
            return bytes(source).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from None
    if isinstance(source, str):
        return source
    raise ParseError(f"unsupported source type {type(source).__name__}")


# -- JSON ------------------------------------------------------------------


def _import_json(text: str) -> OCEL:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, position=f"line {exc.lineno}, column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise SchemaError("top-level JSON value must be an object")
    raw_events = _require(doc, "ocel:events", dict)
    raw_objects = _require(doc, "ocel:objects", dict)

    types: dict[str, str] = {}
    for oi, rec in raw_objects.items():
        if not isinstance(rec, dict) or "ocel:type" not in rec:
            raise SchemaError(f"object {oi!r}: missing ocel:type")
        types[oi] = str(rec["ocel:type"])

    events = []
    for ei, rec in raw_events.items():
        if not isinstance(rec, dict):
            raise SchemaError(f"event {ei!r}: record must be an object")
        for key in ("ocel:activity", "ocel:timestamp", "ocel:omap"):
            if key not in rec:
                raise SchemaError(f"event {ei!r}: missing {key}")
        ct = parse_rfc3339(rec["ocel:timestamp"])
        vmap = rec.get("ocel:vmap") or {}
        st = parse_rfc3339(vmap["start_timestamp"]) if "start_timestamp" in vmap else ct
        omap: dict[str, set[str]] = {}
        for oi in rec["ocel:omap"]:
            oi = str(oi)
            if oi not in types:
                raise SchemaError(f"event {ei!r}: object {oi!r} not declared in ocel:objects")
            omap.setdefault(types[oi], set()).add(oi)
        events.append(Event(ei=str(ei), act=str(rec["ocel:activity"]), st=st, ct=ct,
                            omap={ot: frozenset(s) for ot, s in omap.items()}))
    return OCEL(events=tuple(events), objects=types)


def _require(doc: dict, key: str, kind: type):
    if key not in doc:
        raise SchemaError(f"missing top-level key {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise SchemaError(f"{key!r} must be a JSON {kind.__name__}")
    return value


# -- XML -------------------------------------------------------------------


def _import_xml(text: str) -> OCEL:
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line, col = exc.position
        raise ParseError(str(exc.msg if hasattr(exc, "msg") else exc),
                         position=f"line {line}, column {col}") from None

    objects_el = root.find("objects")
    events_el = root.find("events")
    if objects_el is None:
        raise SchemaError("missing <objects> element")
    if events_el is None:
        raise SchemaError("missing <events> element")

    types: dict[str, str] = {}
    for obj in objects_el.findall("object"):
        oi = obj.get("id")
        ot = obj.get("type")
        if oi is None or ot is None:
            raise SchemaError("<object> needs id and type attributes")
        types[oi] = ot

    events = []
    for ev in events_el.findall("event"):
        ei = ev.get("id")
        act = ev.get("activity")
        ts = ev.get("timestamp")
        if ei is None or act is None or ts is None:
            raise SchemaError("<event> needs id, activity and timestamp attributes")
        ct = parse_rfc3339(ts)
        st = ct
        vmap = ev.find("vmap")
        if vmap is not None:
            st_el = vmap.find("start_timestamp")
            if st_el is not None and st_el.text:
                st = parse_rfc3339(st_el.text)
        omap_el = ev.find("omap")
        omap: dict[str, set[str]] = {}
        if omap_el is not None:
            for obj in omap_el.findall("object"):
                oi = (obj.text or "").strip()
                if not oi:
                    raise SchemaError(f"event {ei!r}: empty <object> in omap")
                if oi not in types:
                    raise SchemaError(f"event {ei!r}: object {oi!r} not declared in <objects>")
                omap.setdefault(types[oi], set()).add(oi)
        events.append(Event(ei=ei, act=act, st=st, ct=ct,
                            omap={ot: frozenset(s) for ot, s in omap.items()}))
    return OCEL(events=tuple(events), objects=types)


# -- CSV -------------------------------------------------------------------


def _import_csv(text: str) -> OCEL:
    reader = csv.reader(io.StringIO(text))
    try:
        rows = list(reader)
    except csv.Error as exc:
        raise ParseError(str(exc), position=f"line {reader.line_num}") from None
    if not rows:
        raise SchemaError("CSV input has no header row")
    header = [h.strip() for h in rows[0]]
    if tuple(header[: len(CSV_FIXED_COLUMNS)]) != CSV_FIXED_COLUMNS:
        raise SchemaError(
            "CSV header must start with " + ",".join(CSV_FIXED_COLUMNS)
        )
    type_columns = header[len(CSV_FIXED_COLUMNS):]
    if len(set(type_columns)) != len(type_columns):
        raise SchemaError("duplicate object-type column in CSV header")

    events = []
    types: dict[str, str] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) < len(CSV_FIXED_COLUMNS):
            raise ParseError("row has fewer cells than the fixed columns",
                             position=f"line {lineno}")
        ei, act, st_raw, ct_raw = (cell.strip() for cell in row[: len(CSV_FIXED_COLUMNS)])
        if not ei:
            raise SchemaError(f"line {lineno}: empty event_id")
        ct = parse_rfc3339(ct_raw)
        st = parse_rfc3339(st_raw) if st_raw else ct
        omap: dict[str, frozenset[str]] = {}
        for ot, cell in zip(type_columns, row[len(CSV_FIXED_COLUMNS):]):
            ois = frozenset(x.strip() for x in cell.split(";") if x.strip())
            if not ois:
                continue
            for oi in ois:
                known = types.get(oi)
                if known is None:
                    types[oi] = ot
                elif known != ot:
                    raise TypeConflict(
                        f"line {lineno}: object {oi!r} typed both {known!r} and {ot!r}"
                    )
            omap[ot] = ois
        events.append(Event(ei=ei, act=act, st=st, ct=ct, omap=omap))
    return OCEL(events=tuple(events), objects=types)
