"""Timestamp parsing/formatting helpers.

Timestamps are handled internally as float seconds since the Unix epoch
(UTC), quantized to millisecond precision. Interchange formats carry
RFC 3339 strings.
"""

from __future__ import annotations

from datetime import datetime, timezone

from .errors import TimestampError

_MS = 1000


def parse_rfc3339(text: str) -> float:
    """Parse an RFC 3339 timestamp into epoch seconds (ms precision)."""
    if not isinstance(text, str) or not text:
        raise TimestampError(f"not a timestamp: {text!r}")
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(raw)
    except ValueError:
        raise TimestampError(f"unparseable timestamp: {text!r}") from None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return round(dt.timestamp() * _MS) / _MS


def format_rfc3339(ts: float) -> str:
    """Render epoch seconds as canonical RFC 3339 (UTC, milliseconds, Z)."""
    ms = round(ts * _MS)
    dt = datetime.fromtimestamp(ms / _MS, tz=timezone.utc)
    return dt.strftime("%Y-%m-%dT%H:%M:%S.") + f"{ms % _MS:03d}Z"


def parse_point(text: str) -> float:
    """Parse a user-supplied time point: RFC 3339 or plain epoch seconds."""
    try:
        return float(text)
    except (TypeError, ValueError):
        return parse_rfc3339(text)


def format_duration(seconds: float) -> str:
    """Format a duration in seconds as 'Nd Nh Nm Ns', dropping zero units.

    Examples: 90 -> '1m 30s', 135 -> '2m 15s', 126000 -> '1d 11h', 0 -> '0s'.
    """
    if seconds < 0:
        return "-" + format_duration(-seconds)
    ms = round(seconds * _MS)
    days, ms = divmod(ms, 86_400_000)
    hours, ms = divmod(ms, 3_600_000)
    minutes, ms = divmod(ms, 60_000)
    secs = ms / _MS
    parts = []
    if days:
        parts.append(f"{days}d")
    if hours:
        parts.append(f"{hours}h")
    if minutes:
        parts.append(f"{minutes}m")
    if secs:
        text = f"{secs:.3f}".rstrip("0").rstrip(".")
        parts.append(f"{text}s")
    return " ".join(parts) if parts else "0s"
