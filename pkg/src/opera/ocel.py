"""Object-centric event log model: events carry sets of objects per type.

An event is ordered by (complete timestamp, event id); the log's event
sequence realizes that total order. Logs are immutable after construction
and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidWindow, SchemaError, TimestampError, TypeConflict, UnknownObjectType


@dataclass(frozen=True)
class Event:
    """One event: activity, start/complete times, objects per type."""

    ei: str
    act: str
    st: float
    ct: float
    omap: dict[str, frozenset[str]]

    def __post_init__(self):
        if not self.ei:
            raise SchemaError("event id must be non-empty")
        if not self.act:
            raise SchemaError(f"event {self.ei!r}: activity must be non-empty")
        if self.st > self.ct:
            raise TimestampError(
                f"event {self.ei!r}: start {self.st} after complete {self.ct}"
            )
        cleaned = {ot: frozenset(ois) for ot, ois in self.omap.items() if ois}
        if not cleaned:
            raise SchemaError(f"event {self.ei!r}: needs at least one object")
        for ot, ois in cleaned.items():
            if not ot:
                raise SchemaError(f"event {self.ei!r}: empty object type name")
            if any(not oi for oi in ois):
                raise SchemaError(f"event {self.ei!r}: empty object id")
        object.__setattr__(self, "omap", cleaned)

    @property
    def objects(self) -> frozenset[str]:
        """All object ids of the event, across types."""
        out: set[str] = set()
        for ois in self.omap.values():
            out |= ois
        return frozenset(out)

    def sort_key(self) -> tuple[float, str]:
        return (self.ct, self.ei)


@dataclass(frozen=True)
class OCEL:
    """An ordered event sequence plus the object-to-type inventory."""

    events: tuple[Event, ...]
    objects: dict[str, str]

    def __post_init__(self):
        events = tuple(sorted(self.events, key=Event.sort_key))
        object.__setattr__(self, "events", events)
        seen: set[str] = set()
        for e in events:
            if e.ei in seen:
                raise SchemaError(f"duplicate event id {e.ei!r}")
            seen.add(e.ei)
        inventory = dict(self.objects)
        for e in events:
            for ot, ois in e.omap.items():
                for oi in ois:
                    known = inventory.get(oi)
                    if known is None:
                        inventory[oi] = ot
                    elif known != ot:
                        raise TypeConflict(
                            f"object {oi!r} typed both {known!r} and {ot!r}"
                        )
        object.__setattr__(self, "objects", inventory)

    @property
    def object_types(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.objects.values())))

    def objects_of_type(self, ot: str) -> list[str]:
        return sorted(oi for oi, t in self.objects.items() if t == ot)

    def time_span(self) -> tuple[float, float] | None:
        if not self.events:
            return None
        return (min(e.st for e in self.events), max(e.ct for e in self.events))


@dataclass(frozen=True)
class FlatTrace:
    """The event sequence of one case object, in log order."""

    case: str
    events: tuple[Event, ...]

    def activities(self) -> tuple[str, ...]:
        return tuple(e.act for e in self.events)


@dataclass(frozen=True)
class FlatLog:
    """A single-case-notion view of an OCEL for one object type."""

    ot: str
    traces: tuple[FlatTrace, ...] = field(default_factory=tuple)


def flatten(log: OCEL, ot: str) -> FlatLog:
    """Flatten on one object type: one trace per object, shared events replicated.

    Events not carrying the type are dropped; an event with k objects of
    the type contributes to k traces.
    """
    if ot not in set(log.objects.values()):
        raise UnknownObjectType(f"object type {ot!r} not in log")
    per_object: dict[str, list[Event]] = {oi: [] for oi in log.objects_of_type(ot)}
    for e in log.events:
        for oi in sorted(e.omap.get(ot, ())):
            per_object[oi].append(e)
    traces = tuple(
        FlatTrace(case=oi, events=tuple(evs))
        for oi, evs in sorted(per_object.items())
        if evs
    )
    return FlatLog(ot=ot, traces=traces)


def filter_window(log: OCEL, start: float, end: float) -> OCEL:
    """Keep events completing within [start, end]; restrict the inventory."""
    if start > end:
        raise InvalidWindow(f"window start {start} after end {end}")
    kept = tuple(e for e in log.events if start <= e.ct <= end)
    referenced: set[str] = set()
    for e in kept:
        referenced |= e.objects
    objects = {oi: ot for oi, ot in log.objects.items() if oi in referenced}
    return OCEL(events=kept, objects=objects)
