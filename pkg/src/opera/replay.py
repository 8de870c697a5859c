"""Replay of an object-centric log on an object-centric net.

Each object's event subsequence is replayed as a token game on the net
projected to the object's type. Firing the transition of an event
consumes the object's tokens from the input places at the event's start
and produces tokens into the output places at its completion. Silent
transitions are fired on demand, using the shortest enabling sequence,
at the start time of the event that needs them, so intermediate visits
along a silent chain have zero residence.

Token visits never consumed by any event are closed at the completion
time of the object's last event; each object's initial token begins at
the start time of its first event.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field

from .errors import NonFittingLog, NonFittingTrace, SchemaError
from .ocel import OCEL, Event, FlatTrace
from .ocpn import OCPN, AcceptingNet, project
from .timefmt import format_rfc3339

_SEARCH_CAP = 20_000  # markings explored per silent-path search


@dataclass(frozen=True)
class EventOccurrence:
    """A transition paired with the event that fired it."""

    t: str
    e: Event

    def __hash__(self):
        return hash((self.t, self.e.ei))


@dataclass(frozen=True)
class TokenVisit:
    """A token's timed residence in a place."""

    place: str
    oi: str
    bt: float
    et: float

    def __post_init__(self):
        if self.bt > self.et:
            raise SchemaError(
                f"token visit ({self.place!r}, {self.oi!r}) ends before it begins"
            )


@dataclass(frozen=True)
class ReplayResult:
    occurrences: tuple[EventOccurrence, ...]
    visits: tuple[TokenVisit, ...]
    consumption_index: dict[EventOccurrence, frozenset[TokenVisit]]
    _rel_cache: dict = field(default_factory=dict, compare=False, repr=False)

    def occurrence_of(self, ei: str) -> EventOccurrence | None:
        for eo in self.occurrences:
            if eo.e.ei == ei:
                return eo
        return None


@dataclass
class ObjectReplay:
    """Replay outcome for a single object on its projected net."""

    visits: list[TokenVisit] = field(default_factory=list)
    consumed_by_event: dict[str, list[TokenVisit]] = field(default_factory=dict)
    completed: bool = True  # final marking reached via silent moves


class _TokenGame:
    """Single-object token game on an accepting net."""

    def __init__(self, pn: AcceptingNet, oi: str):
        self.pn = pn
        self.oi = oi
        self.net = pn.net
        self.marking: Counter = Counter()
        self.open_since: dict[str, deque[float]] = {}
        self.out = ObjectReplay()
        self.silents = sorted(t for t in self.net.transitions if t not in self.net.labels)
        self.silent_moves = [
            (t, sorted(self.net.preset(t)), sorted(self.net.postset(t)))
            for t in self.silents
        ]
        self.by_label = {}
        for t, label in self.net.labels.items():
            if label in self.by_label:
                raise SchemaError(f"activity {label!r} labels more than one transition")
            self.by_label[label] = t

    def produce(self, place: str, bt: float) -> None:
        self.marking[place] += 1
        self.open_since.setdefault(place, deque()).append(bt)

    def consume(self, place: str, et: float) -> TokenVisit:
        self.marking[place] -= 1
        if self.marking[place] == 0:
            del self.marking[place]
        bt = self.open_since[place].popleft()
        visit = TokenVisit(place=place, oi=self.oi, bt=bt, et=et)
        self.out.visits.append(visit)
        return visit

    def fire_silent(self, t: str, ts: float) -> None:
        for p in sorted(self.net.preset(t)):
            self.consume(p, ts)
        for p in sorted(self.net.postset(t)):
            self.produce(p, ts)

    def enabled(self, t: str, marking: Counter | None = None) -> bool:
        m = self.marking if marking is None else marking
        return all(m[p] > 0 for p in self.net.preset(t))

    def silent_path(self, goal) -> list[str] | None:
        """Shortest silent firing sequence reaching a marking where goal holds."""
        if goal(self.marking):
            return []
        if not self.silents:
            return None
        start = dict(self.marking)
        queue: deque[tuple[dict, list[str]]] = deque([(start, [])])
        seen = {tuple(sorted(start.items()))}
        while queue and len(seen) < _SEARCH_CAP:
            m, path = queue.popleft()
            for t, preset, postset in self.silent_moves:
                if any(m.get(p, 0) < 1 for p in preset):
                    continue
                m2 = dict(m)
                for p in preset:
                    n = m2[p] - 1
                    if n:
                        m2[p] = n
                    else:
                        del m2[p]
                for p in postset:
                    m2[p] = m2.get(p, 0) + 1
                key = tuple(sorted(m2.items()))
                if key in seen:
                    continue
                seen.add(key)
                path2 = path + [t]
                if goal(m2):
                    return path2
                queue.append((m2, path2))
        return None

    def enable_via_silents(self, t: str, ts: float, event: Event) -> None:
        preset = self.net.preset(t)
        path = self.silent_path(lambda m: all(m.get(p, 0) > 0 for p in preset))
        if path is None:
            missing = sorted(p for p in preset if self.marking[p] < 1)[0]
            raise NonFittingTrace(self.oi, event.ei, missing)
        for tau in path:
            self.fire_silent(tau, ts)

    def fire_event(self, t: str, e: Event) -> None:
        if not self.enabled(t):
            self.enable_via_silents(t, e.st, e)
        consumed = [self.consume(p, e.st) for p in sorted(self.net.preset(t))]
        self.out.consumed_by_event.setdefault(e.ei, []).extend(consumed)
        for p in sorted(self.net.postset(t)):
            self.produce(p, e.ct)

    def finish(self, last_ct: float) -> None:
        final = Counter({p: 1 for p in sorted(self.pn.final_places)})
        path = self.silent_path(lambda m: m == final)
        if path is None:
            self.out.completed = False
        else:
            for tau in path:
                self.fire_silent(tau, last_ct)
        for place in sorted(self.open_since):
            while self.open_since[place]:
                self.consume(place, last_ct)


def replay_object(trace: FlatTrace, pn: AcceptingNet) -> ObjectReplay:
    """Replay one object's trace on the projection of the net for its type."""
    game = _TokenGame(pn, trace.case)
    if not trace.events:
        return game.out
    for p in sorted(pn.initial_places):
        game.produce(p, trace.events[0].st)
    for e in trace.events:
        t = game.by_label.get(e.act)
        if t is None:
            continue
        game.fire_event(t, e)
    game.finish(trace.events[-1].ct)
    return game.out


def replay(log: OCEL, net: OCPN) -> ReplayResult:
    """Replay every object of the log, merging per-object token games."""
    by_label: dict[str, str] = {}
    for t in net.net.transitions:
        label = net.net.label(t)
        if label is not None:
            if label in by_label:
                raise SchemaError(f"activity {label!r} labels more than one transition")
            by_label[label] = t

    occurrences = tuple(
        EventOccurrence(t=by_label[e.act], e=e)
        for e in log.events
        if e.act in by_label
    )

    log_types = set(log.objects.values())
    traces: dict[str, list[Event]] = {}
    for e in log.events:
        for ot, ois in e.omap.items():
            for oi in ois:
                traces.setdefault(oi, []).append(e)

    visits: list[TokenVisit] = []
    consumed_by_event: dict[str, set[TokenVisit]] = {}
    for ot in net.object_types:
        if ot not in log_types:
            continue
        pn = project(net, ot)
        for oi in log.objects_of_type(ot):
            events = traces.get(oi)
            if not events:
                continue
            try:
                result = replay_object(FlatTrace(case=oi, events=tuple(events)), pn)
            except NonFittingTrace as exc:
                raise NonFittingLog(exc.object_id, exc.event_id, exc.place) from None
            visits.extend(result.visits)
            for ei, consumed in result.consumed_by_event.items():
                consumed_by_event.setdefault(ei, set()).update(consumed)

    index = {
        eo: frozenset(consumed_by_event.get(eo.e.ei, ()))
        for eo in occurrences
    }
    visits.sort(key=lambda v: (v.oi, v.bt, v.place, v.et))
    return ReplayResult(
        occurrences=occurrences,
        visits=tuple(visits),
        consumption_index=index,
    )


def dump_replay(rr: ReplayResult) -> str:
    """Line-oriented diagnostics: token visits and event occurrences."""
    lines = []
    for v in rr.visits:
        lines.append(
            f"token_visit {v.place} {v.oi} {format_rfc3339(v.bt)} {format_rfc3339(v.et)}"
        )
    for eo in rr.occurrences:
        lines.append(f"event_occurrence {eo.t} {eo.e.ei}")
    return "\n".join(lines) + ("\n" if lines else "")
