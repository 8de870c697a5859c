"""Object-centric performance measures over replay results.

All durations are seconds (floats). Each measure is computed per event
occurrence from the begin times of the token visits related to it: the
visit, per related object, with the latest begin time among the visits
the occurrence consumed. Restricting to consumed visits keeps the
relation well-defined on cyclic models, where an object may revisit an
input place after the event fired.

Per-type measures can be undefined for an occurrence (no object of the
type participates); undefined samples are excluded from aggregation and
reported separately.
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass

from .errors import MissingVisit, UnknownMeasure
from .ocel import OCEL, filter_window
from .ocpn import OCPN
from .replay import EventOccurrence, ReplayResult, TokenVisit
from .replay import replay as _replay

BASIC_MEASURES = ("flow", "sojourn", "wait", "service", "sync")
TYPED_MEASURES = ("pool", "lag")
FREQUENCY_MEASURES = ("object_freq", "object_type_freq")

AGGREGATIONS = ("mean", "median", "min", "max")


@dataclass(frozen=True)
class MeasureKind:
    name: str
    ot: str | None = None

    def __post_init__(self):
        if self.name in TYPED_MEASURES:
            if not self.ot:
                raise UnknownMeasure(f"measure {self.name!r} needs an object type")
        elif self.name in BASIC_MEASURES or self.name in FREQUENCY_MEASURES:
            if self.ot is not None:
                raise UnknownMeasure(f"measure {self.name!r} takes no object type")
        else:
            raise UnknownMeasure(f"unknown measure {self.name!r}")

    def key(self) -> str:
        return f"{self.name}:{self.ot}" if self.ot else self.name


def parse_measure(key: str) -> MeasureKind:
    """Parse a report key like 'sync' or 'pool:sample'."""
    name, sep, ot = key.partition(":")
    return MeasureKind(name=name, ot=ot if sep else None)


def expand_measures(keys, object_types) -> tuple[MeasureKind, ...]:
    """Parse measure keys; bare 'pool'/'lag' expand over all object types."""
    kinds: list[MeasureKind] = []
    for key in keys:
        if key in TYPED_MEASURES:
            kinds.extend(MeasureKind(name=key, ot=ot) for ot in sorted(object_types))
        else:
            kinds.append(parse_measure(key))
    seen: set[str] = set()
    out: list[MeasureKind] = []
    for kind in kinds:
        if kind.key() not in seen:
            seen.add(kind.key())
            out.append(kind)
    return tuple(out)


def all_measures(object_types) -> tuple[MeasureKind, ...]:
    keys = list(BASIC_MEASURES) + list(TYPED_MEASURES) + list(FREQUENCY_MEASURES)
    return expand_measures(keys, object_types)


# -- relating occurrences to token visits ------------------------------------


def related_token_visits(eo: EventOccurrence, rr: ReplayResult) -> frozenset[TokenVisit]:
    """One visit per related object: the consumed visit with the latest begin."""
    cached = rr._rel_cache.get(eo)
    if cached is not None:
        return cached
    consumed = rr.consumption_index.get(eo)
    if consumed is None:
        raise MissingVisit(f"occurrence ({eo.t!r}, {eo.e.ei!r}) not in the replay result")
    by_object: dict[str, list[TokenVisit]] = {}
    for v in consumed:
        by_object.setdefault(v.oi, []).append(v)
    out = []
    for oi in sorted(eo.e.objects):
        candidates = by_object.get(oi)
        if not candidates:
            raise MissingVisit(
                f"no consumed token visit for object {oi!r} at event {eo.e.ei!r}"
            )
        out.append(max(candidates, key=lambda v: (v.bt, v.place)))
    result = frozenset(out)
    rr._rel_cache[eo] = result
    return result


# -- measurement functions ----------------------------------------------------


def measure_basic(kind: str, eo: EventOccurrence, rr: ReplayResult) -> float:
    if kind not in BASIC_MEASURES:
        raise UnknownMeasure(f"not a basic measure: {kind!r}")
    begins = [v.bt for v in related_token_visits(eo, rr)]
    e = eo.e
    if kind == "flow":
        return e.ct - min(begins)
    if kind == "sojourn":
        return e.ct - max(begins)
    if kind == "wait":
        return e.st - max(begins)
    if kind == "service":
        return e.ct - e.st
    return max(begins) - min(begins)  # sync


def measure_typed(kind: str, ot: str, eo: EventOccurrence, rr: ReplayResult) -> float | None:
    if kind not in TYPED_MEASURES:
        raise UnknownMeasure(f"not a typed measure: {kind!r}")
    rel = related_token_visits(eo, rr)
    of_type = eo.e.omap.get(ot, frozenset())
    if kind == "pool":
        begins = [v.bt for v in rel if v.oi in of_type]
        if not begins:
            return None
        return max(begins) - min(begins)
    # lag: delay of the other types' latest arrival past the overall earliest
    other = [v.bt for v in rel if v.oi not in of_type]
    if not other:
        return 0.0
    earliest = min(v.bt for v in rel)
    latest_other = max(other)
    return latest_other - earliest if latest_other > earliest else 0.0


def measure_frequency(kind: str, eo: EventOccurrence) -> int:
    if kind == "object_freq":
        return len(eo.e.objects)
    if kind == "object_type_freq":
        return len(eo.e.omap)
    raise UnknownMeasure(f"not a frequency measure: {kind!r}")


def compute_measure(kind: MeasureKind, eo: EventOccurrence, rr: ReplayResult) -> float | None:
    if kind.name in BASIC_MEASURES:
        return measure_basic(kind.name, eo, rr)
    if kind.name in TYPED_MEASURES:
        return measure_typed(kind.name, kind.ot, eo, rr)
    return float(measure_frequency(kind.name, eo))


# -- aggregation and reports ---------------------------------------------------


@dataclass(frozen=True)
class MeasureStats:
    samples: tuple[float, ...]
    undefined_count: int

    @property
    def count(self) -> int:
        return len(self.samples)

    @property
    def mean(self) -> float | None:
        return statistics.fmean(self.samples) if self.samples else None

    @property
    def median(self) -> float | None:
        return float(statistics.median(self.samples)) if self.samples else None

    @property
    def min(self) -> float | None:
        return min(self.samples) if self.samples else None

    @property
    def max(self) -> float | None:
        return max(self.samples) if self.samples else None

    def aggregate(self, name: str) -> float | None:
        if name not in AGGREGATIONS:
            raise UnknownMeasure(f"unknown aggregation {name!r}")
        return getattr(self, name)

    def to_json_dict(self) -> dict:
        return {
            "samples": list(self.samples),
            "mean": self.mean,
            "median": self.median,
            "min": self.min,
            "max": self.max,
            "count": self.count,
            "undefined_count": self.undefined_count,
        }


@dataclass(frozen=True)
class PerformanceReport:
    transitions: dict[str, dict[str, MeasureStats]]
    window: tuple[float, float] | None = None

    def stats(self, transition: str, measure_key: str) -> MeasureStats:
        return self.transitions[transition][measure_key]

    def to_json_dict(self) -> dict:
        window = None
        if self.window is not None:
            window = {"from": self.window[0], "to": self.window[1]}
        return {
            "window": window,
            "transitions": {
                t: {key: stats.to_json_dict() for key, stats in measures.items()}
                for t, measures in self.transitions.items()
            },
        }


def report_to_json(report: PerformanceReport) -> bytes:
    text = json.dumps(report.to_json_dict(), sort_keys=True, indent=2,
                      ensure_ascii=False) + "\n"
    return text.encode("utf-8")


def format_measure_value(measure_key: str, value: float) -> str:
    """Durations as 'Nd Nh Nm Ns'; frequency measures as plain numbers."""
    from .timefmt import format_duration

    if measure_key in FREQUENCY_MEASURES:
        return f"{value:g}"
    return format_duration(value)


def dot_annotations(report_dict: dict, measure: str, aggregation: str) -> dict[str, str] | None:
    """Per-transition annotation text for one measure/aggregation.

    Returns None when the measure is not part of the report; transitions
    without samples get no annotation.
    """
    if aggregation not in AGGREGATIONS:
        raise UnknownMeasure(f"unknown aggregation {aggregation!r}")
    transitions = report_dict.get("transitions", {})
    if not any(measure in measures for measures in transitions.values()):
        return None
    out: dict[str, str] = {}
    for t, measures in transitions.items():
        stats = measures.get(measure)
        if not stats or stats["count"] == 0:
            continue
        value = stats[aggregation]
        out[t] = f"{measure} {aggregation}: {format_measure_value(measure, value)}"
    return out


def analyze(
    log: OCEL,
    net: OCPN,
    kinds,
    window: tuple[float, float] | None = None,
    replay_result: ReplayResult | None = None,
) -> PerformanceReport:
    """Replay the (windowed) log and aggregate the requested measures.

    A precomputed replay of the same windowed log can be passed to skip
    the replay step.
    """
    if window is not None:
        log = filter_window(log, window[0], window[1])
    rr = replay_result if replay_result is not None else _replay(log, net)

    by_transition: dict[str, list[EventOccurrence]] = {}
    for eo in rr.occurrences:
        by_transition.setdefault(eo.t, []).append(eo)

    labeled = sorted(t for t in net.net.transitions if net.net.label(t) is not None)
    kinds = tuple(kinds)
    transitions: dict[str, dict[str, MeasureStats]] = {}
    for t in labeled:
        measures: dict[str, MeasureStats] = {}
        for kind in kinds:
            samples: list[float] = []
            undefined = 0
            for eo in by_transition.get(t, ()):
                value = compute_measure(kind, eo, rr)
                if value is None:
                    undefined += 1
                else:
                    samples.append(float(value))
            measures[kind.key()] = MeasureStats(
                samples=tuple(samples), undefined_count=undefined
            )
        transitions[t] = measures
    return PerformanceReport(transitions=transitions, window=window)
