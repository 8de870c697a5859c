"""Labeled Petri nets with typed places, variable arcs, and firing semantics.

Nets are immutable after construction. Markings are plain multisets of
(place, object) tokens owned by the caller.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .errors import MalformedBinding, NotEnabled, SchemaError, UnknownObjectType

Arc = tuple[str, str]


@dataclass(frozen=True)
class LabeledPetriNet:
    places: frozenset[str]
    transitions: frozenset[str]
    arcs: frozenset[Arc]
    labels: dict[str, str]  # transition -> activity; absent = silent

    def __post_init__(self):
        object.__setattr__(self, "places", frozenset(self.places))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        object.__setattr__(self, "arcs", frozenset(self.arcs))
        if self.places & self.transitions:
            raise SchemaError("places and transitions must be disjoint")
        for src, tgt in self.arcs:
            ok = (src in self.places and tgt in self.transitions) or (
                src in self.transitions and tgt in self.places
            )
            if not ok:
                raise SchemaError(f"arc ({src!r}, {tgt!r}) must connect place and transition")
        for t in self.labels:
            if t not in self.transitions:
                raise SchemaError(f"label for unknown transition {t!r}")

    def _adjacency(self) -> tuple[dict, dict]:
        cached = self.__dict__.get("_adj")
        if cached is None:
            presets: dict[str, set[str]] = {}
            postsets: dict[str, set[str]] = {}
            for src, tgt in self.arcs:
                postsets.setdefault(src, set()).add(tgt)
                presets.setdefault(tgt, set()).add(src)
            cached = (
                {n: frozenset(s) for n, s in presets.items()},
                {n: frozenset(s) for n, s in postsets.items()},
            )
            object.__setattr__(self, "_adj", cached)
        return cached

    def preset(self, node: str) -> frozenset[str]:
        return self._adjacency()[0].get(node, frozenset())

    def postset(self, node: str) -> frozenset[str]:
        return self._adjacency()[1].get(node, frozenset())

    def label(self, t: str) -> str | None:
        return self.labels.get(t)


@dataclass(frozen=True)
class AcceptingNet:
    """A labeled net with designated initial and final places."""

    net: LabeledPetriNet
    initial_places: frozenset[str]
    final_places: frozenset[str]


@dataclass(frozen=True)
class OCPN:
    """Labeled net plus place typing and the set of variable arcs."""

    net: LabeledPetriNet
    place_types: dict[str, str]
    variable_arcs: frozenset[Arc] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "variable_arcs", frozenset(self.variable_arcs))
        for p in self.net.places:
            if p not in self.place_types:
                raise SchemaError(f"place {p!r} has no object type")
        for arc in self.variable_arcs:
            if arc not in self.net.arcs:
                raise SchemaError(f"variable arc {arc!r} is not an arc of the net")
        # Variability must be uniform per (transition, object type), else a
        # binding (one object set per type) cannot describe a firing.
        for t in self.net.transitions:
            per_type: dict[str, set[bool]] = {}
            for arc in self._arcs_of(t):
                p = arc[0] if arc[0] in self.net.places else arc[1]
                per_type.setdefault(self.place_types[p], set()).add(arc in self.variable_arcs)
            for ot, flags in per_type.items():
                if len(flags) > 1:
                    raise SchemaError(
                        f"transition {t!r}: mixed variable/non-variable arcs for type {ot!r}"
                    )

    def _arcs_of(self, t: str) -> list[Arc]:
        return [a for a in self.net.arcs if t in a]

    @property
    def object_types(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.place_types.values())))

    def surrounding_types(self, t: str) -> frozenset[str]:
        places = self.net.preset(t) | self.net.postset(t)
        return frozenset(self.place_types[p] for p in places)

    def is_variable(self, t: str, ot: str) -> bool:
        for arc in self._arcs_of(t):
            p = arc[0] if arc[0] in self.net.places else arc[1]
            if self.place_types[p] == ot:
                return arc in self.variable_arcs
        return False


Marking = Counter  # multiset of (place, object id) tokens


@dataclass(frozen=True)
class Binding:
    """One firing: a transition and an object set per surrounding type."""

    t: str
    objects: dict[str, frozenset[str]]

    def __post_init__(self):
        object.__setattr__(
            self, "objects", {ot: frozenset(v) for ot, v in self.objects.items()}
        )

    def all_objects(self) -> frozenset[str]:
        out: set[str] = set()
        for ois in self.objects.values():
            out |= ois
        return frozenset(out)


def check_binding(net: OCPN, bd: Binding) -> None:
    """Raise MalformedBinding unless bd is well-formed for the net."""
    if bd.t not in net.net.transitions:
        raise MalformedBinding(f"unknown transition {bd.t!r}")
    expected = net.surrounding_types(bd.t)
    if frozenset(bd.objects) != expected:
        raise MalformedBinding(
            f"binding for {bd.t!r} must cover types {sorted(expected)}, "
            f"got {sorted(bd.objects)}"
        )
    for ot, ois in bd.objects.items():
        if not ois:
            raise MalformedBinding(f"binding for {bd.t!r}: empty object set for {ot!r}")
        if not net.is_variable(bd.t, ot) and len(ois) != 1:
            raise MalformedBinding(
                f"binding for {bd.t!r}: type {ot!r} is non-variable, needs exactly one object"
            )


def is_enabled(net: OCPN, marking: Marking, bd: Binding) -> bool:
    """True iff every bound object has a token in every input place of its type."""
    check_binding(net, bd)
    for p in net.net.preset(bd.t):
        for oi in bd.objects[net.place_types[p]]:
            if marking[(p, oi)] < 1:
                return False
    return True


def fire(net: OCPN, marking: Marking, bd: Binding) -> Marking:
    """Fire a binding, returning the successor marking."""
    if not is_enabled(net, marking, bd):
        raise NotEnabled(f"binding for {bd.t!r} is not enabled")
    out = Counter(marking)
    for p in net.net.preset(bd.t):
        for oi in bd.objects[net.place_types[p]]:
            out[(p, oi)] -= 1
            if out[(p, oi)] == 0:
                del out[(p, oi)]
    for p in net.net.postset(bd.t):
        for oi in bd.objects[net.place_types[p]]:
            out[(p, oi)] += 1
    return out


def project(net: OCPN, ot: str) -> AcceptingNet:
    """Restrict to places of one type and their adjacent transitions.

    Structural sources become initial places and structural sinks final
    places of the resulting accepting net.
    """
    places = frozenset(p for p in net.net.places if net.place_types[p] == ot)
    if not places:
        raise UnknownObjectType(f"no place of type {ot!r} in the net")
    transitions = frozenset(
        t for t in net.net.transitions
        if (net.net.preset(t) | net.net.postset(t)) & places
    )
    arcs = frozenset(
        (src, tgt) for src, tgt in net.net.arcs
        if (src in places and tgt in transitions) or (src in transitions and tgt in places)
    )
    labels = {t: l for t, l in net.net.labels.items() if t in transitions}
    sub = LabeledPetriNet(places=places, transitions=transitions, arcs=arcs, labels=labels)
    initial = frozenset(p for p in places if not sub.preset(p))
    final = frozenset(p for p in places if not sub.postset(p))
    return AcceptingNet(net=sub, initial_places=initial, final_places=final)


# -- canonical model JSON ----------------------------------------------------


def model_to_json_dict(net: OCPN) -> dict:
    places = [{"id": p, "type": net.place_types[p]} for p in sorted(net.net.places)]
    transitions = []
    for t in sorted(net.net.transitions):
        rec: dict = {"id": t}
        label = net.net.label(t)
        if label is not None:
            rec["label"] = label
        transitions.append(rec)
    arcs = [
        {"source": src, "target": tgt, "variable": (src, tgt) in net.variable_arcs}
        for src, tgt in sorted(net.net.arcs)
    ]
    return {"places": places, "transitions": transitions, "arcs": arcs}


def model_to_json(net: OCPN) -> bytes:
    text = json.dumps(model_to_json_dict(net), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    return text.encode("utf-8")


def model_from_json(source) -> OCPN:
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, (bytes, bytearray)):
        source = bytes(source).decode("utf-8")
    doc = json.loads(source) if isinstance(source, str) else source
    for key in ("places", "transitions", "arcs"):
        if key not in doc:
            raise SchemaError(f"model JSON missing {key!r}")
    place_types = {rec["id"]: rec["type"] for rec in doc["places"]}
    labels = {rec["id"]: rec["label"] for rec in doc["transitions"] if "label" in rec}
    arcs = frozenset((rec["source"], rec["target"]) for rec in doc["arcs"])
    variable = frozenset(
        (rec["source"], rec["target"]) for rec in doc["arcs"] if rec.get("variable")
    )
    net = LabeledPetriNet(
        places=frozenset(place_types),
        transitions=frozenset(rec["id"] for rec in doc["transitions"]),
        arcs=arcs,
        labels=labels,
    )
    return OCPN(net=net, place_types=place_types, variable_arcs=variable)
