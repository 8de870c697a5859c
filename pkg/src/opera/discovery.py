"""Model discovery: per-type flattening, directly-follows graphs, recursive
cut detection over the DFG, process-tree-to-net conversion, and merging of
the per-type nets into one object-centric net with variable-arc detection.

Cut detection recurses over the DFG only (no trace passes), trying cuts in
the fixed order exclusive-choice, sequence, parallel, loop, and falling
back to a flower model. Sub-DFGs are built so that every walk of the
parent graph stays replayable, which makes every discovered net fit the
log it was discovered from.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

from .errors import EmptyLog, SchemaError
from .ocel import OCEL, FlatLog, flatten
from .ocpn import OCPN, AcceptingNet, LabeledPetriNet


@dataclass(frozen=True)
class DFG:
    """Directly-follows graph with start/end activity multisets."""

    activities: frozenset[str]
    edges: dict[tuple[str, str], int]
    start_acts: Counter
    end_acts: Counter

    def __post_init__(self):
        for a, b in self.edges:
            if a not in self.activities or b not in self.activities:
                raise SchemaError(f"edge ({a!r}, {b!r}) has endpoint outside activities")
        for a in itertools.chain(self.start_acts, self.end_acts):
            if a not in self.activities:
                raise SchemaError(f"start/end activity {a!r} outside activities")


def build_dfg(flat: FlatLog) -> DFG:
    """Count direct successions, starts, and ends over all traces."""
    activities: set[str] = set()
    edges: Counter = Counter()
    starts: Counter = Counter()
    ends: Counter = Counter()
    for trace in flat.traces:
        acts = trace.activities()
        if not acts:
            continue
        activities.update(acts)
        starts[acts[0]] += 1
        ends[acts[-1]] += 1
        for a, b in zip(acts, acts[1:]):
            edges[(a, b)] += 1
    return DFG(activities=frozenset(activities), edges=dict(edges),
               start_acts=starts, end_acts=ends)


# -- process trees -----------------------------------------------------------

ACTIVITY = "activity"
SILENT = "silent"
SEQUENCE = "sequence"
XOR = "xor"
PARALLEL = "parallel"
LOOP = "loop"

_OPERATORS = (SEQUENCE, XOR, PARALLEL, LOOP)


@dataclass(frozen=True)
class ProcessTree:
    kind: str
    label: str | None = None
    children: tuple["ProcessTree", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if self.kind == ACTIVITY:
            if not self.label or self.children:
                raise SchemaError("activity leaf needs a label and no children")
        elif self.kind == SILENT:
            if self.label or self.children:
                raise SchemaError("silent leaf has no label and no children")
        elif self.kind in _OPERATORS:
            minimum = 2 if self.kind == LOOP else 1
            if len(self.children) < minimum:
                raise SchemaError(f"{self.kind} node needs >= {minimum} children")
        else:
            raise SchemaError(f"unknown tree node kind {self.kind!r}")

    def leaves(self) -> tuple[str, ...]:
        if self.kind == ACTIVITY:
            return (self.label,)
        out: list[str] = []
        for child in self.children:
            out.extend(child.leaves())
        return tuple(out)

    def __str__(self) -> str:
        if self.kind == ACTIVITY:
            return self.label
        if self.kind == SILENT:
            return "tau"
        return f"{self.kind}({', '.join(str(c) for c in self.children)})"


def leaf(label: str) -> ProcessTree:
    return ProcessTree(kind=ACTIVITY, label=label)


def silent() -> ProcessTree:
    return ProcessTree(kind=SILENT)


def seq(*children: ProcessTree) -> ProcessTree:
    return ProcessTree(kind=SEQUENCE, children=children)


def xor(*children: ProcessTree) -> ProcessTree:
    return ProcessTree(kind=XOR, children=children)


def par(*children: ProcessTree) -> ProcessTree:
    return ProcessTree(kind=PARALLEL, children=children)


def loop(*children: ProcessTree) -> ProcessTree:
    return ProcessTree(kind=LOOP, children=children)


# -- cut detection -----------------------------------------------------------


@dataclass(frozen=True)
class _Frame:
    """One recursion step: a sub-DFG plus whether the empty trace occurs."""

    activities: frozenset[str]
    edges: frozenset[tuple[str, str]]
    starts: frozenset[str]
    ends: frozenset[str]
    can_skip: bool = False


def imd_discover(dfg: DFG, conservative: bool = False) -> ProcessTree:
    """Discover a process tree from a directly-follows graph.

    In conservative mode the parallel split over-approximates the child
    graphs so that the result replays every walk of the DFG, at the cost
    of precision. The default split rediscovers clean parallelism but can
    miss interleavings the graph only shows indirectly.
    """
    frame = _Frame(
        activities=dfg.activities,
        edges=frozenset(dfg.edges),
        starts=frozenset(dfg.start_acts),
        ends=frozenset(dfg.end_acts),
    )
    return _discover(frame, conservative)


def _discover(frame: _Frame, conservative: bool) -> ProcessTree:
    if not frame.activities:
        return silent()
    if frame.can_skip:
        inner = _discover(
            _Frame(frame.activities, frame.edges, frame.starts, frame.ends), conservative
        )
        return xor(silent(), inner)
    if len(frame.activities) == 1:
        (a,) = frame.activities
        if (a, a) in frame.edges:
            return loop(leaf(a), silent())
        return leaf(a)
    for cut in (_xor_cut, _sequence_cut, _parallel_cut, _loop_cut):
        found = cut(frame, conservative)
        if found is not None:
            operator, parts = found
            return ProcessTree(
                kind=operator,
                children=tuple(_discover(p, conservative) for p in parts),
            )
    return loop(silent(), xor(*(leaf(a) for a in sorted(frame.activities))))


def _components(activities: frozenset[str], pairs) -> list[frozenset[str]]:
    """Connected components of an undirected graph, sorted by min element."""
    neighbors: dict[str, set[str]] = {a: set() for a in activities}
    for a, b in pairs:
        if a in neighbors and b in neighbors and a != b:
            neighbors[a].add(b)
            neighbors[b].add(a)
    seen: set[str] = set()
    comps: list[frozenset[str]] = []
    for a in sorted(activities):
        if a in seen:
            continue
        stack = [a]
        comp: set[str] = set()
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(neighbors[x] - comp)
        seen |= comp
        comps.append(frozenset(comp))
    return sorted(comps, key=min)


def _xor_cut(frame: _Frame, conservative: bool):
    comps = _components(frame.activities, frame.edges)
    if len(comps) < 2:
        return None
    parts = [
        _Frame(
            activities=comp,
            edges=frozenset((a, b) for a, b in frame.edges if a in comp),
            starts=frame.starts & comp,
            ends=frame.ends & comp,
        )
        for comp in comps
    ]
    return XOR, parts


def _strongly_connected(frame: _Frame) -> list[frozenset[str]]:
    """Kosaraju SCCs over the frame's directed edges."""
    fwd: dict[str, list[str]] = {a: [] for a in frame.activities}
    rev: dict[str, list[str]] = {a: [] for a in frame.activities}
    for a, b in sorted(frame.edges):
        fwd[a].append(b)
        rev[b].append(a)
    order: list[str] = []
    seen: set[str] = set()
    for a in sorted(frame.activities):
        if a in seen:
            continue
        stack = [(a, iter(fwd[a]))]
        seen.add(a)
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append((nxt, iter(fwd[nxt])))
                    advanced = True
                    break
            if not advanced:
                order.append(node)
                stack.pop()
    comps: list[frozenset[str]] = []
    assigned: set[str] = set()
    for a in reversed(order):
        if a in assigned:
            continue
        comp: set[str] = set()
        stack = [a]
        while stack:
            x = stack.pop()
            if x in assigned:
                continue
            assigned.add(x)
            comp.add(x)
            stack.extend(y for y in rev[x] if y not in assigned)
        comps.append(frozenset(comp))
    return comps


def _sequence_cut(frame: _Frame, conservative: bool):
    groups = _strongly_connected(frame)
    if len(groups) < 2:
        return None
    index = {a: i for i, comp in enumerate(groups) for a in comp}
    n = len(groups)
    reach = [[False] * n for _ in range(n)]
    for a, b in frame.edges:
        if index[a] != index[b]:
            reach[index[a]][index[b]] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    if reach[k][j]:
                        reach[i][j] = True

    # Merge groups until every remaining pair is ordered one way.
    group_ids = list(range(n))
    merged: dict[int, set[int]] = {i: {i} for i in group_ids}

    def reaches(g1: int, g2: int) -> bool:
        return any(reach[i][j] for i in merged[g1] for j in merged[g2])

    changed = True
    while changed:
        changed = False
        ids = sorted(merged)
        for i, g1 in enumerate(ids):
            for g2 in ids[i + 1:]:
                fwd = reaches(g1, g2)
                bwd = reaches(g2, g1)
                if fwd == bwd:
                    merged[g1] |= merged.pop(g2)
                    changed = True
                    break
            if changed:
                break
    if len(merged) < 2:
        return None

    classes = sorted(
        merged.values(),
        key=lambda members: -sum(1 for other in merged.values() if other is not members
                                 and any(reach[i][j] for i in members for j in other)),
    )
    # The merge loop only guarantees pairwise one-way reachability; demand a
    # genuine total order, otherwise the split would not be sound.
    for a_idx, earlier in enumerate(classes):
        for later in classes[a_idx + 1:]:
            fwd = any(reach[i][j] for i in earlier for j in later)
            bwd = any(reach[i][j] for i in later for j in earlier)
            if not fwd or bwd:
                return None
    class_of: dict[str, int] = {}
    class_sets: list[frozenset[str]] = []
    for rank, members in enumerate(classes):
        acts = frozenset(a for i in members for a in groups[i])
        class_sets.append(acts)
        for a in acts:
            class_of[a] = rank

    parts = []
    for rank, acts in enumerate(class_sets):
        starts = set(frame.starts & acts)
        ends = set(frame.ends & acts)
        for a, b in frame.edges:
            if b in acts and class_of[a] < rank:
                starts.add(b)
            if a in acts and class_of[b] > rank:
                ends.add(a)
        skip = (
            any(class_of[a] < rank < class_of[b] for a, b in frame.edges)
            or any(class_of[s] > rank for s in frame.starts)
            or any(class_of[e] < rank for e in frame.ends)
        )
        parts.append(_Frame(
            activities=acts,
            edges=frozenset((a, b) for a, b in frame.edges if a in acts and b in acts),
            starts=frozenset(starts),
            ends=frozenset(ends),
            can_skip=skip,
        ))
    return SEQUENCE, parts


def _parallel_cut(frame: _Frame, conservative: bool):
    # Activities end up in one component unless they directly follow each
    # other in both directions; across components every pair is then
    # mutually connected.
    uncoupled = [
        (a, b)
        for a in frame.activities
        for b in frame.activities
        if a < b and not ((a, b) in frame.edges and (b, a) in frame.edges)
    ]
    comps = _components(frame.activities, uncoupled)
    if len(comps) < 2:
        return None
    for comp in comps:
        if not (comp & frame.starts) or not (comp & frame.ends):
            return None
    if conservative:
        return PARALLEL, _parallel_parts_closure(frame, comps)
    return PARALLEL, _parallel_parts_direct(frame, comps)


def _parallel_parts_direct(frame: _Frame, comps) -> list[_Frame]:
    """Project onto each component keeping only directly observed edges."""
    parts = []
    for comp in comps:
        starts = set(frame.starts & comp)
        ends = set(frame.ends & comp)
        for a, b in frame.edges:
            if b in comp and a not in comp:
                starts.add(b)
            if a in comp and b not in comp:
                ends.add(a)
        parts.append(_Frame(
            activities=comp,
            edges=frozenset((a, b) for a, b in frame.edges if a in comp and b in comp),
            starts=frozenset(starts),
            ends=frozenset(ends),
        ))
    return parts


def _parallel_parts_closure(frame: _Frame, comps) -> list[_Frame]:
    """Project onto each component, closing edges/starts/ends over detours
    through the other components, so every walk of the parent graph projects
    to a walk of the child graph."""
    adj: dict[str, set[str]] = {a: set() for a in frame.activities}
    radj: dict[str, set[str]] = {a: set() for a in frame.activities}
    for a, b in frame.edges:
        adj[a].add(b)
        radj[b].add(a)

    def through(outside: frozenset[str], seeds: set[str], graph: dict[str, set[str]]) -> set[str]:
        seen = set(seeds)
        stack = list(seeds)
        while stack:
            x = stack.pop()
            for y in graph[x]:
                if y in outside and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    parts = []
    for comp in comps:
        outside = frame.activities - comp
        edges = {(a, b) for a, b in frame.edges if a in comp and b in comp}
        for x in sorted(comp):
            hops = through(outside, {y for y in adj[x] if y in outside}, adj)
            for u in hops:
                for y in adj[u]:
                    if y in comp:
                        edges.add((x, y))
        starts = set(frame.starts & comp)
        reach_fwd = through(outside, {s for s in frame.starts if s in outside}, adj)
        for u in reach_fwd:
            for y in adj[u]:
                if y in comp:
                    starts.add(y)
        ends = set(frame.ends & comp)
        reach_bwd = through(outside, {e for e in frame.ends if e in outside}, radj)
        for u in reach_bwd:
            for y in radj[u]:
                if y in comp:
                    ends.add(y)
        skip = bool(reach_fwd & {e for e in frame.ends if e in outside})
        parts.append(_Frame(
            activities=comp,
            edges=frozenset(edges),
            starts=frozenset(starts),
            ends=frozenset(ends),
            can_skip=skip,
        ))
    return parts


def _loop_cut(frame: _Frame, conservative: bool):
    if not frame.starts or not frame.ends:
        return None
    boundary = frame.starts | frame.ends
    rest = frame.activities - boundary
    if not rest:
        return None
    comps = _components(rest, ((a, b) for a, b in frame.edges if a in rest and b in rest))
    body = set(boundary)
    redos: list[frozenset[str]] = []
    for comp in comps:
        entries = {b for a, b in frame.edges if b in comp and a not in comp}
        exits = {b for a, b in frame.edges if a in comp and b not in comp}
        sources = {a for a, b in frame.edges if b in comp and a not in comp}
        ok = (
            bool(entries)
            and bool(exits)
            and sources <= frame.ends
            and exits <= frame.starts
        )
        if ok:
            redos.append(comp)
        else:
            body |= comp
    if not redos:
        return None
    body_frame = _Frame(
        activities=frozenset(body),
        edges=frozenset((a, b) for a, b in frame.edges if a in body and b in body),
        starts=frame.starts,
        ends=frame.ends,
    )
    parts = [body_frame]
    for comp in sorted(redos, key=min):
        parts.append(_Frame(
            activities=comp,
            edges=frozenset((a, b) for a, b in frame.edges if a in comp and b in comp),
            starts=frozenset(b for a, b in frame.edges if b in comp and a not in comp),
            ends=frozenset(a for a, b in frame.edges if a in comp and b not in comp),
        ))
    return LOOP, parts


# -- tree to accepting net ---------------------------------------------------


def tree_to_net(tree: ProcessTree, prefix: str = "") -> AcceptingNet:
    """Convert a process tree to an accepting net with one source and one sink."""
    places: set[str] = set()
    transitions: set[str] = set()
    arcs: set[tuple[str, str]] = set()
    labels: dict[str, str] = {}
    place_n = itertools.count()
    tau_n = itertools.count()
    label_seen: Counter = Counter()

    def new_place() -> str:
        p = f"{prefix}p{next(place_n)}"
        places.add(p)
        return p

    def new_tau() -> str:
        t = f"{prefix}tau_{next(tau_n)}"
        transitions.add(t)
        return t

    def new_labeled(label: str) -> str:
        label_seen[label] += 1
        t = f"{prefix}t_{label}"
        if label_seen[label] > 1:
            t = f"{t}#{label_seen[label]}"
        transitions.add(t)
        labels[t] = label
        return t

    source = new_place()
    sink = new_place()

    def build(node: ProcessTree, src: str, tgt: str) -> None:
        if node.kind == ACTIVITY:
            t = new_labeled(node.label)
            arcs.add((src, t))
            arcs.add((t, tgt))
        elif node.kind == SILENT:
            t = new_tau()
            arcs.add((src, t))
            arcs.add((t, tgt))
        elif node.kind == SEQUENCE:
            cur = src
            for child in node.children[:-1]:
                nxt = new_place()
                build(child, cur, nxt)
                cur = nxt
            build(node.children[-1], cur, tgt)
        elif node.kind == XOR:
            for child in node.children:
                build(child, src, tgt)
        elif node.kind == PARALLEL:
            split = new_tau()
            join = new_tau()
            arcs.add((src, split))
            arcs.add((join, tgt))
            for child in node.children:
                entry = new_place()
                exit_ = new_place()
                arcs.add((split, entry))
                arcs.add((exit_, join))
                build(child, entry, exit_)
        elif node.kind == LOOP:
            enter = new_tau()
            leave = new_tau()
            head = new_place()
            tail = new_place()
            arcs.add((src, enter))
            arcs.add((enter, head))
            arcs.add((tail, leave))
            arcs.add((leave, tgt))
            build(node.children[0], head, tail)
            for redo in node.children[1:]:
                build(redo, tail, head)
        else:  # pragma: no cover - ProcessTree validation forbids this
            raise AssertionError(node.kind)

    build(tree, source, sink)
    net = LabeledPetriNet(
        places=frozenset(places),
        transitions=frozenset(transitions),
        arcs=frozenset(arcs),
        labels=labels,
    )
    return AcceptingNet(net=net, initial_places=frozenset({source}),
                        final_places=frozenset({sink}))


# -- full pipeline -----------------------------------------------------------


def discover_tree(log: OCEL, ot: str) -> ProcessTree:
    return imd_discover(build_dfg(flatten(log, ot)))


def _replays_fully(flat: FlatLog, accepting: AcceptingNet) -> bool:
    from .errors import NonFittingTrace
    from .replay import replay_object

    for trace in flat.traces:
        try:
            if not replay_object(trace, accepting).completed:
                return False
        except NonFittingTrace:
            return False
    return True


def discover_ocpn(log: OCEL) -> OCPN:
    """Discover an object-centric net: per-type trees merged on shared labels.

    Each per-type model is checked against the flattened log; if the
    default parallel split missed an interleaving, the type is rediscovered
    with the conservative split, so the result always fits the log.
    """
    if not log.events:
        raise EmptyLog("cannot discover a model from a log without events")

    per_type: dict[str, AcceptingNet] = {}
    for ot in log.object_types:
        flat = flatten(log, ot)
        if not flat.traces:
            continue
        dfg = build_dfg(flat)
        accepting = tree_to_net(imd_discover(dfg), prefix=f"{ot}:")
        if not _replays_fully(flat, accepting):
            accepting = tree_to_net(imd_discover(dfg, conservative=True), prefix=f"{ot}:")
        per_type[ot] = accepting

    places: set[str] = set()
    transitions: set[str] = set()
    arcs: set[tuple[str, str]] = set()
    labels: dict[str, str] = {}
    place_types: dict[str, str] = {}
    for ot, accepting in per_type.items():
        sub = accepting.net
        rename = {t: (sub.labels[t] if t in sub.labels else t) for t in sub.transitions}
        places |= sub.places
        for p in sub.places:
            place_types[p] = ot
        for t in sub.transitions:
            transitions.add(rename[t])
            if t in sub.labels:
                labels[rename[t]] = sub.labels[t]
        for src, tgt in sub.arcs:
            arcs.add((rename.get(src, src), rename.get(tgt, tgt)))

    variability: dict[tuple[str, str], bool] = {}
    for e in log.events:
        for ot in per_type:
            key = (e.act, ot)
            variability[key] = variability.get(key, False) or len(e.omap.get(ot, ())) != 1
    variable: set[tuple[str, str]] = set()
    for src, tgt in arcs:
        place = src if src in places else tgt
        trans = tgt if src in places else src
        label = labels.get(trans)
        if label is not None and variability.get((label, place_types[place]), False):
            variable.add((src, tgt))

    net = LabeledPetriNet(
        places=frozenset(places),
        transitions=frozenset(transitions),
        arcs=frozenset(arcs),
        labels=labels,
    )
    return OCPN(net=net, place_types=place_types, variable_arcs=frozenset(variable))
