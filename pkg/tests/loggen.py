"""Random logs and process trees for property and fitness testing."""

from __future__ import annotations

import random

from opera.discovery import (
    ACTIVITY,
    LOOP,
    PARALLEL,
    SEQUENCE,
    SILENT,
    XOR,
    ProcessTree,
    leaf,
    loop,
    par,
    seq,
    silent,
    xor,
)
from opera.ocel import OCEL, Event


def random_ocel(
    rng: random.Random,
    n_cases: int = 5,
    types: tuple[str, ...] = ("A", "B"),
    activities: tuple[str, ...] = ("a", "b", "c", "d"),
    max_steps: int = 6,
    share_probability: float = 0.6,
) -> OCEL:
    """A log of independent cases; each event samples objects per type."""
    events: list[Event] = []
    clock = 0.0
    next_obj = 0
    for _ in range(n_cases):
        case_objects: dict[str, list[str]] = {}
        for ot in types:
            k = rng.randint(1, 3)
            case_objects[ot] = [f"{ot}{next_obj + i}" for i in range(k)]
            next_obj += k
        for _ in range(rng.randint(1, max_steps)):
            participating = [ot for ot in types if rng.random() < share_probability]
            if not participating:
                participating = [rng.choice(types)]
            omap = {}
            for ot in participating:
                pool = case_objects[ot]
                omap[ot] = frozenset(rng.sample(pool, rng.randint(1, len(pool))))
            st = round(clock + rng.uniform(0.0, 5.0), 3)
            ct = round(st + rng.uniform(0.0, 5.0), 3)
            clock = ct + 0.001
            events.append(Event(
                ei=f"e{len(events):06d}",
                act=rng.choice(activities),
                st=st,
                ct=ct,
                omap=omap,
            ))
    return OCEL(events=tuple(events), objects={})


def random_tree(rng: random.Random, activities, max_depth: int = 3) -> ProcessTree:
    """A random tree with every activity in exactly one leaf."""
    pool = list(activities)
    rng.shuffle(pool)

    def build(part: list[str], depth: int) -> ProcessTree:
        if len(part) == 1:
            node = leaf(part[0])
            if depth > 0 and rng.random() < 0.15:
                return xor(silent(), node)
            return node
        if depth >= max_depth:
            op = rng.choice((SEQUENCE, XOR))
        else:
            op = rng.choice((SEQUENCE, SEQUENCE, XOR, PARALLEL, LOOP))
        k = rng.randint(2, min(3, len(part)))
        cuts = sorted(rng.sample(range(1, len(part)), k - 1))
        bounds = [0, *cuts, len(part)]
        children = [build(part[i:j], depth + 1) for i, j in zip(bounds, bounds[1:])]
        if op == SEQUENCE:
            return seq(*children)
        if op == XOR:
            if rng.random() < 0.25:
                children.append(silent())
            return xor(*children)
        if op == PARALLEL:
            return par(*children)
        return loop(*children)

    return build(pool, 0)


def simulate_tree(tree: ProcessTree, rng: random.Random, max_loop: int = 2) -> list[str]:
    """One activity sequence from the tree's language."""
    if tree.kind == ACTIVITY:
        return [tree.label]
    if tree.kind == SILENT:
        return []
    if tree.kind == SEQUENCE:
        out: list[str] = []
        for child in tree.children:
            out.extend(simulate_tree(child, rng, max_loop))
        return out
    if tree.kind == XOR:
        return simulate_tree(rng.choice(tree.children), rng, max_loop)
    if tree.kind == PARALLEL:
        branches = [simulate_tree(c, rng, max_loop) for c in tree.children]
        merged: list[str] = []
        while any(branches):
            candidates = [b for b in branches if b]
            pick = rng.choice(candidates)
            merged.append(pick.pop(0))
        return merged
    # loop: body, then zero or more (redo, body) rounds
    out = simulate_tree(tree.children[0], rng, max_loop)
    for _ in range(rng.randint(0, max_loop)):
        redo = rng.choice(tree.children[1:])
        out.extend(simulate_tree(redo, rng, max_loop))
        out.extend(simulate_tree(tree.children[0], rng, max_loop))
    return out


def traces_to_ocel(traces: list[list[str]], ot: str = "A") -> OCEL:
    """Wrap plain activity sequences as a single-type log."""
    events: list[Event] = []
    clock = 0.0
    for i, trace in enumerate(traces):
        oi = f"{ot}{i}"
        for act in trace:
            st = clock + 1.0
            ct = st + 1.0
            clock = ct
            events.append(Event(
                ei=f"e{len(events):06d}",
                act=act,
                st=st,
                ct=ct,
                omap={ot: frozenset({oi})},
            ))
    return OCEL(events=tuple(events), objects={f"{ot}{i}": ot for i in range(len(traces))})
