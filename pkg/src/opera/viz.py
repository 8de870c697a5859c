"""DOT export of object-centric Petri nets.

Places and arcs are colored per object type, variable arcs are drawn with
doubled lines, and transition labels can carry extra annotation text.
Output is deterministic for a given net.
"""

from __future__ import annotations

from .ocpn import OCPN

PALETTE = (
    "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
)


def type_colors(object_types) -> dict[str, str]:
    return {ot: PALETTE[i % len(PALETTE)] for i, ot in enumerate(sorted(object_types))}


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(net: OCPN, annotations: dict[str, str] | None = None) -> str:
    """Render the net as a DOT digraph, annotations inlined per transition."""
    annotations = annotations or {}
    colors = type_colors(net.object_types)
    lines = [
        "digraph ocpn {",
        "  rankdir=LR;",
        '  node [fontname="Helvetica", fontsize=11];',
        '  edge [fontname="Helvetica", fontsize=9];',
    ]
    for p in sorted(net.net.places):
        color = colors[net.place_types[p]]
        lines.append(
            f"  {_quote('place:' + p)} [shape=circle, label={_quote(p)}, "
            f"color={_quote(color)}, xlabel={_quote(net.place_types[p])}];"
        )
    for t in sorted(net.net.transitions):
        label = net.net.label(t)
        if label is None:
            lines.append(
                f"  {_quote('trans:' + t)} [shape=box, style=filled, "
                f'fillcolor="#333333", label=""];'
            )
        else:
            text = label
            if t in annotations:
                text = f"{label}\\n{annotations[t]}"
            quoted = '"' + text.replace("\\n", "\n").replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'
            lines.append(f"  {_quote('trans:' + t)} [shape=box, label={quoted}];")
    for src, tgt in sorted(net.net.arcs):
        place = src if src in net.net.places else tgt
        color = colors[net.place_types[place]]
        src_id = ("place:" if src in net.net.places else "trans:") + src
        tgt_id = ("place:" if tgt in net.net.places else "trans:") + tgt
        if (src, tgt) in net.variable_arcs:
            # A color list renders the edge as parallel (doubled) lines.
            edge_color = f"{color}:{color}"
        else:
            edge_color = color
        lines.append(f"  {_quote(src_id)} -> {_quote(tgt_id)} [color={_quote(edge_color)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
