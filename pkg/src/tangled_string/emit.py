"""Renderers: a self-contained JSON document and a DOT graph.

Positions in everything written out are 1-based; indices inside the
library stay 0-based.  Output is deterministic byte for byte: keys are
sorted, ordering is fixed, and no locale-dependent formatting is used.
"""

from __future__ import annotations

import json
from importlib import resources

from .layout import LayoutResult
from .tangler import ENTRANCE, EXIT, TangleResult, key_pill_events, key_wire_events

SCHEMA_VERSION = 1
DEFAULT_KEY_EVENTS = 10
TOP_MEMBERS = 5

_NODE_MIN_WIDTH = 0.4
_NODE_EXTRA_WIDTH = 0.8


def schema_text() -> str:
    """The JSON schema the emitted documents validate against."""
    return (
        resources.files("tangled_string")
        .joinpath("schema/tangle_document.schema.json")
        .read_text(encoding="utf-8")
    )


def document_dict(
    result: TangleResult,
    layout: LayoutResult | None = None,
    key_events: int = DEFAULT_KEY_EVENTS,
) -> dict:
    """The document as a plain dict (see :func:`emit_json`)."""
    seq = result.sequence

    def event_ref(index: int) -> dict:
        basket = seq.basket_of(index)
        return {
            "position": index + 1,
            "token": seq.token_at(index),
            "date": seq.time_label(basket),
        }

    events = []
    for i in range(seq.length):
        basket = seq.basket_of(i)
        events.append(
            {
                "position": i + 1,
                "token": seq.token_at(i),
                "basket": basket + 1,
                "date": seq.time_label(basket),
            }
        )

    pills = []
    for number, pill in enumerate(result.pills, start=1):
        weighted = [
            (index, result.pill_weight[index])
            for index in pill.members
            if index in result.pill_weight
        ]
        weighted.sort(key=lambda item: (-item[1], item[0]))
        pills.append(
            {
                "index": number,
                "first": pill.first_event + 1,
                "last": pill.last_event + 1,
                "span": pill.span,
                "entrance": event_ref(pill.entrance_event),
                "exit": event_ref(pill.exit_event),
                "top_members": [
                    {"position": index + 1, "token": seq.token_at(index), "weight": weight}
                    for index, weight in weighted[:TOP_MEMBERS]
                ],
            }
        )

    def key_event_dict(entry) -> dict:
        payload = {
            "position": entry.event_index + 1,
            "token": entry.token,
            "weight": entry.weight,
            "rank": entry.rank,
        }
        if entry.role is not None:
            payload["role"] = entry.role
        return payload

    doc = {
        "schema_version": SCHEMA_VERSION,
        "params": {"window": result.params.window_w, "variant": result.params.variant},
        "length": seq.length,
        "baskets": seq.basket_count,
        "events": events,
        "matches": [
            {"earlier": m.earlier + 1, "later": m.later + 1} for m in result.matches
        ],
        "pills": pills,
        "wire_events": [i + 1 for i in result.wire_events],
        "key_events": {
            "in_pill": [key_event_dict(e) for e in key_pill_events(result, key_events)]
            if result.pill_weight
            else [],
            "on_wire": [key_event_dict(e) for e in key_wire_events(result, key_events)]
            if result.wire_weight
            else [],
        },
    }
    if layout is not None:
        doc["layout"] = {
            "positions": [
                {
                    "position": i + 1,
                    "x": layout.positions[i][0],
                    "y": layout.positions[i][1],
                }
                for i in range(seq.length)
            ],
            "groups": [
                [member + 1 for member in group]
                for group in layout.shared_position_groups
            ],
        }
    return doc


def emit_json(
    result: TangleResult,
    layout: LayoutResult | None = None,
    key_events: int = DEFAULT_KEY_EVENTS,
) -> str:
    """Render ``result`` (optionally with coordinates) as a JSON document.

    Self-contained: the document carries every event, so re-rendering
    needs no access to the original input file.
    """
    return json.dumps(document_dict(result, layout, key_events), sort_keys=True, indent=2) + "\n"


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(result: TangleResult, layout: LayoutResult) -> str:
    """Render the tangle as a DOT digraph.

    One node per shared-position group, labelled with the token and the
    1-based positions it absorbs.  Entrances are red, exits green, both
    gradient-filled; entrance/exit nodes are sized by wire weight.  Edges
    walk the sequence in order; each pill becomes a cluster.
    """
    seq = result.sequence
    groups = layout.shared_position_groups
    group_of: dict[int, int] = {}
    for gid, group in enumerate(groups):
        for member in group:
            group_of[member] = gid

    entrances = {pill.entrance_event for pill in result.pills}
    exits = {pill.exit_event for pill in result.pills}
    max_weight = max(result.wire_weight.values(), default=0)

    def node_line(gid: int) -> str:
        group = groups[gid]
        token = seq.token_at(group[0])
        label = f"{token} @ {','.join(str(i + 1) for i in group)}"
        attrs = [f"label={_quote(label)}"]
        has_entrance = any(member in entrances for member in group)
        has_exit = any(member in exits for member in group)
        if has_entrance and has_exit:
            attrs.append('fillcolor="red:green"')
        elif has_entrance:
            attrs.append('fillcolor="red"')
        elif has_exit:
            attrs.append('fillcolor="green"')
        weight = max(result.wire_weight.get(member, 0) for member in group)
        if weight and max_weight:
            width = _NODE_MIN_WIDTH + _NODE_EXTRA_WIDTH * weight / max_weight
            attrs.append(f'width="{width:.3f}"')
            attrs.append(f'height="{width:.3f}"')
            attrs.append("fixedsize=true")
        return f"    g{gid} [{', '.join(attrs)}];"

    pill_of_group: dict[int, int | None] = {}
    for gid, group in enumerate(groups):
        pill = result.pill_of(group[0])
        pill_of_group[gid] = result.pills.index(pill) if pill is not None else None

    lines = [
        "digraph tangle {",
        "  rankdir=LR;",
        "  node [shape=circle, style=filled, fillcolor=lightgray, fontsize=10];",
    ]
    for number, pill in enumerate(result.pills):
        lines.append(f"  subgraph cluster_pill_{number + 1} {{")
        label = f"pill {number + 1} (span {pill.span})"
        lines.append(f"    label={_quote(label)};")
        for gid in range(len(groups)):
            if pill_of_group[gid] == number:
                lines.append("  " + node_line(gid))
        lines.append("  }")
    for gid in range(len(groups)):
        if pill_of_group[gid] is None:
            lines.append(node_line(gid)[2:])
    edges = []
    for i in range(seq.length - 1):
        a, b = group_of[i], group_of[i + 1]
        if a != b:
            edges.append(f"  g{a} -> g{b};")
    lines.extend(edges)
    lines.append("}")
    return "\n".join(lines) + "\n"
