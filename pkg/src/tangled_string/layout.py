"""2D placement of a tangled sequence.

Events are laid out one by one: matched events land exactly on the event
they revisited (that is what makes pills visible as knots), and unmatched
events extrapolate the previous step.  A second, optional pass relaxes the
picture like a pulled string: consecutive events are connected by
unit-rest-length springs, distinct knots repel gently, and the endpoints
of the whole sequence are pinned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .sequence import BasketSequence
from .tangler import TangleResult

_TURN = math.pi / 12  # 15 degrees, used when extrapolation degenerates
_REPULSION = 0.25
_FORCE_CAP = 4.0

Position = tuple[float, float]


@dataclass(frozen=True)
class LayoutParams:
    """Extension gain ``a`` plus relaxation schedule for :func:`stretch`."""

    a: float = 1.0
    stretch_iterations: int = 0
    stretch_step: float = 0.05

    def __post_init__(self):
        if self.stretch_iterations < 0:
            raise ValueError("stretch_iterations must be >= 0")
        if self.stretch_step <= 0:
            raise ValueError("stretch_step must be positive")


@dataclass(frozen=True)
class LayoutResult:
    """Coordinates per event plus the groups that share one point.

    Groups are the connected components of the match graph, ordered by
    their smallest member; unmatched events form singleton groups.
    """

    positions: Mapping[int, Position]
    shared_position_groups: tuple[tuple[int, ...], ...]

    def group_of(self, index: int) -> tuple[int, ...]:
        for group in self.shared_position_groups:
            if index in group:
                return group
        raise KeyError(index)


def _rotate(direction: Position, angle: float) -> Position:
    cos_a, sin_a = math.cos(angle), math.sin(angle)
    x, y = direction
    return (x * cos_a - y * sin_a, x * sin_a + y * cos_a)


def _shared_groups(length: int, matches) -> tuple[tuple[int, ...], ...]:
    parent = list(range(length))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for m in matches:
        ra, rb = find(m.earlier), find(m.later)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    members: dict[int, list[int]] = {}
    for i in range(length):
        members.setdefault(find(i), []).append(i)
    return tuple(tuple(members[root]) for root in sorted(members))


def assign_positions(
    seq: BasketSequence, result: TangleResult, params: LayoutParams | None = None
) -> LayoutResult:
    """Place every event of ``seq`` according to ``result``'s matches.

    The first two events bootstrap at (0,0) and (1,0) unless matched;
    event i otherwise continues the previous displacement scaled by
    ``params.a``.  When the two previous events coincide, the string is
    extended by a unit step rotated 15 degrees from the last direction
    it actually moved in, so repeated knots fan out instead of piling up.
    """
    if params is None:
        params = LayoutParams()
    if result.sequence is not seq and result.sequence != seq:
        raise ValueError("result was computed from a different sequence")

    target: dict[int, int] = {m.later: m.earlier for m in result.matches}
    length = seq.length
    positions: list[Position] = []
    last_direction: Position = (1.0, 0.0)

    for i in range(length):
        if i in target:
            pos = positions[target[i]]
        elif i == 0:
            pos = (0.0, 0.0)
        elif i == 1:
            pos = (1.0, 0.0)
        else:
            px, py = positions[i - 1]
            qx, qy = positions[i - 2]
            dx, dy = px - qx, py - qy
            if dx == 0.0 and dy == 0.0:
                dirx, diry = _rotate(last_direction, _TURN)
                pos = (px + dirx, py + diry)
            else:
                pos = (px + params.a * dx, py + params.a * dy)
        positions.append(pos)
        if i >= 1:
            sx, sy = positions[i - 1]
            mx, my = pos[0] - sx, pos[1] - sy
            norm = math.hypot(mx, my)
            if norm > 0.0:
                last_direction = (mx / norm, my / norm)

    groups = _shared_groups(length, result.matches)
    return LayoutResult(
        positions={i: positions[i] for i in range(length)},
        shared_position_groups=groups,
    )


def stretch(layout: LayoutResult, params: LayoutParams) -> LayoutResult:
    """Relax ``layout`` while preserving every shared-position identity.

    Groups move as rigid points: consecutive-event links act as springs
    with rest length 1, non-adjacent groups repel with a capped
    inverse-square push, and the groups holding the global first and last
    events stay pinned.  Runs ``params.stretch_iterations`` deterministic
    steps of size ``params.stretch_step``; zero iterations is the identity.
    """
    if params.stretch_iterations == 0:
        return layout

    groups = layout.shared_position_groups
    count = len(groups)
    group_of: dict[int, int] = {}
    for gid, group in enumerate(groups):
        for member in group:
            group_of[member] = gid
    length = len(group_of)

    coords = [list(layout.positions[group[0]]) for group in groups]
    pinned = {group_of[0], group_of[length - 1]}

    springs: list[tuple[int, int]] = []
    linked: set[tuple[int, int]] = set()
    for i in range(length - 1):
        a, b = group_of[i], group_of[i + 1]
        if a != b:
            springs.append((a, b))
            linked.add((min(a, b), max(a, b)))

    for _ in range(params.stretch_iterations):
        forces = [[0.0, 0.0] for _ in range(count)]
        for a, b in springs:
            dx = coords[b][0] - coords[a][0]
            dy = coords[b][1] - coords[a][1]
            dist = math.hypot(dx, dy)
            if dist > 1e-12:
                ux, uy = dx / dist, dy / dist
            else:
                ux, uy = 1.0, 0.0
            pull = dist - 1.0
            forces[a][0] += pull * ux
            forces[a][1] += pull * uy
            forces[b][0] -= pull * ux
            forces[b][1] -= pull * uy
        for a in range(count):
            for b in range(a + 1, count):
                if (a, b) in linked:
                    continue
                dx = coords[b][0] - coords[a][0]
                dy = coords[b][1] - coords[a][1]
                dist = math.hypot(dx, dy)
                if dist > 1e-12:
                    ux, uy = dx / dist, dy / dist
                else:
                    ux, uy = 1.0, 0.0
                push = min(_REPULSION / max(dist * dist, 1e-6), _FORCE_CAP)
                forces[a][0] -= push * ux
                forces[a][1] -= push * uy
                forces[b][0] += push * ux
                forces[b][1] += push * uy
        for gid in range(count):
            if gid in pinned:
                continue
            coords[gid][0] += params.stretch_step * forces[gid][0]
            coords[gid][1] += params.stretch_step * forces[gid][1]

    positions: dict[int, Position] = {}
    for gid, group in enumerate(groups):
        point = (coords[gid][0], coords[gid][1])
        for member in group:
            positions[member] = point
    return LayoutResult(positions=positions, shared_position_groups=groups)
