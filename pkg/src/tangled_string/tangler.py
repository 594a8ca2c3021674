"""Core segmentation: split a sequence into pills and wire.

The tangler scans the sequence once.  For every event it looks backward
through a bounded window for the earliest previous occurrence of the same
token.  A hit ("match") declares the stretch between the two occurrences a
trend region: the covered events are merged into a *pill*, and the distance
``i - j`` is added to the earlier event's pill weight.  Events never swept
into a pill remain on the *wire*, the thread connecting consecutive pills.

Two window rules exist:

* ``plain``  — the window is the ``W`` events immediately preceding the
  current one.  Baskets are ignored.
* ``basket`` — the window is every event in the ``W`` baskets up to and
  including the current event's basket, restricted to events strictly
  before it.  On a match, the whole basket of each endpoint joins the pill,
  so pills stay aligned to basket boundaries.

Each pill records its span endpoints (first/last member) and its revisit
endpoints: the entrance is the earlier event of the chronologically first
match inside the pill, the exit is the later event of the chronologically
last one.  Both span endpoints carry the pill's span as wire weight.

The scan keeps one deque of recent occurrence indices per token.  Window
floors only ever move forward, so stale occurrences are dropped for good
and the whole run costs O(L) regardless of W.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from .sequence import BasketSequence, Token

PLAIN = "plain"
BASKET = "basket"

ENTRANCE = "entrance"
EXIT = "exit"

IN_PILL = "in-pill"
ON_WIRE = "on-wire"


@dataclass(frozen=True)
class TangleParams:
    """Window width (``window_w`` >= 1) and window rule (plain or basket)."""

    window_w: int
    variant: str = BASKET

    def __post_init__(self):
        if self.window_w < 1:
            raise ValueError(f"window_w must be >= 1, got {self.window_w}")
        if self.variant not in (PLAIN, BASKET):
            raise ValueError(f"variant must be '{PLAIN}' or '{BASKET}', got {self.variant!r}")


@dataclass(frozen=True)
class Match:
    """A backward hit: event ``later`` revisited the token of ``earlier``."""

    earlier: int
    later: int


@dataclass(frozen=True)
class Pill:
    """A contiguous trend interval.

    ``first_event``/``last_event`` are the span endpoints; every event in
    between is a member.  ``entrance_event``/``exit_event`` are the revisit
    endpoints actually reported as change points; they always lie inside
    the span, but basket alignment can push the span endpoints past them.
    """

    first_event: int
    last_event: int
    entrance_event: int
    exit_event: int

    @property
    def span(self) -> int:
        return self.last_event - self.first_event

    @property
    def members(self) -> range:
        return range(self.first_event, self.last_event + 1)

    def __contains__(self, index: int) -> bool:
        return self.first_event <= index <= self.last_event


@dataclass(frozen=True)
class KeyEvent:
    """A ranked heavy event, either inside a pill or on the wire."""

    event_index: int
    token: Token
    kind: str  # IN_PILL or ON_WIRE
    weight: int
    rank: int
    role: str | None = None  # ENTRANCE or EXIT for wire key events


@dataclass(frozen=True)
class ChangePoint:
    """An entrance or exit event with its basket coordinates."""

    event_index: int
    token: Token
    role: str  # ENTRANCE or EXIT
    basket_index: int
    time_label: str | None


@dataclass(frozen=True)
class TangleResult:
    """Everything one tangling run produced.

    ``pills`` are disjoint and ordered; ``wire_events`` is the ordered
    complement of their members.  ``pill_weight`` holds the accumulated
    revisit distances (absent index = zero); ``wire_weight`` is nonzero
    exactly on each pill's entrance and exit, where it equals the span.
    ``matches`` lists the (earlier, later) hits in scan order.
    """

    sequence: BasketSequence
    params: TangleParams
    pills: tuple[Pill, ...]
    wire_events: tuple[int, ...]
    pill_weight: Mapping[int, int]
    wire_weight: Mapping[int, int]
    matches: tuple[Match, ...]

    def pill_of(self, index: int) -> Pill | None:
        """The pill containing event ``index``, if any (binary search)."""
        lo, hi = 0, len(self.pills) - 1
        while lo <= hi:
            mid = (lo + hi) // 2
            pill = self.pills[mid]
            if index < pill.first_event:
                hi = mid - 1
            elif index > pill.last_event:
                lo = mid + 1
            else:
                return pill
        return None


class _Builder:
    """Mutable pill-in-progress; merged pills always sit at the list tail."""

    __slots__ = ("first", "last", "entrance", "ent_order", "exit")

    def __init__(self, first: int, last: int, entrance: int, ent_order: int, exit_: int):
        self.first = first
        self.last = last
        self.entrance = entrance
        self.ent_order = ent_order
        self.exit = exit_


def tangle(seq: BasketSequence, params: TangleParams) -> TangleResult:
    """Segment ``seq`` into pills and wire under ``params``.

    Deterministic: equal inputs give equal results, with matches resolved
    to the earliest same-token event inside the window.
    """
    tokens = seq.tokens
    length = len(tokens)
    window = params.window_w
    plain = params.variant == PLAIN
    basket_of = seq.basket_membership
    starts = seq.basket_starts
    basket_count = seq.basket_count

    occurrences: dict[Token, deque[int]] = defaultdict(deque)
    matches: list[Match] = []
    pill_weight: dict[int, int] = {}
    builders: list[_Builder] = []

    for i in range(length):
        token = tokens[i]
        recent = occurrences[token]
        if recent:
            if plain:
                floor = i - window
                while recent and recent[0] < floor:
                    recent.popleft()
            else:
                basket_floor = basket_of[i] - window + 1
                while recent and basket_of[recent[0]] < basket_floor:
                    recent.popleft()
        if recent:
            j = recent[0]
            if plain:
                low, high = j, i
            else:
                low = starts[basket_of[j]]
                k = basket_of[i]
                high = (starts[k + 1] - 1) if k + 1 < basket_count else length - 1
            order = len(matches)
            entrance, ent_order = j, order
            while builders and builders[-1].last >= low:
                absorbed = builders.pop()
                if absorbed.first < low:
                    low = absorbed.first
                if absorbed.last > high:
                    high = absorbed.last
                if absorbed.ent_order < ent_order:
                    ent_order = absorbed.ent_order
                    entrance = absorbed.entrance
            builders.append(_Builder(low, high, entrance, ent_order, i))
            pill_weight[j] = pill_weight.get(j, 0) + (i - j)
            matches.append(Match(j, i))
        recent.append(i)

    pills = tuple(
        Pill(b.first, b.last, b.entrance, b.exit) for b in builders
    )
    wire_weight: dict[int, int] = {}
    wire_events: list[int] = []
    cursor = 0
    for pill in pills:
        wire_weight[pill.entrance_event] = pill.span
        wire_weight[pill.exit_event] = pill.span
        wire_events.extend(range(cursor, pill.first_event))
        cursor = pill.last_event + 1
    wire_events.extend(range(cursor, length))

    return TangleResult(
        sequence=seq,
        params=params,
        pills=pills,
        wire_events=tuple(wire_events),
        pill_weight=pill_weight,
        wire_weight=wire_weight,
        matches=tuple(matches),
    )


def _top_k(weights: Mapping[int, int], k: int) -> list[tuple[int, int]]:
    # heaviest first; ties broken toward the earlier event
    ranked = sorted(weights.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]


def key_pill_events(result: TangleResult, k: int) -> list[KeyEvent]:
    """The k heaviest in-pill events by accumulated revisit distance."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    tokens = result.sequence.tokens
    return [
        KeyEvent(index, tokens[index], IN_PILL, weight, rank)
        for rank, (index, weight) in enumerate(_top_k(result.pill_weight, k), start=1)
    ]


def key_wire_events(result: TangleResult, k: int) -> list[KeyEvent]:
    """The k heaviest wire-weighted events (pill entrances and exits)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    role_of: dict[int, str] = {}
    for pill in result.pills:
        role_of[pill.entrance_event] = ENTRANCE
        role_of[pill.exit_event] = EXIT
    tokens = result.sequence.tokens
    return [
        KeyEvent(index, tokens[index], ON_WIRE, weight, rank, role=role_of[index])
        for rank, (index, weight) in enumerate(_top_k(result.wire_weight, k), start=1)
    ]


def change_points(result: TangleResult) -> list[ChangePoint]:
    """One entrance and one exit record per pill, in basket order."""
    seq = result.sequence
    records = []
    for pill in result.pills:
        for index, role in ((pill.entrance_event, ENTRANCE), (pill.exit_event, EXIT)):
            basket = seq.basket_of(index)
            records.append(
                ChangePoint(index, seq.token_at(index), role, basket, seq.time_label(basket))
            )
    records.sort(key=lambda cp: (cp.basket_index, cp.event_index))
    return records


def sweep(
    seq: BasketSequence, windows: Iterable[int], variant: str = BASKET
) -> dict[int, TangleResult]:
    """Tangle the same sequence at several window widths; map W -> result."""
    widths = list(windows)
    if not widths:
        raise ValueError("windows must be non-empty")
    results: dict[int, TangleResult] = {}
    for w in widths:
        if w not in results:
            results[w] = tangle(seq, TangleParams(window_w=w, variant=variant))
    return results
