"""Event and basket sequence model.

A sequence is an ordered list of baskets; each basket is the set of items
observed at one time step (a week of ranked stocks, a shopping trip, ...).
A plain string of tokens is the special case of one item per basket.

Events are indexed two ways: by flat position in the whole sequence and by
the basket they belong to.  Indices are zero-based everywhere inside the
package; renderers add one when writing positions out.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import EmptyBasketError, EmptySequenceError

Token = str


@dataclass(frozen=True)
class Event:
    """One token occurrence: flat index, symbol, owning basket, basket date."""

    index: int
    token: Token
    basket_index: int
    time_label: str | None = None


class BasketSequence:
    """Immutable sequence of non-empty baskets of tokens.

    Stores the flattened token list plus enough indexing to answer both
    "which basket is event i in" and "which events make up basket k" in
    constant time.
    """

    __slots__ = ("_tokens", "_basket_of", "_basket_starts", "_time_labels")

    def __init__(
        self,
        baskets: Iterable[Iterable[Token]],
        time_labels: Iterable[str | None] | None = None,
    ):
        tokens: list[Token] = []
        basket_of: list[int] = []
        basket_starts: list[int] = []
        for ordinal, basket in enumerate(baskets):
            items = [self._check_token(t, ordinal) for t in basket]
            if not items:
                raise EmptyBasketError(f"basket {ordinal} has no items", basket=ordinal)
            basket_starts.append(len(tokens))
            tokens.extend(items)
            basket_of.extend([ordinal] * len(items))
        if not tokens:
            raise EmptySequenceError("sequence has no events")
        labels: tuple[str | None, ...]
        if time_labels is None:
            labels = (None,) * len(basket_starts)
        else:
            labels = tuple(time_labels)
            if len(labels) != len(basket_starts):
                raise ValueError(
                    f"{len(labels)} time labels for {len(basket_starts)} baskets"
                )
        self._tokens = tuple(tokens)
        self._basket_of = tuple(basket_of)
        self._basket_starts = tuple(basket_starts)
        self._time_labels = labels

    @staticmethod
    def _check_token(token: object, ordinal: int) -> Token:
        text = token if isinstance(token, str) else str(token)
        if not text:
            raise ValueError(f"empty token in basket {ordinal}")
        return text

    # -- sizes ---------------------------------------------------------------

    @property
    def length(self) -> int:
        """Number of events (flattened)."""
        return len(self._tokens)

    @property
    def basket_count(self) -> int:
        return len(self._basket_starts)

    def __len__(self) -> int:
        return len(self._tokens)

    # -- lookups -------------------------------------------------------------

    @property
    def tokens(self) -> tuple[Token, ...]:
        return self._tokens

    def token_at(self, index: int) -> Token:
        return self._tokens[index]

    def basket_of(self, index: int) -> int:
        """Basket ordinal that event ``index`` belongs to."""
        return self._basket_of[index]

    @property
    def basket_membership(self) -> tuple[int, ...]:
        """Per-event basket ordinal, parallel to ``tokens``."""
        return self._basket_of

    @property
    def basket_starts(self) -> tuple[int, ...]:
        """Flat index of the first event of each basket."""
        return self._basket_starts

    def basket_start(self, basket: int) -> int:
        """Flat index of the first event in ``basket``."""
        return self._basket_starts[basket]

    def basket_end(self, basket: int) -> int:
        """Flat index of the last event in ``basket``."""
        if basket + 1 < len(self._basket_starts):
            return self._basket_starts[basket + 1] - 1
        return len(self._tokens) - 1

    def time_label(self, basket: int) -> str | None:
        return self._time_labels[basket]

    @property
    def time_labels(self) -> tuple[str | None, ...]:
        return self._time_labels

    def event(self, index: int) -> Event:
        basket = self._basket_of[index]
        return Event(index, self._tokens[index], basket, self._time_labels[basket])

    def events(self) -> Iterator[Event]:
        for i in range(len(self._tokens)):
            yield self.event(i)

    def basket_events(self, basket: int) -> tuple[Event, ...]:
        return tuple(
            self.event(i) for i in range(self.basket_start(basket), self.basket_end(basket) + 1)
        )

    def baskets(self) -> Iterator[tuple[Event, ...]]:
        for k in range(self.basket_count):
            yield self.basket_events(k)

    def prefix(self, basket_count: int) -> "BasketSequence":
        """The sub-sequence made of the first ``basket_count`` baskets."""
        if basket_count < 1:
            raise EmptySequenceError("prefix must keep at least one basket")
        basket_count = min(basket_count, self.basket_count)
        end = self.basket_end(basket_count - 1) + 1
        baskets = [
            self._tokens[self.basket_start(k) : self.basket_end(k) + 1]
            for k in range(basket_count)
        ]
        assert sum(len(b) for b in baskets) == end
        return BasketSequence(baskets, self._time_labels[:basket_count])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BasketSequence):
            return NotImplemented
        return (
            self._tokens == other._tokens
            and self._basket_of == other._basket_of
            and self._time_labels == other._time_labels
        )

    def __hash__(self) -> int:
        return hash((self._tokens, self._basket_of, self._time_labels))

    def __repr__(self) -> str:
        return f"BasketSequence(events={self.length}, baskets={self.basket_count})"


def from_plain(tokens: Iterable[Token]) -> BasketSequence:
    """Build a sequence with one single-item basket per token."""
    items = list(tokens)
    if not items:
        raise EmptySequenceError("sequence has no events")
    return BasketSequence([[t] for t in items])


def from_baskets(
    baskets: Iterable[Sequence[Token]],
    time_labels: Iterable[str | None] | None = None,
) -> BasketSequence:
    """Build a sequence from explicit baskets (optionally dated)."""
    return BasketSequence(baskets, time_labels)
