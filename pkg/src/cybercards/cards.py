"""Physical cards and deck construction for each ruleset.

Card ids are stable strings derived from the pack:

* numbered advice cards: ``<PREFIX>-<rank>`` (prefix = initials of the
  category display name, e.g. ``HS-3`` for Handling Scams rank 3)
* misconception cards:   ``<PREFIX>-MINUS-<n>`` (n = 1-based order within the
  category in the pack document)
* change cards:          ``CHG-<ordinal>``
* challenge cards:       ``TF-<n>`` / ``SC-<n>`` (1-based order among entries
  of that kind in the pack document)

The v1 rulesets deal the whole deck (numbered + minus + change) as one main
pile. The v2 ruleset deals only the numbered cards and stacks the challenge
entries into a separate pile.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .content import ChallengeEntry, ChangeInfo, ChallengeKind, ContentPack, category_prefix
from .errors import PackRulesetMismatch


class Ruleset(str, Enum):
    V1_BASE = "v1-base"
    V1_REVISED = "v1-revised"
    V2 = "v2"

    @property
    def is_v1(self) -> bool:
        return self is not Ruleset.V2


class CardKind(str, Enum):
    NUMBERED = "Numbered"
    MINUS = "Minus"
    CHANGE = "Change"
    TRUE_FALSE = "TrueFalse"
    SCENARIO = "Scenario"


@dataclass(frozen=True, slots=True)
class Card:
    id: str
    kind: CardKind
    category: str | None = None  # Numbered and Minus only
    rank: int | None = None  # Numbered only
    ordinal: int | None = None  # Change ordinal or challenge index


@dataclass(frozen=True, slots=True)
class Deck:
    """Canonical (pre-shuffle) deck order for one (pack, ruleset) pair."""

    main: tuple[str, ...]
    challenge: tuple[str, ...]

    def all_ids(self) -> tuple[str, ...]:
        return self.main + self.challenge


@dataclass(frozen=True, slots=True)
class CardInfo:
    """Public, display-ready face of a card (what views and clients see)."""

    id: str
    kind: str
    category: str | None
    rank: int | None
    text: str | None  # advice / misconception / challenge statement
    lines: tuple[str, ...] | None  # change cards only


class CardCatalogue:
    """Per-(pack, ruleset) lookup tables shared by the engine's hot paths."""

    def __init__(self, pack: ContentPack, ruleset: Ruleset) -> None:
        self.pack = pack
        self.ruleset = ruleset
        self.ruleset_value = ruleset.value
        self.is_v1 = ruleset.is_v1
        self.is_revised = ruleset is Ruleset.V1_REVISED
        self.by_id: dict[str, Card] = {}
        self.info: dict[str, CardInfo] = {}
        self.challenge_entries: dict[str, ChallengeEntry] = {}
        self.change_infos: dict[str, ChangeInfo] = {}
        self.category_ids: tuple[str, ...] = pack.category_ids()
        self.linked_categories: dict[str, tuple[str, ...]] = {}
        self.numbered_by_pair: dict[tuple[str, int], str] = {}

        main: list[str] = []
        challenge: list[str] = []
        prefix = {c.id: category_prefix(c.display_name) for c in pack.categories}

        for cat in pack.categories:
            entries = sorted((a for a in pack.advice if a.category == cat.id), key=lambda a: a.rank)
            for a in entries:
                card_id = f"{prefix[cat.id]}-{a.rank}"
                self._add(Card(card_id, CardKind.NUMBERED, category=a.category, rank=a.rank), text=a.text)
                self.numbered_by_pair[(a.category, a.rank)] = card_id
                main.append(card_id)

        if ruleset.is_v1:
            for cat in pack.categories:
                n = 0
                for m in pack.misconceptions:
                    if m.category != cat.id:
                        continue
                    n += 1
                    card_id = f"{prefix[cat.id]}-MINUS-{n}"
                    self._add(Card(card_id, CardKind.MINUS, category=m.category), text=m.text)
                    main.append(card_id)
            for ch in pack.change_cards:
                card_id = f"CHG-{ch.ordinal}"
                self._add(Card(card_id, CardKind.CHANGE, ordinal=ch.ordinal), lines=ch.lines)
                self.change_infos[card_id] = ch
                self.linked_categories[card_id] = ch.linked_categories
                main.append(card_id)
        else:
            if not pack.challenges:
                raise PackRulesetMismatch("ruleset v2 needs a pack with challenge entries")
            tf = sc = 0
            for entry in pack.challenges:
                if entry.kind is ChallengeKind.TRUE_FALSE:
                    tf += 1
                    card_id = f"TF-{tf}"
                    card = Card(card_id, CardKind.TRUE_FALSE, ordinal=tf)
                else:
                    sc += 1
                    card_id = f"SC-{sc}"
                    card = Card(card_id, CardKind.SCENARIO, ordinal=sc)
                self._add(card, text=entry.statement)
                self.challenge_entries[card_id] = entry
                challenge.append(card_id)

        self.deck = Deck(main=tuple(main), challenge=tuple(challenge))
        self.expected_ids: tuple[str, ...] = tuple(sorted(self.deck.all_ids()))
        self.numbered_ids: frozenset[str] = frozenset(
            c.id for c in self.by_id.values() if c.kind is CardKind.NUMBERED
        )
        # For each scenario card: the set of numbered card ids it accepts.
        self.relevant_sets: dict[str, frozenset[str]] = {
            card_id: frozenset(
                self.numbered_by_pair[pair] for pair in entry.relevant_cards if pair in self.numbered_by_pair
            )
            for card_id, entry in self.challenge_entries.items()
            if entry.kind is ChallengeKind.SCENARIO
        }

    def _add(self, card: Card, text: str | None = None, lines: tuple[str, ...] | None = None) -> None:
        self.by_id[card.id] = card
        self.info[card.id] = CardInfo(
            id=card.id,
            kind=card.kind.value,
            category=card.category,
            rank=card.rank,
            text=text,
            lines=lines,
        )


_CATALOGUE_CACHE: dict[tuple[int, Ruleset], CardCatalogue] = {}
_LAST_CATALOGUE: CardCatalogue | None = None


def catalogue_for(pack: ContentPack, ruleset: Ruleset) -> CardCatalogue:
    """Cached catalogue; packs are immutable so identity keying is safe.

    The catalogue holds a strong reference to its pack, which keeps the id()
    key valid for the cache's lifetime. A one-slot fast path serves the
    common case of many calls against the same (pack, ruleset).
    """
    global _LAST_CATALOGUE
    last = _LAST_CATALOGUE
    if last is not None and last.pack is pack and last.ruleset is ruleset:
        return last
    key = (id(pack), ruleset)
    found = _CATALOGUE_CACHE.get(key)
    if found is None or found.pack is not pack:
        found = CardCatalogue(pack, ruleset)
        _CATALOGUE_CACHE[key] = found
    _LAST_CATALOGUE = found
    return found


def build_deck(pack: ContentPack, ruleset: Ruleset) -> Deck:
    """Canonical deck for a pack under a ruleset (one card per content entry)."""
    return catalogue_for(pack, ruleset).deck
