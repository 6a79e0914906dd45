"""Move and event records plus their wire codecs.

Moves are what players submit; events are what the engine emits. Both are
immutable values with a stable dict form: moves as ``{"type": ..., ...}``
objects, events likewise. Event logs serialize as JSON lines.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union

from .errors import ParseError

# ---------------------------------------------------------------------------
# Moves


@dataclass(frozen=True, slots=True)
class OpeningRun:
    cards: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class AscendingRun:
    cards: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class CrossMatch:
    cards: tuple[str, ...]  # declared order; the last card sets the category


@dataclass(frozen=True, slots=True)
class PlayChange:
    card: str
    category: str


@dataclass(frozen=True, slots=True)
class ChangeCombo:
    card: str
    category: str
    followup: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class PlayMinus:
    card: str


@dataclass(frozen=True, slots=True)
class DrawPenalty:
    pass


@dataclass(frozen=True, slots=True)
class FlipChallenge:
    pass


@dataclass(frozen=True, slots=True)
class AnswerTrueFalse:
    answer: bool


@dataclass(frozen=True, slots=True)
class ScenarioDefense:
    cards: tuple[str, ...]  # may be empty


Move = Union[
    OpeningRun,
    AscendingRun,
    CrossMatch,
    PlayChange,
    ChangeCombo,
    PlayMinus,
    DrawPenalty,
    FlipChallenge,
    AnswerTrueFalse,
    ScenarioDefense,
]

_MOVE_NAMES = {
    OpeningRun: "opening_run",
    AscendingRun: "ascending_run",
    CrossMatch: "cross_match",
    PlayChange: "play_change",
    ChangeCombo: "change_combo",
    PlayMinus: "play_minus",
    DrawPenalty: "draw_penalty",
    FlipChallenge: "flip_challenge",
    AnswerTrueFalse: "answer_true_false",
    ScenarioDefense: "scenario_defense",
}
_MOVE_TYPES = {name: cls for cls, name in _MOVE_NAMES.items()}

# Order used when sorting a move list: class first, then a stable per-type key.
_MOVE_ORDER = {
    OpeningRun: 0,
    AscendingRun: 1,
    CrossMatch: 2,
    PlayChange: 3,
    ChangeCombo: 4,
    PlayMinus: 5,
    FlipChallenge: 6,
    AnswerTrueFalse: 7,
    ScenarioDefense: 8,
    DrawPenalty: 9,
}


def move_to_dict(move: Move) -> dict:
    name = _MOVE_NAMES[type(move)]
    if isinstance(move, (OpeningRun, AscendingRun, CrossMatch, ScenarioDefense)):
        return {"type": name, "cards": list(move.cards)}
    if isinstance(move, PlayChange):
        return {"type": name, "card": move.card, "category": move.category}
    if isinstance(move, ChangeCombo):
        return {"type": name, "card": move.card, "category": move.category, "followup": list(move.followup)}
    if isinstance(move, PlayMinus):
        return {"type": name, "card": move.card}
    if isinstance(move, AnswerTrueFalse):
        return {"type": name, "answer": move.answer}
    return {"type": name}


def move_from_dict(data: dict) -> Move:
    if not isinstance(data, dict) or "type" not in data:
        raise ParseError("move must be an object with a 'type' field")
    name = data["type"]
    cls = _MOVE_TYPES.get(name)
    if cls is None:
        raise ParseError(f"unknown move type '{name}'")
    try:
        if cls in (OpeningRun, AscendingRun, CrossMatch, ScenarioDefense):
            cards = data["cards"]
            if not isinstance(cards, list) or not all(isinstance(c, str) for c in cards):
                raise ParseError("'cards' must be a list of card ids")
            return cls(cards=tuple(cards))
        if cls is PlayChange:
            return PlayChange(card=str(data["card"]), category=str(data["category"]))
        if cls is ChangeCombo:
            followup = data["followup"]
            if not isinstance(followup, list) or not all(isinstance(c, str) for c in followup):
                raise ParseError("'followup' must be a list of card ids")
            return ChangeCombo(card=str(data["card"]), category=str(data["category"]), followup=tuple(followup))
        if cls is PlayMinus:
            return PlayMinus(card=str(data["card"]))
        if cls is AnswerTrueFalse:
            answer = data["answer"]
            if not isinstance(answer, bool):
                raise ParseError("'answer' must be a boolean")
            return AnswerTrueFalse(answer=answer)
        return cls()
    except KeyError as exc:
        raise ParseError(f"move '{name}' is missing field {exc}") from None


def move_key(move: Move) -> str:
    """Canonical serialization, used for deterministic tie-breaking."""
    return json.dumps(move_to_dict(move), sort_keys=True, separators=(",", ":"))


def move_sort_key(move: Move):
    d = move_to_dict(move)
    return (
        _MOVE_ORDER[type(move)],
        tuple(d.get("cards", ())),
        d.get("card", ""),
        d.get("category", ""),
        tuple(d.get("followup", ())),
        d.get("answer", False),
    )


# ---------------------------------------------------------------------------
# Events


@dataclass(frozen=True, slots=True)
class CardsPlayed:
    seat: int
    cards: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class CategoryChanged:
    category: str
    rank: int


@dataclass(frozen=True, slots=True)
class PenaltyDrawn:
    seat: int
    count: int
    cards: tuple[str, ...]  # hidden from other seats in filtered feeds


@dataclass(frozen=True, slots=True)
class ChallengeFlipped:
    card: str


@dataclass(frozen=True, slots=True)
class ChallengeResolved:
    correct: bool


@dataclass(frozen=True, slots=True)
class PilesReshuffled:
    draw_size: int


@dataclass(frozen=True, slots=True)
class TurnPassed:
    seat: int  # the seat whose turn it now is
    turn_index: int


@dataclass(frozen=True, slots=True)
class GameWon:
    seat: int


@dataclass(frozen=True, slots=True)
class GameStalled:
    pass


Event = Union[
    CardsPlayed,
    CategoryChanged,
    PenaltyDrawn,
    ChallengeFlipped,
    ChallengeResolved,
    PilesReshuffled,
    TurnPassed,
    GameWon,
    GameStalled,
]

_EVENT_NAMES = {
    CardsPlayed: "cards_played",
    CategoryChanged: "category_changed",
    PenaltyDrawn: "penalty_drawn",
    ChallengeFlipped: "challenge_flipped",
    ChallengeResolved: "challenge_resolved",
    PilesReshuffled: "piles_reshuffled",
    TurnPassed: "turn_passed",
    GameWon: "game_won",
    GameStalled: "game_stalled",
}
_EVENT_TYPES = {name: cls for cls, name in _EVENT_NAMES.items()}


def event_to_dict(event: Event) -> dict:
    name = _EVENT_NAMES[type(event)]
    if isinstance(event, CardsPlayed):
        return {"type": name, "seat": event.seat, "cards": list(event.cards)}
    if isinstance(event, CategoryChanged):
        return {"type": name, "category": event.category, "rank": event.rank}
    if isinstance(event, PenaltyDrawn):
        return {"type": name, "seat": event.seat, "count": event.count, "cards": list(event.cards)}
    if isinstance(event, ChallengeFlipped):
        return {"type": name, "card": event.card}
    if isinstance(event, ChallengeResolved):
        return {"type": name, "correct": event.correct}
    if isinstance(event, PilesReshuffled):
        return {"type": name, "draw_size": event.draw_size}
    if isinstance(event, TurnPassed):
        return {"type": name, "seat": event.seat, "turn_index": event.turn_index}
    if isinstance(event, GameWon):
        return {"type": name, "seat": event.seat}
    return {"type": name}


def event_from_dict(data: dict) -> Event:
    if not isinstance(data, dict) or "type" not in data:
        raise ParseError("event must be an object with a 'type' field")
    name = data["type"]
    cls = _EVENT_TYPES.get(name)
    if cls is None:
        raise ParseError(f"unknown event type '{name}'")
    try:
        if cls is CardsPlayed:
            return CardsPlayed(seat=int(data["seat"]), cards=tuple(data["cards"]))
        if cls is CategoryChanged:
            return CategoryChanged(category=data["category"], rank=int(data["rank"]))
        if cls is PenaltyDrawn:
            return PenaltyDrawn(seat=int(data["seat"]), count=int(data["count"]), cards=tuple(data["cards"]))
        if cls is ChallengeFlipped:
            return ChallengeFlipped(card=data["card"])
        if cls is ChallengeResolved:
            return ChallengeResolved(correct=bool(data["correct"]))
        if cls is PilesReshuffled:
            return PilesReshuffled(draw_size=int(data["draw_size"]))
        if cls is TurnPassed:
            return TurnPassed(seat=int(data["seat"]), turn_index=int(data["turn_index"]))
        if cls is GameWon:
            return GameWon(seat=int(data["seat"]))
        return GameStalled()
    except KeyError as exc:
        raise ParseError(f"event '{name}' is missing field {exc}") from None


def event_to_json_line(event: Event) -> str:
    return json.dumps(event_to_dict(event), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
