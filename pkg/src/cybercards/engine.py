"""The authoritative game state machine.

All operations are pure functions from immutable state to new state; a
``GameState`` is an immutable record of tuples and scalars, so sharing states
across threads is safe and ``apply_move`` can never corrupt its input.

Rule shape (see README for the full write-up):

* class 1 plays: ascending runs in the active category, or one-or-more cards
  of the active rank from distinct categories (cross-match);
* class 2 plays: change cards declaring a new category (v1), optionally with
  an ascending follow-up run in a linked category (v1-revised combo);
* class 3 plays: a minus card of the active category at a 2-card penalty
  (v1), or flipping the challenge pile (v2);
* class 4: the forced penalty draw.

With ``strict_precedence`` (the default) a class is only available when all
lower-numbered classes are empty.

Move lists are deterministically ordered: classes ascend, and within a class
moves follow the generation order (hands iterate sorted by card id, run
subsets enumerate by ascending bitmask over rank-sorted candidates,
cross-matches by size then permutation order, categories in pack order).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from enum import Enum
from typing import NamedTuple

from .cards import CardCatalogue, CardInfo, CardKind, Ruleset, build_deck, catalogue_for
from .content import ChallengeKind, ContentPack
from .errors import ConfigError, IllegalMove, NotYourTurn, ReplayMismatch, WrongPhase
from .moves import (
    AnswerTrueFalse,
    AscendingRun,
    CardsPlayed,
    CategoryChanged,
    ChallengeFlipped,
    ChallengeResolved,
    ChangeCombo,
    CrossMatch,
    DrawPenalty,
    Event,
    FlipChallenge,
    GameStalled,
    GameWon,
    Move,
    OpeningRun,
    PenaltyDrawn,
    PilesReshuffled,
    PlayChange,
    PlayMinus,
    ScenarioDefense,
    TurnPassed,
)
from .rng import Pcg32

MIN_PLAYERS = 2
MAX_PLAYERS = 6
DEFAULT_HAND_SIZE = 7
DEFAULT_PENALTY_DRAW = 2
DEFAULT_TURN_CAP = 500

_DRAW_PENALTY = DrawPenalty()
_FLIP_CHALLENGE = FlipChallenge()
_ANSWERS = (AnswerTrueFalse(False), AnswerTrueFalse(True))


class Phase(str, Enum):
    OPENING = "Opening"
    PLAY = "Play"
    AWAITING_CHALLENGE_ANSWER = "AwaitingChallengeAnswer"
    AWAITING_SCENARIO_DEFENSE = "AwaitingScenarioDefense"
    FINISHED = "Finished"


# Enum .value goes through a descriptor; this lookup table is much cheaper
# in per-move code.
_PHASE_VALUE = {phase: phase.value for phase in Phase}


@dataclass(frozen=True)
class GameConfig:
    ruleset: Ruleset
    player_count: int
    pack: ContentPack
    seed: int
    hand_size: int = DEFAULT_HAND_SIZE
    penalty_draw: int = DEFAULT_PENALTY_DRAW
    strict_precedence: bool = True
    turn_cap: int = DEFAULT_TURN_CAP


class GameState(NamedTuple):
    config: GameConfig
    hands: tuple[tuple[str, ...], ...]  # sorted card ids per seat
    draw_pile: tuple[str, ...]  # last element is the top
    discard_pile: tuple[str, ...]  # last element is the top
    challenge_pile: tuple[str, ...]  # last element is the top (v2)
    resolved_challenges: tuple[str, ...]
    pending_challenge: str | None
    active_category: str | None
    active_rank: int  # 0 = any rank of the active category
    current_seat: int
    turn_index: int
    rng: tuple[int, int]
    phase: Phase
    winner: int | None = None


class Outcome(NamedTuple):
    kind: str  # "won" | "stalled"
    seat: int | None = None


class ChallengeView(NamedTuple):
    card: str
    kind: str
    statement: str
    relevant_cards: tuple[tuple[str, int], ...] | None
    max_defenses: int | None


class PlayerView(NamedTuple):
    seat: int
    player_count: int
    ruleset: str
    phase: str
    hand: tuple[CardInfo, ...]
    opponents: tuple[tuple[int, int], ...]  # (seat, hand size) for every other seat
    discard_top: CardInfo | None
    active_category: str | None
    active_rank: int
    draw_size: int
    discard_size: int
    challenge_size: int
    current_seat: int
    turn_index: int
    winner: int | None
    pending_challenge: ChallengeView | None
    legal_moves: tuple[Move, ...]


def validate_config(config: GameConfig) -> None:
    if not (MIN_PLAYERS <= config.player_count <= MAX_PLAYERS):
        raise ConfigError(f"player_count must be {MIN_PLAYERS}..{MAX_PLAYERS}, got {config.player_count}")
    if config.hand_size < 1:
        raise ConfigError("hand_size must be positive")
    if config.penalty_draw < 1:
        raise ConfigError("penalty_draw must be positive")
    if config.turn_cap < 1:
        raise ConfigError("turn_cap must be positive")
    if not (0 <= config.seed < 1 << 64):
        raise ConfigError("seed must be an unsigned 64-bit integer")
    deck = build_deck(config.pack, config.ruleset)
    if config.player_count * config.hand_size >= len(deck.main):
        raise ConfigError(
            f"{config.player_count} hands of {config.hand_size} need fewer than "
            f"{len(deck.main)} main-pile cards"
        )


def new_game(config: GameConfig) -> GameState:
    """Shuffle, deal round-robin from seat 0, and open at seat 0.

    The shuffle is a Fisher-Yates pass over the canonical deck order using
    the PCG32 stream seeded from ``config.seed``; in v2 the challenge pile is
    shuffled immediately after the main pile on the same stream. Cards are
    dealt one at a time from the front of the shuffled sequence.
    """
    validate_config(config)
    cat = catalogue_for(config.pack, config.ruleset)
    rng = Pcg32.seeded(config.seed)

    main = list(cat.deck.main)
    rng.shuffle(main)
    challenge = list(cat.deck.challenge)
    rng.shuffle(challenge)

    n = config.player_count
    hands: list[list[str]] = [[] for _ in range(n)]
    dealt = n * config.hand_size
    for k in range(dealt):
        hands[k % n].append(main[k])

    return GameState(
        config=config,
        hands=tuple(tuple(sorted(h)) for h in hands),
        draw_pile=tuple(reversed(main[dealt:])),  # front of the sequence drawn first
        discard_pile=(),
        challenge_pile=tuple(reversed(challenge)),
        resolved_challenges=(),
        pending_challenge=None,
        active_category=None,
        active_rank=0,
        current_seat=0,
        turn_index=0,
        rng=rng.state_tuple(),
        phase=Phase.OPENING,
    )


def is_terminal(state: GameState) -> Outcome | None:
    """Won as soon as any hand is empty; stalled once the turn cap is hit."""
    for seat, hand in enumerate(state.hands):
        if not hand:
            return Outcome("won", seat)
    if state.turn_index >= state.config.turn_cap:
        return Outcome("stalled")
    return None


# ---------------------------------------------------------------------------
# Legal move generation


def _ascending_subsets(cards: list[str]):
    """All non-empty subsets of rank-sorted cards, kept in ascending order."""
    n = len(cards)
    if n == 0:
        return ()
    if n == 1:
        return ((cards[0],),)
    return tuple(
        tuple(cards[i] for i in range(n) if mask >> i & 1) for mask in range(1, 1 << n)
    )


def _run_candidates(catalogue: CardCatalogue, hand: tuple[str, ...], category: str, above_rank: int) -> list[str]:
    by_id = catalogue.by_id
    found = [
        card_id
        for card_id in hand
        if (card := by_id[card_id]).kind is CardKind.NUMBERED
        and card.category == category
        and card.rank > above_rank
    ]
    found.sort(key=lambda card_id: by_id[card_id].rank)
    return found


def _class1_moves(state: GameState, catalogue: CardCatalogue) -> list[Move]:
    hand = state.hands[state.current_seat]
    by_id = catalogue.by_id
    out: list[Move] = []
    runnable = _run_candidates(catalogue, hand, state.active_category, state.active_rank)
    out.extend(map(AscendingRun, _ascending_subsets(runnable)))
    rank = state.active_rank
    if rank > 0:
        matching = [
            card_id
            for card_id in hand
            if (card := by_id[card_id]).kind is CardKind.NUMBERED and card.rank == rank
        ]
        for size in range(1, len(matching) + 1):
            out.extend(map(CrossMatch, permutations(matching, size)))
    return out


def _class2_moves(state: GameState, catalogue: CardCatalogue) -> list[Move]:
    if not catalogue.is_v1:
        return []
    hand = state.hands[state.current_seat]
    by_id = catalogue.by_id
    out: list[Move] = []
    active = state.active_category
    for card_id in hand:
        if by_id[card_id].kind is not CardKind.CHANGE:
            continue
        for declared in catalogue.category_ids:
            if declared != active:
                out.append(PlayChange(card_id, declared))
        if catalogue.is_revised:
            for declared in catalogue.linked_categories[card_id]:
                if declared == active:
                    continue
                followups = _run_candidates(catalogue, hand, declared, 0)
                out.extend(
                    ChangeCombo(card_id, declared, cards) for cards in _ascending_subsets(followups)
                )
    return out


def _class3_moves(state: GameState, catalogue: CardCatalogue) -> list[Move]:
    if catalogue.is_v1:
        by_id = catalogue.by_id
        active = state.active_category
        return [
            PlayMinus(c)
            for c in state.hands[state.current_seat]
            if (card := by_id[c]).kind is CardKind.MINUS and card.category == active
        ]
    if state.challenge_pile:
        return [_FLIP_CHALLENGE]
    return []


def legal_moves(state: GameState) -> tuple[Move, ...]:
    """Complete, deterministically ordered move list for the current seat."""
    catalogue = catalogue_for(state.config.pack, state.config.ruleset)
    return _legal_moves(state, catalogue)


def _legal_moves(state: GameState, catalogue: CardCatalogue) -> tuple[Move, ...]:
    phase = state.phase

    if phase is Phase.PLAY:
        if state.config.strict_precedence:
            found = _class1_moves(state, catalogue)
            if found:
                return tuple(found)
            found = _class2_moves(state, catalogue)
            if found:
                return tuple(found)
            found = _class3_moves(state, catalogue)
            if found:
                return tuple(found)
            return (_DRAW_PENALTY,)
        out = _class1_moves(state, catalogue)
        out.extend(_class2_moves(state, catalogue))
        out.extend(_class3_moves(state, catalogue))
        out.append(_DRAW_PENALTY)
        return tuple(out)

    if phase is Phase.AWAITING_CHALLENGE_ANSWER:
        return _ANSWERS

    if phase is Phase.AWAITING_SCENARIO_DEFENSE:
        entry = catalogue.challenge_entries[state.pending_challenge]
        relevant = catalogue.relevant_sets[state.pending_challenge]
        eligible = [c for c in state.hands[state.current_seat] if c in relevant]
        out = []
        for size in range(0, min(entry.max_defenses, len(eligible)) + 1):
            out.extend(map(ScenarioDefense, combinations(eligible, size)))
        return tuple(out)

    if phase is Phase.OPENING:
        hand = state.hands[state.current_seat]
        out = []
        for category in catalogue.category_ids:
            candidates = _run_candidates(catalogue, hand, category, 0)
            out.extend(map(OpeningRun, _ascending_subsets(candidates)))
        if not out or not state.config.strict_precedence:
            out.append(_DRAW_PENALTY)
        return tuple(out)

    return ()  # Phase.FINISHED


# ---------------------------------------------------------------------------
# Move validation

_MOVE_CLASS = {
    OpeningRun: 1,
    AscendingRun: 1,
    CrossMatch: 1,
    PlayChange: 2,
    ChangeCombo: 2,
    PlayMinus: 3,
    FlipChallenge: 3,
    DrawPenalty: 4,
}

_PHASE_MOVES = {
    Phase.OPENING: (OpeningRun, DrawPenalty),
    Phase.PLAY: (AscendingRun, CrossMatch, PlayChange, ChangeCombo, PlayMinus, FlipChallenge, DrawPenalty),
    Phase.AWAITING_CHALLENGE_ANSWER: (AnswerTrueFalse,),
    Phase.AWAITING_SCENARIO_DEFENSE: (ScenarioDefense,),
}


def _referenced_cards(move: Move) -> tuple[str, ...]:
    mt = type(move)
    if mt in (OpeningRun, AscendingRun, CrossMatch, ScenarioDefense):
        return move.cards
    if mt in (PlayChange, PlayMinus):
        return (move.card,)
    if mt is ChangeCombo:
        return (move.card, *move.followup)
    return ()


def _check_ascending(cards: tuple[str, ...], catalogue: CardCatalogue, category: str, above_rank: int) -> None:
    previous = above_rank
    for card_id in cards:
        card = catalogue.by_id[card_id]
        if card.kind is not CardKind.NUMBERED:
            raise IllegalMove("NOT_NUMBERED", f"{card_id} is not a numbered card")
        if card.category != category:
            raise IllegalMove("WRONG_CATEGORY", f"{card_id} is not in category '{category}'")
        if card.rank <= previous:
            code = "RANK_NOT_HIGHER" if previous == above_rank else "NOT_ASCENDING"
            raise IllegalMove(code, f"{card_id} does not continue an ascending run above rank {previous}")
        previous = card.rank


def _first_nonempty_class(state: GameState, catalogue: CardCatalogue) -> int:
    hand = state.hands[state.current_seat]
    by_id = catalogue.by_id
    if state.phase is Phase.OPENING:
        if any(by_id[c].kind is CardKind.NUMBERED for c in hand):
            return 1
        return 4
    for card_id in hand:
        card = by_id[card_id]
        if card.kind is not CardKind.NUMBERED:
            continue
        if card.category == state.active_category and card.rank > state.active_rank:
            return 1
        if state.active_rank > 0 and card.rank == state.active_rank:
            return 1
    if catalogue.is_v1:
        if any(by_id[c].kind is CardKind.CHANGE for c in hand):
            return 2
        if any(
            by_id[c].kind is CardKind.MINUS and by_id[c].category == state.active_category for c in hand
        ):
            return 3
    elif state.challenge_pile:
        return 3
    return 4


def validate_move(state: GameState, seat: int, move: Move) -> None:
    """Raise NotYourTurn / WrongPhase / IllegalMove unless the move is legal."""
    if state.phase is Phase.FINISHED:
        raise WrongPhase("the game is finished")
    if seat != state.current_seat:
        raise NotYourTurn(f"seat {seat} moved but it is seat {state.current_seat}'s turn")
    if not isinstance(move, _PHASE_MOVES[state.phase]):
        raise WrongPhase(f"{type(move).__name__} is not playable in phase {state.phase.value}")

    catalogue = catalogue_for(state.config.pack, state.config.ruleset)
    ruleset = state.config.ruleset
    hand = set(state.hands[seat])

    referenced = _referenced_cards(move)
    if len(set(referenced)) != len(referenced):
        raise IllegalMove("DUPLICATE_CARD", "a card is referenced twice")
    for card_id in referenced:
        if card_id not in hand:
            raise IllegalMove("NOT_IN_HAND", f"{card_id} is not in seat {seat}'s hand")

    mt = type(move)
    if mt in (PlayChange, ChangeCombo, PlayMinus) and not catalogue.is_v1:
        raise IllegalMove("RULESET", f"{mt.__name__} does not exist in {ruleset.value}")
    if mt is ChangeCombo and not catalogue.is_revised:
        raise IllegalMove("RULESET", "change combos exist only in v1-revised")
    if mt is FlipChallenge and catalogue.is_v1:
        raise IllegalMove("RULESET", f"the challenge pile does not exist in {ruleset.value}")

    if mt is OpeningRun:
        if not move.cards:
            raise IllegalMove("EMPTY_RUN", "an opening run needs at least one card")
        first = catalogue.by_id[move.cards[0]]
        if first.kind is not CardKind.NUMBERED:
            raise IllegalMove("NOT_NUMBERED", f"{first.id} is not a numbered card")
        _check_ascending(move.cards, catalogue, first.category, 0)
    elif mt is AscendingRun:
        if not move.cards:
            raise IllegalMove("EMPTY_RUN", "a run needs at least one card")
        _check_ascending(move.cards, catalogue, state.active_category, state.active_rank)
    elif mt is CrossMatch:
        if not move.cards:
            raise IllegalMove("EMPTY_RUN", "a cross-match needs at least one card")
        if state.active_rank == 0:
            raise IllegalMove("NO_ACTIVE_RANK", "there is no rank to match")
        seen_categories = set()
        for card_id in move.cards:
            card = catalogue.by_id[card_id]
            if card.kind is not CardKind.NUMBERED:
                raise IllegalMove("NOT_NUMBERED", f"{card_id} is not a numbered card")
            if card.rank != state.active_rank:
                raise IllegalMove("RANK_MISMATCH", f"{card_id} does not match rank {state.active_rank}")
            if card.category in seen_categories:
                raise IllegalMove("DUPLICATE_CATEGORY", f"two cards share category '{card.category}'")
            seen_categories.add(card.category)
    elif mt in (PlayChange, ChangeCombo):
        card = catalogue.by_id[move.card]
        if card.kind is not CardKind.CHANGE:
            raise IllegalMove("NOT_CHANGE_CARD", f"{move.card} is not a change card")
        if move.category not in catalogue.category_ids:
            raise IllegalMove("UNKNOWN_CATEGORY", f"'{move.category}' is not a category in this pack")
        if move.category == state.active_category:
            raise IllegalMove("SAME_CATEGORY", "a change card must switch to a different category")
        if mt is ChangeCombo:
            if move.category not in catalogue.linked_categories[move.card]:
                raise IllegalMove(
                    "CATEGORY_NOT_LINKED", f"'{move.category}' is not linked to {move.card}"
                )
            if not move.followup:
                raise IllegalMove("EMPTY_RUN", "a change combo needs a follow-up run")
            _check_ascending(move.followup, catalogue, move.category, 0)
    elif mt is PlayMinus:
        card = catalogue.by_id[move.card]
        if card.kind is not CardKind.MINUS:
            raise IllegalMove("NOT_MINUS_CARD", f"{move.card} is not a minus card")
        if card.category != state.active_category:
            raise IllegalMove(
                "WRONG_CATEGORY", f"{move.card} is not in the active category '{state.active_category}'"
            )
    elif mt is FlipChallenge:
        if not state.challenge_pile:
            raise IllegalMove("CHALLENGE_EMPTY", "the challenge pile is exhausted")
    elif mt is ScenarioDefense:
        entry = catalogue.challenge_entries[state.pending_challenge]
        if len(move.cards) > entry.max_defenses:
            raise IllegalMove("TOO_MANY_DEFENSES", f"at most {entry.max_defenses} cards may be played")
        relevant = catalogue.relevant_sets[state.pending_challenge]
        for card_id in move.cards:
            if card_id not in relevant:
                raise IllegalMove("IRRELEVANT_DEFENSE", f"{card_id} is not relevant to this scenario")

    if state.config.strict_precedence and (state.phase is Phase.OPENING or state.phase is Phase.PLAY):
        move_class = _MOVE_CLASS[mt]
        first = _first_nonempty_class(state, catalogue)
        if move_class > first:
            raise IllegalMove(
                "PRECEDENCE", f"a class-{first} play is available, so a class-{move_class} move is not allowed"
            )


# ---------------------------------------------------------------------------
# Applying moves


def _draw_cards(
    seat: int,
    count: int,
    hand: list[str],
    draw: list[str],
    discard: list[str],
    rng: Pcg32,
    events: list[Event],
) -> None:
    """Draw ``count`` cards, reshuffling the discard (minus its top) on
    exhaustion; if cards still run out, draw what exists."""
    remaining = count
    segment: list[str] = []
    drew_any = False
    while remaining > 0:
        if draw:
            segment.append(draw.pop())
            remaining -= 1
            continue
        if segment:
            events.append(PenaltyDrawn(seat, len(segment), tuple(segment)))
            hand.extend(segment)
            drew_any = True
            segment = []
        if len(discard) > 1:
            pool = discard[:-1]
            del discard[:-1]
            rng.shuffle(pool)
            draw.extend(pool)
            events.append(PilesReshuffled(len(pool)))
        else:
            break
    if segment or not drew_any:
        events.append(PenaltyDrawn(seat, len(segment), tuple(segment)))
        hand.extend(segment)


def apply_move(
    state: GameState, seat: int, move: Move, *, validate: bool = True
) -> tuple[GameState, tuple[Event, ...]]:
    """Apply one move, returning the new state and the events it produced.

    ``apply_move`` requires ``move in legal_moves(state)`` and ``seat`` to be
    the current seat. With ``validate=True`` (the default) violations raise
    NotYourTurn / WrongPhase / IllegalMove; callers that take moves straight
    from ``legal_moves`` may pass ``validate=False`` to skip the re-check.
    """
    if validate:
        validate_move(state, seat, move)
    catalogue = catalogue_for(state.config.pack, state.config.ruleset)
    config = state.config
    by_id = catalogue.by_id

    hand = list(state.hands[seat])
    draw = state.draw_pile
    discard = state.discard_pile
    challenge = state.challenge_pile
    resolved = state.resolved_challenges
    pending = state.pending_challenge
    active_category = state.active_category
    active_rank = state.active_rank
    phase = state.phase
    rng_tuple = state.rng
    events: list[Event] = []

    def penalty_draw() -> None:
        nonlocal draw, discard, rng_tuple
        draw_list = list(draw)
        discard_list = list(discard)
        rng = Pcg32.from_tuple(rng_tuple)
        _draw_cards(seat, config.penalty_draw, hand, draw_list, discard_list, rng, events)
        draw = tuple(draw_list)
        discard = tuple(discard_list)
        rng_tuple = rng.state_tuple()

    turn_ends = True
    mt = type(move)
    if mt is AscendingRun or mt is OpeningRun or mt is CrossMatch:
        for card_id in move.cards:
            hand.remove(card_id)
        discard = discard + move.cards
        events.append(CardsPlayed(seat, move.cards))
        last = by_id[move.cards[-1]]
        active_category, active_rank = last.category, last.rank
        events.append(CategoryChanged(active_category, active_rank))
        if phase is Phase.OPENING:
            phase = Phase.PLAY
    elif mt is PlayChange:
        hand.remove(move.card)
        discard = discard + (move.card,)
        events.append(CardsPlayed(seat, (move.card,)))
        active_category, active_rank = move.category, 0
        events.append(CategoryChanged(active_category, 0))
    elif mt is ChangeCombo:
        hand.remove(move.card)
        discard = discard + (move.card,)
        events.append(CardsPlayed(seat, (move.card,)))
        events.append(CategoryChanged(move.category, 0))
        for card_id in move.followup:
            hand.remove(card_id)
        discard = discard + move.followup
        events.append(CardsPlayed(seat, move.followup))
        last = by_id[move.followup[-1]]
        active_category, active_rank = last.category, last.rank
        events.append(CategoryChanged(active_category, active_rank))
    elif mt is PlayMinus:
        hand.remove(move.card)
        discard = discard + (move.card,)
        events.append(CardsPlayed(seat, (move.card,)))
        if active_rank != 0:
            active_rank = 0
            events.append(CategoryChanged(active_category, 0))
        penalty_draw()
    elif mt is DrawPenalty:
        penalty_draw()
    elif mt is FlipChallenge:
        card_id = challenge[-1]
        challenge = challenge[:-1]
        resolved = resolved + (card_id,)
        pending = card_id
        entry = catalogue.challenge_entries[card_id]
        phase = (
            Phase.AWAITING_CHALLENGE_ANSWER
            if entry.kind is ChallengeKind.TRUE_FALSE
            else Phase.AWAITING_SCENARIO_DEFENSE
        )
        events.append(ChallengeFlipped(card_id))
        turn_ends = False
    elif mt is AnswerTrueFalse:
        entry = catalogue.challenge_entries[pending]
        correct = move.answer == entry.answer
        events.append(ChallengeResolved(correct))
        if not correct:
            penalty_draw()
        pending = None
        phase = Phase.PLAY
    elif mt is ScenarioDefense:
        if move.cards:
            for card_id in move.cards:
                hand.remove(card_id)
            discard = discard + move.cards
            events.append(CardsPlayed(seat, move.cards))
        if active_rank != 0:
            active_rank = 0
            events.append(CategoryChanged(active_category, 0))
        events.append(ChallengeResolved(True))
        pending = None
        phase = Phase.PLAY
    else:  # pragma: no cover - the move union is closed
        raise IllegalMove("UNKNOWN_MOVE", mt.__name__)

    hands = list(state.hands)
    hand.sort()
    hands[seat] = tuple(hand)
    current_seat = state.current_seat
    turn_index = state.turn_index
    winner = state.winner

    if turn_ends:
        turn_index += 1
        if not hands[seat]:
            phase = Phase.FINISHED
            winner = seat
            events.append(GameWon(seat))
        elif turn_index >= config.turn_cap:
            phase = Phase.FINISHED
            winner = None
            events.append(GameStalled())
        else:
            current_seat = seat + 1
            if current_seat == config.player_count:
                current_seat = 0
            events.append(TurnPassed(current_seat, turn_index))

    new_state = GameState(
        config,
        tuple(hands),
        draw,
        discard,
        challenge,
        resolved,
        pending,
        active_category,
        active_rank,
        current_seat,
        turn_index,
        rng_tuple,
        phase,
        winner,
    )
    return new_state, tuple(events)


# ---------------------------------------------------------------------------
# Event replay


def replay_events(initial: GameState, events) -> GameState:
    """Fold an event log over its initial state, reproducing the final state.

    Raises ReplayMismatch when the log is inconsistent with the state it is
    folded over (wrong cards, impossible pops, unknown seats).
    """
    catalogue = catalogue_for(initial.config.pack, initial.config.ruleset)
    hands = [list(h) for h in initial.hands]
    draw = list(initial.draw_pile)
    discard = list(initial.discard_pile)
    challenge = list(initial.challenge_pile)
    resolved = list(initial.resolved_challenges)
    pending = initial.pending_challenge
    active_category = initial.active_category
    active_rank = initial.active_rank
    current_seat = initial.current_seat
    turn_index = initial.turn_index
    phase = initial.phase
    winner = initial.winner
    rng = Pcg32.from_tuple(initial.rng)

    try:
        for event in events:
            et = type(event)
            if et is CardsPlayed:
                for card_id in event.cards:
                    hands[event.seat].remove(card_id)
                discard.extend(event.cards)
            elif et is CategoryChanged:
                active_category, active_rank = event.category, event.rank
                if phase is Phase.OPENING:
                    phase = Phase.PLAY
            elif et is PenaltyDrawn:
                if event.count != len(event.cards) or event.count > len(draw):
                    raise ReplayMismatch("penalty draw does not match the draw pile")
                for expected in event.cards:
                    got = draw.pop()
                    if got != expected:
                        raise ReplayMismatch(f"drew {got} but the log says {expected}")
                    hands[event.seat].append(got)
            elif et is PilesReshuffled:
                if len(discard) - 1 != event.draw_size:
                    raise ReplayMismatch("reshuffle size does not match the discard pile")
                pool = discard[:-1]
                del discard[:-1]
                rng.shuffle(pool)
                draw.extend(pool)
            elif et is ChallengeFlipped:
                if not challenge or challenge[-1] != event.card:
                    raise ReplayMismatch(f"challenge top is not {event.card}")
                challenge.pop()
                resolved.append(event.card)
                pending = event.card
                entry = catalogue.challenge_entries[event.card]
                phase = (
                    Phase.AWAITING_CHALLENGE_ANSWER
                    if entry.kind is ChallengeKind.TRUE_FALSE
                    else Phase.AWAITING_SCENARIO_DEFENSE
                )
            elif et is ChallengeResolved:
                pending = None
                phase = Phase.PLAY
            elif et is TurnPassed:
                current_seat = event.seat
                turn_index = event.turn_index
            elif et is GameWon:
                turn_index += 1
                phase = Phase.FINISHED
                winner = event.seat
            elif et is GameStalled:
                turn_index += 1
                phase = Phase.FINISHED
                winner = None
            else:
                raise ReplayMismatch(f"unknown event {event!r}")
    except (ValueError, IndexError, KeyError) as exc:
        raise ReplayMismatch(f"event log is inconsistent with the state: {exc}") from exc

    return GameState(
        config=initial.config,
        hands=tuple(tuple(sorted(h)) for h in hands),
        draw_pile=tuple(draw),
        discard_pile=tuple(discard),
        challenge_pile=tuple(challenge),
        resolved_challenges=tuple(resolved),
        pending_challenge=pending,
        active_category=active_category,
        active_rank=active_rank,
        current_seat=current_seat,
        turn_index=turn_index,
        rng=rng.state_tuple(),
        phase=phase,
        winner=winner,
    )


# ---------------------------------------------------------------------------
# Hidden-information projection


def player_view(state: GameState, seat: int, legal: tuple[Move, ...] | None = None) -> PlayerView:
    """Project the state onto one seat: own cards, everyone else as counts.

    ``legal`` lets callers that already computed the move list avoid doing it
    twice; it must equal ``legal_moves(state)`` when provided.
    """
    config = state.config
    if not (0 <= seat < config.player_count):
        raise ConfigError(f"no seat {seat} in a {config.player_count}-player game")
    catalogue = catalogue_for(config.pack, config.ruleset)
    info = catalogue.info

    pending_view = None
    if state.pending_challenge is not None:
        entry = catalogue.challenge_entries[state.pending_challenge]
        if entry.kind is ChallengeKind.TRUE_FALSE:
            pending_view = ChallengeView(state.pending_challenge, entry.kind.value, entry.statement, None, None)
        else:
            pending_view = ChallengeView(
                state.pending_challenge,
                entry.kind.value,
                entry.statement,
                entry.relevant_cards,
                entry.max_defenses,
            )

    if seat == state.current_seat and state.phase is not Phase.FINISHED:
        moves = legal if legal is not None else _legal_moves(state, catalogue)
    else:
        moves = ()

    hands = state.hands
    discard = state.discard_pile
    return PlayerView(
        seat,
        config.player_count,
        catalogue.ruleset_value,
        _PHASE_VALUE[state.phase],
        tuple([info[c] for c in hands[seat]]),
        tuple([(other, len(hands[other])) for other in range(config.player_count) if other != seat]),
        info[discard[-1]] if discard else None,
        state.active_category,
        state.active_rank,
        len(state.draw_pile),
        len(discard),
        len(state.challenge_pile),
        state.current_seat,
        state.turn_index,
        state.winner,
        pending_view,
        moves,
    )
