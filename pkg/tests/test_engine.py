from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from cybercards import (
    GameConfig,
    Phase,
    Ruleset,
    apply_move,
    build_deck,
    is_terminal,
    legal_moves,
    load_bundled_pack,
    new_game,
    player_view,
)
from cybercards.cards import CardKind, catalogue_for
from cybercards.engine import GameState, validate_move
from cybercards.errors import ConfigError, IllegalMove, NotYourTurn, PackRulesetMismatch, WrongPhase
from cybercards.moves import (
    AnswerTrueFalse,
    AscendingRun,
    CardsPlayed,
    CategoryChanged,
    ChallengeResolved,
    ChangeCombo,
    CrossMatch,
    DrawPenalty,
    FlipChallenge,
    GameStalled,
    GameWon,
    OpeningRun,
    PenaltyDrawn,
    PilesReshuffled,
    PlayChange,
    PlayMinus,
    ScenarioDefense,
    TurnPassed,
    move_key,
)
from cybercards.rng import Pcg32
from cybercards.serialize import hash_state

from conftest import RULESETS, config_for, sample_states


def make_state(
    pack,
    ruleset,
    hands,
    active=None,
    phase=Phase.PLAY,
    current_seat=0,
    discard_under=(),
    pending=None,
    resolved=(),
    turn_index=10,
    draw_cards=None,
    seed=0,
    **config_overrides,
):
    """Craft a conservation-consistent state with the given hands.

    ``active=(category, rank)`` with rank > 0 puts that numbered card on top
    of the discard; all unplaced cards go to the draw pile.
    """
    catalogue = catalogue_for(pack, ruleset)
    config = GameConfig(ruleset=ruleset, player_count=len(hands), pack=pack, seed=seed, **config_overrides)
    discard = list(discard_under)
    active_category, active_rank = (None, 0) if active is None else active
    if active_rank > 0:
        discard.append(catalogue.numbered_by_pair[(active_category, active_rank)])
    used = {c for hand in hands for c in hand} | set(discard) | set(resolved)
    challenge = tuple(c for c in reversed(catalogue.deck.challenge) if c not in used and c != pending)
    if pending is not None:
        resolved = tuple(resolved) + (pending,)
        used.add(pending)
    if draw_cards is None:
        draw = tuple(c for c in catalogue.deck.main if c not in used)
    else:
        draw = tuple(draw_cards)
    return GameState(
        config=config,
        hands=tuple(tuple(sorted(h)) for h in hands),
        draw_pile=draw,
        discard_pile=tuple(discard),
        challenge_pile=challenge,
        resolved_challenges=tuple(resolved),
        pending_challenge=pending,
        active_category=active_category,
        active_rank=active_rank,
        current_seat=current_seat,
        turn_index=turn_index,
        rng=Pcg32.seeded(seed).state_tuple(),
        phase=phase,
        winner=None,
    )


def keys(moves) -> set[str]:
    return {move_key(m) for m in moves}


# ---------------------------------------------------------------------------
# Deck construction


def test_v1_deck_composition(pack):
    deck = build_deck(pack, Ruleset.V1_BASE)
    assert len(deck.main) == 48 and not deck.challenge
    catalogue = catalogue_for(pack, Ruleset.V1_BASE)
    kinds = [catalogue.by_id[c].kind for c in deck.main]
    assert kinds.count(CardKind.NUMBERED) == 32
    assert kinds.count(CardKind.MINUS) == 8
    assert kinds.count(CardKind.CHANGE) == 8


def test_v2_deck_split(pack):
    deck = build_deck(pack, Ruleset.V2)
    assert len(deck.main) == 32
    # Expected counts derive from the shipped pack's challenge entries.
    assert len(deck.challenge) == len(pack.challenges) == 24
    catalogue = catalogue_for(pack, Ruleset.V2)
    assert all(catalogue.by_id[c].kind is CardKind.NUMBERED for c in deck.main)
    kinds = [catalogue.by_id[c].kind for c in deck.challenge]
    assert kinds.count(CardKind.TRUE_FALSE) == 16
    assert kinds.count(CardKind.SCENARIO) == 8


def test_five_category_deck():
    pack5 = load_bundled_pack("five-category-example")
    deck = build_deck(pack5, Ruleset.V1_BASE)
    assert len(deck.main) == 40 + 10 + 8 == 58


def test_v2_requires_challenges():
    pack5 = load_bundled_pack("five-category-example")
    with pytest.raises(PackRulesetMismatch):
        build_deck(pack5, Ruleset.V2)


def test_card_id_scheme(pack):
    catalogue = catalogue_for(pack, Ruleset.V1_BASE)
    assert catalogue.by_id["HS-3"].category == "scams"
    assert catalogue.by_id["PM-MINUS-1"].kind is CardKind.MINUS
    assert catalogue.by_id["CHG-4"].kind is CardKind.CHANGE
    assert catalogue.by_id["SP-8"].rank == 8
    v2 = catalogue_for(pack, Ruleset.V2)
    assert v2.by_id["TF-2"].kind is CardKind.TRUE_FALSE
    assert v2.by_id["SC-5"].kind is CardKind.SCENARIO


# ---------------------------------------------------------------------------
# new_game


def test_new_game_deal(pack):
    state = new_game(config_for(pack, Ruleset.V1_BASE, seed=42))
    assert all(len(h) == 7 for h in state.hands)
    assert len(state.draw_pile) == 48 - 28 == 20
    assert state.discard_pile == ()
    assert state.phase is Phase.OPENING
    assert state.current_seat == 0 and state.turn_index == 0


def test_new_game_is_deterministic(pack):
    a = new_game(config_for(pack, Ruleset.V1_BASE, seed=42))
    b = new_game(config_for(pack, Ruleset.V1_BASE, seed=42))
    assert a == b
    c = new_game(config_for(pack, Ruleset.V1_BASE, seed=43))
    assert a != c


def test_new_game_six_players(pack):
    state = new_game(config_for(pack, Ruleset.V1_BASE, seed=1, players=6))
    assert len(state.draw_pile) == 48 - 42 == 6


def test_config_rejections(pack):
    with pytest.raises(ConfigError):
        new_game(config_for(pack, Ruleset.V1_BASE, seed=1, players=7))
    with pytest.raises(ConfigError):
        new_game(config_for(pack, Ruleset.V1_BASE, seed=1, players=1))
    with pytest.raises(ConfigError):
        new_game(config_for(pack, Ruleset.V2, seed=1, players=5))  # 35 >= 32
    with pytest.raises(ConfigError):
        new_game(config_for(pack, Ruleset.V1_BASE, seed=-1))
    with pytest.raises(ConfigError):
        new_game(config_for(pack, Ruleset.V1_BASE, seed=1, hand_size=0))


# ---------------------------------------------------------------------------
# legal_moves: worked examples


def test_opening_moves(pack):
    state = make_state(
        pack,
        Ruleset.V1_BASE,
        hands=[["HS-1", "HS-3", "PM-2", "CHG-1"], ["SP-1"]],
        phase=Phase.OPENING,
        turn_index=0,
    )
    found = keys(legal_moves(state))
    for expected in (
        OpeningRun(("HS-1",)),
        OpeningRun(("HS-3",)),
        OpeningRun(("HS-1", "HS-3")),
        OpeningRun(("PM-2",)),
    ):
        assert move_key(expected) in found
    assert not any('"play_change"' in k or '"play_minus"' in k or '"draw_penalty"' in k for k in found)
    assert len(found) == 4


def test_opening_without_numbered_cards_draws(pack):
    state = make_state(
        pack,
        Ruleset.V1_BASE,
        hands=[["CHG-1", "HS-MINUS-1"], ["SP-1"]],
        phase=Phase.OPENING,
        turn_index=0,
    )
    assert legal_moves(state) == (DrawPenalty(),)


def test_play_class1_suppresses_lower_classes(pack):
    state = make_state(
        pack,
        Ruleset.V1_BASE,
        hands=[["HS-5", "SP-3", "HS-MINUS-1", "CHG-2"], ["PM-1"]],
        active=("scams", 3),
    )
    found = keys(legal_moves(state))
    assert found == {move_key(AscendingRun(("HS-5",))), move_key(CrossMatch(("SP-3",)))}


def test_play_nothing_available_draws(pack):
    state = make_state(
        pack,
        Ruleset.V1_BASE,
        hands=[["PM-1", "HS-MINUS-1"], ["SP-1"]],
        active=("privacy", 8),
    )
    assert legal_moves(state) == (DrawPenalty(),)


def test_change_offered_when_no_numbered_play(pack):
    state = make_state(
        pack,
        Ruleset.V1_BASE,
        hands=[["PM-1", "CHG-1", "HS-MINUS-1"], ["SP-1"]],
        active=("scams", 8),
    )
    found = keys(legal_moves(state))
    # change to each non-active category; minus suppressed by precedence
    assert found == {
        move_key(PlayChange("CHG-1", "passwords")),
        move_key(PlayChange("CHG-1", "cyber-attacks")),
        move_key(PlayChange("CHG-1", "privacy")),
    }


def test_minus_offered_as_last_resort(pack):
    state = make_state(
        pack,
        Ruleset.V1_BASE,
        hands=[["PM-1", "HS-MINUS-1"], ["SP-1"]],
        active=("scams", 8),
    )
    assert legal_moves(state) == (PlayMinus("HS-MINUS-1"),)


def test_change_combo_only_in_revised(pack):
    hands = [["PM-2", "PM-5", "CHG-6", "HS-MINUS-1"], ["SP-1"]]
    base = make_state(pack, Ruleset.V1_BASE, hands=hands, active=("scams", 8))
    revised = make_state(pack, Ruleset.V1_REVISED, hands=hands, active=("scams", 8))
    base_keys = keys(legal_moves(base))
    revised_keys = keys(legal_moves(revised))
    combo = ChangeCombo("CHG-6", "passwords", ("PM-2", "PM-5"))
    assert move_key(combo) not in base_keys
    assert move_key(combo) in revised_keys
    # plain changes still offered in revised
    assert move_key(PlayChange("CHG-6", "passwords")) in revised_keys
    # CHG-6 links passwords only, so no privacy combo
    assert not any('"change_combo"' in k and '"privacy"' in k for k in revised_keys)


def test_cross_match_orderings_are_distinct_moves(pack):
    state = make_state(
        pack,
        Ruleset.V1_BASE,
        hands=[["PM-3", "SP-3"], ["HS-1"]],
        active=("scams", 3),
    )
    found = keys(legal_moves(state))
    assert move_key(CrossMatch(("PM-3", "SP-3"))) in found
    assert move_key(CrossMatch(("SP-3", "PM-3"))) in found
    assert move_key(CrossMatch(("PM-3",))) in found
    assert move_key(CrossMatch(("SP-3",))) in found


def test_non_strict_offers_all_classes(pack):
    state = make_state(
        pack,
        Ruleset.V1_BASE,
        hands=[["HS-5", "CHG-1", "HS-MINUS-1"], ["SP-1"]],
        active=("scams", 3),
        strict_precedence=False,
    )
    found = keys(legal_moves(state))
    assert move_key(AscendingRun(("HS-5",))) in found
    assert move_key(PlayChange("CHG-1", "privacy")) in found
    assert move_key(PlayMinus("HS-MINUS-1")) in found
    assert move_key(DrawPenalty()) in found


def test_v2_flip_replaces_minus(pack):
    state = make_state(
        pack,
        Ruleset.V2,
        hands=[["PM-1"], ["SP-1"]],
        active=("scams", 8),
    )
    assert legal_moves(state) == (FlipChallenge(),)


def test_v2_draw_when_challenges_exhausted(pack):
    state = make_state(
        pack,
        Ruleset.V2,
        hands=[["PM-1"], ["SP-1"]],
        active=("scams", 8),
    )
    state = state._replace(challenge_pile=())
    assert legal_moves(state) == (DrawPenalty(),)


def test_finished_has_no_moves(pack):
    state = make_state(pack, Ruleset.V1_BASE, hands=[["HS-1"], ["SP-1"]], active=("scams", 3))
    state = state._replace(phase=Phase.FINISHED, winner=1)
    assert legal_moves(state) == ()


# ---------------------------------------------------------------------------
# apply_move semantics


def test_ascending_run_updates_active(pack):
    state = make_state(pack, Ruleset.V1_BASE, hands=[["HS-5"], ["SP-1"]], active=("scams", 3))
    new, events = apply_move(state, 0, AscendingRun(("HS-5",)))
    assert new.discard_pile[-1] == "HS-5"
    assert (new.active_category, new.active_rank) == ("scams", 5)
    assert events[0] == CardsPlayed(0, ("HS-5",))
    assert CategoryChanged("scams", 5) in events
    assert new.phase is Phase.FINISHED and new.winner == 0  # hand emptied


def test_minus_nets_plus_one_card(pack):
    state = make_state(
        pack, Ruleset.V1_BASE, hands=[["HS-MINUS-1", "PM-1"], ["SP-1"]], active=("scams", 5)
    )
    new, events = apply_move(state, 0, PlayMinus("HS-MINUS-1"))
    assert len(new.hands[0]) == len(state.hands[0]) - 1 + 2
    assert new.discard_pile[-1] == "HS-MINUS-1"
    assert (new.active_category, new.active_rank) == ("scams", 0)
    drawn = [e for e in events if isinstance(e, PenaltyDrawn)]
    assert sum(e.count for e in drawn) == 2


def test_change_resets_rank(pack):
    state = make_state(pack, Ruleset.V1_BASE, hands=[["CHG-1", "PM-1"], ["SP-1"]], active=("scams", 8))
    new, events = apply_move(state, 0, PlayChange("CHG-1", "privacy"))
    assert (new.active_category, new.active_rank) == ("privacy", 0)
    assert new.discard_pile[-1] == "CHG-1"
    # after the change, any privacy rank is playable by the next seat
    follow = new._replace(current_seat=1, hands=(new.hands[0], ("SP-1",)))
    assert keys(legal_moves(follow)) == {move_key(AscendingRun(("SP-1",)))}


def test_change_must_switch_category(pack):
    state = make_state(pack, Ruleset.V1_BASE, hands=[["CHG-1", "PM-1"], ["SP-1"]], active=("scams", 8))
    with pytest.raises(IllegalMove) as exc:
        apply_move(state, 0, PlayChange("CHG-1", "scams"))
    assert exc.value.rule_code == "SAME_CATEGORY"


def test_change_combo_applies_followup(pack):
    state = make_state(
        pack, Ruleset.V1_REVISED, hands=[["CHG-6", "PM-2", "PM-5", "PM-1"], ["SP-1"]], active=("scams", 8)
    )
    new, events = apply_move(state, 0, ChangeCombo("CHG-6", "passwords", ("PM-2", "PM-5")))
    assert new.discard_pile[-3:] == ("CHG-6", "PM-2", "PM-5")
    assert (new.active_category, new.active_rank) == ("passwords", 5)


def test_change_combo_requires_link(pack):
    state = make_state(
        pack, Ruleset.V1_REVISED, hands=[["CHG-6", "SP-2"], ["SP-1"]], active=("scams", 8)
    )
    with pytest.raises(IllegalMove) as exc:
        apply_move(state, 0, ChangeCombo("CHG-6", "privacy", ("SP-2",)))
    assert exc.value.rule_code == "CATEGORY_NOT_LINKED"


def test_cross_match_last_card_sets_category(pack):
    state = make_state(pack, Ruleset.V1_BASE, hands=[["PM-3", "SP-3"], ["HS-1"]], active=("scams", 3))
    new, _ = apply_move(state, 0, CrossMatch(("SP-3", "PM-3")))
    assert (new.active_category, new.active_rank) == ("passwords", 3)
    assert new.discard_pile[-1] == "PM-3"


def test_turn_rotation_is_clockwise(pack):
    state = make_state(pack, Ruleset.V1_BASE, hands=[["HS-5", "PM-1"], ["SP-1"], ["SP-2"]], active=("scams", 3))
    new, events = apply_move(state, 0, AscendingRun(("HS-5",)))
    assert new.current_seat == 1
    assert new.turn_index == state.turn_index + 1
    assert TurnPassed(1, state.turn_index + 1) in events


def test_stall_at_turn_cap(pack):
    state = make_state(
        pack, Ruleset.V1_BASE, hands=[["HS-5", "PM-1"], ["SP-1"]], active=("scams", 3), turn_index=499
    )
    new, events = apply_move(state, 0, AscendingRun(("HS-5",)))
    assert new.phase is Phase.FINISHED and new.winner is None
    assert GameStalled() in events
    assert is_terminal(new).kind == "stalled"


def test_win_beats_stall_on_same_turn(pack):
    state = make_state(pack, Ruleset.V1_BASE, hands=[["HS-5"], ["SP-1"]], active=("scams", 3), turn_index=499)
    new, events = apply_move(state, 0, AscendingRun(("HS-5",)))
    assert new.winner == 0
    assert GameWon(0) in events and GameStalled() not in events


def test_reshuffle_on_exhausted_draw_pile(pack):
    state = make_state(
        pack,
        Ruleset.V1_BASE,
        hands=[["PM-1", "HS-MINUS-1"], ["SP-1"]],
        active=("scams", 8),
        discard_under=("HS-1", "HS-2", "HS-3"),
        draw_cards=(),
    )
    new, events = apply_move(state, 0, PlayMinus("HS-MINUS-1"))
    # the discard under the new top (HS-MINUS-1) was reshuffled to draw from
    assert any(isinstance(e, PilesReshuffled) for e in events)
    assert new.discard_pile[-1] == "HS-MINUS-1"
    drawn = sum(e.count for e in events if isinstance(e, PenaltyDrawn))
    assert drawn == 2
    # all 7 crafted cards are still in play: 2 left in draw, minus on discard,
    # hands hold 3+1 after the penalty draw
    assert len(new.draw_pile) == 2
    assert new.discard_pile == ("HS-MINUS-1",)
    assert len(new.hands[0]) == 3 and len(new.hands[1]) == 1


def test_draw_from_nothing_draws_zero(pack):
    state = make_state(
        pack,
        Ruleset.V1_BASE,
        hands=[["PM-1"], ["SP-1"]],
        active=("scams", 8),
        draw_cards=(),
    )
    new, events = apply_move(state, 0, DrawPenalty())
    assert [e for e in events if isinstance(e, PenaltyDrawn)] == [PenaltyDrawn(0, 0, ())]
    assert new.hands[0] == state.hands[0]
    assert new.current_seat == 1


def test_flip_challenge_keeps_seat(pack):
    state = make_state(pack, Ruleset.V2, hands=[["PM-1"], ["SP-1"]], active=("scams", 8))
    new, events = apply_move(state, 0, FlipChallenge())
    assert new.current_seat == 0
    assert new.turn_index == state.turn_index
    assert new.pending_challenge == new.resolved_challenges[-1]
    assert new.phase in (Phase.AWAITING_CHALLENGE_ANSWER, Phase.AWAITING_SCENARIO_DEFENSE)
    assert len(new.challenge_pile) == len(state.challenge_pile) - 1


def tf_state(pack, card_id, hands=None):
    state = make_state(
        pack,
        Ruleset.V2,
        hands=hands or [["PM-1", "SP-1"], ["SP-2"]],
        active=("scams", 8),
        pending=card_id,
        phase=Phase.AWAITING_CHALLENGE_ANSWER,
    )
    return state


def test_wrong_true_false_answer_draws_two(pack):
    catalogue = catalogue_for(pack, Ruleset.V2)
    card_id = next(
        cid
        for cid, entry in catalogue.challenge_entries.items()
        if entry.statement == "Anti-virus software is enough to keep you protected"
    )
    state = tf_state(pack, card_id)
    assert legal_moves(state) == (AnswerTrueFalse(False), AnswerTrueFalse(True))
    new, events = apply_move(state, 0, AnswerTrueFalse(True))  # statement is false
    assert ChallengeResolved(False) in events
    assert any(isinstance(e, PenaltyDrawn) and e.count == 2 for e in events)
    assert new.phase is Phase.PLAY and new.pending_challenge is None
    assert new.current_seat == 1

    correct, events2 = apply_move(state, 0, AnswerTrueFalse(False))
    assert ChallengeResolved(True) in events2
    assert not any(isinstance(e, PenaltyDrawn) for e in events2)
    assert len(correct.hands[0]) == len(state.hands[0])


def scenario_state(pack, hands):
    catalogue = catalogue_for(pack, Ruleset.V2)
    card_id = next(
        cid
        for cid, entry in catalogue.challenge_entries.items()
        if entry.statement.startswith("A text message claims to be from your bank")
    )
    return make_state(
        pack,
        Ruleset.V2,
        hands=hands,
        active=("privacy", 6),
        pending=card_id,
        phase=Phase.AWAITING_SCENARIO_DEFENSE,
    ), card_id


def test_scenario_defense_moves_and_effects(pack):
    # relevant: (scams,1), (scams,4), (scams,7), (scams,8)
    state, _ = scenario_state(pack, [["HS-1", "HS-4", "HS-7", "HS-8", "PM-1"], ["SP-1"]])
    found = keys(legal_moves(state))
    assert move_key(ScenarioDefense(())) in found  # defending with nothing is legal
    assert move_key(ScenarioDefense(("HS-1", "HS-4", "HS-7"))) in found
    assert move_key(ScenarioDefense(("HS-1", "HS-4", "HS-7", "HS-8"))) not in found  # max 3
    assert not any('"PM-1"' in k for k in found)
    # sizes 0..3 of 4 eligible cards
    assert len(found) == 1 + 4 + 6 + 4

    new, events = apply_move(state, 0, ScenarioDefense(("HS-1", "HS-7")))
    assert new.discard_pile[-2:] == ("HS-1", "HS-7")
    assert (new.active_category, new.active_rank) == ("privacy", 0)  # rank resets, category kept
    assert ChallengeResolved(True) in events
    assert new.phase is Phase.PLAY and new.current_seat == 1


def test_scenario_defense_rejects_irrelevant_card(pack):
    state, _ = scenario_state(pack, [["HS-1", "PM-1"], ["SP-1"]])
    with pytest.raises(IllegalMove) as exc:
        apply_move(state, 0, ScenarioDefense(("PM-1",)))
    assert exc.value.rule_code == "IRRELEVANT_DEFENSE"


def test_error_paths(pack):
    state = make_state(pack, Ruleset.V1_BASE, hands=[["HS-5", "HS-MINUS-1"], ["SP-1"]], active=("scams", 3))
    with pytest.raises(NotYourTurn):
        apply_move(state, 1, AscendingRun(("SP-1",)))
    with pytest.raises(WrongPhase):
        apply_move(state, 0, OpeningRun(("HS-5",)))
    with pytest.raises(IllegalMove) as exc:
        apply_move(state, 0, AscendingRun(("SP-1",)))
    assert exc.value.rule_code == "NOT_IN_HAND"
    with pytest.raises(IllegalMove) as exc:
        apply_move(state, 0, PlayMinus("HS-MINUS-1"))
    assert exc.value.rule_code == "PRECEDENCE"
    with pytest.raises(IllegalMove) as exc:
        apply_move(state, 0, AscendingRun(("HS-5", "HS-5")))
    assert exc.value.rule_code == "DUPLICATE_CARD"
    finished = state._replace(phase=Phase.FINISHED, winner=0)
    with pytest.raises(WrongPhase):
        apply_move(finished, 0, AscendingRun(("HS-5",)))


def test_rank_not_higher_rejected(pack):
    state = make_state(pack, Ruleset.V1_BASE, hands=[["HS-2", "PM-1"], ["SP-1"]], active=("scams", 3))
    with pytest.raises(IllegalMove) as exc:
        apply_move(state, 0, AscendingRun(("HS-2",)))
    assert exc.value.rule_code == "RANK_NOT_HIGHER"


def test_cross_match_needs_active_rank(pack):
    state = make_state(pack, Ruleset.V1_BASE, hands=[["HS-5", "PM-1"], ["SP-1"]], active=("scams", 8))
    state = state._replace(active_rank=0)
    with pytest.raises(IllegalMove) as exc:
        apply_move(state, 0, CrossMatch(("HS-5",)))
    assert exc.value.rule_code == "NO_ACTIVE_RANK"


def test_v2_rejects_v1_moves(pack):
    state = make_state(pack, Ruleset.V2, hands=[["HS-5", "PM-1"], ["SP-1"]], active=("scams", 3))
    with pytest.raises(IllegalMove) as exc:
        apply_move(state, 0, PlayChange("CHG-1", "privacy"))
    assert exc.value.rule_code in ("RULESET", "NOT_IN_HAND")


# ---------------------------------------------------------------------------
# is_terminal


def test_is_terminal_definitional(pack):
    state = make_state(pack, Ruleset.V1_BASE, hands=[["HS-1"], [], ["SP-1"]], active=("scams", 3))
    outcome = is_terminal(state)
    assert outcome.kind == "won" and outcome.seat == 1
    fresh = new_game(config_for(pack, Ruleset.V1_BASE, seed=5))
    assert is_terminal(fresh) is None
    capped = make_state(pack, Ruleset.V1_BASE, hands=[["HS-1"], ["SP-1"]], active=("scams", 3), turn_index=500)
    assert is_terminal(capped).kind == "stalled"


# ---------------------------------------------------------------------------
# player_view


def test_player_view_projection(pack):
    state = new_game(config_for(pack, Ruleset.V1_BASE, seed=42))
    view = player_view(state, 1)
    assert view.seat == 1
    assert dict(view.opponents) == {0: 7, 2: 7, 3: 7}
    assert view.legal_moves == ()  # seat 0 to move
    assert len(view.hand) == 7
    mover = player_view(state, 0)
    assert mover.legal_moves == legal_moves(state)
    assert all(c.text is not None for c in mover.hand if c.kind == "Numbered")


def test_player_view_finished(pack):
    state = make_state(pack, Ruleset.V1_BASE, hands=[["HS-1"], ["SP-1"]], active=("scams", 3))
    state = state._replace(phase=Phase.FINISHED, winner=1)
    view = player_view(state, 0)
    assert view.phase == "Finished" and view.winner == 1 and view.legal_moves == ()


def test_player_view_bad_seat(pack):
    state = new_game(config_for(pack, Ruleset.V1_BASE, seed=42))
    with pytest.raises(ConfigError):
        player_view(state, 9)


# ---------------------------------------------------------------------------
# Properties over random playouts


@given(st.integers(min_value=0, max_value=40))
@settings(max_examples=12, deadline=None)
def test_soundness_every_legal_move_applies(seed):
    pack = load_bundled_pack("default")
    ruleset = RULESETS[seed % 3]
    for state, moves in sample_states(pack, ruleset, [seed], per_seed_cap=8):
        for move in moves:
            validate_move(state, state.current_seat, move)
            apply_move(state, state.current_seat, move)


@given(st.integers(min_value=0, max_value=40))
@settings(max_examples=9, deadline=None)
def test_purity_input_state_untouched(seed):
    pack = load_bundled_pack("default")
    ruleset = RULESETS[seed % 3]
    for state, moves in sample_states(pack, ruleset, [seed], per_seed_cap=6):
        if not moves:
            continue
        before = hash_state(state)
        apply_move(state, state.current_seat, moves[0])
        assert hash_state(state) == before


def test_active_rank_matches_discard_top(pack):
    """Whenever a rank constraint is active, the top of the discard pile is
    the numbered card that set it."""
    catalogue = {}
    for ruleset in RULESETS:
        from cybercards.cards import catalogue_for

        catalogue[ruleset] = catalogue_for(pack, ruleset)
        for state, _ in sample_states(pack, ruleset, seeds=[21, 22]):
            if state.active_rank > 0:
                top = catalogue[ruleset].by_id[state.discard_pile[-1]]
                assert top.kind is CardKind.NUMBERED
                assert top.category == state.active_category
                assert top.rank == state.active_rank


def test_monotone_rank_progress_within_chain(pack):
    """Between consecutive numbered plays with no intervening reset, the
    active rank strictly increases."""
    from cybercards.policies import make_policy
    from cybercards.simulator import policy_seed_for

    for ruleset in RULESETS:
        config = config_for(pack, ruleset, seed=11)
        policies = [make_policy("random", pack) for _ in range(4)]
        rng = Pcg32.seeded(policy_seed_for(11))
        state = new_game(config)
        while state.phase is not Phase.FINISHED:
            moves = legal_moves(state)
            move = policies[state.current_seat].choose(
                player_view(state, state.current_seat, legal=moves), moves, rng
            )
            prev_rank, prev_cat = state.active_rank, state.active_category
            state, _ = apply_move(state, state.current_seat, move, validate=False)
            if isinstance(move, AscendingRun):
                assert state.active_category == prev_cat
                assert state.active_rank > prev_rank
