"""Independent brute-force legal-move oracle.

Rebuilds card metadata straight from the content pack (including the card-id
scheme) and enumerates candidate moves with itertools, testing each candidate
against rule predicates transcribed from the game's instructions:

* play higher-numbered cards of the active category, in ascending order;
* or play cards of the active number from different categories;
* a change card switches to a declared different category (v1); in the
  revised rules it may carry an ascending follow-up run in a linked category;
* a minus card of the active category is a last resort before drawing (v1);
* in v2 the last resort before drawing is flipping the challenge pile, and a
  flipped scenario accepts up to ``max_defenses`` relevant cards (or none);
* each option is only available when everything above it is impossible
  (unless strict precedence is disabled).

Moves are compared as canonical JSON strings, never as engine objects.
"""

from __future__ import annotations

import json
import re
from itertools import combinations, permutations


def _initials(display_name: str) -> str:
    return "".join(w[0].upper() for w in re.split(r"[\s-]+", display_name) if w)


class OracleCards:
    """Card metadata derived from the pack document alone."""

    def __init__(self, pack, ruleset: str) -> None:
        self.meta: dict[str, tuple[str, str | None, int | None]] = {}  # id -> (kind, category, rank)
        self.categories = [c.id for c in pack.categories]
        self.linked: dict[str, list[str]] = {}
        self.challenge: dict[str, dict] = {}
        prefix = {c.id: _initials(c.display_name) for c in pack.categories}
        advice_pairs = set()
        for entry in pack.advice:
            card_id = f"{prefix[entry.category]}-{entry.rank}"
            self.meta[card_id] = ("numbered", entry.category, entry.rank)
            advice_pairs.add((entry.category, entry.rank))
        if ruleset in ("v1-base", "v1-revised"):
            per_category: dict[str, int] = {}
            for entry in pack.misconceptions:
                per_category[entry.category] = per_category.get(entry.category, 0) + 1
                card_id = f"{prefix[entry.category]}-MINUS-{per_category[entry.category]}"
                self.meta[card_id] = ("minus", entry.category, None)
            for change in pack.change_cards:
                card_id = f"CHG-{change.ordinal}"
                self.meta[card_id] = ("change", None, None)
                self.linked[card_id] = list(change.linked_categories)
        else:
            tf = sc = 0
            for entry in pack.challenges:
                if entry.kind.value == "TrueFalse":
                    tf += 1
                    card_id = f"TF-{tf}"
                else:
                    sc += 1
                    card_id = f"SC-{sc}"
                self.meta[card_id] = ("challenge", None, None)
                self.challenge[card_id] = {
                    "kind": entry.kind.value,
                    "relevant": set(entry.relevant_cards),
                    "max_defenses": entry.max_defenses,
                }


def _key(move: dict) -> str:
    return json.dumps(move, sort_keys=True, separators=(",", ":"))


def oracle_legal_moves(state) -> set[str]:
    """Every legal move for the current seat, as canonical JSON strings."""
    pack = state.config.pack
    ruleset = state.config.ruleset.value
    cards = OracleCards(pack, ruleset)
    hand = sorted(state.hands[state.current_seat])
    phase = state.phase.value
    strict = state.config.strict_precedence
    moves: set[str] = set()

    if phase == "Finished":
        return moves

    if phase == "AwaitingChallengeAnswer":
        return {_key({"type": "answer_true_false", "answer": False}),
                _key({"type": "answer_true_false", "answer": True})}

    if phase == "AwaitingScenarioDefense":
        info = cards.challenge[state.pending_challenge]
        eligible = [
            c for c in hand
            if cards.meta[c][0] == "numbered" and (cards.meta[c][1], cards.meta[c][2]) in info["relevant"]
        ]
        for size in range(0, info["max_defenses"] + 1):
            for combo in combinations(eligible, size):
                moves.add(_key({"type": "scenario_defense", "cards": list(combo)}))
        return moves

    def ascending_runs(category: str, above: int) -> list[list[str]]:
        pool = [c for c in hand if cards.meta[c][0] == "numbered" and cards.meta[c][1] == category
                and cards.meta[c][2] > above]
        runs = []
        for size in range(1, len(pool) + 1):
            for combo in combinations(pool, size):
                ordered = sorted(combo, key=lambda c: cards.meta[c][2])
                ranks = [cards.meta[c][2] for c in ordered]
                if all(ranks[i] < ranks[i + 1] for i in range(len(ranks) - 1)):
                    runs.append(ordered)
        return runs

    if phase == "Opening":
        for category in cards.categories:
            for run in ascending_runs(category, 0):
                moves.add(_key({"type": "opening_run", "cards": run}))
        if not moves or not strict:
            moves.add(_key({"type": "draw_penalty"}))
        return moves

    # phase == "Play"
    class1: set[str] = set()
    for run in ascending_runs(state.active_category, state.active_rank):
        class1.add(_key({"type": "ascending_run", "cards": run}))
    if state.active_rank > 0:
        matching = [c for c in hand if cards.meta[c][0] == "numbered" and cards.meta[c][2] == state.active_rank]
        for size in range(1, len(matching) + 1):
            for ordered in permutations(matching, size):
                cats = [cards.meta[c][1] for c in ordered]
                if len(set(cats)) == len(cats):
                    class1.add(_key({"type": "cross_match", "cards": list(ordered)}))

    class2: set[str] = set()
    if ruleset in ("v1-base", "v1-revised"):
        changes = [c for c in hand if cards.meta[c][0] == "change"]
        for card in changes:
            for declared in cards.categories:
                if declared == state.active_category:
                    continue
                class2.add(_key({"type": "play_change", "card": card, "category": declared}))
            if ruleset == "v1-revised":
                for declared in cards.linked[card]:
                    if declared == state.active_category:
                        continue
                    for run in ascending_runs(declared, 0):
                        class2.add(_key({
                            "type": "change_combo", "card": card, "category": declared, "followup": run,
                        }))

    class3: set[str] = set()
    if ruleset in ("v1-base", "v1-revised"):
        for card in hand:
            if cards.meta[card][0] == "minus" and cards.meta[card][1] == state.active_category:
                class3.add(_key({"type": "play_minus", "card": card}))
    elif state.challenge_pile:
        class3.add(_key({"type": "flip_challenge"}))

    draw = {_key({"type": "draw_penalty"})}

    if strict:
        for rung in (class1, class2, class3, draw):
            if rung:
                return rung
        return draw
    return class1 | class2 | class3 | draw
