"""Bot strategies: pure functions from a player's view to one legal move.

Policies see only a ``PlayerView`` (never the full state), plus the content
pack itself, which is public rulebook data: a bot uses the pack's answer key
the way a human player uses their own knowledge. How often that knowledge is
right is modelled by ``tf_accuracy`` rather than by understanding the text.
"""

from __future__ import annotations

from .cards import Ruleset, catalogue_for
from .content import ContentPack
from .engine import Phase, PlayerView
from .errors import EmptyMoveSet
from .moves import (
    AnswerTrueFalse,
    AscendingRun,
    ChangeCombo,
    CrossMatch,
    Move,
    OpeningRun,
    PlayChange,
    PlayMinus,
    ScenarioDefense,
    move_key,
)
from .rng import Pcg32

POLICY_NAMES = ("random", "greedy")


def policy_random(view: PlayerView, moves: tuple[Move, ...], rng: Pcg32) -> Move:
    """Uniform choice over the legal moves."""
    if not moves:
        raise EmptyMoveSet("no moves to choose from")
    return moves[rng.randbelow(len(moves))]


def _cards_shed(move: Move) -> int:
    if isinstance(move, (OpeningRun, AscendingRun, CrossMatch, ScenarioDefense)):
        return len(move.cards)
    if isinstance(move, ChangeCombo):
        return 1 + len(move.followup)
    if isinstance(move, (PlayChange, PlayMinus)):
        return 1
    return 0


def _rank_shed(move: Move, rank_of: dict[str, int]) -> int:
    if isinstance(move, (OpeningRun, AscendingRun, CrossMatch, ScenarioDefense)):
        return sum(rank_of.get(c, 0) for c in move.cards)
    if isinstance(move, ChangeCombo):
        return sum(rank_of.get(c, 0) for c in move.followup)
    return 0


def policy_greedy(view: PlayerView, moves: tuple[Move, ...], rng: Pcg32) -> Move:
    """Shed as many cards as possible; break ties by total rank shed, then by
    the lexicographically lowest move serialization."""
    if not moves:
        raise EmptyMoveSet("no moves to choose from")
    rank_of = {c.id: c.rank for c in view.hand if c.rank is not None}
    return min(
        moves,
        key=lambda m: (-_cards_shed(m), -_rank_shed(m, rank_of), move_key(m)),
    )


_DECISION_FUNCTIONS = {"random": policy_random, "greedy": policy_greedy}


class Policy:
    """A named strategy bound to a pack, with a True/False accuracy model."""

    def __init__(self, name: str, pack: ContentPack, tf_accuracy: float = 0.5) -> None:
        if name not in _DECISION_FUNCTIONS:
            raise KeyError(f"unknown policy '{name}' (have: {', '.join(POLICY_NAMES)})")
        if not (0.0 <= tf_accuracy <= 1.0):
            raise ValueError("tf_accuracy must be in [0, 1]")
        self.name = name
        self.pack = pack
        self.tf_accuracy = tf_accuracy
        self._decide = _DECISION_FUNCTIONS[name]

    def choose(self, view: PlayerView, moves: tuple[Move, ...], rng: Pcg32) -> Move:
        if not moves:
            raise EmptyMoveSet("no moves to choose from")
        if view.phase == Phase.AWAITING_CHALLENGE_ANSWER.value and view.pending_challenge is not None:
            catalogue = catalogue_for(self.pack, Ruleset(view.ruleset))
            truth = catalogue.challenge_entries[view.pending_challenge.card].answer
            knows = rng.random() < self.tf_accuracy
            return AnswerTrueFalse(truth if knows else not truth)
        return self._decide(view, moves, rng)


def make_policy(name: str, pack: ContentPack, tf_accuracy: float = 0.5) -> Policy:
    return Policy(name, pack, tf_accuracy)
