"""Cybersafety shedding card game: content packs, rules engine, simulator, server."""

from .cards import Card, CardInfo, CardKind, Deck, Ruleset, build_deck
from .content import (
    AdviceEntry,
    Category,
    ChallengeEntry,
    ChallengeKind,
    ChangeInfo,
    ContentPack,
    MisconceptionEntry,
    Palette,
    Violation,
    default_pack,
    load_bundled_pack,
    load_pack,
    serialize_pack,
    validate_pack,
)
from .engine import (
    GameConfig,
    GameState,
    Outcome,
    Phase,
    PlayerView,
    apply_move,
    is_terminal,
    legal_moves,
    new_game,
    player_view,
    replay_events,
)
from .moves import Event, Move, event_from_dict, event_to_dict, move_from_dict, move_to_dict
from .policies import Policy, make_policy, policy_greedy, policy_random
from .serialize import (
    Transcript,
    deserialize_state,
    serialize_state,
    transcript_from_jsonl,
    transcript_to_jsonl,
    verify_transcript,
)
from .simulator import SimConfig, SimStats, export_stats, run_simulation

__version__ = "0.1.0"

__all__ = [
    "AdviceEntry",
    "Card",
    "CardInfo",
    "CardKind",
    "Category",
    "ChallengeEntry",
    "ChallengeKind",
    "ChangeInfo",
    "ContentPack",
    "Deck",
    "Event",
    "GameConfig",
    "GameState",
    "MisconceptionEntry",
    "Move",
    "Outcome",
    "Palette",
    "Phase",
    "PlayerView",
    "Policy",
    "Ruleset",
    "SimConfig",
    "SimStats",
    "Transcript",
    "Violation",
    "apply_move",
    "build_deck",
    "default_pack",
    "deserialize_state",
    "event_from_dict",
    "event_to_dict",
    "export_stats",
    "is_terminal",
    "legal_moves",
    "load_bundled_pack",
    "load_pack",
    "make_policy",
    "move_from_dict",
    "move_to_dict",
    "new_game",
    "player_view",
    "policy_greedy",
    "policy_random",
    "replay_events",
    "run_simulation",
    "serialize_pack",
    "serialize_state",
    "transcript_from_jsonl",
    "transcript_to_jsonl",
    "validate_pack",
    "verify_transcript",
]
