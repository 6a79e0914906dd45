"""Lossless serialization of game states, views and transcripts.

States serialize to a single JSON document that embeds the content pack, so a
document is self-contained across process restarts. The RNG state rides along
as a hex string. Transcripts are JSON lines: one ``initial_state`` line, one
``event`` line per engine event, and one ``final_state`` line; replaying the
events over the initial state must reproduce the final state exactly.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .cards import Ruleset, catalogue_for
from .content import Violation, pack_from_doc, pack_to_doc
from .engine import GameConfig, GameState, Phase, PlayerView, replay_events
from .errors import ParseError, ReplayMismatch, ValidationError, VersionError
from .moves import Event, event_from_dict, event_to_dict
from .rng import rng_state_from_hex, rng_state_to_hex

STATE_SCHEMA_VERSION = 1


def _state_to_dict_with(state: GameState, pack_field) -> dict:
    config = state.config
    return {
        "schema_version": STATE_SCHEMA_VERSION,
        "config": {
            "ruleset": config.ruleset.value,
            "player_count": config.player_count,
            "hand_size": config.hand_size,
            "penalty_draw": config.penalty_draw,
            "strict_precedence": config.strict_precedence,
            "turn_cap": config.turn_cap,
            "seed": config.seed,
            "pack": pack_field,
        },
        "hands": [list(h) for h in state.hands],
        "draw_pile": list(state.draw_pile),
        "discard_pile": list(state.discard_pile),
        "challenge_pile": list(state.challenge_pile),
        "resolved_challenges": list(state.resolved_challenges),
        "pending_challenge": state.pending_challenge,
        "active_category": state.active_category,
        "active_rank": state.active_rank,
        "current_seat": state.current_seat,
        "turn_index": state.turn_index,
        "rng_state": rng_state_to_hex(state.rng),
        "phase": state.phase.value,
        "winner": state.winner,
    }


def state_to_dict(state: GameState) -> dict:
    return _state_to_dict_with(state, pack_to_doc(state.config.pack))


def serialize_state(state: GameState) -> str:
    return json.dumps(state_to_dict(state), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


_PACK_DIGESTS: dict[int, str] = {}


def _pack_digest(pack) -> str:
    digest = _PACK_DIGESTS.get(id(pack))
    if digest is None:
        doc = json.dumps(pack_to_doc(pack), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
        digest = hashlib.sha256(doc.encode("utf-8")).hexdigest()
        _PACK_DIGESTS[id(pack)] = digest
    return digest


def hash_state(state: GameState) -> str:
    """Full-fidelity state fingerprint; the embedded pack is hashed once."""
    doc = _state_to_dict_with(state, _pack_digest(state.config.pack))
    payload = json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def state_from_dict(doc: dict) -> GameState:
    if not isinstance(doc, dict):
        raise ParseError("state document must be an object")
    version = doc.get("schema_version")
    if version != STATE_SCHEMA_VERSION:
        raise VersionError(f"unsupported state schema_version {version!r} (expected {STATE_SCHEMA_VERSION})")
    try:
        raw_config = doc["config"]
        config = GameConfig(
            ruleset=Ruleset(raw_config["ruleset"]),
            player_count=int(raw_config["player_count"]),
            pack=pack_from_doc(raw_config["pack"]),
            seed=int(raw_config["seed"]),
            hand_size=int(raw_config["hand_size"]),
            penalty_draw=int(raw_config["penalty_draw"]),
            strict_precedence=bool(raw_config["strict_precedence"]),
            turn_cap=int(raw_config["turn_cap"]),
        )
        state = GameState(
            config=config,
            hands=tuple(tuple(h) for h in doc["hands"]),
            draw_pile=tuple(doc["draw_pile"]),
            discard_pile=tuple(doc["discard_pile"]),
            challenge_pile=tuple(doc["challenge_pile"]),
            resolved_challenges=tuple(doc["resolved_challenges"]),
            pending_challenge=doc["pending_challenge"],
            active_category=doc["active_category"],
            active_rank=int(doc["active_rank"]),
            current_seat=int(doc["current_seat"]),
            turn_index=int(doc["turn_index"]),
            rng=rng_state_from_hex(doc["rng_state"]),
            phase=Phase(doc["phase"]),
            winner=doc["winner"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed state document: {exc}") from exc
    _check_state(state)
    return state


def deserialize_state(document: str | bytes) -> GameState:
    if isinstance(document, bytes):
        document = document.decode("utf-8")
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"state is not valid JSON: {exc}") from exc
    return state_from_dict(doc)


def _check_state(state: GameState) -> None:
    """Structural integrity checks for freshly deserialized states."""
    violations: list[Violation] = []
    catalogue = catalogue_for(state.config.pack, state.config.ruleset)

    if len(state.hands) != state.config.player_count:
        violations.append(
            Violation("HAND_COUNT", "/hands", f"{len(state.hands)} hands for {state.config.player_count} seats")
        )
    present: list[str] = []
    for hand in state.hands:
        present.extend(hand)
    present.extend(state.draw_pile)
    present.extend(state.discard_pile)
    present.extend(state.challenge_pile)
    present.extend(state.resolved_challenges)
    if tuple(sorted(present)) != catalogue.expected_ids:
        violations.append(
            Violation(
                "CARD_CONSERVATION",
                "/",
                "the cards across hands and piles are not exactly the built deck",
            )
        )
    if not (0 <= state.current_seat < state.config.player_count):
        violations.append(Violation("BAD_SEAT", "/current_seat", f"no seat {state.current_seat}"))
    awaiting = state.phase in (Phase.AWAITING_CHALLENGE_ANSWER, Phase.AWAITING_SCENARIO_DEFENSE)
    if awaiting and state.pending_challenge is None:
        violations.append(Violation("MISSING_PENDING", "/pending_challenge", "awaiting phase with no pending challenge"))
    if not awaiting and state.pending_challenge is not None:
        violations.append(Violation("STALE_PENDING", "/pending_challenge", "pending challenge outside an awaiting phase"))
    if state.pending_challenge is not None and state.pending_challenge not in state.resolved_challenges:
        violations.append(
            Violation("BAD_PENDING", "/pending_challenge", "pending challenge is not on the resolved pile")
        )
    if violations:
        raise ValidationError(violations)


# ---------------------------------------------------------------------------
# Player views (the server's wire format)


def view_to_dict(view: PlayerView) -> dict:
    from .moves import move_to_dict  # local import to avoid a cycle at module load

    return {
        "seat": view.seat,
        "player_count": view.player_count,
        "ruleset": view.ruleset,
        "phase": view.phase,
        "hand": [
            {
                "id": c.id,
                "kind": c.kind,
                "category": c.category,
                "rank": c.rank,
                "text": c.text,
                "lines": list(c.lines) if c.lines is not None else None,
            }
            for c in view.hand
        ],
        "opponents": [{"seat": s, "hand_size": n} for s, n in view.opponents],
        "discard_top": (
            None
            if view.discard_top is None
            else {
                "id": view.discard_top.id,
                "kind": view.discard_top.kind,
                "category": view.discard_top.category,
                "rank": view.discard_top.rank,
                "text": view.discard_top.text,
                "lines": list(view.discard_top.lines) if view.discard_top.lines is not None else None,
            }
        ),
        "active_category": view.active_category,
        "active_rank": view.active_rank,
        "draw_size": view.draw_size,
        "discard_size": view.discard_size,
        "challenge_size": view.challenge_size,
        "current_seat": view.current_seat,
        "turn_index": view.turn_index,
        "winner": view.winner,
        "pending_challenge": (
            None
            if view.pending_challenge is None
            else {
                "card": view.pending_challenge.card,
                "kind": view.pending_challenge.kind,
                "statement": view.pending_challenge.statement,
                "relevant_cards": (
                    None
                    if view.pending_challenge.relevant_cards is None
                    else [[c, r] for c, r in view.pending_challenge.relevant_cards]
                ),
                "max_defenses": view.pending_challenge.max_defenses,
            }
        ),
        "legal_moves": [move_to_dict(m) for m in view.legal_moves],
    }


def serialize_view(view: PlayerView) -> str:
    return json.dumps(view_to_dict(view), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


# ---------------------------------------------------------------------------
# Transcripts


@dataclass(frozen=True)
class Transcript:
    initial: GameState
    events: tuple[Event, ...]
    final: GameState


def transcript_to_jsonl(transcript: Transcript) -> str:
    lines = [json.dumps({"type": "initial_state", "state": state_to_dict(transcript.initial)},
                        sort_keys=True, separators=(",", ":"), ensure_ascii=False)]
    for event in transcript.events:
        lines.append(json.dumps({"type": "event", "event": event_to_dict(event)},
                                sort_keys=True, separators=(",", ":"), ensure_ascii=False))
    lines.append(json.dumps({"type": "final_state", "state": state_to_dict(transcript.final)},
                            sort_keys=True, separators=(",", ":"), ensure_ascii=False))
    return "\n".join(lines) + "\n"


def transcript_from_jsonl(text: str) -> Transcript:
    initial: GameState | None = None
    final: GameState | None = None
    events: list[Event] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"transcript line {lineno} is not valid JSON: {exc}") from exc
        kind = record.get("type")
        if kind == "initial_state":
            initial = state_from_dict(record["state"])
        elif kind == "final_state":
            final = state_from_dict(record["state"])
        elif kind == "event":
            events.append(event_from_dict(record["event"]))
        else:
            raise ParseError(f"transcript line {lineno} has unknown type {kind!r}")
    if initial is None:
        raise ParseError("transcript has no initial_state line")
    if final is None:
        raise ReplayMismatch("transcript has no final_state line (truncated?)")
    return Transcript(initial=initial, events=tuple(events), final=final)


def verify_transcript(transcript: Transcript) -> GameState:
    """Replay the event log and check it reproduces the recorded final state."""
    replayed = replay_events(transcript.initial, transcript.events)
    if serialize_state(replayed) != serialize_state(transcript.final):
        raise ReplayMismatch("replaying the event log does not reproduce the recorded final state")
    return replayed
