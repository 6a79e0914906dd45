"""Turn-based game service: sessions, per-seat views, moves, event streams.

HTTP+JSON API under ``/v1`` (see README for the endpoint reference). Humans
authenticate with bearer join tokens handed out at session creation; bot
seats are played server-side immediately after each accepted human move.

Persistence is a single SQLite file: an append-only per-session event log
plus a state snapshot updated on every committed move, so a restarted server
resumes every session exactly where it stopped (including bot RNG streams).
Within a session, moves apply under a per-session lock; losers of a race get
NotYourTurn/WrongPhase rather than a corrupted state.
"""

from __future__ import annotations

import asyncio
import json
import secrets
import sqlite3
import threading
import time
from dataclasses import dataclass

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel, Field

from .cards import Ruleset, catalogue_for
from .content import ContentPack, load_bundled_pack, load_pack
from .engine import (
    DEFAULT_HAND_SIZE,
    DEFAULT_PENALTY_DRAW,
    DEFAULT_TURN_CAP,
    GameConfig,
    GameState,
    Phase,
    apply_move,
    legal_moves,
    new_game,
    player_view,
)
from .errors import (
    ConfigError,
    CybercardsError,
    IllegalMove,
    NotYourTurn,
    PackRulesetMismatch,
    ParseError,
    WrongPhase,
)
from .moves import CardsPlayed, ChallengeFlipped, Event, event_to_dict, move_from_dict
from .policies import POLICY_NAMES, Policy, make_policy
from .rng import POLICY_STREAM_SALT, Pcg32, mix_seed
from .serialize import deserialize_state, serialize_state, view_to_dict


class NotFound(CybercardsError):
    pass


class Unauthorized(CybercardsError):
    pass


# ---------------------------------------------------------------------------
# Storage

_SCHEMA = """
CREATE TABLE IF NOT EXISTS sessions (
    session_id TEXT PRIMARY KEY,
    created REAL NOT NULL,
    updated REAL NOT NULL,
    pack_id TEXT NOT NULL,
    seats_json TEXT NOT NULL,
    bot_rng TEXT NOT NULL,
    state_json TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS events (
    session_id TEXT NOT NULL,
    idx INTEGER NOT NULL,
    payload TEXT NOT NULL,
    PRIMARY KEY (session_id, idx)
);
"""


class SessionStore:
    """SQLite-backed persistence; one file holds every session."""

    def __init__(self, path: str) -> None:
        self.path = path
        self._conn = sqlite3.connect(path, check_same_thread=False)
        self._conn.executescript(_SCHEMA)
        self._conn.commit()
        self._lock = threading.Lock()

    def close(self) -> None:
        self._conn.close()

    def create(self, session_id: str, pack_id: str, seats: list[dict], bot_rng: str, state_json: str) -> None:
        now = time.time()
        with self._lock:
            self._conn.execute(
                "INSERT INTO sessions (session_id, created, updated, pack_id, seats_json, bot_rng, state_json)"
                " VALUES (?, ?, ?, ?, ?, ?, ?)",
                (session_id, now, now, pack_id, json.dumps(seats), bot_rng, state_json),
            )
            self._conn.commit()

    def snapshot(self, session_id: str, bot_rng: str, state_json: str, new_events: list[str]) -> None:
        with self._lock:
            row = self._conn.execute(
                "SELECT COALESCE(MAX(idx), -1) FROM events WHERE session_id = ?", (session_id,)
            ).fetchone()
            next_idx = row[0] + 1
            self._conn.executemany(
                "INSERT INTO events (session_id, idx, payload) VALUES (?, ?, ?)",
                [(session_id, next_idx + i, payload) for i, payload in enumerate(new_events)],
            )
            self._conn.execute(
                "UPDATE sessions SET updated = ?, bot_rng = ?, state_json = ? WHERE session_id = ?",
                (time.time(), bot_rng, state_json, session_id),
            )
            self._conn.commit()

    def load_all(self) -> list[tuple[str, str, list[dict], str, str]]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT session_id, pack_id, seats_json, bot_rng, state_json FROM sessions"
            ).fetchall()
        return [(sid, pack_id, json.loads(seats), bot_rng, state) for sid, pack_id, seats, bot_rng, state in rows]

    def load_events(self, session_id: str) -> list[str]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT payload FROM events WHERE session_id = ? ORDER BY idx", (session_id,)
            ).fetchall()
        return [payload for (payload,) in rows]


# ---------------------------------------------------------------------------
# Sessions


@dataclass
class Seat:
    kind: str  # "human" | "bot"
    token: str | None = None  # humans
    policy: str | None = None  # bots

    def to_dict(self) -> dict:
        return {"kind": self.kind, "token": self.token, "policy": self.policy}

    @classmethod
    def from_dict(cls, data: dict) -> "Seat":
        return cls(kind=data["kind"], token=data.get("token"), policy=data.get("policy"))


class Session:
    def __init__(self, session_id: str, pack_id: str, state: GameState, seats: list[Seat], bot_rng: Pcg32) -> None:
        self.session_id = session_id
        self.pack_id = pack_id
        self.state = state
        self.seats = seats
        self.bot_rng = bot_rng
        self.lock = threading.Lock()
        self.events: list[dict] = []  # full-fidelity event dicts, index = cursor
        self.policies: dict[int, Policy] = {}
        for seat_no, seat in enumerate(seats):
            if seat.kind == "bot":
                self.policies[seat_no] = make_policy(seat.policy, state.config.pack)

    def seat_for_token(self, token: str) -> int:
        for seat_no, seat in enumerate(self.seats):
            if seat.kind == "human" and seat.token == token:
                return seat_no
        raise Unauthorized("unknown token for this session")


def _session_started_event(state: GameState) -> dict:
    return {
        "type": "session_started",
        "hand_sizes": [len(h) for h in state.hands],
        "draw_size": len(state.draw_pile),
        "challenge_size": len(state.challenge_pile),
        "ruleset": state.config.ruleset.value,
        "player_count": state.config.player_count,
    }


def filter_event_for_seat(event: dict, seat: int) -> dict:
    """Strip hidden information from an event before it reaches ``seat``.

    Card identities drawn into another seat's hand are hidden; everything on
    the table (plays, flips, reshuffle sizes) is public.
    """
    if event.get("type") == "penalty_drawn" and event.get("seat") != seat:
        return {k: v for k, v in event.items() if k != "cards"}
    return event


class GameService:
    """Session registry + move pipeline shared by the HTTP layer and tests."""

    def __init__(self, store: SessionStore, packs: dict[str, ContentPack] | None = None, bot_delay: float = 0.0) -> None:
        self.store = store
        self.packs = packs or {"default": load_bundled_pack("default")}
        self.bot_delay = bot_delay
        self.sessions: dict[str, Session] = {}
        self._load_existing()

    def _load_existing(self) -> None:
        for session_id, pack_id, seats_raw, bot_rng_hex, state_json in self.store.load_all():
            state = deserialize_state(state_json)
            seats = [Seat.from_dict(s) for s in seats_raw]
            bot_rng = Pcg32.from_tuple(
                (int(bot_rng_hex[:16], 16), int(bot_rng_hex[16:], 16))
            )
            session = Session(session_id, pack_id, state, seats, bot_rng)
            session.events = [json.loads(line) for line in self.store.load_events(session_id)]
            self.sessions[session_id] = session

    def _persist(self, session: Session, new_events: list[dict]) -> None:
        self.store.snapshot(
            session.session_id,
            f"{session.bot_rng.state:016x}{session.bot_rng.inc:016x}",
            serialize_state(session.state),
            [json.dumps(e, sort_keys=True, separators=(",", ":"), ensure_ascii=False) for e in new_events],
        )

    def get_session(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise NotFound(f"no session {session_id}")
        return session

    def create_session(
        self,
        ruleset: str,
        player_count: int,
        bot_policies: list[str],
        pack_id: str = "default",
        seed: int | None = None,
        hand_size: int = DEFAULT_HAND_SIZE,
        penalty_draw: int = DEFAULT_PENALTY_DRAW,
        strict_precedence: bool = True,
        turn_cap: int = DEFAULT_TURN_CAP,
    ) -> dict:
        pack = self.packs.get(pack_id)
        if pack is None:
            raise ConfigError(f"unknown pack '{pack_id}' (have: {', '.join(sorted(self.packs))})")
        try:
            ruleset_value = Ruleset(ruleset)
        except ValueError:
            raise ConfigError(f"unknown ruleset '{ruleset}'") from None
        for name in bot_policies:
            if name not in POLICY_NAMES:
                raise ConfigError(f"unknown policy '{name}' (have: {', '.join(POLICY_NAMES)})")
        if len(bot_policies) > player_count:
            raise ConfigError("more bot seats than players")
        if seed is None:
            seed = secrets.randbits(64)
        config = GameConfig(
            ruleset=ruleset_value,
            player_count=player_count,
            pack=pack,
            seed=seed,
            hand_size=hand_size,
            penalty_draw=penalty_draw,
            strict_precedence=strict_precedence,
            turn_cap=turn_cap,
        )
        state = new_game(config)  # raises ConfigError on bad configs

        humans = player_count - len(bot_policies)
        seats: list[Seat] = [Seat(kind="human", token=secrets.token_urlsafe(16)) for _ in range(humans)]
        seats.extend(Seat(kind="bot", policy=name) for name in bot_policies)
        session_id = secrets.token_urlsafe(12)
        bot_rng = Pcg32.seeded(mix_seed(seed ^ POLICY_STREAM_SALT, 1))
        session = Session(session_id, pack_id, state, seats, bot_rng)

        new_events = [_session_started_event(state)]
        session.events.extend(new_events)
        self.sessions[session_id] = session
        self.store.create(
            session_id,
            pack_id,
            [s.to_dict() for s in seats],
            f"{bot_rng.state:016x}{bot_rng.inc:016x}",
            serialize_state(state),
        )
        self.store.snapshot(session.session_id, f"{bot_rng.state:016x}{bot_rng.inc:016x}",
                            serialize_state(state), [json.dumps(e, sort_keys=True, separators=(",", ":")) for e in new_events])

        with session.lock:
            self._run_bots(session)
        return {
            "session_id": session_id,
            "seed": seed,
            "seats": [
                {"seat": i, "kind": s.kind, "policy": s.policy} for i, s in enumerate(seats)
            ],
            "join_tokens": {str(i): s.token for i, s in enumerate(seats) if s.kind == "human"},
        }

    def _enrich(self, event: Event, state: GameState) -> dict:
        """Attach display texts so clients can show the advice on every play."""
        data = event_to_dict(event)
        catalogue = catalogue_for(state.config.pack, state.config.ruleset)
        if isinstance(event, CardsPlayed):
            data["texts"] = [
                {
                    "id": card_id,
                    "text": catalogue.info[card_id].text,
                    "lines": list(catalogue.info[card_id].lines) if catalogue.info[card_id].lines else None,
                }
                for card_id in event.cards
            ]
        elif isinstance(event, ChallengeFlipped):
            data["statement"] = catalogue.challenge_entries[event.card].statement
        return data

    def _run_bots(self, session: Session) -> list[dict]:
        """Advance bot seats until a human's turn or a terminal state."""
        produced: list[dict] = []
        state = session.state
        while state.phase is not Phase.FINISHED and session.seats[state.current_seat].kind == "bot":
            if self.bot_delay:
                time.sleep(self.bot_delay)
            seat = state.current_seat
            moves = legal_moves(state)
            view = player_view(state, seat, legal=moves)
            move = session.policies[seat].choose(view, moves, session.bot_rng)
            state, events = apply_move(state, seat, move, validate=False)
            produced.extend(self._enrich(e, state) for e in events)
        if produced:
            session.state = state
            session.events.extend(produced)
            self._persist(session, produced)
        return produced

    def submit_move(self, session_id: str, token: str, move_data: dict) -> dict:
        session = self.get_session(session_id)
        seat = session.seat_for_token(token)
        move = move_from_dict(move_data)
        with session.lock:
            state, events = apply_move(session.state, seat, move)  # validates
            enriched = [self._enrich(e, state) for e in events]
            session.state = state
            session.events.extend(enriched)
            self._persist(session, enriched)
            enriched.extend(self._run_bots(session))
            view = player_view(session.state, seat)
        return {
            "view": view_to_dict(view),
            "events": [filter_event_for_seat(e, seat) for e in enriched],
            "cursor": len(session.events),
        }

    def get_view(self, session_id: str, token: str) -> dict:
        session = self.get_session(session_id)
        seat = session.seat_for_token(token)
        with session.lock:
            view = player_view(session.state, seat)
        return view_to_dict(view)

    def get_events(self, session_id: str, token: str, cursor: int = 0) -> dict:
        session = self.get_session(session_id)
        seat = session.seat_for_token(token)
        with session.lock:
            events = [
                {"cursor": i, **filter_event_for_seat(e, seat)}
                for i, e in enumerate(session.events[cursor:], start=cursor)
            ]
            finished = session.state.phase is Phase.FINISHED
        return {"events": events, "next_cursor": cursor + len(events), "finished": finished}

    def pack_meta(self, session_id: str, token: str) -> dict:
        """Client-safe pack projection: no answer keys."""
        session = self.get_session(session_id)
        session.seat_for_token(token)
        pack = session.state.config.pack
        return {
            "categories": [
                {"id": c.id, "display_name": c.display_name, "color": c.color} for c in pack.categories
            ],
            "palettes": [{"name": p.name, "colors": dict(p.colors)} for p in pack.palettes],
            "change_cards": [
                {"ordinal": ch.ordinal, "lines": list(ch.lines)} for ch in pack.change_cards
            ],
        }


# ---------------------------------------------------------------------------
# HTTP layer


class CreateSessionRequest(BaseModel):
    ruleset: str
    player_count: int = Field(ge=2, le=6)
    bot_policies: list[str] = Field(default_factory=list)
    pack: str = "default"
    seed: int | None = None
    hand_size: int = DEFAULT_HAND_SIZE
    penalty_draw: int = DEFAULT_PENALTY_DRAW
    strict_precedence: bool = True
    turn_cap: int = DEFAULT_TURN_CAP


class SubmitMoveRequest(BaseModel):
    move: dict


def _error_response(status: int, code: str, message: str, rule_code: str | None = None) -> JSONResponse:
    body = {"code": code, "message": message}
    if rule_code is not None:
        body["rule_code"] = rule_code
    return JSONResponse(status_code=status, content=body)


def create_app(
    store_path: str = ":memory:",
    extra_packs: dict[str, str] | None = None,
    bot_delay: float = 0.0,
) -> FastAPI:
    """Build the API app. ``extra_packs`` maps pack ids to JSON file paths."""
    packs = {name: load_bundled_pack(name) for name in ("default", "five-category-example")}
    for pack_id, path in (extra_packs or {}).items():
        with open(path, "r", encoding="utf-8") as fh:
            packs[pack_id] = load_pack(fh.read())
    store = SessionStore(store_path)
    service = GameService(store, packs=packs, bot_delay=bot_delay)

    app = FastAPI(title="cybercards server", version="1")
    app.state.service = service

    def token_from(request: Request, token: str | None) -> str:
        auth = request.headers.get("authorization", "")
        if auth.lower().startswith("bearer "):
            return auth[7:].strip()
        if token:
            return token
        raise Unauthorized("missing bearer token")

    @app.exception_handler(CybercardsError)
    async def handle_game_errors(request: Request, exc: CybercardsError):
        if isinstance(exc, NotFound):
            return _error_response(404, "NOT_FOUND", str(exc))
        if isinstance(exc, Unauthorized):
            return _error_response(401, "UNAUTHORIZED", str(exc))
        if isinstance(exc, NotYourTurn):
            return _error_response(409, "NOT_YOUR_TURN", str(exc))
        if isinstance(exc, WrongPhase):
            return _error_response(409, "WRONG_PHASE", str(exc))
        if isinstance(exc, IllegalMove):
            return _error_response(409, "ILLEGAL_MOVE", str(exc), rule_code=exc.rule_code)
        if isinstance(exc, (ConfigError, ParseError, PackRulesetMismatch)):
            return _error_response(400, "BAD_REQUEST", str(exc))
        return _error_response(500, "INTERNAL", str(exc))

    @app.post("/v1/sessions")
    async def create_session(body: CreateSessionRequest):
        return service.create_session(
            ruleset=body.ruleset,
            player_count=body.player_count,
            bot_policies=body.bot_policies,
            pack_id=body.pack,
            seed=body.seed,
            hand_size=body.hand_size,
            penalty_draw=body.penalty_draw,
            strict_precedence=body.strict_precedence,
            turn_cap=body.turn_cap,
        )

    @app.get("/v1/sessions/{session_id}/view")
    async def get_view(session_id: str, request: Request, token: str | None = Query(default=None)):
        return service.get_view(session_id, token_from(request, token))

    @app.get("/v1/sessions/{session_id}/pack")
    async def get_pack(session_id: str, request: Request, token: str | None = Query(default=None)):
        return service.pack_meta(session_id, token_from(request, token))

    @app.post("/v1/sessions/{session_id}/moves")
    async def submit_move(session_id: str, body: SubmitMoveRequest, request: Request,
                          token: str | None = Query(default=None)):
        return service.submit_move(session_id, token_from(request, token), body.move)

    @app.get("/v1/sessions/{session_id}/events")
    async def get_events(session_id: str, request: Request, cursor: int = 0,
                         token: str | None = Query(default=None)):
        resolved = token_from(request, token)
        if "text/event-stream" in request.headers.get("accept", ""):
            return StreamingResponse(
                _sse_stream(service, session_id, resolved, cursor),
                media_type="text/event-stream",
            )
        return service.get_events(session_id, resolved, cursor)

    return app


async def _sse_stream(service: GameService, session_id: str, token: str, cursor: int):
    """Server-sent events: replays from the cursor, then follows the session
    until it finishes."""
    position = cursor
    while True:
        batch = service.get_events(session_id, token, position)
        for event in batch["events"]:
            yield f"id: {event['cursor']}\ndata: {json.dumps(event, separators=(',', ':'))}\n\n"
        position = batch["next_cursor"]
        if batch["finished"]:
            yield "event: end\ndata: {}\n\n"
            return
        await asyncio.sleep(0.2)
