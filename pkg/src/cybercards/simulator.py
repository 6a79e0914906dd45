"""Seeded Monte Carlo harness: N games under configured policies, aggregated.

Per-game seeds derive from the master seed as ``mix_seed(master_seed, i)``,
so growing ``games`` never perturbs earlier games; each game owns two
independent streams (shuffles and policy decisions). Games are embarrassingly
parallel and aggregation is order-insensitive, so serial and parallel runs of
the same configuration produce identical statistics.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import json
import statistics
from dataclasses import dataclass, field

from .content import ContentPack, default_pack
from .cards import Ruleset
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
from .errors import ConfigError, ParseError
from .moves import (
    CategoryChanged,
    ChallengeResolved,
    ChangeCombo,
    Event,
    PenaltyDrawn,
    PilesReshuffled,
    PlayChange,
    PlayMinus,
    ScenarioDefense,
)
from .policies import POLICY_NAMES, make_policy
from .rng import POLICY_STREAM_SALT, Pcg32, mix_seed
from .serialize import Transcript


@dataclass(frozen=True)
class SimConfig:
    games: int
    ruleset: Ruleset
    player_count: int
    policies: tuple[str, ...]  # one name per seat
    master_seed: int
    pack: ContentPack = field(default_factory=default_pack)
    hand_size: int = DEFAULT_HAND_SIZE
    penalty_draw: int = DEFAULT_PENALTY_DRAW
    strict_precedence: bool = True
    turn_cap: int = DEFAULT_TURN_CAP
    tf_accuracy: float = 0.5
    parallelism: int = 1


@dataclass(frozen=True)
class GameRecord:
    index: int
    seed: int
    turns: int
    winner: int | None
    stalled: bool
    penalty_cards: int
    change_plays: int
    minus_plays: int
    challenge_correct: int
    challenge_incorrect: int
    scenario_cards_shed: int
    category_switches: int
    reshuffles: int

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "seed": self.seed,
            "turns": self.turns,
            "winner": self.winner,
            "stalled": self.stalled,
            "penalty_cards": self.penalty_cards,
            "change_plays": self.change_plays,
            "minus_plays": self.minus_plays,
            "challenge_correct": self.challenge_correct,
            "challenge_incorrect": self.challenge_incorrect,
            "scenario_cards_shed": self.scenario_cards_shed,
            "category_switches": self.category_switches,
            "reshuffles": self.reshuffles,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GameRecord":
        return cls(
            index=int(data["index"]),
            seed=int(data["seed"]),
            turns=int(data["turns"]),
            winner=data["winner"],
            stalled=bool(data["stalled"]),
            penalty_cards=int(data["penalty_cards"]),
            change_plays=int(data["change_plays"]),
            minus_plays=int(data["minus_plays"]),
            challenge_correct=int(data["challenge_correct"]),
            challenge_incorrect=int(data["challenge_incorrect"]),
            scenario_cards_shed=int(data["scenario_cards_shed"]),
            category_switches=int(data["category_switches"]),
            reshuffles=int(data["reshuffles"]),
        )


@dataclass(frozen=True)
class SimStats:
    games_played: int
    player_count: int
    wins: tuple[int, ...]
    stalls: int
    turns_min: int
    turns_median: float
    turns_mean: float
    turns_max: int
    histogram: tuple[tuple[int, int], ...]  # (turn count, games) ascending
    penalty_cards_total: int
    change_plays_total: int
    minus_plays_total: int
    challenge_correct_total: int
    challenge_incorrect_total: int
    scenario_cards_shed_total: int
    category_switches_total: int
    reshuffles_total: int
    records: tuple[GameRecord, ...]

    @classmethod
    def from_records(cls, records, player_count: int) -> "SimStats":
        records = tuple(sorted(records, key=lambda r: r.index))
        if not records:
            raise ConfigError("cannot aggregate zero games")
        turns = [r.turns for r in records]
        wins = [0] * player_count
        stalls = 0
        for r in records:
            if r.winner is None:
                stalls += 1
            else:
                wins[r.winner] += 1
        histogram: dict[int, int] = {}
        for t in turns:
            histogram[t] = histogram.get(t, 0) + 1
        return cls(
            games_played=len(records),
            player_count=player_count,
            wins=tuple(wins),
            stalls=stalls,
            turns_min=min(turns),
            turns_median=float(statistics.median(turns)),
            turns_mean=statistics.fmean(turns),
            turns_max=max(turns),
            histogram=tuple(sorted(histogram.items())),
            penalty_cards_total=sum(r.penalty_cards for r in records),
            change_plays_total=sum(r.change_plays for r in records),
            minus_plays_total=sum(r.minus_plays for r in records),
            challenge_correct_total=sum(r.challenge_correct for r in records),
            challenge_incorrect_total=sum(r.challenge_incorrect for r in records),
            scenario_cards_shed_total=sum(r.scenario_cards_shed for r in records),
            category_switches_total=sum(r.category_switches for r in records),
            reshuffles_total=sum(r.reshuffles for r in records),
            records=records,
        )

    @property
    def stall_rate(self) -> float:
        return self.stalls / self.games_played


def validate_sim_config(sim: SimConfig) -> None:
    if sim.games < 1:
        raise ConfigError("games must be at least 1")
    if len(sim.policies) != sim.player_count:
        raise ConfigError(f"{sim.player_count} seats need {sim.player_count} policy names")
    for name in sim.policies:
        if name not in POLICY_NAMES:
            raise ConfigError(f"unknown policy '{name}' (have: {', '.join(POLICY_NAMES)})")
    if sim.parallelism < 1:
        raise ConfigError("parallelism must be at least 1")
    if not (0 <= sim.master_seed < 1 << 64):
        raise ConfigError("master_seed must be an unsigned 64-bit integer")


def game_seed(master_seed: int, index: int) -> int:
    return mix_seed(master_seed, index)


def policy_seed_for(seed: int) -> int:
    return mix_seed(seed ^ POLICY_STREAM_SALT, 0)


def play_game(
    config: GameConfig,
    policy_names,
    policy_seed: int,
    tf_accuracy: float = 0.5,
    keep_events: bool = False,
) -> tuple[GameState, "_Tally", tuple[Event, ...], GameState]:
    """Play one full game; returns (initial state, tally, events, final state)."""
    policies = [make_policy(name, config.pack, tf_accuracy) for name in policy_names]
    rng = Pcg32.seeded(policy_seed)
    initial = new_game(config)
    state = initial
    tally = _Tally()
    log: list[Event] = []
    while state.phase is not Phase.FINISHED:
        moves = legal_moves(state)
        seat = state.current_seat
        view = player_view(state, seat, legal=moves)
        move = policies[seat].choose(view, moves, rng)
        # The move comes straight from legal_moves, so skip re-validation.
        state, events = apply_move(state, seat, move, validate=False)
        tally.count(move, events)
        if keep_events:
            log.extend(events)
    return initial, tally, tuple(log), state


class _Tally:
    """Per-game balance counters accumulated from moves and events."""

    __slots__ = (
        "penalty_cards",
        "change_plays",
        "minus_plays",
        "challenge_correct",
        "challenge_incorrect",
        "scenario_cards_shed",
        "category_switches",
        "reshuffles",
        "_active_category",
    )

    def __init__(self) -> None:
        self.penalty_cards = 0
        self.change_plays = 0
        self.minus_plays = 0
        self.challenge_correct = 0
        self.challenge_incorrect = 0
        self.scenario_cards_shed = 0
        self.category_switches = 0
        self.reshuffles = 0
        self._active_category: str | None = None

    def count(self, move, events) -> None:
        move_type = type(move)
        if move_type is PlayChange or move_type is ChangeCombo:
            self.change_plays += 1
        elif move_type is PlayMinus:
            self.minus_plays += 1
        elif move_type is ScenarioDefense:
            self.scenario_cards_shed += len(move.cards)
        for event in events:
            et = type(event)
            if et is PenaltyDrawn:
                self.penalty_cards += event.count
            elif et is PilesReshuffled:
                self.reshuffles += 1
            elif et is CategoryChanged:
                if self._active_category is not None and event.category != self._active_category:
                    self.category_switches += 1
                self._active_category = event.category
            elif et is ChallengeResolved and move_type is not ScenarioDefense:
                if event.correct:
                    self.challenge_correct += 1
                else:
                    self.challenge_incorrect += 1


def _game_config(sim: SimConfig, seed: int) -> GameConfig:
    return GameConfig(
        ruleset=sim.ruleset,
        player_count=sim.player_count,
        pack=sim.pack,
        seed=seed,
        hand_size=sim.hand_size,
        penalty_draw=sim.penalty_draw,
        strict_precedence=sim.strict_precedence,
        turn_cap=sim.turn_cap,
    )


def run_single(sim: SimConfig, index: int, keep_events: bool = False):
    """Play game ``index`` of a simulation; returns (record, transcript|None)."""
    seed = game_seed(sim.master_seed, index)
    config = _game_config(sim, seed)
    initial, tally, events, final = play_game(
        config, sim.policies, policy_seed_for(seed), sim.tf_accuracy, keep_events=keep_events
    )
    record = GameRecord(
        index=index,
        seed=seed,
        turns=final.turn_index,
        winner=final.winner,
        stalled=final.winner is None,
        penalty_cards=tally.penalty_cards,
        change_plays=tally.change_plays,
        minus_plays=tally.minus_plays,
        challenge_correct=tally.challenge_correct,
        challenge_incorrect=tally.challenge_incorrect,
        scenario_cards_shed=tally.scenario_cards_shed,
        category_switches=tally.category_switches,
        reshuffles=tally.reshuffles,
    )
    transcript = Transcript(initial=initial, events=events, final=final) if keep_events else None
    return record, transcript


_WORKER_SIM: SimConfig | None = None


def _init_worker(sim: SimConfig) -> None:
    global _WORKER_SIM
    _WORKER_SIM = sim


def _run_indices(indices) -> list[GameRecord]:
    return [run_single(_WORKER_SIM, i)[0] for i in indices]


def run_simulation(sim: SimConfig, transcript_sink=None) -> SimStats:
    """Run the configured number of games and aggregate their records.

    ``transcript_sink(index, transcript)`` receives every game's transcript;
    providing it forces a serial run.
    """
    validate_sim_config(sim)
    if transcript_sink is not None or sim.parallelism == 1 or sim.games == 1:
        records = []
        for i in range(sim.games):
            record, transcript = run_single(sim, i, keep_events=transcript_sink is not None)
            if transcript_sink is not None:
                transcript_sink(i, transcript)
            records.append(record)
        return SimStats.from_records(records, sim.player_count)

    workers = min(sim.parallelism, sim.games)
    chunk = max(1, sim.games // (workers * 4))
    batches = [range(start, min(start + chunk, sim.games)) for start in range(0, sim.games, chunk)]
    records = []
    with concurrent.futures.ProcessPoolExecutor(
        max_workers=workers, initializer=_init_worker, initargs=(sim,)
    ) as pool:
        for batch in pool.map(_run_indices, batches):
            records.extend(batch)
    return SimStats.from_records(records, sim.player_count)


# ---------------------------------------------------------------------------
# Export formats

CSV_COLUMNS = (
    "seat",
    "wins",
    "win_share",
    "games",
    "stalls",
    "stall_rate",
    "turns_min",
    "turns_median",
    "turns_mean",
    "turns_max",
    "penalty_cards_per_game",
    "change_plays_per_game",
    "minus_plays_per_game",
    "challenge_correct_per_game",
    "challenge_incorrect_per_game",
    "scenario_cards_shed_per_game",
    "category_switches_per_game",
    "reshuffles_per_game",
)


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def export_stats_csv(stats: SimStats) -> str:
    """One row per seat; game-level aggregates repeat on every row."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    n = stats.games_played
    for seat in range(stats.player_count):
        writer.writerow(
            [
                seat,
                stats.wins[seat],
                _fmt(stats.wins[seat] / n),
                n,
                stats.stalls,
                _fmt(stats.stalls / n),
                stats.turns_min,
                _fmt(stats.turns_median),
                _fmt(stats.turns_mean),
                stats.turns_max,
                _fmt(stats.penalty_cards_total / n),
                _fmt(stats.change_plays_total / n),
                _fmt(stats.minus_plays_total / n),
                _fmt(stats.challenge_correct_total / n),
                _fmt(stats.challenge_incorrect_total / n),
                _fmt(stats.scenario_cards_shed_total / n),
                _fmt(stats.category_switches_total / n),
                _fmt(stats.reshuffles_total / n),
            ]
        )
    return out.getvalue()


def read_stats_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


def export_stats_jsonl(stats: SimStats) -> str:
    """One record per game plus one trailing summary record."""
    lines = [
        json.dumps({"type": "game", **r.to_dict()}, sort_keys=True, separators=(",", ":"))
        for r in stats.records
    ]
    summary = {
        "type": "summary",
        "games_played": stats.games_played,
        "player_count": stats.player_count,
        "wins": list(stats.wins),
        "stalls": stats.stalls,
        "turns_min": stats.turns_min,
        "turns_median": stats.turns_median,
        "turns_mean": stats.turns_mean,
        "turns_max": stats.turns_max,
        "histogram": [[t, c] for t, c in stats.histogram],
        "penalty_cards_total": stats.penalty_cards_total,
        "change_plays_total": stats.change_plays_total,
        "minus_plays_total": stats.minus_plays_total,
        "challenge_correct_total": stats.challenge_correct_total,
        "challenge_incorrect_total": stats.challenge_incorrect_total,
        "scenario_cards_shed_total": stats.scenario_cards_shed_total,
        "category_switches_total": stats.category_switches_total,
        "reshuffles_total": stats.reshuffles_total,
    }
    lines.append(json.dumps(summary, sort_keys=True, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def read_stats_jsonl(text: str) -> SimStats:
    records = []
    summary = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"stats line {lineno} is not valid JSON: {exc}") from exc
        if data.get("type") == "game":
            records.append(GameRecord.from_dict(data))
        elif data.get("type") == "summary":
            summary = data
        else:
            raise ParseError(f"stats line {lineno} has unknown type {data.get('type')!r}")
    if summary is None:
        raise ParseError("stats export has no summary record")
    stats = SimStats.from_records(records, int(summary["player_count"]))
    if stats.games_played != int(summary["games_played"]):
        raise ParseError("summary record does not match the game records")
    return stats


def export_stats(stats: SimStats, fmt: str) -> str:
    if fmt == "csv":
        return export_stats_csv(stats)
    if fmt == "jsonl":
        return export_stats_jsonl(stats)
    raise ConfigError(f"unknown export format '{fmt}' (use csv or jsonl)")
