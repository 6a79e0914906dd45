"""Operator command line: validate packs, run simulations, replay transcripts, serve.

Exit codes: 0 success, 1 validation or replay failure, 2 usage or I/O error.
All commands are deterministic for fixed inputs and seeds; output files carry
no timestamps.
"""

from __future__ import annotations

import argparse
import os
import sys

from .cards import Ruleset
from .content import default_pack, load_pack, validate_pack
from .errors import ConfigError, CybercardsError, ParseError, ReplayMismatch, SchemaError, ValidationError
from .simulator import SimConfig, export_stats, run_simulation
from .serialize import transcript_from_jsonl, transcript_to_jsonl, verify_transcript

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _read_file(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        text = _read_file(args.pack)
    except OSError as exc:
        print(f"error: cannot read {args.pack}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    warnings: list[str] = []
    try:
        pack = load_pack(text, strict=not args.lenient, warnings=warnings)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SchemaError as exc:
        print(f"SCHEMA {exc}")
        return EXIT_FAILURE
    except ValidationError as exc:
        for violation in exc.violations:
            print(violation)
        return EXIT_FAILURE
    for warning in warnings:
        print(f"warning: {warning}", file=sys.stderr)
    violations = validate_pack(pack)
    for violation in violations:
        print(violation)
    if violations:
        return EXIT_FAILURE
    print(
        f"ok: {len(pack.categories)} categories, {len(pack.advice)} advice entries, "
        f"{len(pack.misconceptions)} misconceptions, {len(pack.change_cards)} change cards, "
        f"{len(pack.challenges)} challenges, {len(pack.palettes)} palettes"
    )
    return EXIT_OK


def _load_pack_arg(path: str | None):
    if path is None:
        return default_pack()
    return load_pack(_read_file(path))


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        pack = _load_pack_arg(args.pack)
        policies = args.policy.split(",")
        if len(policies) == 1:
            policies = policies * args.players
        sim = SimConfig(
            games=args.games,
            ruleset=Ruleset(args.ruleset),
            player_count=args.players,
            policies=tuple(policies),
            master_seed=args.seed,
            pack=pack,
            strict_precedence=not args.no_precedence,
            turn_cap=args.turn_cap,
            tf_accuracy=args.tf_accuracy,
            parallelism=args.parallelism,
        )
        sink = None
        if args.transcripts:
            os.makedirs(args.transcripts, exist_ok=True)

            def sink(index: int, transcript) -> None:
                path = os.path.join(args.transcripts, f"game_{index:05d}.jsonl")
                with open(path, "w", encoding="utf-8") as fh:
                    fh.write(transcript_to_jsonl(transcript))

        stats = run_simulation(sim, transcript_sink=sink)
        document = export_stats(stats, args.format)
    except (ConfigError, ValueError, OSError, ParseError, SchemaError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(document)
    else:
        sys.stdout.write(document)
    wins = " ".join(f"seat{i}={w}" for i, w in enumerate(stats.wins))
    print(
        f"{stats.games_played} games, {wins}, stalls={stats.stalls}, "
        f"mean_turns={stats.turns_mean:.2f}, median_turns={stats.turns_median:.1f}"
    )
    return EXIT_OK


def cmd_replay(args: argparse.Namespace) -> int:
    try:
        text = _read_file(args.transcript)
    except OSError as exc:
        print(f"error: cannot read {args.transcript}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        transcript = transcript_from_jsonl(text)
        final = verify_transcript(transcript)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ReplayMismatch, ValidationError, CybercardsError) as exc:
        print(f"REPLAY MISMATCH: {exc}")
        return EXIT_FAILURE
    if final.winner is not None:
        outcome = f"won by seat {final.winner}"
    elif final.phase.value == "Finished":
        outcome = "stalled at the turn cap"
    else:
        outcome = "in progress"
    sizes = " ".join(f"seat{i}={len(h)}" for i, h in enumerate(final.hands))
    print(f"replay ok: {len(transcript.events)} events, {final.turn_index} turns, {outcome}; hands: {sizes}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import create_app

    extra = {}
    if args.pack:
        extra["custom"] = args.pack
    os.makedirs(args.data_dir, exist_ok=True)
    app = create_app(
        store_path=os.path.join(args.data_dir, "sessions.sqlite"),
        extra_packs=extra,
        bot_delay=args.bot_delay,
    )
    if args.ui:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=args.ui, html=True), name="ui")
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cybercards", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="validate a content pack file")
    p_validate.add_argument("pack", help="path to a pack JSON file")
    p_validate.add_argument("--lenient", action="store_true", help="downgrade unknown fields to warnings")
    p_validate.set_defaults(func=cmd_validate)

    p_sim = sub.add_parser("simulate", help="run a seeded Monte Carlo batch")
    p_sim.add_argument("--games", type=int, required=True)
    p_sim.add_argument("--players", type=int, default=4)
    p_sim.add_argument("--ruleset", choices=[r.value for r in Ruleset], default="v1-base")
    p_sim.add_argument("--policy", default="random", help="one name for all seats or a comma list per seat")
    p_sim.add_argument("--seed", type=int, default=0, help="master seed")
    p_sim.add_argument("--out", help="write stats to this file instead of stdout")
    p_sim.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p_sim.add_argument("--pack", help="pack JSON path (default: the bundled pack)")
    p_sim.add_argument("--transcripts", help="directory to write one transcript per game (forces serial)")
    p_sim.add_argument("--turn-cap", type=int, default=500)
    p_sim.add_argument("--tf-accuracy", type=float, default=0.5)
    p_sim.add_argument("--no-precedence", action="store_true", help="offer all move classes at once")
    p_sim.add_argument("--parallelism", type=int, default=1)
    p_sim.set_defaults(func=cmd_simulate)

    p_replay = sub.add_parser("replay", help="verify and summarize a game transcript")
    p_replay.add_argument("transcript", help="path to a transcript .jsonl file")
    p_replay.set_defaults(func=cmd_replay)

    p_serve = sub.add_parser("serve", help="run the game server")
    p_serve.add_argument("--host", default=os.environ.get("CYBERCARDS_HOST", "127.0.0.1"))
    p_serve.add_argument("--port", type=int, default=int(os.environ.get("CYBERCARDS_PORT", "8000")))
    p_serve.add_argument("--data-dir", default=os.environ.get("CYBERCARDS_DATA", "./data"))
    p_serve.add_argument("--pack", default=os.environ.get("CYBERCARDS_PACK"), help="register an extra pack file as 'custom'")
    p_serve.add_argument("--bot-delay", type=float, default=0.0, help="seconds between bot moves")
    p_serve.add_argument("--ui", help="serve this directory as the web client")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    return args.func(args)


def entrypoint() -> None:
    sys.exit(main())
