"""Generate tests/data/golden_simulation.json: frozen 10k-game batch stats.

Run once (or after an intentional engine behavior change) and commit the
result; the acceptance suite regression-checks against it.
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

from cybercards import Ruleset, default_pack
from cybercards.simulator import SimConfig, run_simulation

GAMES = 10_000
MASTER_SEED = 97
PLAYERS = 4


def main() -> int:
    out = {}
    for ruleset in (Ruleset.V1_BASE, Ruleset.V1_REVISED, Ruleset.V2):
        started = time.perf_counter()
        stats = run_simulation(
            SimConfig(
                games=GAMES,
                ruleset=ruleset,
                player_count=PLAYERS,
                policies=("random",) * PLAYERS,
                master_seed=MASTER_SEED,
                pack=default_pack(),
            )
        )
        out[ruleset.value] = {
            "games": stats.games_played,
            "master_seed": MASTER_SEED,
            "wins": list(stats.wins),
            "stalls": stats.stalls,
            "turns_mean": stats.turns_mean,
            "turns_median": stats.turns_median,
            "turns_min": stats.turns_min,
            "turns_max": stats.turns_max,
            "penalty_cards_total": stats.penalty_cards_total,
            "change_plays_total": stats.change_plays_total,
            "minus_plays_total": stats.minus_plays_total,
            "challenge_correct_total": stats.challenge_correct_total,
            "challenge_incorrect_total": stats.challenge_incorrect_total,
            "scenario_cards_shed_total": stats.scenario_cards_shed_total,
            "category_switches_total": stats.category_switches_total,
            "reshuffles_total": stats.reshuffles_total,
        }
        print(
            f"{ruleset.value}: stall rate {stats.stall_rate:.4f}, mean turns {stats.turns_mean:.2f} "
            f"({time.perf_counter() - started:.1f}s)",
            file=sys.stderr,
        )
    path = Path(__file__).parent.parent / "tests" / "data" / "golden_simulation.json"
    path.write_text(json.dumps(out, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {path}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
