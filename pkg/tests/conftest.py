from __future__ import annotations

import pytest

from cybercards import GameConfig, Phase, Ruleset, default_pack, legal_moves, new_game, player_view
from cybercards.engine import apply_move
from cybercards.policies import make_policy
from cybercards.rng import Pcg32
from cybercards.simulator import game_seed, policy_seed_for

RULESETS = (Ruleset.V1_BASE, Ruleset.V1_REVISED, Ruleset.V2)


@pytest.fixture(scope="session")
def pack():
    return default_pack()


def config_for(pack, ruleset, seed, players=4, **overrides) -> GameConfig:
    return GameConfig(ruleset=ruleset, player_count=players, pack=pack, seed=seed, **overrides)


def random_playout_states(config: GameConfig, policy_seed: int, every: int = 1, limit: int | None = None):
    """Yield (state, moves) pairs along one random-policy game."""
    policies = [make_policy("random", config.pack) for _ in range(config.player_count)]
    rng = Pcg32.seeded(policy_seed)
    state = new_game(config)
    step = 0
    while state.phase is not Phase.FINISHED:
        moves = legal_moves(state)
        if step % every == 0:
            yield state, moves
        if limit is not None and step >= limit:
            return
        seat = state.current_seat
        view = player_view(state, seat, legal=moves)
        move = policies[seat].choose(view, moves, rng)
        state, _ = apply_move(state, seat, move, validate=False)
        step += 1
    yield state, ()


def sample_states(pack, ruleset, seeds, per_seed_cap=None, players=4, **overrides):
    """Reachable states from random playout prefixes across several seeds."""
    out = []
    for seed in seeds:
        config = config_for(pack, ruleset, game_seed(seed, 0), players=players, **overrides)
        count = 0
        for state, moves in random_playout_states(config, policy_seed_for(seed)):
            out.append((state, moves))
            count += 1
            if per_seed_cap is not None and count >= per_seed_cap:
                break
    return out
