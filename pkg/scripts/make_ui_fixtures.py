"""Record a scripted 1-human-vs-3-bots game as web-client test fixtures.

Captures the exact JSON the server sends (views, pack metadata, per-move
responses) so the browser client's contract tests run against real payloads.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from fastapi.testclient import TestClient

from cybercards.server import create_app


def main() -> int:
    frames = []
    with TestClient(create_app(store_path=":memory:")) as client:
        created = client.post(
            "/v1/sessions",
            json={"ruleset": "v1-revised", "player_count": 4, "bot_policies": ["greedy"] * 3, "seed": 1},
        ).json()
        sid, token = created["session_id"], created["join_tokens"]["0"]
        headers = {"Authorization": f"Bearer {token}"}
        pack_meta = client.get(f"/v1/sessions/{sid}/pack", headers=headers).json()

        view = client.get(f"/v1/sessions/{sid}/view", headers=headers).json()
        for _ in range(400):
            frames.append(view)
            if view["phase"] == "Finished":
                break
            move = view["legal_moves"][0]
            response = client.post(f"/v1/sessions/{sid}/moves", json={"move": move}, headers=headers)
            assert response.status_code == 200, response.text
            view = response.json()["view"]

        # also capture one v2 session with challenge phases for the client
        v2_frames = []
        created = client.post(
            "/v1/sessions",
            json={"ruleset": "v2", "player_count": 4, "bot_policies": ["greedy"] * 3, "seed": 5},
        ).json()
        sid2, token2 = created["session_id"], created["join_tokens"]["0"]
        headers2 = {"Authorization": f"Bearer {token2}"}
        view = client.get(f"/v1/sessions/{sid2}/view", headers=headers2).json()
        for _ in range(400):
            v2_frames.append(view)
            if view["phase"] == "Finished":
                break
            move = view["legal_moves"][0]
            response = client.post(f"/v1/sessions/{sid2}/moves", json={"move": move}, headers=headers2)
            assert response.status_code == 200, response.text
            view = response.json()["view"]

    out = {
        "pack": pack_meta,
        "v1_revised_frames": frames,
        "v2_frames": v2_frames,
    }
    path = Path(__file__).parent.parent / "frontend" / "tests" / "fixtures" / "scripted_game.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(out, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")
    phases = {f["phase"] for f in frames} | {f["phase"] for f in v2_frames}
    print(f"wrote {path}: {len(frames)}+{len(v2_frames)} frames, phases={sorted(phases)}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
