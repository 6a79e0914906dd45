import { describe, expect, it } from "vitest";

import { computeUi, enabledCardIds, moveKey } from "../src/legal.js";
import { categoryColor, loadPaletteName, nextPalette } from "../src/palette.js";
import type { Move, PackMeta, PlayerView } from "../src/types.js";
import fixture from "./fixtures/scripted_game.json";

const pack = fixture.pack as PackMeta;

function baseView(overrides: Partial<PlayerView>): PlayerView {
  return {
    seat: 0,
    player_count: 2,
    ruleset: "v1-base",
    phase: "Play",
    hand: [],
    opponents: [{ seat: 1, hand_size: 7 }],
    discard_top: null,
    active_category: "scams",
    active_rank: 3,
    draw_size: 10,
    discard_size: 2,
    challenge_size: 0,
    current_seat: 0,
    turn_index: 5,
    winner: null,
    pending_challenge: null,
    legal_moves: [],
    ...overrides,
  };
}

const HS5 = { id: "HS-5", kind: "Numbered" as const, category: "scams", rank: 5, text: "x", lines: null };
const HS7 = { id: "HS-7", kind: "Numbered" as const, category: "scams", rank: 7, text: "y", lines: null };
const PM3 = { id: "PM-3", kind: "Numbered" as const, category: "passwords", rank: 3, text: "z", lines: null };

describe("moveKey", () => {
  it("is stable under key order", () => {
    const a = { type: "play_change", card: "CHG-1", category: "privacy" } as Move;
    const b = { category: "privacy", card: "CHG-1", type: "play_change" } as unknown as Move;
    expect(moveKey(a)).toBe(moveKey(b));
  });

  it("distinguishes cross-match orderings", () => {
    const a = { type: "cross_match", cards: ["PM-3", "SP-3"] } as Move;
    const b = { type: "cross_match", cards: ["SP-3", "PM-3"] } as Move;
    expect(moveKey(a)).not.toBe(moveKey(b));
  });
});

describe("enabledCardIds", () => {
  const view = baseView({
    hand: [HS5, HS7, PM3],
    legal_moves: [
      { type: "ascending_run", cards: ["HS-5"] },
      { type: "ascending_run", cards: ["HS-7"] },
      { type: "ascending_run", cards: ["HS-5", "HS-7"] },
      { type: "cross_match", cards: ["PM-3"] },
    ],
  });

  it("enables exactly the cards of legal moves", () => {
    expect(enabledCardIds(view, [])).toEqual(new Set(["HS-5", "HS-7", "PM-3"]));
  });

  it("narrows as the selection grows", () => {
    expect(enabledCardIds(view, ["HS-5"])).toEqual(new Set(["HS-7"]));
    expect(enabledCardIds(view, ["PM-3"])).toEqual(new Set());
  });
});

describe("computeUi", () => {
  it("renders nothing actionable when it is not your turn", () => {
    const view = baseView({ current_seat: 1, legal_moves: [] });
    const ui = computeUi(view, []);
    expect(ui.yourTurn).toBe(false);
    expect(ui.enabledCards.size).toBe(0);
    expect(ui.actions).toEqual([]);
  });

  it("sorts run selections into ascending order", () => {
    const view = baseView({
      hand: [HS5, HS7],
      legal_moves: [{ type: "ascending_run", cards: ["HS-5", "HS-7"] }],
    });
    const ui = computeUi(view, ["HS-7", "HS-5"]); // clicked high card first
    expect(ui.actions.map((a) => moveKey(a.move))).toContain(
      moveKey({ type: "ascending_run", cards: ["HS-5", "HS-7"] }),
    );
  });

  it("keeps cross-match click order as the declared order", () => {
    const view = baseView({
      hand: [PM3, { ...PM3, id: "SP-3", category: "privacy" }],
      legal_moves: [
        { type: "cross_match", cards: ["PM-3", "SP-3"] },
        { type: "cross_match", cards: ["SP-3", "PM-3"] },
      ],
    });
    const ui = computeUi(view, ["SP-3", "PM-3"]);
    const keys = ui.actions.map((a) => moveKey(a.move));
    expect(keys).toContain(moveKey({ type: "cross_match", cards: ["SP-3", "PM-3"] }));
    expect(keys).not.toContain(moveKey({ type: "cross_match", cards: ["PM-3", "SP-3"] }));
  });

  it("offers draw and flip only when the server does", () => {
    const drawView = baseView({ legal_moves: [{ type: "draw_penalty" }] });
    expect(computeUi(drawView, []).drawMove).toEqual({ type: "draw_penalty" });
    const flipView = baseView({ ruleset: "v2", legal_moves: [{ type: "flip_challenge" }] });
    expect(computeUi(flipView, []).flipMove).toEqual({ type: "flip_challenge" });
    const neither = baseView({ legal_moves: [{ type: "ascending_run", cards: ["HS-5"] }], hand: [HS5] });
    const ui = computeUi(neither, []);
    expect(ui.drawMove).toBeNull();
    expect(ui.flipMove).toBeNull();
  });
});

describe("palette helpers", () => {
  it("defaults to the colorblind-safe palette", () => {
    expect(loadPaletteName(pack)).toBe("high-contrast");
  });

  it("cycles through the pack's palettes", () => {
    const first = loadPaletteName(pack);
    const second = nextPalette(pack, first);
    expect(second).not.toBe(first);
    expect(nextPalette(pack, second)).toBe(first);
  });

  it("resolves colors through the category's slot", () => {
    const a = categoryColor(pack, "high-contrast", "scams");
    const b = categoryColor(pack, "classic", "scams");
    expect(a).toMatch(/^#/);
    expect(b).toMatch(/^#/);
    expect(a).not.toBe(b);
  });
});
