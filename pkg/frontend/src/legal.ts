// Selection model and move composition.
//
// The client computes no game legality itself: every affordance is derived
// from the server's legal move list, so anything clickable maps into at
// least one server-approved move. Selections are click-ordered card ids; for
// cross-matches the click order is the declared order sent to the server.

import type { CardInfo, Move, PlayerView } from "./types.js";

export function moveKey(move: Move): string {
  const sorted = Object.keys(move)
    .sort()
    .reduce<Record<string, unknown>>((acc, key) => {
      acc[key] = (move as Record<string, unknown>)[key];
      return acc;
    }, {});
  return JSON.stringify(sorted);
}

export function legalKeys(view: PlayerView): Set<string> {
  return new Set(view.legal_moves.map(moveKey));
}

function cardsOf(move: Move): string[] {
  switch (move.type) {
    case "opening_run":
    case "ascending_run":
    case "cross_match":
    case "scenario_defense":
      return move.cards;
    case "play_change":
      return [move.card];
    case "change_combo":
      return [move.card, ...move.followup];
    case "play_minus":
      return [move.card];
    default:
      return [];
  }
}

function isSubset(selection: string[], cards: string[]): boolean {
  const pool = new Set(cards);
  return selection.every((id) => pool.has(id));
}

/** Cards the player may click right now: each must extend the current
 * selection toward at least one legal move. */
export function enabledCardIds(view: PlayerView, selection: string[]): Set<string> {
  const enabled = new Set<string>();
  for (const move of view.legal_moves) {
    const cards = cardsOf(move);
    if (!isSubset(selection, cards)) continue;
    for (const id of cards) {
      if (!selection.includes(id)) enabled.add(id);
    }
  }
  return enabled;
}

function rankOf(view: PlayerView, id: string): number {
  const card = view.hand.find((c) => c.id === id);
  return card?.rank ?? 0;
}

export interface ActionOption {
  label: string;
  move: Move;
}

export interface ChangeChooserCategory {
  id: string;
  playable: boolean; // plain switch offered by the server
  combos: Move[]; // change_combo moves for this declared category
}

export interface ChangeChooser {
  card: string;
  lines: string[];
  categories: ChangeChooserCategory[];
}

export interface UiModel {
  yourTurn: boolean;
  enabledCards: Set<string>;
  actions: ActionOption[];
  drawMove: Move | null;
  flipMove: Move | null;
  trueFalse: ActionOption[] | null;
  scenario: { statement: string; relevantIds: Set<string>; maxDefenses: number; confirm: ActionOption } | null;
  changeChooser: ChangeChooser | null;
}

function runPreview(view: PlayerView, selection: string[]): string[] {
  return [...selection].sort((a, b) => rankOf(view, a) - rankOf(view, b));
}

/** Everything the table may offer for the current view and selection. Every
 * returned move is a member of the server's legal move list. */
export function computeUi(view: PlayerView, selection: string[]): UiModel {
  const keys = legalKeys(view);
  const isLegal = (move: Move) => keys.has(moveKey(move));
  const yourTurn = view.seat === view.current_seat && view.phase !== "Finished";
  const model: UiModel = {
    yourTurn,
    enabledCards: new Set(),
    actions: [],
    drawMove: null,
    flipMove: null,
    trueFalse: null,
    scenario: null,
    changeChooser: null,
  };
  if (!yourTurn) return model;

  model.enabledCards = enabledCardIds(view, selection);

  const draw: Move = { type: "draw_penalty" };
  if (isLegal(draw)) model.drawMove = draw;
  const flip: Move = { type: "flip_challenge" };
  if (isLegal(flip)) model.flipMove = flip;

  if (view.phase === "AwaitingChallengeAnswer") {
    const yes: Move = { type: "answer_true_false", answer: true };
    const no: Move = { type: "answer_true_false", answer: false };
    model.trueFalse = [
      { label: "True", move: yes },
      { label: "False", move: no },
    ].filter((option) => isLegal(option.move));
    return model;
  }

  if (view.phase === "AwaitingScenarioDefense" && view.pending_challenge) {
    const pending = view.pending_challenge;
    const relevantIds = new Set<string>();
    for (const move of view.legal_moves) {
      if (move.type === "scenario_defense") for (const id of move.cards) relevantIds.add(id);
    }
    const defense: Move = { type: "scenario_defense", cards: [...selection].sort() };
    if (isLegal(defense)) {
      model.scenario = {
        statement: pending.statement,
        relevantIds,
        maxDefenses: pending.max_defenses ?? 3,
        confirm: {
          label: selection.length ? `Play ${selection.length} defense card(s)` : "No defense",
          move: defense,
        },
      };
    } else {
      model.scenario = {
        statement: pending.statement,
        relevantIds,
        maxDefenses: pending.max_defenses ?? 3,
        confirm: { label: "No defense", move: { type: "scenario_defense", cards: [] } },
      };
    }
    return model;
  }

  // Opening / Play: complete moves that exactly consume the selection.
  if (selection.length > 0) {
    const ascending = runPreview(view, selection);
    for (const type of ["opening_run", "ascending_run"] as const) {
      const move: Move = { type, cards: ascending };
      if (isLegal(move)) model.actions.push({ label: `Play run ${ascending.join(" → ")}`, move });
    }
    const cross: Move = { type: "cross_match", cards: [...selection] };
    if (isLegal(cross)) model.actions.push({ label: `Match ${selection.join(", ")}`, move: cross });
    const minus: Move = { type: "play_minus", card: selection[0]! };
    if (selection.length === 1 && isLegal(minus)) {
      model.actions.push({ label: "Play minus card (draw 2)", move: minus });
    }
  }

  // A single selected change card opens the category chooser with its info
  // lines, so the player reads the card before declaring a link.
  if (selection.length === 1) {
    const selected = view.hand.find((c) => c.id === selection[0]);
    if (selected && selected.kind === "Change") {
      const categories = new Map<string, ChangeChooserCategory>();
      for (const move of view.legal_moves) {
        if (move.type === "play_change" && move.card === selected.id) {
          const entry = categories.get(move.category) ?? { id: move.category, playable: false, combos: [] };
          entry.playable = true;
          categories.set(move.category, entry);
        } else if (move.type === "change_combo" && move.card === selected.id) {
          const entry = categories.get(move.category) ?? { id: move.category, playable: false, combos: [] };
          entry.combos.push(move);
          categories.set(move.category, entry);
        }
      }
      if (categories.size > 0) {
        model.changeChooser = {
          card: selected.id,
          lines: selected.lines ?? [],
          categories: [...categories.values()].sort((a, b) => a.id.localeCompare(b.id)),
        };
      }
    }
  }

  return model;
}
