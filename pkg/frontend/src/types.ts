// Wire types for the server's /v1 JSON API. These mirror the server payloads
// exactly; the client renders only what the server sends.

export interface CardInfo {
  id: string;
  kind: "Numbered" | "Minus" | "Change" | "TrueFalse" | "Scenario";
  category: string | null;
  rank: number | null;
  text: string | null;
  lines: string[] | null;
}

export interface Opponent {
  seat: number;
  hand_size: number;
}

export interface PendingChallenge {
  card: string;
  kind: "TrueFalse" | "Scenario";
  statement: string;
  relevant_cards: [string, number][] | null;
  max_defenses: number | null;
}

export type Move =
  | { type: "opening_run"; cards: string[] }
  | { type: "ascending_run"; cards: string[] }
  | { type: "cross_match"; cards: string[] }
  | { type: "play_change"; card: string; category: string }
  | { type: "change_combo"; card: string; category: string; followup: string[] }
  | { type: "play_minus"; card: string }
  | { type: "draw_penalty" }
  | { type: "flip_challenge" }
  | { type: "answer_true_false"; answer: boolean }
  | { type: "scenario_defense"; cards: string[] };

export interface PlayerView {
  seat: number;
  player_count: number;
  ruleset: string;
  phase: "Opening" | "Play" | "AwaitingChallengeAnswer" | "AwaitingScenarioDefense" | "Finished";
  hand: CardInfo[];
  opponents: Opponent[];
  discard_top: CardInfo | null;
  active_category: string | null;
  active_rank: number;
  draw_size: number;
  discard_size: number;
  challenge_size: number;
  current_seat: number;
  turn_index: number;
  winner: number | null;
  pending_challenge: PendingChallenge | null;
  legal_moves: Move[];
}

export interface Category {
  id: string;
  display_name: string;
  color: string;
}

export interface Palette {
  name: string;
  colors: Record<string, string>;
}

export interface PackMeta {
  categories: Category[];
  palettes: Palette[];
  change_cards: { ordinal: number; lines: string[] }[];
}

export interface SessionEvent {
  cursor: number;
  type: string;
  [key: string]: unknown;
}
