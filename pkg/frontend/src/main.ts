// Table screen bootstrap: joins a session from the URL, renders on every
// server-confirmed update, and keeps no client state beyond the last view,
// the selection, and the event cursor (refresh-safe; no optimistic updates).

import { Client, type ApiError } from "./api.js";
import { computeUi } from "./legal.js";
import { loadPaletteName, nextPalette, savePaletteName } from "./palette.js";
import { renderAdviceTicker, renderTable } from "./render.js";
import type { Move, PackMeta, PlayerView, SessionEvent } from "./types.js";

const ADVICE_DWELL_MS = 6000;
const POLL_INTERVAL_MS = 1200;

interface AppState {
  client: Client;
  sessionId: string;
  token: string;
  pack: PackMeta;
  view: PlayerView;
  selection: string[];
  palette: string;
  cursor: number;
  advice: { id: string; text: string | null; lines: string[] | null; until: number }[];
  error: string | null;
}

function root(): HTMLElement {
  const el = document.getElementById("app");
  if (!el) throw new Error("missing #app container");
  return el;
}

function draw(app: AppState): void {
  const ui = computeUi(app.view, app.selection);
  const now = Date.now();
  app.advice = app.advice.filter((entry) => entry.until > now);
  root().innerHTML =
    (app.error ? `<div class="error-banner">${app.error}</div>` : "") +
    `<div class="toolbar"><button id="palette-toggle">Palette: ${app.palette}</button></div>` +
    renderTable(app.view, app.pack, app.palette, app.selection, ui) +
    renderAdviceTicker(app.advice);
  wire(app);
}

function collectAdvice(app: AppState, events: SessionEvent[]): void {
  const until = Date.now() + ADVICE_DWELL_MS;
  for (const event of events) {
    if (event.type === "cards_played" && Array.isArray(event["texts"])) {
      for (const text of event["texts"] as { id: string; text: string | null; lines: string[] | null }[]) {
        app.advice.push({ ...text, until });
      }
    }
  }
}

async function submit(app: AppState, move: Move): Promise<void> {
  try {
    const result = await app.client.submitMove(app.sessionId, app.token, move);
    app.view = result.view;
    app.selection = [];
    app.error = null;
    app.cursor = result.cursor;
    collectAdvice(app, result.events);
  } catch (error) {
    const apiError = error as ApiError;
    app.error = apiError.rule_code
      ? `Move rejected (${apiError.rule_code}): ${apiError.message}`
      : `Request failed: ${apiError.message ?? String(error)}`;
  }
  draw(app);
}

function wire(app: AppState): void {
  const container = root();
  container.querySelector("#palette-toggle")?.addEventListener("click", () => {
    app.palette = nextPalette(app.pack, app.palette);
    savePaletteName(app.palette);
    draw(app);
  });
  for (const button of container.querySelectorAll<HTMLButtonElement>(".hand .card[data-enabled='1']")) {
    button.addEventListener("click", () => {
      const id = button.dataset.cardId!;
      app.selection = app.selection.includes(id)
        ? app.selection.filter((x) => x !== id)
        : [...app.selection, id];
      draw(app);
    });
  }
  for (const button of container.querySelectorAll<HTMLButtonElement>("[data-move]")) {
    button.addEventListener("click", () => {
      void submit(app, JSON.parse(button.dataset.move!) as Move);
    });
  }
}

async function poll(app: AppState): Promise<void> {
  try {
    const batch = await app.client.getEvents(app.sessionId, app.token, app.cursor);
    if (batch.events.length > 0) {
      app.cursor = batch.next_cursor;
      collectAdvice(app, batch.events);
      app.view = await app.client.getView(app.sessionId, app.token);
      app.error = null;
      draw(app);
    }
  } catch {
    app.error = "Connection lost, retrying…";
    draw(app);
  }
  if (app.view.phase !== "Finished") {
    setTimeout(() => void poll(app), POLL_INTERVAL_MS);
  }
}

export async function start(): Promise<void> {
  const params = new URLSearchParams(location.search);
  const client = new Client("");
  let sessionId = params.get("session");
  let token = params.get("token");
  if (!sessionId || !token) {
    const created = await client.createSession({
      ruleset: params.get("ruleset") ?? "v1-revised",
      player_count: Number(params.get("players") ?? "4"),
      bot_policies: Array(Number(params.get("players") ?? "4") - 1).fill(params.get("bots") ?? "greedy"),
    });
    sessionId = created.session_id;
    token = created.join_tokens["0"]!;
    history.replaceState(null, "", `?session=${sessionId}&token=${token}`);
  }
  const pack = await client.getPack(sessionId, token);
  const view = await client.getView(sessionId, token);
  const app: AppState = {
    client,
    sessionId,
    token,
    pack,
    view,
    selection: [],
    palette: loadPaletteName(pack),
    cursor: 0,
    advice: [],
    error: null,
  };
  draw(app);
  void poll(app);
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void start();
}
