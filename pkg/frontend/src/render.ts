// Table rendering: plain HTML string templates bound to a UiModel.
//
// Text comes first and large on every card; colors come from the active
// palette and never carry meaning on their own (category names are always
// printed). Cards render inert unless the server offers a move using them.

import { computeUi, type UiModel } from "./legal.js";
import { categoryColor, categoryName } from "./palette.js";
import type { CardInfo, PackMeta, PlayerView } from "./types.js";

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function cardBody(card: CardInfo): string {
  if (card.kind === "Numbered") return `<span class="rank">${card.rank}</span><span class="text">${esc(card.text ?? "")}</span>`;
  if (card.kind === "Minus") return `<span class="rank">−</span><span class="text">${esc(card.text ?? "")}</span>`;
  if (card.kind === "Change") {
    const lines = (card.lines ?? []).map((line) => `<span class="line">${esc(line)}</span>`).join("");
    return `<span class="rank">⇄</span>${lines}`;
  }
  return `<span class="text">${esc(card.text ?? "")}</span>`;
}

export function renderCard(
  card: CardInfo,
  pack: PackMeta,
  palette: string,
  options: { enabled?: boolean; selected?: boolean; highlight?: boolean } = {},
): string {
  const color = categoryColor(pack, palette, card.category);
  const classes = ["card", `kind-${card.kind.toLowerCase()}`];
  if (options.enabled) classes.push("enabled");
  if (options.selected) classes.push("selected");
  if (options.highlight) classes.push("relevant");
  const label = card.category ? categoryName(pack, card.category) : card.kind;
  return (
    `<button class="${classes.join(" ")}" data-card-id="${card.id}" data-enabled="${options.enabled ? "1" : "0"}"` +
    ` style="--cat-color:${color}" ${options.enabled ? "" : "disabled"}>` +
    `<span class="category" style="background:${color}">${esc(label)}</span>` +
    cardBody(card) +
    `</button>`
  );
}

export function renderTable(
  view: PlayerView,
  pack: PackMeta,
  palette: string,
  selection: string[],
  ui: UiModel = computeUi(view, selection),
): string {
  const parts: string[] = [];

  const banner =
    view.phase === "Finished"
      ? view.winner === null
        ? "Game over: stalled at the turn cap"
        : view.winner === view.seat
          ? "You won!"
          : `Seat ${view.winner} wins`
      : view.current_seat === view.seat
        ? view.phase === "Opening"
          ? "Your turn: open with numbered cards"
          : "Your turn"
        : `Waiting for seat ${view.current_seat}`;
  parts.push(`<header class="banner" data-phase="${view.phase}">${esc(banner)}</header>`);

  parts.push(
    `<section class="opponents">` +
      view.opponents
        .map(
          (o) =>
            `<div class="opponent${o.seat === view.current_seat ? " to-move" : ""}" data-seat="${o.seat}">` +
            `Seat ${o.seat}<span class="count">${o.hand_size}</span></div>`,
        )
        .join("") +
      `</section>`,
  );

  const active =
    view.active_category === null
      ? "table open"
      : `${categoryName(pack, view.active_category)}${view.active_rank > 0 ? ` above ${view.active_rank}` : " (any rank)"}`;
  parts.push(
    `<section class="piles">` +
      `<div class="badge active" style="background:${categoryColor(pack, palette, view.active_category)}" ` +
      `data-active-category="${view.active_category ?? ""}" data-active-rank="${view.active_rank}">${esc(active)}</div>` +
      `<div class="pile draw" data-count="${view.draw_size}">Draw ${view.draw_size}</div>` +
      (view.ruleset === "v2" ? `<div class="pile challenge" data-count="${view.challenge_size}">Challenge ${view.challenge_size}</div>` : "") +
      `<div class="pile discard" data-count="${view.discard_size}">` +
      (view.discard_top ? renderCard(view.discard_top, pack, palette) : "<span class='empty'>empty</span>") +
      `</div>` +
      `</section>`,
  );

  if (ui.trueFalse) {
    parts.push(
      `<section class="challenge true-false">` +
        `<p class="statement">${esc(view.pending_challenge?.statement ?? "")}</p>` +
        ui.trueFalse
          .map((option) => `<button class="answer" data-move='${esc(JSON.stringify(option.move))}'>${option.label}</button>`)
          .join("") +
        `</section>`,
    );
  }
  if (ui.scenario) {
    parts.push(
      `<section class="challenge scenario">` +
        `<p class="statement">${esc(ui.scenario.statement)}</p>` +
        `<p class="hint">Play up to ${ui.scenario.maxDefenses} relevant cards</p>` +
        `<button class="confirm-defense" data-move='${esc(JSON.stringify(ui.scenario.confirm.move))}'>${esc(ui.scenario.confirm.label)}</button>` +
        `</section>`,
    );
  }
  if (ui.changeChooser) {
    parts.push(
      `<section class="change-chooser" data-card-id="${ui.changeChooser.card}">` +
        ui.changeChooser.lines.map((line) => `<p class="info-line">${esc(line)}</p>`).join("") +
        ui.changeChooser.categories
          .map((category) => {
            const buttons: string[] = [];
            if (category.playable) {
              const move = { type: "play_change", card: ui.changeChooser!.card, category: category.id };
              buttons.push(
                `<button class="declare" data-move='${esc(JSON.stringify(move))}' ` +
                  `style="background:${categoryColor(pack, palette, category.id)}">${esc(categoryName(pack, category.id))}</button>`,
              );
            }
            for (const combo of category.combos) {
              if (combo.type !== "change_combo") continue;
              buttons.push(
                `<button class="declare combo" data-move='${esc(JSON.stringify(combo))}'>` +
                  `${esc(categoryName(pack, category.id))} + ${combo.followup.length} card(s)</button>`,
              );
            }
            return buttons.join("");
          })
          .join("") +
        `</section>`,
    );
  }

  const actionButtons: string[] = ui.actions.map(
    (action) => `<button class="action" data-move='${esc(JSON.stringify(action.move))}'>${esc(action.label)}</button>`,
  );
  if (ui.drawMove) actionButtons.push(`<button class="action draw" data-move='${esc(JSON.stringify(ui.drawMove))}'>Draw 2</button>`);
  if (ui.flipMove) actionButtons.push(`<button class="action flip" data-move='${esc(JSON.stringify(ui.flipMove))}'>Flip challenge</button>`);
  parts.push(`<section class="actions">${actionButtons.join("")}</section>`);

  parts.push(
    `<section class="hand" data-inert="${ui.yourTurn ? "0" : "1"}">` +
      view.hand
        .map((card) =>
          renderCard(card, pack, palette, {
            enabled: ui.yourTurn && ui.enabledCards.has(card.id),
            selected: selection.includes(card.id),
            highlight: ui.scenario?.relevantIds.has(card.id) ?? false,
          }),
        )
        .join("") +
      `</section>`,
  );

  return `<main class="table" data-palette="${palette}" data-seat="${view.seat}">${parts.join("")}</main>`;
}

/** Advice texts from played cards, shown for a configurable dwell time. */
export function renderAdviceTicker(entries: { id: string; text: string | null; lines: string[] | null }[]): string {
  const items = entries
    .map((entry) => {
      const body = entry.text ?? (entry.lines ?? []).join(" ");
      return `<li class="advice" data-card-id="${entry.id}">${esc(body)}</li>`;
    })
    .join("");
  return `<ul class="advice-ticker">${items}</ul>`;
}
