// DOM wiring for the play UI. All rule knowledge lives on the server;
// this file only renders views and posts server-listed inputs.

import { ApiClient, ApiError } from "./api.js";
import {
  buildBoard,
  choiceModels,
  effectiveKind,
  kindToggles,
  moveFor,
  pollDelayMs,
  statusLine,
} from "./boardModel.js";
import type { Kind, SessionView } from "./types.js";

const api = new ApiClient();

interface UiState {
  view: SessionView | null;
  selectedKind: Kind;
  pollTimer: number | null;
  requestInFlight: boolean;
  highlighted: Set<string>;
}

const ui: UiState = {
  view: null,
  selectedKind: "S",
  pollTimer: null,
  requestInFlight: false,
  highlighted: new Set(),
};

const $ = (id: string) => document.getElementById(id)!;

function setBanner(text: string, isError = false): void {
  const banner = $("status");
  banner.textContent = text;
  banner.classList.toggle("error", isError);
}

function render(view: SessionView): void {
  // Build everything off-DOM first: a malformed view throws before any
  // visible state is touched, leaving the previous render intact.
  const selectedKind = effectiveKind(view, ui.selectedKind);
  const board = buildBoard(view, selectedKind);
  const gridCells = document.createDocumentFragment();
  for (const cell of board.cells) {
    const div = document.createElement("div");
    div.className = "cell";
    div.dataset.square = cell.square;
    if (cell.piece) {
      const piece = document.createElement("div");
      piece.className = `piece p${cell.piece.player} ${
        cell.piece.kind === "L" ? "large" : "small"
      }`;
      piece.title = `${cell.piece.kind === "L" ? "Large" : "Small"} (P${cell.piece.player})`;
      div.appendChild(piece);
    }
    if (cell.playable) div.classList.add("playable");
    if (ui.highlighted.has(cell.square)) div.classList.add("highlight");
    if (cell.playable && board.inputEnabled) {
      div.addEventListener("click", () => submitMove(cell.square));
    }
    gridCells.appendChild(div);
  }

  const toggleButtons = document.createDocumentFragment();
  for (const t of kindToggles(view, selectedKind)) {
    const button = document.createElement("button");
    button.textContent = `${t.kind === "S" ? "Small" : "Large"} ×${t.count}`;
    button.disabled = !t.enabled;
    button.classList.toggle("selected", t.selected);
    button.addEventListener("click", () => {
      ui.selectedKind = t.kind;
      render(view);
    });
    toggleButtons.appendChild(button);
  }
  const meta = `You are P${view.human_seat} vs ${view.agent} · ply ${view.ply}`;

  ui.view = view;
  ui.selectedKind = selectedKind;
  setBanner(view.error ? `Agent error: ${view.error}` : statusLine(view), !!view.error);
  const grid = $("board");
  grid.innerHTML = "";
  grid.appendChild(gridCells);
  const toggles = $("kind-toggle");
  toggles.innerHTML = "";
  toggles.appendChild(toggleButtons);
  renderPools(view);
  renderDialog(view);
  $("game-meta").textContent = meta;
  schedulePoll(view);
}

function renderPools(view: SessionView): void {
  for (const seat of [1, 2]) {
    const pool = view.pools[String(seat)];
    $(`pool-${seat}`).textContent =
      `P${seat} pool — small: ${pool.small}, large: ${pool.large}`;
  }
}

function renderDialog(view: SessionView): void {
  const dialog = $("decision") as HTMLDialogElement;
  const list = $("decision-list");
  if (view.status !== "awaiting_human_decision") {
    ui.highlighted.clear();
    if (dialog.open) dialog.close();
    return;
  }
  list.innerHTML = "";
  for (const model of choiceModels(view.choices)) {
    const item = document.createElement("button");
    item.textContent = model.label;
    item.addEventListener("mouseenter", () => {
      ui.highlighted = new Set(model.squares);
      paintHighlights();
    });
    item.addEventListener("mouseleave", () => {
      ui.highlighted.clear();
      paintHighlights();
    });
    item.addEventListener("click", () => submitDecision(model.index));
    list.appendChild(item);
  }
  if (!dialog.open) dialog.show();
}

function paintHighlights(): void {
  document.querySelectorAll<HTMLElement>("#board .cell").forEach((el) => {
    el.classList.toggle("highlight", ui.highlighted.has(el.dataset.square ?? ""));
  });
}

function schedulePoll(view: SessionView): void {
  if (ui.pollTimer !== null) window.clearTimeout(ui.pollTimer);
  const delay = pollDelayMs(view);
  if (delay === null) return;
  ui.pollTimer = window.setTimeout(refresh, delay);
}

async function refresh(): Promise<void> {
  if (!ui.view) return;
  try {
    render(await api.getState(ui.view.id));
  } catch (err) {
    setBanner(`Refresh failed: ${String(err)} — retrying`, true);
    ui.pollTimer = window.setTimeout(refresh, 1500);
  }
}

async function guarded(action: () => Promise<SessionView>): Promise<void> {
  if (ui.requestInFlight) return;
  ui.requestInFlight = true;
  try {
    render(await action());
  } catch (err) {
    if (err instanceof ApiError) {
      setBanner(`Rejected: ${err.message}`, true);
      await refresh(); // re-sync with the authoritative state
    } else {
      setBanner(`Network trouble: ${String(err)} — try again`, true);
    }
  } finally {
    ui.requestInFlight = false;
  }
}

function submitMove(square: string): void {
  const view = ui.view;
  if (!view || view.status !== "awaiting_human") return;
  void guarded(() => api.postMove(view.id, moveFor(ui.selectedKind, square)));
}

function submitDecision(index: number): void {
  const view = ui.view;
  if (!view) return;
  void guarded(() => api.postDecision(view.id, index));
}

function newGame(): void {
  const agent = ($("agent-select") as HTMLSelectElement).value;
  const seat = Number(($("seat-select") as HTMLSelectElement).value) as 1 | 2;
  const budget = Number(($("budget-input") as HTMLInputElement).value) || 1000;
  ui.selectedKind = "S";
  void guarded(() =>
    api.createSession({ agent, humanSeat: seat, budgetMs: budget }),
  );
}

$("new-game").addEventListener("click", newGame);
setBanner("Pick an opponent and start a game.");
