// Pure mapping from the server's session view to render-ready models.
// Everything interactive is derived from server-listed legal inputs, so
// the client can only ever submit moves the server offered.

import { displayOrder, moveName } from "./notation.js";
import type { Choice, Kind, SessionView } from "./types.js";

export interface CellModel {
  square: string;
  piece: { player: 1 | 2; kind: Kind } | null;
  /** Square accepts the currently selected piece kind. */
  playable: boolean;
  /** Member of a hovered removal choice (set by the dialog code). */
  highlight: boolean;
}

export interface KindToggleModel {
  kind: Kind;
  count: number;
  enabled: boolean;
  selected: boolean;
}

export interface BoardModel {
  cells: CellModel[]; // 36 entries, row 6 first, columns a-f
  inputEnabled: boolean;
}

export function buildBoard(view: SessionView, selectedKind: Kind): BoardModel {
  const pieces = new Map(view.board.map((c) => [c.square, c]));
  const humanTurn = view.status === "awaiting_human";
  const playable = new Set(
    humanTurn
      ? view.legal_moves
          .filter((m) => m.startsWith(selectedKind))
          .map((m) => m.slice(2))
      : [],
  );
  const cells = displayOrder().map((square) => {
    const piece = pieces.get(square);
    return {
      square,
      piece: piece ? { player: piece.player, kind: piece.kind } : null,
      playable: playable.has(square),
      highlight: false,
    };
  });
  return { cells, inputEnabled: humanTurn };
}

export function kindToggles(view: SessionView, selectedKind: Kind): KindToggleModel[] {
  const pool = view.pools[String(view.human_seat)];
  const counts: Record<Kind, number> = { S: pool.small, L: pool.large };
  return (["S", "L"] as Kind[]).map((kind) => ({
    kind,
    count: counts[kind],
    enabled: counts[kind] > 0,
    selected: kind === selectedKind,
  }));
}

/** Pick a selected kind that is actually available, preferring the current one. */
export function effectiveKind(view: SessionView, wanted: Kind): Kind {
  const pool = view.pools[String(view.human_seat)];
  const counts: Record<Kind, number> = { S: pool.small, L: pool.large };
  if (counts[wanted] > 0) return wanted;
  return wanted === "S" ? "L" : "S";
}

export function moveFor(selectedKind: Kind, square: string): string {
  return moveName(selectedKind, square);
}

export function statusLine(view: SessionView): string {
  switch (view.status) {
    case "finished":
      return view.winner === view.human_seat
        ? "You won!"
        : `The agent (${view.agent}) won.`;
    case "agent_thinking":
      return `Agent (${view.agent}) is thinking…`;
    case "awaiting_human_decision":
      return "Your call: resolve the removal or graduation.";
    default:
      return "Your turn: pick a piece size and click a free square.";
  }
}

export interface ChoiceModel {
  index: number;
  label: string;
  squares: string[];
}

export function choiceModels(choices: Choice[]): ChoiceModel[] {
  return choices.map((choice) =>
    choice.type === "remove"
      ? {
          index: choice.index,
          label: `Remove & promote ${choice.squares.join(", ")}`,
          squares: choice.squares,
        }
      : {
          index: choice.index,
          label: `Graduate the piece on ${choice.square}`,
          squares: [choice.square],
        },
  );
}

/** Poll while the agent is working; idle sessions refresh more slowly. */
export function pollDelayMs(view: SessionView): number | null {
  if (view.status === "finished") return null;
  return view.status === "agent_thinking" ? 500 : 2000;
}
