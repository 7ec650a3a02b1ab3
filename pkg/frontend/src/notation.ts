// Square and move notation shared with the server: columns a-f, rows 1-6,
// moves like "S@c3".

import type { Kind } from "./types.js";

export const COLS = "abcdef";
export const SIZE = 6;

export interface Coords {
  row: number; // 1..6, row 1 rendered at the bottom
  col: number; // 1..6, column 1 = "a"
}

export function parseSquare(text: string): Coords {
  if (text.length !== 2) throw new Error(`bad square: ${text}`);
  const col = COLS.indexOf(text[0]);
  const row = Number(text[1]);
  if (col < 0 || !(row >= 1 && row <= SIZE)) throw new Error(`bad square: ${text}`);
  return { row, col: col + 1 };
}

export function squareName(coords: Coords): string {
  const { row, col } = coords;
  if (row < 1 || row > SIZE || col < 1 || col > SIZE) {
    throw new Error(`off board: ${row},${col}`);
  }
  return `${COLS[col - 1]}${row}`;
}

export function moveName(kind: Kind, square: string): string {
  return `${kind}@${square}`;
}

export function parseMove(text: string): { kind: Kind; square: string } {
  if (text.length !== 4 || text[1] !== "@" || (text[0] !== "S" && text[0] !== "L")) {
    throw new Error(`bad move: ${text}`);
  }
  parseSquare(text.slice(2));
  return { kind: text[0] as Kind, square: text.slice(2) };
}

/** Display order: row 6 first (top of the screen), columns a-f. */
export function displayOrder(): string[] {
  const names: string[] = [];
  for (let row = SIZE; row >= 1; row--) {
    for (let col = 1; col <= SIZE; col++) {
      names.push(squareName({ row, col }));
    }
  }
  return names;
}
