// Mirrors the play service's public session view; the server is
// authoritative and the client never evaluates rules on its own.

export type PlayerId = 1 | 2;
export type Kind = "S" | "L";

export type SessionStatus =
  | "awaiting_human"
  | "awaiting_human_decision"
  | "agent_thinking"
  | "finished";

export interface BoardCell {
  square: string;
  player: PlayerId;
  kind: Kind;
}

export interface PoolCounts {
  small: number;
  large: number;
}

export interface RemoveChoice {
  index: number;
  type: "remove";
  squares: string[];
}

export interface GraduateChoice {
  index: number;
  type: "graduate";
  square: string;
}

export type Choice = RemoveChoice | GraduateChoice;

export interface HistoryEvent {
  type: "place" | "remove" | "graduate";
  player: PlayerId;
  move?: string;
  squares?: string[];
  square?: string;
}

export interface SessionView {
  id: string;
  status: SessionStatus;
  human_seat: PlayerId;
  agent_seat: PlayerId;
  agent: string;
  to_move: PlayerId;
  ply: number;
  board: BoardCell[];
  pools: Record<string, PoolCounts>;
  winner: PlayerId | null;
  thinking: boolean;
  legal_moves: string[];
  choices: Choice[];
  history: HistoryEvent[];
  error: string | null;
}
