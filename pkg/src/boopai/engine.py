"""Rules engine for the board game boop.

boop. is a deterministic, fully observable two-player game on a 6x6 board.
Each player owns 8 physical pieces; a piece is either Small or Large and
pieces change kind when promoted. Players alternate placing one piece from
their pool onto a free square. A placement pushes ("boops") every adjacent
piece one square outward unless the push is blocked by a piece behind it,
or a Small tries to push a Large. Pieces pushed off the board return to
their owner's pool, keeping their kind.

End-of-turn resolution, in order:

1. Victory: three Large pieces of one player adjacent in a line, or all
   8 of a player's pieces Large and on the board. The mover is checked
   first; a line of the opponent's Larges created by a boop wins for the
   opponent immediately.
2. If the mover has one or more lines of three adjacent own pieces, one
   such triple is removed and every removed piece returns to the pool as
   a Large (Smalls are promoted). With a single candidate triple the
   removal is automatic; with several the game enters a decision phase.
3. If the mover now has all 8 pieces on the board and no line, they must
   pick one piece to retrieve (a Small is promoted to Large), again via
   a decision phase.
4. Otherwise the turn passes. There are no draws.

States are immutable values; every operation is a pure function from
state to state, safe to share across concurrent searches.

Boards are stored as four 36-bit occupancy masks (one per player/kind
combination), bit ``(row-1)*6 + (col-1)``. The low-level helpers at the
bottom of the module operate on raw masks and are shared by the public
API and the hot paths in :mod:`boopai.solver`.
"""

from __future__ import annotations

import enum
from typing import Iterable, NamedTuple, Optional, Union

N = 6
NUM_SQUARES = N * N
FULL_BOARD = (1 << NUM_SQUARES) - 1
PLAYERS = (1, 2)
PIECES_PER_PLAYER = 8

_COL_LETTERS = "abcdef"


def opponent(player: int) -> int:
    return 3 - player


class EngineError(Exception):
    """Base class for rule violations and malformed requests."""


class IllegalMoveError(EngineError):
    """A placement was rejected; ``reason`` is one of the documented codes."""

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"illegal move ({reason})" + (f": {detail}" if detail else ""))


class IllegalChoiceError(EngineError):
    """A decision was submitted that is not among the offered choices."""


class IllegalStateError(EngineError):
    """An operation was called on a state outside its precondition."""


class PieceKind(enum.IntEnum):
    SMALL = 0
    LARGE = 1

    @property
    def letter(self) -> str:
        return "SL"[self]

    @classmethod
    def from_letter(cls, letter: str) -> "PieceKind":
        try:
            return {"S": cls.SMALL, "L": cls.LARGE}[letter.upper()]
        except KeyError:
            raise ValueError(f"unknown piece kind {letter!r}") from None


class Square(NamedTuple):
    """A board square; ``row`` and ``col`` are 1-based, col 1..6 = a..f."""

    row: int
    col: int

    @property
    def index(self) -> int:
        return (self.row - 1) * N + (self.col - 1)

    @property
    def is_border(self) -> bool:
        return self.row in (1, N) or self.col in (1, N)

    @property
    def notation(self) -> str:
        return f"{_COL_LETTERS[self.col - 1]}{self.row}"

    @classmethod
    def parse(cls, text: str) -> "Square":
        t = text.strip().lower()
        if len(t) != 2 or t[0] not in _COL_LETTERS or not t[1].isdigit():
            raise ValueError(f"bad square notation {text!r}")
        row = int(t[1])
        if not 1 <= row <= N:
            raise ValueError(f"bad square notation {text!r}")
        return SQUARES[(row - 1) * N + _COL_LETTERS.index(t[0])]

    @classmethod
    def from_index(cls, index: int) -> "Square":
        return SQUARES[index]


SQUARES: tuple[Square, ...] = tuple(
    Square(r, c) for r in range(1, N + 1) for c in range(1, N + 1)
)


class Move(NamedTuple):
    """A placement: put a piece of ``piece`` kind on the free square ``at``."""

    piece: PieceKind
    at: Square

    @property
    def notation(self) -> str:
        return f"{self.piece.letter}@{self.at.notation}"

    @classmethod
    def parse(cls, text: str) -> "Move":
        t = text.strip()
        if len(t) != 4 or t[1] != "@":
            raise ValueError(f"bad move notation {text!r}")
        return MOVES[PieceKind.from_letter(t[0])][Square.parse(t[2:]).index]


# Interned instances: hot paths index these tables instead of allocating.
MOVES: tuple[tuple[Move, ...], tuple[Move, ...]] = (
    tuple(Move(PieceKind.SMALL, sq) for sq in SQUARES),
    tuple(Move(PieceKind.LARGE, sq) for sq in SQUARES),
)


class Pool(NamedTuple):
    """Off-board pieces of one player, by kind."""

    small: int
    large: int

    @property
    def total(self) -> int:
        return self.small + self.large


class Board(NamedTuple):
    """Piece occupancy as four bit masks, bit ``(row-1)*6 + (col-1)``."""

    p1_small: int
    p1_large: int
    p2_small: int
    p2_large: int

    @property
    def occupied(self) -> int:
        return self.p1_small | self.p1_large | self.p2_small | self.p2_large

    def mask(self, player: int, kind: PieceKind) -> int:
        return self[(player - 1) * 2 + kind]

    def player_mask(self, player: int) -> int:
        base = (player - 1) * 2
        return self[base] | self[base + 1]

    def piece_at(self, square: Square) -> Optional[tuple[int, PieceKind]]:
        bit = 1 << square.index
        for player in PLAYERS:
            if self.mask(player, PieceKind.SMALL) & bit:
                return player, PieceKind.SMALL
            if self.mask(player, PieceKind.LARGE) & bit:
                return player, PieceKind.LARGE
        return None

    def cells(self) -> dict[Square, tuple[int, PieceKind]]:
        """Mapping of occupied squares to (player, kind)."""
        out = {}
        for sq in SQUARES:
            piece = self.piece_at(sq)
            if piece is not None:
                out[sq] = piece
        return out

    def count(self, player: int) -> int:
        return self.player_mask(player).bit_count()

    @classmethod
    def empty(cls) -> "Board":
        return cls(0, 0, 0, 0)

    @classmethod
    def from_pieces(cls, pieces: dict[Square, tuple[int, PieceKind]]) -> "Board":
        masks = [0, 0, 0, 0]
        for sq, (player, kind) in pieces.items():
            bit = 1 << sq.index
            if (masks[0] | masks[1] | masks[2] | masks[3]) & bit:
                raise ValueError(f"square {sq.notation} assigned twice")
            masks[(player - 1) * 2 + kind] |= bit
        return cls(*masks)

    def pretty(self) -> str:
        """ASCII rendering, row 6 on top; o/O = P1 small/large, x/X = P2."""
        lines = []
        for r in range(N, 0, -1):
            cells = []
            for c in range(1, N + 1):
                piece = self.piece_at(Square(r, c))
                if piece is None:
                    cells.append(".")
                else:
                    player, kind = piece
                    cells.append("oOxX"[(player - 1) * 2 + kind])
            lines.append(f"{r} " + " ".join(cells))
        lines.append("  " + " ".join(_COL_LETTERS))
        return "\n".join(lines)


class RemoveAlignment(NamedTuple):
    """Remove three adjacent own pieces in a line; all return as Larges."""

    squares: tuple[Square, Square, Square]


class GraduateOne(NamedTuple):
    """Retrieve one own piece from a full board; a Small is promoted."""

    square: Square


DecisionChoice = Union[RemoveAlignment, GraduateOne]


class Phase(enum.Enum):
    PLACEMENT = "placement"
    AWAITING_DECISION = "awaiting_decision"


class GameState(NamedTuple):
    board: Board
    pools: tuple[Pool, Pool]
    to_move: int
    phase: Phase
    choices: tuple[DecisionChoice, ...]
    result: Optional[int]
    ply: int

    def pool_of(self, player: int) -> Pool:
        return self.pools[player - 1]

    @property
    def is_terminal(self) -> bool:
        return self.result is not None


def initial_state() -> GameState:
    return GameState(
        board=Board.empty(),
        pools=(Pool(PIECES_PER_PLAYER, 0), Pool(PIECES_PER_PLAYER, 0)),
        to_move=1,
        phase=Phase.PLACEMENT,
        choices=(),
        result=None,
        ply=0,
    )


# ---------------------------------------------------------------------------
# Geometry tables
# ---------------------------------------------------------------------------

_DIRS8 = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


def _build_neighbor_rays() -> tuple[tuple[tuple[int, int], ...], ...]:
    """Per square: (neighbor index, landing index or -1 if off-board)."""
    rays = []
    for r in range(N):
        for c in range(N):
            entries = []
            for dr, dc in _DIRS8:
                nr, nc = r + dr, c + dc
                if not (0 <= nr < N and 0 <= nc < N):
                    continue
                br, bc = r + 2 * dr, c + 2 * dc
                beyond = br * N + bc if 0 <= br < N and 0 <= bc < N else -1
                entries.append((nr * N + nc, beyond))
            rays.append(tuple(entries))
    return tuple(rays)


NEIGHBOR_RAYS = _build_neighbor_rays()

# Line directions east, south, south-east, south-west as index deltas, with
# masks of squares whose 1-step / 2-step continuation stays on the board.
_LINE_DELTAS = ((0, 1), (1, 0), (1, 1), (1, -1))


def _line_masks() -> tuple[tuple[int, int, int], ...]:
    out = []
    for dr, dc in _LINE_DELTAS:
        delta = dr * N + dc
        one = two = 0
        for r in range(N):
            for c in range(N):
                if 0 <= r + dr < N and 0 <= c + dc < N:
                    one |= 1 << (r * N + c)
                if 0 <= r + 2 * dr < N and 0 <= c + 2 * dc < N:
                    two |= 1 << (r * N + c)
        out.append((delta, one, two))
    return tuple(out)


LINE_STEPS = _line_masks()

CENTER_MASK = 0
for _r in range(1, N - 1):
    for _c in range(1, N - 1):
        CENTER_MASK |= 1 << (_r * N + _c)
BORDER_MASK = FULL_BOARD ^ CENTER_MASK

BORDER_INDEX_SET = frozenset(i for i in range(NUM_SQUARES) if (BORDER_MASK >> i) & 1)


def _has_triple(mask: int) -> bool:
    for delta, _one, two in LINE_STEPS:
        if mask & (mask >> delta) & (mask >> (2 * delta)) & two:
            return True
    return False


def _triples_of(mask: int) -> list[tuple[int, int, int]]:
    """All 3-in-a-line windows within ``mask``, ordered by (start, direction)."""
    found = []
    for d, (delta, _one, two) in enumerate(LINE_STEPS):
        starts = mask & (mask >> delta) & (mask >> (2 * delta)) & two
        while starts:
            low = starts & -starts
            i = low.bit_length() - 1
            found.append((i, d, delta))
            starts ^= low
    found.sort()
    return [(i, i + delta, i + 2 * delta) for i, _d, delta in found]


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def legal_moves(state: GameState) -> list[Move]:
    """All legal placements, ordered by square (row-major) then Small, Large.

    Raises :class:`IllegalStateError` when the game is finished, a decision
    is pending, or the mover's pool is empty (the last is unreachable in a
    correctly driven game: a full board always forces a retrieval decision
    at the end of the previous turn).
    """
    if state.result is not None:
        raise IllegalStateError("game is finished")
    if state.phase is not Phase.PLACEMENT:
        raise IllegalStateError("a decision is pending; resolve it first")
    pool = state.pools[state.to_move - 1]
    if pool.total == 0:
        raise IllegalStateError("mover has no pieces in pool (unreachable state)")
    free = ~state.board.occupied & FULL_BOARD
    small, large = pool.small > 0, pool.large > 0
    moves = []
    while free:
        low = free & -free
        idx = low.bit_length() - 1
        if small:
            moves.append(MOVES[0][idx])
        if large:
            moves.append(MOVES[1][idx])
        free ^= low
    return moves


def compute_boops(
    board: Board, placed: Square, placed_kind: PieceKind
) -> list[tuple[Square, Optional[Square]]]:
    """Displacements caused by the piece just placed on ``placed``.

    Returns one ``(origin, destination)`` entry per neighbor that actually
    moves; ``destination`` is ``None`` for pieces pushed off the board.
    Neighbors blocked by a piece behind them, or Larges that a Small cannot
    push, do not appear. All pushes are evaluated against the pre-push
    board, so the outcome is independent of processing order.
    """
    idx = placed.index
    occ = board.occupied
    if not (occ >> idx) & 1:
        raise IllegalStateError(f"no piece on {placed.notation}")
    large_any = board.p1_large | board.p2_large
    out = []
    for n1, n2 in NEIGHBOR_RAYS[idx]:
        if not (occ >> n1) & 1:
            continue
        if placed_kind is PieceKind.SMALL and (large_any >> n1) & 1:
            continue
        if n2 < 0:
            out.append((SQUARES[n1], None))
        elif not (occ >> n2) & 1:
            out.append((SQUARES[n1], SQUARES[n2]))
    return out


def apply_move(state: GameState, move: Move) -> GameState:
    """Place a piece and run the full end-of-turn resolution.

    Raises :class:`IllegalMoveError` with reason ``wrong-phase``,
    ``occupied`` or ``unavailable`` for rejected placements.
    """
    if state.result is not None:
        raise IllegalMoveError("wrong-phase", "game is finished")
    if state.phase is not Phase.PLACEMENT:
        raise IllegalMoveError("wrong-phase", "a decision is pending")
    idx = move.at.index
    if (state.board.occupied >> idx) & 1:
        raise IllegalMoveError("occupied", move.at.notation)
    if state.pools[state.to_move - 1][move.piece] <= 0:
        raise IllegalMoveError("unavailable", f"no {move.piece.name} in pool")
    return _apply_placement(state, int(move.piece), idx)


def resolve_decision(state: GameState, choice: DecisionChoice) -> GameState:
    """Apply one offered removal/graduation choice and pass the turn."""
    if state.phase is not Phase.AWAITING_DECISION:
        raise IllegalStateError("no decision pending")
    if choice not in state.choices:
        raise IllegalChoiceError(f"choice not offered: {choice}")
    masks = list(state.board)
    pools = list(state.pools)
    mover = state.to_move
    if isinstance(choice, RemoveAlignment):
        for sq in choice.squares:
            _lift_piece(masks, pools, mover, sq.index)
    else:
        _lift_piece(masks, pools, mover, choice.square.index)
    return _finish_turn(masks, pools, mover, state.ply)


def find_alignments(board: Board, player: int) -> list[tuple[Square, Square, Square]]:
    """All windows of exactly 3 adjacent collinear own pieces.

    A run of length L contributes L-2 windows. Order is deterministic:
    by starting square row-major, then direction (E, S, SE, SW).
    """
    own = board.player_mask(player)
    return [
        (SQUARES[a], SQUARES[b], SQUARES[c]) for a, b, c in _triples_of(own)
    ]


def border_choice(
    choices: Iterable[DecisionChoice], board: Board
) -> DecisionChoice:
    """The shared promotion-decision policy: prefer pieces on the border.

    Returns the choice whose squares include the most border squares
    (row or column 1 or 6); ties go to the earliest offered choice. Every
    agent uses this policy for removal and graduation decisions.
    """
    best = None
    best_count = -1
    for choice in choices:
        squares = choice.squares if isinstance(choice, RemoveAlignment) else (choice.square,)
        count = sum(1 for sq in squares if sq.index in BORDER_INDEX_SET)
        if count > best_count:
            best, best_count = choice, count
    if best is None:
        raise IllegalStateError("no choices offered")
    return best


def game_result(state: GameState) -> Optional[int]:
    """Winner of the game, or None while play continues."""
    return state.result


def apply_and_resolve(state: GameState, move: Move) -> GameState:
    """Apply a placement, auto-resolving any decision with border_choice.

    This is the transition used by searches and playouts, where decision
    phases are always settled by the shared border heuristic.
    """
    nxt = apply_move(state, move)
    while nxt.phase is Phase.AWAITING_DECISION:
        nxt = resolve_decision(nxt, border_choice(nxt.choices, nxt.board))
    return nxt


def state_from_pieces(
    pieces: dict[str, tuple[int, str]],
    to_move: int = 1,
    pools: Optional[dict[int, tuple[int, int]]] = None,
    ply: int = 0,
) -> GameState:
    """Build a mid-game placement state for tests and diagnostics.

    ``pieces`` maps square notation to ``(player, "S"|"L")``. Pools default
    to all remaining pieces as Smalls; pass ``pools`` as
    ``{player: (small, large)}`` to override. The state must be non-terminal
    and piece-conserving, otherwise :class:`IllegalStateError` is raised.
    """
    parsed = {
        Square.parse(sq): (player, PieceKind.from_letter(kind))
        for sq, (player, kind) in pieces.items()
    }
    board = Board.from_pieces(parsed)
    pool_list = []
    for player in PLAYERS:
        on_board = board.count(player)
        if pools and player in pools:
            pool = Pool(*pools[player])
        else:
            pool = Pool(PIECES_PER_PLAYER - on_board, 0)
        if on_board + pool.total != PIECES_PER_PLAYER:
            raise IllegalStateError(
                f"player {player}: {on_board} on board + {pool.total} pooled != 8"
            )
        pool_list.append(pool)
    state = GameState(
        board=board,
        pools=(pool_list[0], pool_list[1]),
        to_move=to_move,
        phase=Phase.PLACEMENT,
        choices=(),
        result=None,
        ply=ply,
    )
    for player in PLAYERS:
        large = board.mask(player, PieceKind.LARGE)
        if _has_triple(large) or large.bit_count() == PIECES_PER_PLAYER:
            raise IllegalStateError(f"player {player} already satisfies a win condition")
    return state


# ---------------------------------------------------------------------------
# Internal transition machinery (raw masks; shared with boopai.solver)
# ---------------------------------------------------------------------------


def _lift_piece(masks: list, pools: list, player: int, idx: int) -> None:
    """Remove an own piece from the board into the pool as a Large."""
    bit = 1 << idx
    base = (player - 1) * 2
    if masks[base] & bit:
        masks[base] ^= bit
    elif masks[base + 1] & bit:
        masks[base + 1] ^= bit
    else:
        raise IllegalChoiceError(f"square {SQUARES[idx].notation} is not player {player}'s")
    pool = pools[player - 1]
    pools[player - 1] = Pool(pool.small, pool.large + 1)


def _place_and_boop(masks: list, pools: list, mover: int, kind: int, idx: int) -> None:
    """Mutate masks/pools: place the piece, then apply every resulting push."""
    base = (mover - 1) * 2
    masks[base + kind] |= 1 << idx
    pool = pools[mover - 1]
    pools[mover - 1] = Pool(pool.small - (kind == 0), pool.large - (kind == 1))

    occ = masks[0] | masks[1] | masks[2] | masks[3]
    large_any = masks[1] | masks[3]
    pushes = []
    for n1, n2 in NEIGHBOR_RAYS[idx]:
        if not (occ >> n1) & 1:
            continue
        if kind == 0 and (large_any >> n1) & 1:
            continue
        if n2 >= 0 and (occ >> n2) & 1:
            continue
        pushes.append((n1, n2))
    for n1, n2 in pushes:
        bit = 1 << n1
        for bi in range(4):
            if masks[bi] & bit:
                masks[bi] ^= bit
                if n2 >= 0:
                    masks[bi] |= 1 << n2
                else:
                    owner, pkind = bi >> 1, bi & 1
                    pool = pools[owner]
                    pools[owner] = Pool(
                        pool.small + (pkind == 0), pool.large + (pkind == 1)
                    )
                break


def _winner(masks: list, mover: int) -> int:
    """0 if play continues; otherwise the winning player (mover precedence)."""
    for player in (mover, opponent(mover)):
        large = masks[(player - 1) * 2 + 1]
        if large.bit_count() == PIECES_PER_PLAYER or _has_triple(large):
            return player
    return 0


def _terminal_state(masks: list, pools: list, mover: int, winner: int, ply: int) -> GameState:
    return GameState(
        board=Board(*masks),
        pools=(pools[0], pools[1]),
        to_move=mover,
        phase=Phase.PLACEMENT,
        choices=(),
        result=winner,
        ply=ply,
    )


def _pass_turn(masks: list, pools: list, mover: int, ply: int) -> GameState:
    return GameState(
        board=Board(*masks),
        pools=(pools[0], pools[1]),
        to_move=opponent(mover),
        phase=Phase.PLACEMENT,
        choices=(),
        result=None,
        ply=ply,
    )


def _finish_turn(masks: list, pools: list, mover: int, ply: int) -> GameState:
    winner = _winner(masks, mover)
    if winner:
        return _terminal_state(masks, pools, mover, winner, ply)
    return _pass_turn(masks, pools, mover, ply)


def _own_square_indices(masks: list, player: int) -> list[int]:
    own = masks[(player - 1) * 2] | masks[(player - 1) * 2 + 1]
    out = []
    while own:
        low = own & -own
        out.append(low.bit_length() - 1)
        own ^= low
    return out


def _apply_placement(state: GameState, kind: int, idx: int) -> GameState:
    masks = list(state.board)
    pools = list(state.pools)
    mover = state.to_move
    ply = state.ply + 1
    _place_and_boop(masks, pools, mover, kind, idx)

    winner = _winner(masks, mover)
    if winner:
        return _terminal_state(masks, pools, mover, winner, ply)

    own = masks[(mover - 1) * 2] | masks[(mover - 1) * 2 + 1]
    triples = _triples_of(own)
    if triples:
        if len(triples) == 1:
            for i in triples[0]:
                _lift_piece(masks, pools, mover, i)
            return _finish_turn(masks, pools, mover, ply)
        choices = tuple(
            RemoveAlignment((SQUARES[a], SQUARES[b], SQUARES[c]))
            for a, b, c in triples
        )
        return GameState(
            board=Board(*masks),
            pools=(pools[0], pools[1]),
            to_move=mover,
            phase=Phase.AWAITING_DECISION,
            choices=choices,
            result=None,
            ply=ply,
        )
    if own.bit_count() == PIECES_PER_PLAYER:
        choices = tuple(
            GraduateOne(SQUARES[i]) for i in _own_square_indices(masks, mover)
        )
        return GameState(
            board=Board(*masks),
            pools=(pools[0], pools[1]),
            to_move=mover,
            phase=Phase.AWAITING_DECISION,
            choices=choices,
            result=None,
            ply=ply,
        )
    return _pass_turn(masks, pools, mover, ply)
