"""Complete move solver: enumerate, filter by constraints, score, rank.

A placement decision is modeled as a small constrained-optimization
problem over three variables (piece kind, row, column) with domains
{Small, Large} and 1..6, three constraints:

* ``HasPiece`` — the mover's pool holds a piece of the chosen kind,
* ``FreePosition`` — the chosen square is empty,
* ``Unmasked`` — the move is not in the caller-supplied exclusion set,

and an objective that simulates the move (resolving any removal or
graduation decision with the shared border policy) and scores the
resulting state from the mover's perspective; moves that end the game
score exactly +1 or -1.

The move space never exceeds 72 assignments, so the solver is a complete
enumeration with constraint-first pruning: assignments failing a
constraint are never scored. It returns every optimum (enabling uniform
random draws among equally good moves) and the full descending ranking.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

from .engine import (
    BORDER_MASK,
    FULL_BOARD,
    MOVES,
    N,
    NUM_SQUARES,
    PIECES_PER_PLAYER,
    GameState,
    IllegalStateError,
    Move,
    Phase,
    PieceKind,
    Pool,
    _place_and_boop,
    _triples_of,
    _winner,
)
from .heuristic import DEFAULT_WEIGHTS, HeuristicWeights, _normalize, _raw_score

MoveMask = frozenset[Move]
EMPTY_MASK: MoveMask = frozenset()


class NoLegalMoveError(IllegalStateError):
    """The constraint set admits no assignment (unreachable in real games)."""


class ScoredMove(NamedTuple):
    move: Move
    score: float


class Constraint(NamedTuple):
    """A named predicate over a (piece, row, col) assignment."""

    name: str
    holds: Callable[[PieceKind, int, int], bool]


@dataclass(frozen=True)
class CopModel:
    """The optimization model for one state: variables, domains, constraints, objective."""

    piece_domain: tuple[PieceKind, ...]
    position_domain: tuple[int, ...]
    constraints: tuple[Constraint, ...]
    objective: Callable[[PieceKind, int, int], float]


def build_model(
    state: GameState,
    mask: MoveMask = EMPTY_MASK,
    weights: HeuristicWeights = DEFAULT_WEIGHTS,
) -> CopModel:
    """Bind the move-selection model to a concrete placement state."""
    if state.phase is not Phase.PLACEMENT:
        raise IllegalStateError("solver operates on placement states")
    pool = state.pools[state.to_move - 1]
    occupied = state.board.occupied

    def has_piece(piece: PieceKind, _row: int, _col: int) -> bool:
        return pool[piece] > 0

    def free_position(_piece: PieceKind, row: int, col: int) -> bool:
        return not (occupied >> ((row - 1) * N + (col - 1))) & 1

    def unmasked(piece: PieceKind, row: int, col: int) -> bool:
        return MOVES[piece][(row - 1) * N + (col - 1)] not in mask

    def objective(piece: PieceKind, row: int, col: int) -> float:
        return _score_candidate(state, int(piece), (row - 1) * N + (col - 1), weights)

    return CopModel(
        piece_domain=(PieceKind.SMALL, PieceKind.LARGE),
        position_domain=tuple(range(1, N + 1)),
        constraints=(
            Constraint("HasPiece", has_piece),
            Constraint("FreePosition", free_position),
            Constraint("Unmasked", unmasked),
        ),
        objective=objective,
    )


def valid_assignments(state: GameState, mask: MoveMask = EMPTY_MASK) -> list[Move]:
    """Every constraint-satisfying move, in canonical order.

    Canonical order is square row-major, Small before Large per square;
    assignments failing any constraint are dropped before scoring.
    """
    model = build_model(state, mask)
    out = []
    for row in model.position_domain:
        for col in model.position_domain:
            for piece in model.piece_domain:
                if all(c.holds(piece, row, col) for c in model.constraints):
                    out.append(MOVES[piece][(row - 1) * N + (col - 1)])
    return out


class CopMoveSolver:
    """Solver bound to a weight table, with an optional per-search memo.

    The memo is keyed on (board, pools, mover, mask) and is semantically
    invisible: it only short-circuits recomputation of identical inputs.
    One instance is owned by one search; instances are cheap.
    """

    def __init__(self, weights: HeuristicWeights = DEFAULT_WEIGHTS, cache: bool = True):
        self.weights = weights
        self._cache: Optional[dict] = {} if cache else None

    def solve_all_best(
        self, state: GameState, mask: MoveMask = EMPTY_MASK
    ) -> tuple[tuple[ScoredMove, ...], tuple[ScoredMove, ...]]:
        """Score every valid move; return (all optima, full descending ranking)."""
        mask_bits = 0
        for mv in mask:
            mask_bits |= 1 << (int(mv.piece) * NUM_SQUARES + mv.at.index)
        key = None
        if self._cache is not None:
            key = (state.board, state.pools, state.to_move, mask_bits)
            hit = self._cache.get(key)
            if hit is not None:
                return hit
        result = _solve(state, mask_bits, self.weights)
        if key is not None:
            self._cache[key] = result
        return result

    def solve_top_m(self, state: GameState, m: int) -> list[ScoredMove]:
        """The m best moves of the unmasked problem (fewer if fewer exist)."""
        if m < 1:
            raise ValueError("m must be >= 1")
        _best, ranking = self.solve_all_best(state, EMPTY_MASK)
        return list(ranking[:m])


def solve_all_best(
    state: GameState,
    mask: MoveMask = EMPTY_MASK,
    weights: HeuristicWeights = DEFAULT_WEIGHTS,
) -> tuple[list[ScoredMove], list[ScoredMove]]:
    best, ranking = CopMoveSolver(weights, cache=False).solve_all_best(state, mask)
    return list(best), list(ranking)


def solve_top_m(
    state: GameState, m: int, weights: HeuristicWeights = DEFAULT_WEIGHTS
) -> list[ScoredMove]:
    return CopMoveSolver(weights, cache=False).solve_top_m(state, m)


def _solve(
    state: GameState, mask_bits: int, weights: HeuristicWeights
) -> tuple[tuple[ScoredMove, ...], tuple[ScoredMove, ...]]:
    if state.phase is not Phase.PLACEMENT or state.result is not None:
        raise IllegalStateError("solver operates on non-terminal placement states")
    pool = state.pools[state.to_move - 1]
    free = ~state.board.occupied & FULL_BOARD
    kinds = [k for k, available in ((0, pool.small), (1, pool.large)) if available > 0]

    scored = []
    bits = free
    while bits:
        low = bits & -bits
        idx = low.bit_length() - 1
        bits ^= low
        for kind in kinds:
            if (mask_bits >> (kind * NUM_SQUARES + idx)) & 1:
                continue
            score = _score_candidate(state, kind, idx, weights)
            scored.append(ScoredMove(MOVES[kind][idx], score))
    if not scored:
        raise NoLegalMoveError("no unmasked legal move")

    # Stable sort keeps canonical (square, kind) order among equal scores.
    scored.sort(key=lambda sm: -sm.score)
    top = scored[0].score
    best = []
    for sm in scored:
        if sm.score != top:
            break
        best.append(sm)
    return tuple(best), tuple(scored)


def _score_candidate(
    state: GameState, kind: int, idx: int, weights: HeuristicWeights
) -> float:
    """Simulate one placement on raw masks and score it for the mover.

    Mirrors apply_move plus border-policy auto-resolution exactly (the
    property suite checks equivalence against the public path), without
    allocating intermediate states.
    """
    masks = list(state.board)
    pools = list(state.pools)
    mover = state.to_move
    _place_and_boop(masks, pools, mover, kind, idx)

    winner = _winner(masks, mover)
    if winner:
        return 1.0 if winner == mover else -1.0

    base = (mover - 1) * 2
    own = masks[base] | masks[base + 1]
    triples = _triples_of(own)
    removed = ()
    if triples:
        removed = triples[0] if len(triples) == 1 else _border_pick_triple(triples)
    elif own.bit_count() == PIECES_PER_PLAYER:
        removed = (_border_pick_single(own),)
    if removed:
        gained = 0
        for i in removed:
            bit = 1 << i
            if masks[base] & bit:
                masks[base] ^= bit
            else:
                masks[base + 1] ^= bit
            gained += 1
        pool = pools[mover - 1]
        pools[mover - 1] = Pool(pool.small, pool.large + gained)
        winner = _winner(masks, mover)
        if winner:
            return 1.0 if winner == mover else -1.0
    pool_large = (pools[0].large, pools[1].large)

    raw = _raw_score(
        masks[0], masks[1], masks[2], masks[3],
        pool_large[0], pool_large[1],
        mover, weights,
    )
    return _normalize(raw, weights)


def _border_pick_triple(triples: list[tuple[int, int, int]]) -> tuple[int, int, int]:
    best = triples[0]
    best_count = -1
    for tri in triples:
        count = (
            ((BORDER_MASK >> tri[0]) & 1)
            + ((BORDER_MASK >> tri[1]) & 1)
            + ((BORDER_MASK >> tri[2]) & 1)
        )
        if count > best_count:
            best, best_count = tri, count
    return best


def _border_pick_single(own: int) -> int:
    border_own = own & BORDER_MASK
    picked = border_own if border_own else own
    return (picked & -picked).bit_length() - 1
