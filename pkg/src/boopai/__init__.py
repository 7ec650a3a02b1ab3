"""boop. game engine, move-optimization solver, search agents, and tooling."""

from .engine import (
    Board,
    DecisionChoice,
    GameState,
    GraduateOne,
    EngineError,
    IllegalChoiceError,
    IllegalMoveError,
    IllegalStateError,
    Move,
    Phase,
    PieceKind,
    Pool,
    RemoveAlignment,
    Square,
    apply_and_resolve,
    apply_move,
    border_choice,
    compute_boops,
    find_alignments,
    game_result,
    initial_state,
    legal_moves,
    opponent,
    resolve_decision,
    state_from_pieces,
)
from .heuristic import (
    DEFAULT_WEIGHTS,
    AlignmentWeights,
    HeuristicWeights,
    evaluate,
    terminal_score,
)
from .solver import (
    EMPTY_MASK,
    CopModel,
    CopMoveSolver,
    MoveMask,
    NoLegalMoveError,
    ScoredMove,
    build_model,
    solve_all_best,
    solve_top_m,
    valid_assignments,
)
from .search import (
    Agent,
    AgentConfig,
    AgentKind,
    SearchNode,
    SearchParams,
    backpropagate,
    best_ratio,
    choose_move,
    discounted_playout_reward,
    expand,
    parse_agent_spec,
    playout,
    select,
    with_budget,
)
from .arena import (
    MatchResult,
    MatchSpec,
    SeatPolicy,
    play_game,
    render_table,
    run_series,
    summarize,
)
from .records import (
    GameRecord,
    GraduateEvent,
    PlaceEvent,
    RecordError,
    RemoveEvent,
    ReplayError,
    read_record,
    record_from_json,
    record_to_json,
    replay_record,
    write_record,
)

__version__ = "0.1.0"
