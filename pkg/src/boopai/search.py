"""UCT search with optional solver guidance, plus the baseline agents.

Three independent hooks replace random choice with a complete solve of
the move-selection problem:

* selection pre-masking (``solver_selection``): the root's candidate set
  is narrowed to the ``m`` best solver moves; everything else is masked
  and never visited or expanded,
* guided expansion (``solver_expansion``): the child added to the tree is
  drawn uniformly among the solver optima over still-unexplored moves,
* guided playouts (``solver_playout``): each playout move is drawn
  uniformly among the solver optima for the playout state, and the
  playout returns a discounted, length-normalized sum of move scores
  instead of a plain win/loss signal.

With all three hooks off the search is a plain UCT; the ``vanilla`` agent
kind is exactly that configuration. The ``heuristic`` agent skips the
tree entirely and plays a uniform draw among the solver optima.

Rewards live in [-1, 1]. A node's accumulated mean is always expressed
from the point of view of the player who made the move into that node;
backpropagation alternates the reward sign on the way to the root, so
UCB maximization is correct for both players.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Sequence

from .engine import (
    GameState,
    IllegalStateError,
    Move,
    apply_and_resolve,
    legal_moves,
)
from .heuristic import DEFAULT_WEIGHTS, HeuristicWeights
from .solver import EMPTY_MASK, CopMoveSolver


@dataclass(frozen=True)
class SearchParams:
    """Knobs of one search: playout cap, root width, discount, budget."""

    playout_length: int = 20          # max moves simulated per playout (k)
    preselect: int = 5                # root candidates kept when pre-masking (m)
    discount: float = 0.9             # per-step reward discount (d)
    c_explore: float = math.sqrt(2.0)
    budget_s: Optional[float] = 1.0   # wall-clock budget per move
    budget_iters: Optional[int] = None  # fixed iteration budget (overrides time)

    def __post_init__(self):
        if self.playout_length < 1:
            raise ValueError("playout_length must be >= 1")
        if self.preselect < 1:
            raise ValueError("preselect must be >= 1")
        if not 0.0 < self.discount <= 1.0:
            raise ValueError("discount must be in (0, 1]")
        if self.budget_iters is not None:
            if self.budget_iters < 1:
                raise ValueError("budget_iters must be >= 1")
        elif self.budget_s is None or self.budget_s <= 0:
            raise ValueError("need a positive time or iteration budget")


class AgentKind(Enum):
    VANILLA = "vanilla"
    HEURISTIC = "heuristic"
    MCTS_PLUS = "mcts+"


@dataclass(frozen=True)
class AgentConfig:
    kind: AgentKind = AgentKind.MCTS_PLUS
    solver_selection: bool = False
    solver_expansion: bool = False
    solver_playout: bool = False
    params: SearchParams = field(default_factory=SearchParams)
    weights: HeuristicWeights = DEFAULT_WEIGHTS
    seed: Optional[int] = None

    @property
    def label(self) -> str:
        if self.kind is AgentKind.MCTS_PLUS:
            letters = "".join(
                letter
                for letter, on in (
                    ("S", self.solver_selection),
                    ("E", self.solver_expansion),
                    ("P", self.solver_playout),
                )
                if on
            )
            return f"mcts+{letters}"
        return self.kind.value


def parse_agent_spec(spec: str, **overrides) -> AgentConfig:
    """Build a config from a spec string: ``vanilla``, ``heuristic``,
    or ``mcts+`` followed by any of the letters S, E, P."""
    text = spec.strip().lower()
    if text == "vanilla":
        return AgentConfig(kind=AgentKind.VANILLA, **overrides)
    if text == "heuristic":
        return AgentConfig(kind=AgentKind.HEURISTIC, **overrides)
    if text.startswith("mcts+"):
        letters = set(text[len("mcts+"):])
        if not letters <= {"s", "e", "p"}:
            raise ValueError(f"unknown agent spec {spec!r}")
        return AgentConfig(
            kind=AgentKind.MCTS_PLUS,
            solver_selection="s" in letters,
            solver_expansion="e" in letters,
            solver_playout="p" in letters,
            **overrides,
        )
    raise ValueError(f"unknown agent spec {spec!r}")


class SearchNode:
    """One tree node: statistics plus the state it represents.

    ``mover`` is the player who made ``move`` (None at the root). The mean
    ``score_sum / visits`` estimates the node's value for ``mover``.
    """

    __slots__ = (
        "move", "state", "parent", "children",
        "visits", "score_sum", "terminal", "untried", "mover",
    )

    def __init__(
        self,
        state: GameState,
        move: Optional[Move] = None,
        parent: Optional["SearchNode"] = None,
        candidates: Optional[Sequence[Move]] = None,
    ):
        self.move = move
        self.state = state
        self.parent = parent
        self.children: list[SearchNode] = []
        self.visits = 0
        self.score_sum = 0.0
        self.terminal = state.result is not None
        self.mover = None if parent is None else parent.state.to_move
        if self.terminal:
            self.untried: list[Move] = []
        elif candidates is not None:
            self.untried = list(candidates)
        else:
            self.untried = legal_moves(state)

    @property
    def mean(self) -> float:
        return self.score_sum / self.visits

    def child_moves(self) -> frozenset[Move]:
        return frozenset(c.move for c in self.children)


def select(root: SearchNode, params: SearchParams) -> tuple[SearchNode, list[SearchNode]]:
    """UCB1 descent to a terminal node or one with unexpanded candidates.

    Masked moves were never added to a node's candidate list, so they can
    never be descended into. Unvisited children cannot occur below a node
    that is fully expanded, because expansion immediately backpropagates
    through the new child.
    """
    node = root
    path = [node]
    c = params.c_explore
    while not node.terminal and not node.untried:
        log_parent = math.log(node.visits)
        best, best_value = None, -math.inf
        for child in node.children:
            value = child.score_sum / child.visits + c * math.sqrt(
                log_parent / child.visits
            )
            if value > best_value:
                best, best_value = child, value
        node = best
        path.append(node)
    return node, path


def expand(
    node: SearchNode,
    agent: AgentConfig,
    rng: random.Random,
    solver: Optional[CopMoveSolver] = None,
) -> SearchNode:
    """Attach one unexplored child; solver-guided when configured."""
    if node.terminal or not node.untried:
        raise IllegalStateError("node has no unexpanded move")
    if agent.solver_expansion:
        if solver is None:
            solver = CopMoveSolver(agent.weights)
        mask = frozenset(legal_moves(node.state)) - frozenset(node.untried)
        best, _ = solver.solve_all_best(node.state, mask)
        move = best[rng.randrange(len(best))].move
        node.untried.remove(move)
    else:
        move = node.untried.pop(rng.randrange(len(node.untried)))
    child = SearchNode(apply_and_resolve(node.state, move), move=move, parent=node)
    node.children.append(child)
    return child


def discounted_playout_reward(
    move_scores: Sequence[float], discount: float, terminal: Optional[float] = None
) -> float:
    """Combine per-move scores into one playout reward.

    The i-th simulated move (1-based) contributes ``discount**i`` times its
    score; a terminal outcome contributes its full +-1 undiscounted. The
    sum is divided by the number of simulated moves.
    """
    steps = len(move_scores) + (0 if terminal is None else 1)
    if steps == 0:
        raise ValueError("empty playout")
    total = sum(discount ** i * s for i, s in enumerate(move_scores, start=1))
    if terminal is not None:
        total += terminal
    return total / steps


def playout(
    state: GameState,
    agent: AgentConfig,
    rng: Optional[random.Random] = None,
    perspective: Optional[int] = None,
    solver: Optional[CopMoveSolver] = None,
    ply_cap: int = 1000,
) -> float:
    """Simulate from ``state``; the reward is for ``perspective`` (default:
    the player to move) and always lies in [-1, 1].

    Solver-guided playouts run at most ``playout_length`` moves, each drawn
    uniformly among the solver optima, and return the discounted mean of
    the chosen moves' scores (terminal outcomes count +-1, undiscounted).
    Unguided playouts play uniform random legal moves until the game ends
    and return the terminal score; hitting the ply cap scores 0.
    """
    if state.result is not None:
        raise IllegalStateError("playout requires a non-terminal state")
    if rng is None:
        rng = random.Random(agent.seed)
    if perspective is None:
        perspective = state.to_move

    if agent.solver_playout:
        if solver is None:
            solver = CopMoveSolver(agent.weights)
        scores: list[float] = []
        terminal = None
        gs = state
        for _ in range(agent.params.playout_length):
            best, _ranking = solver.solve_all_best(gs, EMPTY_MASK)
            pick = best[rng.randrange(len(best))]
            mover = gs.to_move
            gs = apply_and_resolve(gs, pick.move)
            if gs.result is not None:
                terminal = 1.0 if gs.result == perspective else -1.0
                break
            # The solver scored the move for its mover; reuse it for the
            # searching player's perspective via antisymmetry.
            scores.append(pick.score if mover == perspective else -pick.score)
        return discounted_playout_reward(scores, agent.params.discount, terminal)

    gs = state
    plies = 0
    while gs.result is None and plies < ply_cap:
        moves = legal_moves(gs)
        gs = apply_and_resolve(gs, moves[rng.randrange(len(moves))])
        plies += 1
    if gs.result is None:
        return 0.0
    return 1.0 if gs.result == perspective else -1.0


def backpropagate(leaf: SearchNode, reward: float) -> None:
    """Add a reward along the path to the root, alternating its sign.

    ``reward`` is expressed from the perspective of the player who moved
    into ``leaf``; each ancestor stores it from its own mover's view.
    """
    node = leaf
    sign = 1.0
    while node is not None:
        node.visits += 1
        node.score_sum += sign * reward
        sign = -sign
        node = node.parent


def best_ratio(root: SearchNode, candidates: Sequence[Move]) -> list[Move]:
    """All candidate root moves with the maximal mean reward.

    Unvisited candidates are excluded; at least one candidate must have
    been visited.
    """
    wanted = set(candidates)
    visited = [c for c in root.children if c.visits > 0 and c.move in wanted]
    if not visited:
        raise IllegalStateError("no visited candidate at the root")
    top = max(c.mean for c in visited)
    return [c.move for c in visited if c.mean == top]


def choose_move(
    state: GameState,
    agent: AgentConfig,
    rng: Optional[random.Random] = None,
    debug: bool = False,
) -> Move:
    """Pick a move for the player to move, honoring the agent's budget.

    Deterministic for a fixed seed and a fixed iteration budget.
    """
    if state.result is not None:
        raise IllegalStateError("game is finished")
    moves = legal_moves(state)
    if not moves:
        raise IllegalStateError("no legal move")
    if rng is None:
        rng = random.Random(agent.seed)
    if len(moves) == 1:
        return moves[0]

    if agent.kind is AgentKind.HEURISTIC:
        best, _ = CopMoveSolver(agent.weights).solve_all_best(state, EMPTY_MASK)
        return best[rng.randrange(len(best))].move

    return _run_mcts(state, agent, rng, moves, debug=debug)


def _run_mcts(
    state: GameState,
    agent: AgentConfig,
    rng: random.Random,
    moves: list[Move],
    debug: bool = False,
) -> Move:
    params = agent.params
    me = state.to_move
    solver = CopMoveSolver(agent.weights)

    if agent.solver_selection:
        preselected = solver.solve_top_m(state, params.preselect)
        candidates = [sm.move for sm in preselected]
    else:
        preselected = None
        candidates = moves

    root = SearchNode(state, candidates=candidates)
    deadline = None
    if params.budget_iters is None:
        deadline = time.monotonic() + params.budget_s

    iterations = 0
    while True:
        node, _path = select(root, params)
        if node.terminal:
            reward = 1.0 if node.state.result == node.mover else -1.0
            backpropagate(node, reward)
        else:
            child = expand(node, agent, rng, solver)
            if debug:
                _verify_expansion(node, child, agent)
            if child.terminal:
                reward_me = 1.0 if child.state.result == me else -1.0
            else:
                reward_me = playout(
                    child.state, agent, rng, perspective=me, solver=solver
                )
            backpropagate(child, reward_me if child.mover == me else -reward_me)
        iterations += 1
        if params.budget_iters is not None:
            if iterations >= params.budget_iters:
                break
        elif time.monotonic() >= deadline:
            break

    try:
        ratio_best = best_ratio(root, candidates)
    except IllegalStateError:
        # Pathologically small budgets only: fall back to the solver
        # ranking when available, else to a uniform draw.
        if preselected is not None:
            return preselected[0].move
        return candidates[rng.randrange(len(candidates))]
    return ratio_best[rng.randrange(len(ratio_best))]


def _verify_expansion(node: SearchNode, child: SearchNode, agent: AgentConfig) -> None:
    """Debug-mode checks: edge legality, and solver-optimality under guidance."""
    parent_moves = legal_moves(node.state)
    assert child.move in parent_moves, "expanded an illegal move"
    if agent.solver_expansion:
        mask = frozenset(parent_moves) - frozenset(node.untried) - {child.move}
        fresh = CopMoveSolver(agent.weights, cache=False)
        best, _ = fresh.solve_all_best(node.state, mask)
        assert child.move in {sm.move for sm in best}, "expansion not solver-optimal"


class Agent:
    """A playing agent: a config plus its own random stream.

    One instance drives one side of one game; `choose` is called once per
    placement. Decision phases are resolved by the game driver with the
    shared border policy, not by the agent.
    """

    def __init__(self, config: AgentConfig, seed: Optional[int] = None):
        self.config = config
        self.rng = random.Random(config.seed if seed is None else seed)

    def choose(self, state: GameState) -> Move:
        return choose_move(state, self.config, self.rng)


def with_budget(
    config: AgentConfig,
    budget_s: Optional[float] = None,
    budget_iters: Optional[int] = None,
) -> AgentConfig:
    """Copy a config with a replaced budget (time xor iterations)."""
    if (budget_s is None) == (budget_iters is None):
        raise ValueError("specify exactly one of budget_s, budget_iters")
    params = replace(
        config.params, budget_s=budget_s, budget_iters=budget_iters
    )
    return replace(config, params=params)
