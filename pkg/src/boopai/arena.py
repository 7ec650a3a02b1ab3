"""Agent-vs-agent experiment harness.

Runs series of complete games between two configured agents, alternating
seats by default, and aggregates per-seat win counts into tables. Every
game is recorded in the replayable JSON format of :mod:`boopai.records`.

Determinism: the game at index ``i`` uses seed ``base_seed + i``; each
side's random stream is seeded from the game seed and its seat (P1 gets
``2*seed + 1``, P2 gets ``2*seed + 2``). With fixed-iteration budgets a
series is therefore bit-reproducible; wall-clock budgets follow the same
seeding but their outcomes depend on machine speed. Per-move wall-clock
statistics are collected alongside results and are not part of the
reproducible payload.

Games exceeding the ply cap are recorded as an anomaly and scored as a
loss for the player to move; they are never draws (and never observed in
practice).
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .engine import (
    Phase,
    RemoveAlignment,
    apply_move,
    border_choice,
    initial_state,
    opponent,
    resolve_decision,
)
from .records import (
    GameRecord,
    GraduateEvent,
    PlaceEvent,
    RemoveEvent,
)
from .search import Agent, AgentConfig, with_budget

DEFAULT_PLY_CAP = 1000


class SeatPolicy(Enum):
    ALTERNATE = "alternate"
    FIXED = "fixed"


@dataclass(frozen=True)
class MatchSpec:
    agent_a: AgentConfig
    agent_b: AgentConfig
    games: int
    seat_policy: SeatPolicy = SeatPolicy.ALTERNATE
    base_seed: int = 0
    budget_s: Optional[float] = None       # optional override for both agents
    budget_iters: Optional[int] = None
    jobs: int = 1
    ply_cap: int = DEFAULT_PLY_CAP

    def __post_init__(self):
        if self.games < 1:
            raise ValueError("games must be >= 1")
        if self.budget_s is not None and self.budget_iters is not None:
            raise ValueError("give at most one budget override")

    def resolved_configs(self) -> tuple[AgentConfig, AgentConfig]:
        a, b = self.agent_a, self.agent_b
        if self.budget_s is not None:
            a = with_budget(a, budget_s=self.budget_s)
            b = with_budget(b, budget_s=self.budget_s)
        elif self.budget_iters is not None:
            a = with_budget(a, budget_iters=self.budget_iters)
            b = with_budget(b, budget_iters=self.budget_iters)
        return a, b

    def seats_for_game(self, index: int) -> tuple[str, str]:
        """('a', 'b') means agent A plays P1. Alternation starts with A as P1."""
        if self.seat_policy is SeatPolicy.ALTERNATE and index % 2 == 1:
            return ("b", "a")
        return ("a", "b")


@dataclass
class MoveTimeStats:
    moves: int = 0
    total_s: float = 0.0
    max_s: float = 0.0

    def add(self, seconds: float) -> None:
        self.moves += 1
        self.total_s += seconds
        if seconds > self.max_s:
            self.max_s = seconds

    def merge(self, other: "MoveTimeStats") -> None:
        self.moves += other.moves
        self.total_s += other.total_s
        self.max_s = max(self.max_s, other.max_s)

    @property
    def mean_s(self) -> float:
        return self.total_s / self.moves if self.moves else 0.0

    def to_obj(self) -> dict:
        return {
            "moves": self.moves,
            "mean_s": round(self.mean_s, 6),
            "max_s": round(self.max_s, 6),
        }


@dataclass
class MatchResult:
    spec: MatchSpec
    wins_a_as_p1: int = 0
    wins_a_as_p2: int = 0
    wins_b_as_p1: int = 0
    wins_b_as_p2: int = 0
    records: tuple[GameRecord, ...] = ()
    anomalies: int = 0
    move_times: dict = field(default_factory=dict)  # 'a'/'b' -> MoveTimeStats

    @property
    def games(self) -> int:
        return len(self.records)

    @property
    def wins_a(self) -> int:
        return self.wins_a_as_p1 + self.wins_a_as_p2

    @property
    def wins_b(self) -> int:
        return self.wins_b_as_p1 + self.wins_b_as_p2

    @property
    def win_rate_a(self) -> float:
        return self.wins_a / self.games if self.games else 0.0

    def to_obj(self, include_timing: bool = True) -> dict:
        a, b = self.spec.resolved_configs()
        obj = {
            "agent_a": a.label,
            "agent_b": b.label,
            "games": self.games,
            "wins_a_as_p1": self.wins_a_as_p1,
            "wins_a_as_p2": self.wins_a_as_p2,
            "wins_b_as_p1": self.wins_b_as_p1,
            "wins_b_as_p2": self.wins_b_as_p2,
            "wins_a": self.wins_a,
            "wins_b": self.wins_b,
            "win_rate_a": round(self.win_rate_a, 4),
            "anomalies": self.anomalies,
            "base_seed": self.spec.base_seed,
            "seat_policy": self.spec.seat_policy.value,
        }
        if include_timing:
            obj["move_times"] = {
                key: stats.to_obj() for key, stats in sorted(self.move_times.items())
            }
        return obj


def play_game(
    p1: AgentConfig,
    p2: AgentConfig,
    seed: int,
    ply_cap: int = DEFAULT_PLY_CAP,
) -> tuple[GameRecord, dict[int, MoveTimeStats]]:
    """One complete game; returns its record and per-seat move timings.

    Both agents resolve removal/graduation decisions with the shared
    border policy; each resolution is recorded as its own event.
    """
    agents = {1: Agent(p1, 2 * seed + 1), 2: Agent(p2, 2 * seed + 2)}
    timings = {1: MoveTimeStats(), 2: MoveTimeStats()}
    state = initial_state()
    events = []
    anomaly = None
    while state.result is None:
        if state.ply >= ply_cap and state.phase is Phase.PLACEMENT:
            anomaly = "ply-cap"
            break
        mover = state.to_move
        if state.phase is Phase.PLACEMENT:
            start = time.perf_counter()
            move = agents[mover].choose(state)
            timings[mover].add(time.perf_counter() - start)
            events.append(PlaceEvent(mover, move))
            state = apply_move(state, move)
        else:
            choice = border_choice(state.choices, state.board)
            if isinstance(choice, RemoveAlignment):
                events.append(RemoveEvent(mover, choice.squares))
            else:
                events.append(GraduateEvent(mover, choice.square))
            state = resolve_decision(state, choice)
    winner = state.result if anomaly is None else opponent(state.to_move)
    record = GameRecord(
        seed=seed,
        player1=p1,
        player2=p2,
        events=tuple(events),
        winner=winner,
        ply_count=state.ply,
        anomaly=anomaly,
    )
    return record, timings


def _run_one(args: tuple) -> tuple[int, GameRecord, dict]:
    spec, index = args
    cfg_a, cfg_b = spec.resolved_configs()
    p1_key, p2_key = spec.seats_for_game(index)
    p1 = cfg_a if p1_key == "a" else cfg_b
    p2 = cfg_a if p2_key == "a" else cfg_b
    record, timings = play_game(p1, p2, spec.base_seed + index, spec.ply_cap)
    keyed = {p1_key: timings[1], p2_key: timings[2]}
    return index, record, keyed


def run_series(spec: MatchSpec) -> MatchResult:
    """Play the whole series; independent games may run in parallel."""
    tasks = [(spec, i) for i in range(spec.games)]
    if spec.jobs > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            raw = list(pool.map(_run_one, tasks))
    else:
        raw = [_run_one(t) for t in tasks]
    raw.sort(key=lambda item: item[0])

    result = MatchResult(spec=spec)
    result.move_times = {"a": MoveTimeStats(), "b": MoveTimeStats()}
    records = []
    for index, record, timings in raw:
        p1_key, _p2_key = spec.seats_for_game(index)
        records.append(record)
        if record.anomaly is not None:
            result.anomalies += 1
        a_seat = 1 if p1_key == "a" else 2
        if record.winner == a_seat:
            if a_seat == 1:
                result.wins_a_as_p1 += 1
            else:
                result.wins_a_as_p2 += 1
        else:
            if a_seat == 1:
                result.wins_b_as_p2 += 1
            else:
                result.wins_b_as_p1 += 1
        for key, stats in timings.items():
            result.move_times[key].merge(stats)
    result.records = tuple(records)
    return result


# ---------------------------------------------------------------------------
# Summaries
# ---------------------------------------------------------------------------

SUMMARY_COLUMNS = (
    "agent",
    "opponent",
    "games",
    "wins_as_p1",
    "wins_as_p2",
    "win_rate",
    "p1_wins_total",
    "p2_wins_total",
    "anomalies",
)


def summarize(results: list[MatchResult]) -> list[dict]:
    """One row per match: agent A's per-seat wins and overall rate.

    ``p1_wins_total``/``p2_wins_total`` count wins by seat regardless of
    agent, which is the quantity of interest for mirror matches.
    """
    if not results:
        raise ValueError("no results to summarize")
    rows = []
    for res in results:
        a, b = res.spec.resolved_configs()
        p1_total = res.wins_a_as_p1 + res.wins_b_as_p1
        p2_total = res.wins_a_as_p2 + res.wins_b_as_p2
        rows.append(
            {
                "agent": a.label,
                "opponent": b.label,
                "games": res.games,
                "wins_as_p1": res.wins_a_as_p1,
                "wins_as_p2": res.wins_a_as_p2,
                "win_rate": round(res.win_rate_a, 4),
                "p1_wins_total": p1_total,
                "p2_wins_total": p2_total,
                "anomalies": res.anomalies,
            }
        )
    return rows


def render_table(rows: list[dict]) -> str:
    """Aligned text rendering of summary rows."""
    headers = list(SUMMARY_COLUMNS)
    table = [headers] + [[str(row[h]) for h in headers] for row in rows]
    widths = [max(len(r[i]) for r in table) for i in range(len(headers))]
    lines = []
    for i, row in enumerate(table):
        lines.append("  ".join(cell.ljust(widths[j]) for j, cell in enumerate(row)))
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def summary_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SUMMARY_COLUMNS)
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def summary_json(rows: list[dict]) -> str:
    return json.dumps(rows, sort_keys=True, indent=2) + "\n"
