"""Game records: a stable JSON format, round-trip I/O, and replay.

One record describes one complete game: both agent configurations, the
base seed, every half-move in ``S@c3`` notation interleaved with the
removal/graduation decisions that resolved each turn, the winner, and
the placement count. The serialization is canonical (sorted keys, fixed
separators, trailing newline), so identical records produce identical
bytes. Field names are part of the package's public interface; see
docs/record-format.md.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .engine import (
    GameState,
    GraduateOne,
    Move,
    Phase,
    RemoveAlignment,
    Square,
    apply_move,
    initial_state,
    resolve_decision,
)
from .heuristic import AlignmentWeights, HeuristicWeights
from .search import AgentConfig, SearchParams, parse_agent_spec

FORMAT = "boop-record/1"


class RecordError(Exception):
    """A record file failed to parse or validate."""


class ReplayError(RecordError):
    """A recorded event is illegal when replayed through the engine."""


@dataclass(frozen=True)
class PlaceEvent:
    player: int
    move: Move

    def to_obj(self) -> dict:
        return {"type": "place", "player": self.player, "move": self.move.notation}


@dataclass(frozen=True)
class RemoveEvent:
    player: int
    squares: tuple[Square, Square, Square]

    def to_obj(self) -> dict:
        return {
            "type": "remove",
            "player": self.player,
            "squares": [sq.notation for sq in self.squares],
        }


@dataclass(frozen=True)
class GraduateEvent:
    player: int
    square: Square

    def to_obj(self) -> dict:
        return {"type": "graduate", "player": self.player, "square": self.square.notation}


GameEvent = Union[PlaceEvent, RemoveEvent, GraduateEvent]


@dataclass(frozen=True)
class GameRecord:
    """One finished game. A ``None`` player config marks a human seat."""

    seed: int
    player1: Optional[AgentConfig]
    player2: Optional[AgentConfig]
    events: tuple[GameEvent, ...]
    winner: int
    ply_count: int
    anomaly: Optional[str] = None

    def to_obj(self) -> dict:
        return {
            "format": FORMAT,
            "seed": self.seed,
            "players": {
                "1": agent_config_to_obj(self.player1),
                "2": agent_config_to_obj(self.player2),
            },
            "events": [e.to_obj() for e in self.events],
            "winner": self.winner,
            "ply_count": self.ply_count,
            "anomaly": self.anomaly,
        }


def agent_config_to_obj(config: Optional[AgentConfig]) -> dict:
    if config is None:
        return {"agent": "human"}
    p = config.params
    return {
        "agent": config.label,
        "seed": config.seed,
        "params": {
            "playout_length": p.playout_length,
            "preselect": p.preselect,
            "discount": p.discount,
            "c_explore": p.c_explore,
            "budget_s": p.budget_s,
            "budget_iters": p.budget_iters,
        },
        "weights": weights_to_obj(config.weights),
    }


def agent_config_from_obj(obj: dict) -> Optional[AgentConfig]:
    try:
        if obj["agent"] == "human":
            return None
        params = SearchParams(**obj["params"])
        weights = weights_from_obj(obj["weights"])
        return parse_agent_spec(
            obj["agent"], params=params, weights=weights, seed=obj.get("seed")
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise RecordError(f"bad agent config: {exc}") from exc


def weights_to_obj(w: HeuristicWeights) -> dict:
    return {
        "count": w.count,
        "center": w.center,
        "border": w.border,
        "large_owned": w.large_owned,
        "align2": {"all_small": w.align2.all_small, "mixed": w.align2.mixed,
                   "all_large": w.align2.all_large},
        "align3": {"all_small": w.align3.all_small, "mixed": w.align3.mixed,
                   "all_large": w.align3.all_large},
    }


def weights_from_obj(obj: dict) -> HeuristicWeights:
    try:
        return HeuristicWeights(
            count=float(obj["count"]),
            center=float(obj["center"]),
            border=float(obj["border"]),
            large_owned=float(obj["large_owned"]),
            align2=AlignmentWeights(**obj["align2"]),
            align3=AlignmentWeights(**obj["align3"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise RecordError(f"bad weight table: {exc}") from exc


def record_to_json(record: GameRecord) -> str:
    return json.dumps(record.to_obj(), sort_keys=True, indent=2) + "\n"


def record_from_json(text: str) -> GameRecord:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RecordError(f"not valid JSON (line {exc.lineno}, col {exc.colno})") from exc
    return record_from_obj(obj)


def record_from_obj(obj: dict) -> GameRecord:
    if not isinstance(obj, dict) or obj.get("format") != FORMAT:
        raise RecordError(f"unsupported record format: {obj.get('format')!r}")
    try:
        events = tuple(_event_from_obj(e, i) for i, e in enumerate(obj["events"]))
        return GameRecord(
            seed=int(obj["seed"]),
            player1=agent_config_from_obj(obj["players"]["1"]),
            player2=agent_config_from_obj(obj["players"]["2"]),
            events=events,
            winner=int(obj["winner"]),
            ply_count=int(obj["ply_count"]),
            anomaly=obj.get("anomaly"),
        )
    except KeyError as exc:
        raise RecordError(f"missing record field: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise RecordError(f"malformed record field: {exc}") from exc


def _event_from_obj(obj: dict, index: int) -> GameEvent:
    try:
        kind = obj["type"]
        player = int(obj["player"])
        if kind == "place":
            return PlaceEvent(player, Move.parse(obj["move"]))
        if kind == "remove":
            squares = tuple(Square.parse(sq) for sq in obj["squares"])
            if len(squares) != 3:
                raise ValueError("remove event needs exactly 3 squares")
            return RemoveEvent(player, squares)
        if kind == "graduate":
            return GraduateEvent(player, Square.parse(obj["square"]))
        raise ValueError(f"unknown event type {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        raise RecordError(f"event {index}: {exc}") from exc


def write_record(record: GameRecord, path: Union[str, Path]) -> None:
    Path(path).write_text(record_to_json(record), encoding="utf-8")


def read_record(path: Union[str, Path]) -> GameRecord:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise RecordError(f"cannot read {path}: {exc}") from exc
    return record_from_json(text)


def replay_record(record: GameRecord) -> GameState:
    """Drive the engine through every recorded event and verify the outcome.

    Raises :class:`ReplayError` naming the offending event when a move or
    decision is illegal, an event arrives in the wrong phase, or the final
    result disagrees with the record.
    """
    state = initial_state()
    for i, event in enumerate(record.events):
        where = f"event {i} (ply {state.ply + 1})"
        if state.result is not None:
            raise ReplayError(f"{where}: game already finished")
        if isinstance(event, PlaceEvent):
            if state.phase is not Phase.PLACEMENT:
                raise ReplayError(f"{where}: placement while a decision is pending")
            if event.player != state.to_move:
                raise ReplayError(
                    f"{where}: player {event.player} placed out of turn"
                )
            try:
                state = apply_move(state, event.move)
            except Exception as exc:
                raise ReplayError(f"{where}: {exc}") from exc
        else:
            if state.phase is not Phase.AWAITING_DECISION:
                raise ReplayError(f"{where}: decision without a pending choice")
            if event.player != state.to_move:
                raise ReplayError(f"{where}: player {event.player} decided out of turn")
            if isinstance(event, RemoveEvent):
                choice = RemoveAlignment(event.squares)
            else:
                choice = GraduateOne(event.square)
            try:
                state = resolve_decision(state, choice)
            except Exception as exc:
                raise ReplayError(f"{where}: {exc}") from exc
    if record.anomaly is None:
        if state.result != record.winner:
            raise ReplayError(
                f"final result {state.result} disagrees with recorded winner {record.winner}"
            )
        if state.ply != record.ply_count:
            raise ReplayError(
                f"replayed {state.ply} plies, record claims {record.ply_count}"
            )
    return state
