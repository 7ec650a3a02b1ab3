"""Local play service: sessions of human-vs-agent games over a JSON API.

Endpoints (payload schemas in docs/service-api.md, shared with the web UI):

* ``POST /sessions`` — create a game against a configured agent
* ``GET /sessions/{id}`` — full public view of a session
* ``POST /sessions/{id}/move`` — submit the human's placement
* ``POST /sessions/{id}/decision`` — resolve the human's pending choice
* ``GET /sessions/{id}/record`` — download the finished game's record

The service never mutates game state except through engine operations.
Agent thinking runs on a worker thread off the request path; the session
view exposes a ``thinking`` flag and polling ``GET`` is always sufficient
to observe progress. Per-session actions are serialized by a lock, and a
human action posted while the agent is thinking is rejected, not queued.
"""

from __future__ import annotations

import json
import logging
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse, RedirectResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .config import ConfigError, agent_from_config
from .engine import (
    EngineError,
    GameState,
    Move,
    Phase,
    RemoveAlignment,
    apply_move,
    border_choice,
    initial_state,
    legal_moves,
    opponent,
    resolve_decision,
)
from .records import (
    GameRecord,
    GraduateEvent,
    PlaceEvent,
    RemoveEvent,
    record_to_json,
)
from .search import Agent, AgentConfig, with_budget

log = logging.getLogger(__name__)

DEFAULT_AGENT_BUDGET_S = 1.0


class SessionStatus(Enum):
    AWAITING_HUMAN = "awaiting_human"
    AWAITING_HUMAN_DECISION = "awaiting_human_decision"
    AGENT_THINKING = "agent_thinking"
    FINISHED = "finished"


@dataclass
class Session:
    id: str
    state: GameState
    human_seat: int
    agent: Agent
    agent_config: AgentConfig
    seed: int
    events: list = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    thinking: bool = False
    error: Optional[str] = None

    @property
    def agent_seat(self) -> int:
        return opponent(self.human_seat)

    def status(self) -> SessionStatus:
        if self.state.result is not None:
            return SessionStatus.FINISHED
        if self.thinking or self.state.to_move == self.agent_seat:
            return SessionStatus.AGENT_THINKING
        if self.state.phase is Phase.AWAITING_DECISION:
            return SessionStatus.AWAITING_HUMAN_DECISION
        return SessionStatus.AWAITING_HUMAN


class CreateSessionRequest(BaseModel):
    agent: str = "mcts+SEP"
    human_seat: int = 1
    budget_ms: Optional[float] = None
    budget_iters: Optional[int] = None
    seed: Optional[int] = None


class MoveRequest(BaseModel):
    move: str


class DecisionRequest(BaseModel):
    index: int


def session_view(session: Session) -> dict:
    state = session.state
    status = session.status()
    board = [
        {"square": sq.notation, "player": player, "kind": kind.letter}
        for sq, (player, kind) in state.board.cells().items()
    ]
    view = {
        "id": session.id,
        "status": status.value,
        "human_seat": session.human_seat,
        "agent_seat": session.agent_seat,
        "agent": session.agent_config.label,
        "to_move": state.to_move,
        "ply": state.ply,
        "board": board,
        "pools": {
            str(p): {"small": state.pool_of(p).small, "large": state.pool_of(p).large}
            for p in (1, 2)
        },
        "winner": state.result,
        "thinking": session.thinking,
        "legal_moves": [],
        "choices": [],
        "history": [e.to_obj() for e in session.events],
        "error": session.error,
    }
    if status is SessionStatus.AWAITING_HUMAN:
        view["legal_moves"] = [m.notation for m in legal_moves(state)]
    elif status is SessionStatus.AWAITING_HUMAN_DECISION:
        view["choices"] = [
            _choice_view(i, choice) for i, choice in enumerate(state.choices)
        ]
    return view


def _choice_view(index: int, choice) -> dict:
    if isinstance(choice, RemoveAlignment):
        return {
            "index": index,
            "type": "remove",
            "squares": [sq.notation for sq in choice.squares],
        }
    return {"index": index, "type": "graduate", "square": choice.square.notation}


class SessionStore:
    """In-memory session registry plus the agent worker pool."""

    def __init__(self, config: Optional[dict] = None, record_dir: Optional[Path] = None):
        self.config = config or {}
        self.sessions: dict[str, Session] = {}
        self.registry_lock = threading.Lock()
        self.executor = ThreadPoolExecutor(max_workers=2, thread_name_prefix="agent")
        self.record_dir = record_dir

    def create(self, req: CreateSessionRequest) -> Session:
        if req.human_seat not in (1, 2):
            raise ConfigError("human_seat must be 1 or 2")
        try:
            cfg = agent_from_config(req.agent, self.config, seed=req.seed)
        except ConfigError:
            raise
        if req.budget_iters is not None:
            cfg = with_budget(cfg, budget_iters=req.budget_iters)
        elif req.budget_ms is not None:
            cfg = with_budget(cfg, budget_s=req.budget_ms / 1000.0)
        elif cfg.params.budget_iters is None and cfg.params.budget_s is None:
            cfg = with_budget(cfg, budget_s=DEFAULT_AGENT_BUDGET_S)
        seed = req.seed if req.seed is not None else uuid.uuid4().int % (1 << 32)
        session = Session(
            id=uuid.uuid4().hex[:12],
            state=initial_state(),
            human_seat=req.human_seat,
            agent=Agent(cfg, seed),
            agent_config=cfg,
            seed=seed,
        )
        with self.registry_lock:
            self.sessions[session.id] = session
        if session.state.to_move == session.agent_seat:
            self._schedule_agent(session)
        return session

    def get(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"no session {session_id}")
        return session

    def submit_move(self, session: Session, notation: str) -> None:
        with session.lock:
            status = session.status()
            if status is not SessionStatus.AWAITING_HUMAN:
                raise HTTPException(
                    status_code=409, detail=f"not awaiting a placement ({status.value})"
                )
            try:
                move = Move.parse(notation)
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            try:
                nxt = apply_move(session.state, move)
            except EngineError as exc:
                raise HTTPException(status_code=409, detail=str(exc)) from exc
            session.events.append(PlaceEvent(session.human_seat, move))
            session.state = nxt
        self._after_human_action(session)

    def submit_decision(self, session: Session, index: int) -> None:
        with session.lock:
            status = session.status()
            if status is not SessionStatus.AWAITING_HUMAN_DECISION:
                raise HTTPException(
                    status_code=409, detail=f"no decision pending ({status.value})"
                )
            if not 0 <= index < len(session.state.choices):
                raise HTTPException(status_code=422, detail=f"no choice #{index}")
            choice = session.state.choices[index]
            session.state = resolve_decision(session.state, choice)
            session.events.append(_choice_event(session.human_seat, choice))
        self._after_human_action(session)

    def _after_human_action(self, session: Session) -> None:
        if session.state.result is None and session.state.to_move == session.agent_seat:
            self._schedule_agent(session)
        elif session.state.result is not None:
            self._persist(session)

    def _schedule_agent(self, session: Session) -> None:
        with session.lock:
            if session.thinking:
                return
            session.thinking = True
        self.executor.submit(self._agent_turn, session)

    def _agent_turn(self, session: Session) -> None:
        try:
            move = session.agent.choose(session.state)
            with session.lock:
                seat = session.agent_seat
                session.events.append(PlaceEvent(seat, move))
                session.state = apply_move(session.state, move)
                while session.state.phase is Phase.AWAITING_DECISION:
                    choice = border_choice(session.state.choices, session.state.board)
                    session.events.append(_choice_event(seat, choice))
                    session.state = resolve_decision(session.state, choice)
        except Exception as exc:  # surfaced in the session view
            log.exception("agent turn failed in session %s", session.id)
            with session.lock:
                session.error = f"agent failed: {exc}"
        finally:
            with session.lock:
                session.thinking = False
            if session.state.result is not None:
                self._persist(session)

    def record_for(self, session: Session) -> GameRecord:
        if session.state.result is None:
            raise HTTPException(status_code=409, detail="game not finished")
        p1, p2 = (
            (None, session.agent_config)
            if session.human_seat == 1
            else (session.agent_config, None)
        )
        return GameRecord(
            seed=session.seed,
            player1=p1,
            player2=p2,
            events=tuple(session.events),
            winner=session.state.result,
            ply_count=session.state.ply,
        )

    def _persist(self, session: Session) -> None:
        if self.record_dir is None:
            return
        try:
            self.record_dir.mkdir(parents=True, exist_ok=True)
            path = self.record_dir / f"session_{session.id}.json"
            path.write_text(record_to_json(self.record_for(session)), encoding="utf-8")
        except Exception:
            log.exception("failed to persist record for session %s", session.id)


def _choice_event(player: int, choice) -> object:
    if isinstance(choice, RemoveAlignment):
        return RemoveEvent(player, choice.squares)
    return GraduateEvent(player, choice.square)


def find_ui_dir() -> Optional[str]:
    """Locate the built web UI when running from a repo checkout."""
    here = Path(__file__).resolve()
    for base in (Path.cwd(), here.parents[2]):
        candidate = base / "frontend" / "dist"
        if (candidate / "index.html").exists():
            return str(candidate)
    return None


def create_app(
    config: Optional[dict] = None,
    ui_dir: Optional[str] = None,
    record_dir: Optional[str] = None,
) -> FastAPI:
    app = FastAPI(title="boop. play service")
    store = SessionStore(
        config=config, record_dir=Path(record_dir) if record_dir else None
    )
    app.state.store = store

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        try:
            session = store.create(req)
        except ConfigError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return session_view(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return session_view(store.get(session_id))

    @app.post("/sessions/{session_id}/move")
    def post_move(session_id: str, req: MoveRequest):
        session = store.get(session_id)
        store.submit_move(session, req.move)
        return session_view(session)

    @app.post("/sessions/{session_id}/decision")
    def post_decision(session_id: str, req: DecisionRequest):
        session = store.get(session_id)
        store.submit_decision(session, req.index)
        return session_view(session)

    @app.get("/sessions/{session_id}/record")
    def get_record(session_id: str):
        session = store.get(session_id)
        record = store.record_for(session)
        return JSONResponse(content=json.loads(record_to_json(record)))

    if ui_dir is not None:
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

        @app.get("/", include_in_schema=False)
        def root():
            return RedirectResponse(url="/ui/")

    return app
