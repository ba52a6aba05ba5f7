"""Authoritative HTTP game server.

All game truth lives here: the client submits block tests and asks for a
run; scores and timelines are computed server-side with a server-measured
setup time, persisted to an append-only JSON-lines event log, and can
always be recomputed from what was stored.  Mutant code is never exposed
before a session finishes.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Body, FastAPI, Header, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import engine, mutation
from .blocklang import preorder, to_jsonable
from .engine import stars
from .levels import Level, builtin_catalog


# ---------------------------------------------------------------------------
# Store
# ---------------------------------------------------------------------------

@dataclass
class PlayerRecord:
    player_id: str
    display_name: str


@dataclass
class ProgressRecord:
    best_total: int = 0
    best_stars: int = 0
    attempts: int = 0
    best_at: float = 0.0  # when the best total was first reached


@dataclass
class SessionRecord:
    session_id: str
    player_id: str
    level_id: str
    seed: int
    phase: str = "setup"  # setup -> running -> finished
    tests: tuple = ()
    block_count: int = 0
    setup_started_at: float = field(default_factory=time.time)
    run_requested_at: float | None = None
    result: dict | None = None


class GameStore:
    """In-memory state plus the append-only telemetry log.

    Progress and players are a fold over the log, so replaying it after a
    restart reconstructs them exactly.  Session state is ephemeral.
    """

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.log_path = self.data_dir / "events.jsonl"
        self.lock = threading.Lock()
        self.players: dict[str, PlayerRecord] = {}
        self.sessions: dict[str, SessionRecord] = {}
        self.progress: dict[tuple[str, str], ProgressRecord] = {}
        self._replay()

    # -- persistence ---------------------------------------------------------

    def _replay(self):
        if not self.log_path.exists():
            return
        with self.log_path.open(encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if line:
                    self._fold(json.loads(line))

    def append(self, player: str, level: str | None, event: str, payload: dict) -> dict:
        row = {
            "ts": time.time(),
            "player": player,
            "level": level,
            "event": event,
            "payload": payload,
        }
        with self.log_path.open("a", encoding="utf-8") as handle:
            handle.write(json.dumps(row, sort_keys=True) + "\n")
            handle.flush()
        self._fold(row)
        return row

    def _fold(self, row: dict):
        event = row["event"]
        if event == "player_created":
            payload = row["payload"]
            self.players[row["player"]] = PlayerRecord(row["player"], payload["displayName"])
        elif event == "game_finished":
            key = (row["player"], row["level"])
            record = self.progress.setdefault(key, ProgressRecord())
            record.attempts += 1
            total = row["payload"]["total"]
            if record.attempts == 1 or total > record.best_total:
                record.best_total = max(record.best_total, total)
                record.best_at = row["ts"]
            record.best_stars = stars(record.best_total)

    def read_log(self) -> list[dict]:
        if not self.log_path.exists():
            return []
        with self.log_path.open(encoding="utf-8") as handle:
            return [json.loads(line) for line in handle if line.strip()]


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _level_index() -> dict[str, Level]:
    return {level.id: level for level in builtin_catalog()}


def _is_unlocked(store: GameStore, level: Level, player_id: str | None) -> bool:
    if level.unlock is None:
        return True
    if player_id is None:
        return False
    record = store.progress.get((player_id, level.unlock.requires_level))
    return record is not None and record.best_total >= level.unlock.min_points


def _count_blocks(tests) -> int:
    """Number of placed blocks: every AST node of every test counts."""
    total = 0
    for item in tests:
        total += sum(1 for _ in preorder(item.test))
    return total


def _palette_view(level: Level) -> dict:
    attributes = {}
    for name, spec in level.schema.colors.items():
        attributes[name] = {"type": "color", "palette": list(spec.palette)}
    for name, spec in level.schema.counters.items():
        attributes[name] = {"type": "count", "role": spec.role}
    # The loop toolbox is richer: conditionals join plain assertions.
    return {
        "blocks": ["assertEq", "if"] if level.kind == "loop" else ["assertEq"],
        "attributes": attributes,
        "countLiterals": {"min": 0, "max": level.solver_bounds.literal_max},
        "tileCheck": level.kind == "base",
    }


def _level_summary(store: GameStore, level: Level, player_id: str | None) -> dict:
    record = store.progress.get((player_id, level.id)) if player_id else None
    return {
        "id": level.id,
        "kind": level.kind,
        "title": level.title,
        "locked": not _is_unlocked(store, level, player_id),
        "stars": record.best_stars if record else 0,
        "bestTotal": record.best_total if record else None,
        "attempts": record.attempts if record else 0,
        "unlock": level.unlock.to_jsonable() if level.unlock else None,
    }


def _public_level_view(level: Level) -> dict:
    """Everything the client may see during play: no mutant bodies or hints."""
    return {
        "id": level.id,
        "kind": level.kind,
        "title": level.title,
        "flavor": level.flavor,
        "board": level.board.to_jsonable(),
        "schema": {
            "colors": {
                name: {"palette": list(spec.palette), "initial": spec.initial}
                for name, spec in level.schema.colors.items()
            },
            "counters": {
                name: {"role": spec.role, **({"kind": spec.kind} if spec.kind else {})}
                for name, spec in level.schema.counters.items()
            },
        },
        "program": to_jsonable(level.program),
        "palette": _palette_view(level),
        "roster": {
            "healthy": len(level.roster.healthy),
            "mutants": len(level.roster.mutants),
            "spawnInterval": level.roster.spawn_interval,
        },
    }


def _mutant_reveal(level: Level, result) -> list[dict]:
    by_origin: dict[str, list[int]] = {}
    for outcome in result.outcomes:
        by_origin.setdefault(outcome.origin, []).append(outcome.critter_index)
    reveal = []
    for spec in level.mutant_catalog.mutants:
        mutated = mutation.apply_edits(level.program, spec.edits, level.schema, level.kind)
        reveal.append({
            "id": spec.id,
            "displayHint": spec.display_hint,
            "edits": [e.to_jsonable() for e in spec.edits],
            "program": to_jsonable(mutated),
            "critters": by_origin.get(spec.id, []),
        })
    return reveal


# ---------------------------------------------------------------------------
# Application
# ---------------------------------------------------------------------------

class CreatePlayer(BaseModel):
    displayName: str


class CreateSession(BaseModel):
    player: str
    level: str
    seed: int | None = None


def create_app(data_dir: str | Path | None = None, admin_token: str | None = None) -> FastAPI:
    data_dir = data_dir or os.environ.get("DATA_DIR", "critters-data")
    admin_token = admin_token if admin_token is not None else os.environ.get("ADMIN_TOKEN")
    store = GameStore(data_dir)
    app = FastAPI(title="critters", version="0.1.0")
    app.state.store = store
    # the browser client is served from a different origin
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def get_player(player_id: str | None, required: bool = True) -> PlayerRecord | None:
        if player_id is None:
            if required:
                raise HTTPException(404, "unknown player")
            return None
        player = store.players.get(player_id)
        if player is None and required:
            raise HTTPException(404, "unknown player")
        return player

    def get_level(level_id: str) -> Level:
        level = _level_index().get(level_id)
        if level is None:
            raise HTTPException(404, "unknown level")
        return level

    @app.post("/api/players")
    def create_player(body: CreatePlayer):
        player_id = secrets.token_hex(8)
        with store.lock:
            store.append(player_id, None, "player_created", {"displayName": body.displayName})
        return {"playerId": player_id, "displayName": body.displayName}

    @app.get("/api/levels")
    def list_levels(player: str | None = Query(default=None)):
        get_player(player, required=False)
        return [_level_summary(store, level, player) for level in builtin_catalog()]

    @app.get("/api/levels/{level_id}")
    def level_view(level_id: str, player: str | None = Query(default=None)):
        level = get_level(level_id)
        if not _is_unlocked(store, level, player):
            raise HTTPException(403, "level is locked")
        return _public_level_view(level)

    @app.post("/api/sessions")
    def create_session(body: CreateSession):
        get_player(body.player)
        level = get_level(body.level)
        if not _is_unlocked(store, level, body.player):
            raise HTTPException(403, "level is locked")
        session_id = secrets.token_hex(8)
        seed = body.seed if body.seed is not None else secrets.randbits(32)
        with store.lock:
            store.sessions[session_id] = SessionRecord(
                session_id=session_id,
                player_id=body.player,
                level_id=level.id,
                seed=seed,
            )
            store.append(body.player, level.id, "game_started", {"session": session_id})
        return {"sessionId": session_id, "seed": seed}

    def get_session(session_id: str) -> SessionRecord:
        session = store.sessions.get(session_id)
        if session is None:
            raise HTTPException(404, "unknown session")
        return session

    @app.put("/api/sessions/{session_id}/tests")
    def put_tests(session_id: str, body: dict = Body(...)):
        session = get_session(session_id)
        level = get_level(session.level_id)
        with store.lock:
            if session.phase != "setup":
                raise HTTPException(409, "tests are frozen once the game runs")
            try:
                tests = engine.parse_test_config(level, body)
            except engine.InvalidTestConfigError as exc:
                raise HTTPException(422, detail={
                    "message": "tests did not parse",
                    "diagnostics": [d.to_jsonable() for d in exc.diagnostics],
                }) from None
            diagnostics = engine.validate_tests(level, tests)
            if any(d.severity == "error" for d in diagnostics):
                raise HTTPException(422, detail={
                    "message": "tests are invalid",
                    "diagnostics": [d.to_jsonable() for d in diagnostics],
                })
            blocks = _count_blocks(tests)
            added = max(0, blocks - session.block_count)
            removed = max(0, session.block_count - blocks)
            if added:
                store.append(session.player_id, level.id, "test_block_added",
                             {"count": added, "session": session_id})
            if removed:
                store.append(session.player_id, level.id, "test_block_removed",
                             {"count": removed, "session": session_id})
            session.tests = tests
            session.block_count = blocks
        return {"ok": True, "blocks": blocks}

    @app.post("/api/sessions/{session_id}/run")
    def run_session(session_id: str):
        session = get_session(session_id)
        level = get_level(session.level_id)
        with store.lock:
            if session.phase != "setup":
                raise HTTPException(409, "the session already ran")
            session.phase = "running"
            session.run_requested_at = time.time()
        setup_seconds = session.run_requested_at - session.setup_started_at
        result, timeline = engine.simulate(level, session.tests, session.seed)
        score = engine.score_run(level, result, setup_seconds)
        response = {
            "result": result.to_jsonable(),
            "score": score.to_jsonable(),
            "timeline": timeline.to_jsonable(),
            "mutantReveal": _mutant_reveal(level, result),
            "seed": session.seed,
            "setupSeconds": setup_seconds,
        }
        recognized = (result.healthy_saved if level.kind == "base"
                      else result.healthy_completed)
        with store.lock:
            session.result = response
            session.phase = "finished"
            store.append(session.player_id, level.id, "game_finished", {
                "session": session_id,
                "seed": session.seed,
                "setupSeconds": setup_seconds,
                "tests": engine.tests_to_jsonable(session.tests, level.kind),
                "total": score.total,
                "stars": score.stars,
                "detected": result.mutant_detected,
                "recognized": recognized,
            })
        return response

    @app.get("/api/players/{player_id}/progress")
    def player_progress(player_id: str):
        player = get_player(player_id)
        levels = {}
        for (pid, level_id), record in store.progress.items():
            if pid == player_id:
                levels[level_id] = {
                    "bestTotal": record.best_total,
                    "bestStars": record.best_stars,
                    "attempts": record.attempts,
                }
        return {"playerId": player_id, "displayName": player.display_name, "levels": levels}

    @app.get("/api/leaderboard/{level_id}")
    def leaderboard(level_id: str, top: int = Query(default=10, ge=1, le=100)):
        get_level(level_id)
        rows = []
        for (pid, lid), record in store.progress.items():
            if lid == level_id and record.attempts:
                player = store.players.get(pid)
                rows.append({
                    "player": pid,
                    "displayName": player.display_name if player else pid,
                    "bestTotal": record.best_total,
                    "achievedAt": record.best_at,
                })
        rows.sort(key=lambda row: (-row["bestTotal"], row["achievedAt"]))
        return rows[:top]

    @app.get("/api/metrics/export")
    def metrics_export(
        from_ts: float | None = Query(default=None, alias="from"),
        to_ts: float | None = Query(default=None, alias="to"),
        x_admin_token: str | None = Header(default=None),
    ):
        if admin_token is None or x_admin_token != admin_token:
            raise HTTPException(403, "admin token required")
        per_player: dict[str, dict[str, dict]] = {}
        games = []
        for row in store.read_log():
            ts = row["ts"]
            if from_ts is not None and ts < from_ts:
                continue
            if to_ts is not None and ts >= to_ts:
                continue
            event, level = row["event"], row["level"]
            if level is None:
                continue
            bucket = per_player.setdefault(row["player"], {}).setdefault(level, {
                "testBlocksPlaced": 0,
                "mutantsDetected": 0,
                "correctRecognized": 0,
                "gamesPlayed": 0,
            })
            payload = row["payload"]
            if event == "test_block_added":
                bucket["testBlocksPlaced"] += payload["count"]
            elif event == "game_finished":
                bucket["mutantsDetected"] += payload["detected"]
                bucket["correctRecognized"] += payload["recognized"]
                bucket["gamesPlayed"] += 1
                games.append({
                    "ts": ts,
                    "player": row["player"],
                    "level": level,
                    "total": payload["total"],
                })
        totals = {"testBlocksPlaced": 0, "mutantsDetected": 0, "correctRecognized": 0,
                  "gamesPlayed": 0}
        for levels in per_player.values():
            for bucket in levels.values():
                for key in totals:
                    totals[key] += bucket[key]
        return {"players": per_player, "totals": totals, "games": games}

    return app
