"""HTTP API over the explanation engine: task store, parsing, execution,
stepping, explanations, and an append-only session log.

Persistence is a directory of per-task JSON files plus one JSON-lines session
log per day; no database.
"""

from __future__ import annotations

import datetime as dt
import json
import os
import threading
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .explain import (
    ExplanationRequest,
    ExplanationResult,
    NoValidExplanation,
    check_success,
    explain_no_demo,
    explain_no_utterance,
    explain_pruned,
)
from .gridworld import (
    Action,
    IllegalAction,
    InvalidTrajectory,
    Trajectory,
    replay,
    state_from_dict,
    state_to_dict,
    step,
    trajectory_to_dict,
)
from .grammar import (
    ParseError,
    enumerate_sentences,
    normalize,
    parse,
    sentence_text,
)
from .programs import Unsatisfiable, execute, program_from_text, program_to_text, ProgramSyntaxError
from .similarity import (
    DEFAULT_HASH_SEED,
    FluencyModel,
    Lexicon,
    load_bundled_lexicon,
    load_lexicon,
)
from .tasks import Task, task_from_dict, task_to_dict


@dataclass
class ServiceConfig:
    data_dir: str = "data"
    lexicon_path: Optional[str] = None
    embedding_endpoint: Optional[str] = None
    default_depth: int = 2
    hash_seed: int = DEFAULT_HASH_SEED

    @classmethod
    def from_env(cls) -> "ServiceConfig":
        return cls(
            data_dir=os.environ.get("CFEXPLAIN_DATA_DIR", "data"),
            lexicon_path=os.environ.get("CFEXPLAIN_LEXICON") or None,
            embedding_endpoint=os.environ.get("CFEXPLAIN_EMBED_ENDPOINT") or None,
            default_depth=int(os.environ.get("CFEXPLAIN_DEPTH", "2")),
            hash_seed=int(os.environ.get("CFEXPLAIN_HASH_SEED", str(DEFAULT_HASH_SEED))),
        )


class TaskStore:
    """Per-task files with atomic replacement; last writer wins."""

    def __init__(self, root: Path):
        self.root = root
        self.root.mkdir(parents=True, exist_ok=True)

    def put(self, task: Task) -> None:
        path = self.root / f"{task.id}.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(task_to_dict(task), indent=2))
        os.replace(tmp, path)

    def get(self, task_id: str) -> Optional[Task]:
        path = self.root / f"{task_id}.json"
        if not path.is_file():
            return None
        return task_from_dict(json.loads(path.read_text()))

    def ids(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.json"))


class SessionLog:
    """Append-only JSON-lines log, one file per day, single-writer appends."""

    def __init__(self, root: Path):
        self.root = root
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def append(self, session: str, kind: str, payload: dict) -> None:
        now = dt.datetime.now(dt.timezone.utc)
        event = {
            "timestamp": now.isoformat(),
            "session": session,
            "kind": kind,
            "payload": payload,
        }
        path = self.root / f"{now.date().isoformat()}.jsonl"
        with self._lock:
            with open(path, "a") as fh:
                fh.write(json.dumps(event) + "\n")

    def events(self) -> list[dict]:
        out = []
        for path in sorted(self.root.glob("*.jsonl")):
            for line in path.read_text().splitlines():
                if line.strip():
                    out.append(json.loads(line))
        return out


def result_to_dict(result: ExplanationResult) -> dict:
    return {
        "explanation": sentence_text(result.explanation),
        "program": program_to_text(result.program),
        "similarity": result.similarity,
        "method": result.method,
        "candidates": [
            {
                "sentence": sentence_text(c.sentence),
                "program": program_to_text(c.program),
                "score": c.score,
            }
            for c in result.candidates
        ],
    }


def _error(status: int, kind: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status, content={"kind": kind, **extra})


@lru_cache(maxsize=4)
def _fluency_model(depth: int) -> FluencyModel:
    return FluencyModel(enumerate_sentences(depth))


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig.from_env()
    if config.lexicon_path:
        lexicon: Lexicon = load_lexicon(config.lexicon_path, hash_seed=config.hash_seed)
    else:
        lexicon = load_bundled_lexicon(hash_seed=config.hash_seed)
    data_dir = Path(config.data_dir)
    store = TaskStore(data_dir / "tasks")
    log = SessionLog(data_dir / "sessions")

    app = FastAPI(title="cfexplain")
    # The browser UI may be served from a different origin than the API.
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.config = config
    app.state.store = store
    app.state.log = log
    app.state.lexicon = lexicon

    def session_of(request: Request) -> str:
        return request.headers.get("x-session-id", "anonymous")

    log_kinds = {
        "/tasks": "command",
        "/parse": "parse_result",
        "/execute": "command",
        "/step": "command",
        "/explain": "explanation",
        "/check": "success_check",
    }

    @app.middleware("http")
    async def session_logger(request: Request, call_next):
        # One event per POST call, success or failure; handlers may attach
        # extra detail via request.state.log_payload.
        response = await call_next(request)
        kind = log_kinds.get(request.url.path)
        if request.method == "POST" and kind is not None:
            payload = dict(getattr(request.state, "log_payload", {}))
            payload["status"] = response.status_code
            log.append(session_of(request), kind, payload)
        return response

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/tasks")
    async def create_task(request: Request):
        body = await request.json()
        try:
            task = task_from_dict(body)
        except (KeyError, ValueError, TypeError) as exc:
            return _error(400, "malformed_task", detail=str(exc))
        store.put(task)
        request.state.log_payload = {"op": "create_task", "task": task.id}
        return task_to_dict(task)

    @app.get("/tasks")
    def list_tasks():
        return {"tasks": store.ids()}

    @app.get("/tasks/{task_id}")
    def get_task(task_id: str):
        task = store.get(task_id)
        if task is None:
            return _error(404, "unknown_task", task=task_id)
        return task_to_dict(task)

    @app.post("/parse")
    async def api_parse(request: Request):
        body = await request.json()
        if "utterance" not in body:
            return _error(400, "malformed_request", detail="missing field: utterance")
        try:
            tokens = normalize(body["utterance"])
        except ValueError as exc:
            return _error(400, "malformed_request", detail=str(exc))
        try:
            prog = parse(tokens)
        except ParseError as exc:
            request.state.log_payload = {"utterance": body["utterance"], "error": exc.reason}
            if exc.reason == "unknown_token":
                return _error(422, "unknown_token", token=exc.token)
            return _error(422, "structural", position=exc.position)
        request.state.log_payload = {
            "utterance": body["utterance"], "program": program_to_text(prog)
        }
        return {"program": program_to_text(prog)}

    @app.post("/execute")
    async def api_execute(request: Request):
        body = await request.json()
        if "task_id" not in body or "program" not in body:
            return _error(400, "malformed_request", detail="need task_id and program")
        task = store.get(body["task_id"])
        if task is None:
            return _error(404, "unknown_task", task=body["task_id"])
        try:
            prog = program_from_text(body["program"])
        except ProgramSyntaxError as exc:
            return _error(400, "malformed_program", detail=str(exc))
        try:
            traj = execute(prog, task.initial)
        except Unsatisfiable as exc:
            return _error(422, "unsatisfiable", detail=str(exc))
        request.state.log_payload = {
            "op": "execute", "task": task.id, "program": body["program"]
        }
        return {"trajectory": trajectory_to_dict(traj)}

    @app.post("/step")
    async def api_step(request: Request):
        body = await request.json()
        try:
            state = state_from_dict(body["state"])
            action = Action(body["action"])
        except (KeyError, ValueError, TypeError) as exc:
            return _error(400, "malformed_request", detail=str(exc))
        try:
            new_state = step(state, action)
        except IllegalAction as exc:
            return _error(422, "illegal_action", detail=str(exc))
        request.state.log_payload = {"op": "step", "action": action.value}
        return {"state": state_to_dict(new_state)}

    @app.post("/explain")
    async def api_explain(request: Request):
        body = await request.json()
        method = body.get("method", "full")
        depth = int(body.get("depth", config.default_depth))
        if method not in ("full", "no_demo", "no_utterance"):
            return _error(400, "malformed_request", detail=f"unknown method {method!r}")

        if method != "no_utterance" and "utterance" not in body:
            return _error(400, "malformed_request", detail="missing field: utterance")
        utterance = None
        if "utterance" in body:
            try:
                utterance = normalize(body["utterance"])
            except ValueError as exc:
                return _error(400, "malformed_request", detail=str(exc))

        demo = None
        if method != "no_demo":
            if "task_id" in body:
                task = store.get(body["task_id"])
                if task is None:
                    return _error(404, "unknown_task", task=body["task_id"])
                initial = task.initial
            elif "initial" in body:
                try:
                    initial = state_from_dict(body["initial"])
                except (KeyError, ValueError, TypeError) as exc:
                    return _error(400, "malformed_state", detail=str(exc))
            else:
                return _error(400, "malformed_request", detail="need task_id or initial")
            try:
                actions = tuple(Action(a) for a in body.get("demonstration", []))
            except ValueError as exc:
                return _error(422, "invalid_demonstration", detail=str(exc))
            demo = Trajectory(initial=initial, actions=actions)
            try:
                replay(demo)
            except InvalidTrajectory as exc:
                return _error(422, "invalid_demonstration", index=exc.index)

        try:
            if method == "full":
                result = explain_pruned(
                    ExplanationRequest(utterance=utterance, demonstration=demo, depth_bound=depth),
                    lexicon,
                )
            elif method == "no_demo":
                result = explain_no_demo(utterance, depth, lexicon)
            else:
                result = explain_no_utterance(demo, depth, _fluency_model(depth))
        except NoValidExplanation as exc:
            return _error(409, "no_valid_explanation", detail=str(exc))

        payload = result_to_dict(result)
        request.state.log_payload = {"method": method, "explanation": payload["explanation"]}
        return payload

    @app.post("/check")
    async def api_check(request: Request):
        body = await request.json()
        if "utterance" not in body or "task_id" not in body:
            return _error(400, "malformed_request", detail="need utterance and task_id")
        task = store.get(body["task_id"])
        if task is None:
            return _error(404, "unknown_task", task=body["task_id"])
        try:
            actions = tuple(Action(a) for a in body.get("demonstration", []))
        except ValueError as exc:
            return _error(422, "invalid_demonstration", detail=str(exc))
        demo = Trajectory(initial=task.initial, actions=actions)
        try:
            replay(demo)
        except InvalidTrajectory as exc:
            return _error(422, "invalid_demonstration", index=exc.index)
        depth = int(body.get("depth", config.default_depth))
        try:
            tokens = normalize(body["utterance"])
        except ValueError as exc:
            return _error(400, "malformed_request", detail=str(exc))
        ok = check_success(tokens, demo, depth)
        request.state.log_payload = {"utterance": body["utterance"], "success": ok}
        return {"success": ok}

    @app.get("/sentences")
    def api_sentences(depth: int = 1):
        if depth < 1:
            return _error(400, "malformed_request", detail="depth must be >= 1")
        lines = "\n".join(sentence_text(s) for s in enumerate_sentences(depth))
        return PlainTextResponse(lines + "\n")

    return app
