"""HTTP session service for playing explanation games remotely.

Each session wraps one game.  The explainee's side of the table is public:
the focal world, its prediction, the contested target, the conundrum and
factors, the transcript, and everything the adversary has disclosed.  The
adversary's side stays private: no response body ever carries the
classifier definition, the precomputed fair-and-adequate target set, or
any transformation that has not been proposed in play.

Routes:

* ``GET  /healthz``             liveness probe
* ``GET  /scenarios``           canned scenario catalog (no model internals)
* ``POST /sessions``            start a game (201; 400 invalid, 422 infeasible)
* ``GET  /sessions/{id}``       public state snapshot (404 unknown)
* ``POST /sessions/{id}/moves`` play one move (409 illegal/closed/busy)
* ``DELETE /sessions/{id}``     drop the session (204, idempotent)

Sessions live in memory with TTL eviction and a single-writer discipline:
a move posted while another is in flight gets 409 rather than queueing, so
turn order stays unambiguous.
"""

from __future__ import annotations

import os
import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .abduction import LiteralSet
from .errors import (
    InfeasibleError,
    ParseError,
    PreconditionError,
    ValidationError,
    XfairError,
)
from .fairness import ConundrumSpec, PrejudicialFactor
from .game import (
    GameConfig,
    GameState,
    Move,
    MoveKind,
    explainee_view,
    legal_moves,
    move_to_doc,
    new_game,
    open_obligations,
    play,
    reply_to_doc,
)
from .model import Classifier, classifier_from_dict, parse_instance
from .transforms import Transformation
from .scenarios import SCENARIOS, get_scenario

DEFAULT_TTL_SECONDS = 3600.0


def default_port() -> int:
    text = os.environ.get("XFAIR_PORT", "8080")
    try:
        return int(text)
    except ValueError:
        raise ValidationError(f"XFAIR_PORT must be an integer, got {text!r}") from None


@dataclass
class Session:
    id: str
    scenario: str | None
    state: GameState
    created: float
    updated: float
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    """In-memory sessions with TTL eviction on access."""

    def __init__(self, ttl_seconds: float = DEFAULT_TTL_SECONDS) -> None:
        self.ttl = ttl_seconds
        self._sessions: dict[str, Session] = {}
        self._guard = threading.Lock()

    def _evict(self, now: float) -> None:
        dead = [
            sid
            for sid, s in self._sessions.items()
            if now - s.updated > self.ttl
        ]
        for sid in dead:
            del self._sessions[sid]

    def put(self, scenario: str | None, state: GameState) -> Session:
        now = time.monotonic()
        session = Session(uuid.uuid4().hex, scenario, state, now, now)
        with self._guard:
            self._evict(now)
            self._sessions[session.id] = session
        return session

    def get(self, sid: str) -> Session | None:
        now = time.monotonic()
        with self._guard:
            self._evict(now)
            return self._sessions.get(sid)

    def drop(self, sid: str) -> None:
        with self._guard:
            self._sessions.pop(sid, None)


# --------------------------------------------------------------------------
# serialization


def _public_state(session: Session) -> dict:
    state = session.state
    config = state.config
    c = config.classifier
    view = explainee_view(state)
    disclosed: list[dict] = []
    seen: set[Transformation] = set()
    for _, reply in state.transcript:
        if reply.transformation is not None and reply.transformation not in seen:
            seen.add(reply.transformation)
            disclosed.append(
                {
                    **reply.transformation.to_dict(c.space),
                    "label": reply.label,
                }
            )
    uncovered = open_obligations(view)
    obligations: list[str] = []
    if config.conundrum is not None:
        obligations.append(config.conundrum.kind)
    obligations.extend(f"CB:{f.name}" for f in config.factors)
    return {
        "id": session.id,
        "scenario": session.scenario,
        "status": state.status,
        "variant": config.variant,
        "features": list(c.space.features),
        "labels": list(c.labels),
        "focal": {
            name: bool(config.focal.bit(i))
            for i, name in enumerate(c.space.features)
        },
        "focal_label": c.evaluate(config.focal),
        "target": config.target,
        "radius": config.radius,
        "conundrum": (
            config.conundrum.to_dict(c.space)
            if config.conundrum is not None
            else None
        ),
        "factors": [f.to_dict(c.space) for f in config.factors],
        "legal_moves": [k.value for k in legal_moves(state)],
        "progress": {ob: ob not in uncovered for ob in obligations},
        "transcript": [
            {
                "move": move_to_doc(move, c.space),
                "reply": reply_to_doc(reply, c.space),
                "counters": {"explainee_moves": i + 1},
            }
            for i, (move, reply) in enumerate(state.transcript)
        ],
        "proposed": disclosed,
        "counters": {
            "explainee_moves": state.explainee_moves,
            "adversary_oracle_calls": state.adversary_oracle_calls,
        },
    }


def _config_from_doc(doc: dict) -> tuple[str | None, GameConfig]:
    if not isinstance(doc, dict):
        raise ValidationError("session config must be a JSON object")
    if "scenario" in doc:
        name = doc["scenario"]
        if not isinstance(name, str):
            raise ValidationError("scenario must be a string")
        base = get_scenario(name).config()
        overrides = {}
        if "adversary_policy" in doc:
            overrides["adversary_policy"] = str(doc["adversary_policy"])
        if "seed" in doc:
            overrides["seed"] = int(doc["seed"])
        if overrides:
            from dataclasses import replace

            base = replace(base, **overrides)
        return name, base
    if "model" not in doc:
        raise ValidationError("session config needs a scenario name or a model")
    c = classifier_from_dict(doc["model"])
    space = c.space
    if "instance" not in doc or "target" not in doc:
        raise ValidationError("custom session config needs instance and target")
    focal = parse_instance(doc["instance"], space)
    radius = int(doc.get("radius", space.n))
    variant = str(doc.get("variant", "restriction")).lower()
    conundrum = (
        ConundrumSpec.from_dict(doc["conundrum"], space)
        if doc.get("conundrum") is not None
        else None
    )
    factors = tuple(
        PrejudicialFactor.from_dict(f, space) for f in doc.get("factors", [])
    )
    config = GameConfig(
        classifier=c,
        focal=focal,
        target=str(doc["target"]),
        radius=radius,
        variant=variant,
        conundrum=conundrum,
        factors=factors,
        adversary_policy=str(doc.get("adversary_policy", "adversarial")),
        seed=int(doc.get("seed", 0)),
    )
    return None, config


def _move_from_doc(doc: dict, c: Classifier) -> Move:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValidationError("move document needs a kind")
    kind_text = str(doc["kind"]).upper()
    try:
        kind = MoveKind(kind_text)
    except ValueError:
        raise ValidationError(f"unknown move kind {kind_text!r}") from None
    if kind == MoveKind.P_REQUEST:
        names = doc.get("features", doc.get("indices"))
        if not isinstance(names, list) or not names:
            raise ValidationError("P_REQUEST needs a nonempty feature list")
        indices = tuple(
            sorted(
                c.space.index(n) if isinstance(n, str) else int(n) for n in names
            )
        )
        return Move(kind, indices=indices)
    if kind == MoveKind.CHALLENGE:
        literals = doc.get("literals")
        if not isinstance(literals, dict):
            raise ValidationError("CHALLENGE needs a literals object")
        assignments = {
            c.space.index(name): 1 if value else 0
            for name, value in literals.items()
        }
        return Move(kind, literals=LiteralSet.of(assignments))
    return Move(kind)


# --------------------------------------------------------------------------
# app


def create_app(ttl_seconds: float = DEFAULT_TTL_SECONDS) -> FastAPI:
    app = FastAPI(title="xfair game service", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(ttl_seconds)
    app.state.store = store

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.get("/scenarios")
    def scenarios() -> list[dict]:
        catalog = []
        for scenario in SCENARIOS.values():
            config = scenario.config()
            c = config.classifier
            catalog.append(
                {
                    "name": scenario.name,
                    "summary": scenario.summary,
                    "suggested_policy": scenario.suggested_policy,
                    "variant": config.variant,
                    "features": list(c.space.features),
                    "labels": list(c.labels),
                    "focal": {
                        name: bool(config.focal.bit(i))
                        for i, name in enumerate(c.space.features)
                    },
                    "focal_label": c.evaluate(config.focal),
                    "target": config.target,
                    "radius": config.radius,
                    "conundrum": (
                        config.conundrum.to_dict(c.space)
                        if config.conundrum is not None
                        else None
                    ),
                    "factors": [f.to_dict(c.space) for f in config.factors],
                }
            )
        return catalog

    @app.post("/sessions")
    async def create_session(request: Request) -> JSONResponse:
        try:
            doc = await request.json()
        except Exception:
            return JSONResponse({"error": "malformed JSON body"}, status_code=400)
        try:
            scenario, config = _config_from_doc(doc)
            state = new_game(config)
        except InfeasibleError as exc:
            body = {"error": str(exc)}
            if exc.constraint is not None:
                body["constraint"] = exc.constraint
            return JSONResponse(body, status_code=422)
        except (ValidationError, ParseError, PreconditionError) as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        session = store.put(scenario, state)
        return JSONResponse(_public_state(session), status_code=201)

    @app.get("/sessions/{sid}")
    def get_session(sid: str) -> JSONResponse:
        session = store.get(sid)
        if session is None:
            return JSONResponse({"error": "unknown session"}, status_code=404)
        return JSONResponse(_public_state(session))

    @app.delete("/sessions/{sid}")
    def delete_session(sid: str) -> JSONResponse:
        store.drop(sid)
        return JSONResponse(None, status_code=204)

    @app.post("/sessions/{sid}/moves")
    async def post_move(sid: str, request: Request) -> JSONResponse:
        session = store.get(sid)
        if session is None:
            return JSONResponse({"error": "unknown session"}, status_code=404)
        try:
            doc = await request.json()
        except Exception:
            return JSONResponse({"error": "malformed JSON body"}, status_code=400)
        if not session.lock.acquire(blocking=False):
            return JSONResponse(
                {"error": "another move is in flight"}, status_code=409
            )
        try:
            config = session.state.config
            try:
                move = _move_from_doc(doc, config.classifier)
            except (ValidationError, ParseError) as exc:
                return JSONResponse({"error": str(exc)}, status_code=400)
            try:
                session.state = play(session.state, move)
            except PreconditionError as exc:
                return JSONResponse(
                    {"error": str(exc), "status": session.state.status},
                    status_code=409,
                )
            except ValidationError as exc:
                return JSONResponse(
                    {
                        "error": str(exc),
                        "legal_moves": [
                            k.value for k in legal_moves(session.state)
                        ],
                    },
                    status_code=409,
                )
            except InfeasibleError as exc:
                return JSONResponse({"error": str(exc)}, status_code=422)
            session.updated = time.monotonic()
            move_obj, reply = session.state.transcript[-1]
            return JSONResponse(
                {
                    "move": move_to_doc(move_obj, config.classifier.space),
                    "reply": reply_to_doc(reply, config.classifier.space),
                    "state": _public_state(session),
                }
            )
        finally:
            session.lock.release()

    @app.exception_handler(XfairError)
    def domain_error(_request: Request, exc: XfairError) -> JSONResponse:
        return JSONResponse({"error": str(exc)}, status_code=400)

    return app
