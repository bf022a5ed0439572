"""The Hub service and the plan/dialogue endpoints it fronts.

Every request carries the complete client state; handlers read it, run the
plan manager and then the dialogue manager, and hand the updated state
back. No per-client data survives a request, so any number of processes
can serve the same population behind a load balancer.

Each response exposes the server processing time (first instruction after
request decode to last before response encode) in the
``X-CAIR-Processing-Ms`` header.
"""

from __future__ import annotations

import contextlib
import datetime as dt
import json
import logging
import os
import time
from dataclasses import dataclass
from pathlib import Path

import httpx
from fastapi import FastAPI, Request
from fastapi.responses import Response
from fastapi.staticfiles import StaticFiles

from cair import seeding
from cair.data import default_intents_path, demo_ontology_path
from cair.dialogmgr import dialogue_step, initial_state
from cair.knowledge.compiler import DialogueTree, compile_dialogue_tree, load_tree
from cair.knowledge.parse import parse_ontology_file
from cair.planmgr import Action, match_intent
from cair.planmgr.matcher import load_intent_registry_file
from cair.state import StateError, StateVersionError, decode_state, state_to_wire

PROCESSING_HEADER = "X-CAIR-Processing-Ms"

logger = logging.getLogger("cair.hub")
request_log = logging.getLogger("cair.hub.request")


@dataclass
class HubConfig:
    """Server configuration; every field maps onto a CAIR_* environment variable."""

    ontology_path: str | None = None
    tree_path: str | None = None
    intents_path: str | None = None
    culture: str = "EN"
    simulated_work_ms: float = 0.0
    webchat_dir: str | None = None
    plan_url: str | None = None
    dialogue_url: str | None = None

    @classmethod
    def from_env(cls) -> "HubConfig":
        return cls(
            ontology_path=os.environ.get("CAIR_ONTOLOGY") or None,
            tree_path=os.environ.get("CAIR_TREE") or None,
            intents_path=os.environ.get("CAIR_INTENTS") or None,
            culture=os.environ.get("CAIR_CULTURE", "EN"),
            simulated_work_ms=float(os.environ.get("CAIR_SIM_WORK_MS", "0") or 0),
            webchat_dir=os.environ.get("CAIR_WEBCHAT_DIR") or None,
            plan_url=os.environ.get("CAIR_PLAN_URL") or None,
            dialogue_url=os.environ.get("CAIR_DIALOGUE_URL") or None,
        )


class _ProtocolError(Exception):
    def __init__(self, status: int, code: str, message: str, field: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.field = field


def _load_trees(config: HubConfig) -> dict[str | None, DialogueTree]:
    """Compile one immutable tree per culture present in the ontology."""
    if config.tree_path:
        tree = load_tree(config.tree_path)
        return {tree.culture: tree, None: tree}
    ontology_path = config.ontology_path or demo_ontology_path()
    ontology = parse_ontology_file(ontology_path)
    trees: dict[str | None, DialogueTree] = {
        culture: compile_dialogue_tree(ontology, culture) for culture in ontology.cultures()
    }
    trees[None] = compile_dialogue_tree(ontology, None)
    if config.culture not in trees:
        trees[config.culture] = compile_dialogue_tree(ontology, config.culture)
    return trees


def create_app(config: HubConfig | None = None) -> FastAPI:
    config = config or HubConfig.from_env()
    trees = _load_trees(config)
    default_tree = trees.get(config.culture) or trees[None]
    registry = load_intent_registry_file(config.intents_path or default_intents_path())
    upstream = httpx.AsyncClient(timeout=60.0) if (config.plan_url or config.dialogue_url) else None

    @contextlib.asynccontextmanager
    async def lifespan(_: FastAPI):
        try:
            yield
        finally:
            if upstream is not None:
                await upstream.aclose()

    app = FastAPI(title="cair", docs_url=None, redoc_url=None, lifespan=lifespan)
    app.state.config = config

    def tree_for(culture: str | None) -> DialogueTree:
        if culture is None:
            return default_tree
        return trees.get(culture) or trees.get(None) or default_tree

    def simulate_work() -> None:
        if config.simulated_work_ms > 0:
            time.sleep(config.simulated_work_ms / 1000.0)

    def reply(doc: dict, processing_ms: float, status: int = 200, route: str = "", bytes_in: int = 0, intent: str | None = None) -> Response:
        body = json.dumps(doc, separators=(",", ":"), ensure_ascii=False).encode("utf-8")
        request_log.info(
            "%s %s in=%d out=%d ms=%.3f intent=%s",
            dt.datetime.now(dt.timezone.utc).isoformat(timespec="milliseconds"),
            route,
            bytes_in,
            len(body),
            processing_ms,
            intent or "-",
        )
        return Response(
            content=body,
            status_code=status,
            media_type="application/json",
            headers={PROCESSING_HEADER: f"{processing_ms:.3f}"},
        )

    def error_response(exc: _ProtocolError, route: str, bytes_in: int) -> Response:
        doc: dict = {"error": {"code": exc.code, "message": exc.message}}
        if exc.field:
            doc["error"]["field"] = exc.field
        return reply(doc, 0.0, status=exc.status, route=route, bytes_in=bytes_in)

    async def read_json(request: Request) -> tuple[dict, int]:
        raw = await request.body()
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise _ProtocolError(400, "malformed_body", f"request body is not valid JSON: {exc.msg}")
        if not isinstance(doc, dict):
            raise _ProtocolError(400, "malformed_body", "request body must be a JSON object")
        return doc, len(raw)

    def require(doc: dict, field: str, kind: type) -> object:
        if field not in doc:
            raise _ProtocolError(400, "missing_field", f"required field '{field}' is missing", field)
        value = doc[field]
        if not isinstance(value, kind):
            raise _ProtocolError(400, "bad_field", f"field '{field}' has the wrong type", field)
        return value

    def decode_request_state(doc: dict, tree: DialogueTree):
        state_doc = require(doc, "client_state", dict)
        try:
            return decode_state(state_doc, tree)
        except StateVersionError as exc:
            raise _ProtocolError(422, "unsupported_state_version", str(exc), "client_state")
        except StateError as exc:
            raise _ProtocolError(400, "invalid_state", str(exc), "client_state")

    def parse_kbplan(doc: dict) -> list[Action]:
        raw = doc.get("kbplan", [])
        if not isinstance(raw, list):
            raise _ProtocolError(400, "bad_field", "field 'kbplan' must be an array", "kbplan")
        try:
            return [Action.from_wire(item) for item in raw]
        except ValueError as exc:
            raise _ProtocolError(400, "bad_field", str(exc), "kbplan")

    def parse_seed(doc: dict) -> int | None:
        seed = doc.get("seed")
        if seed is not None and not isinstance(seed, int):
            raise _ProtocolError(400, "bad_field", "field 'seed' must be an integer", "seed")
        return seed

    def run_plan(sentence: str) -> dict:
        """Local plan manager: intent match serialized to the wire shape."""
        matched = match_intent(sentence, registry)
        logger.debug("plan-manager consulted")
        if matched is None:
            return {"intent": None, "plan_sentence": None, "kbplan": [], "plan": []}
        return {
            "intent": matched.intent,
            "plan_sentence": matched.plan_sentence,
            "kbplan": [a.to_wire() for a in matched.kbplan],
            "plan": [a.to_wire() for a in matched.plan],
        }

    def run_dialogue(sentence: str, state, kbplan: list[Action], tree: DialogueTree, seed: int) -> dict:
        outcome = dialogue_step(sentence, state, kbplan, tree, registry, seed)
        logger.debug("dialogue-manager consulted")
        return {
            "dialogue_sentence": outcome.dialogue_sentence,
            "plan_sentence": outcome.plan_sentence,
            "plan": [a.to_wire() for a in outcome.plan],
            "client_state": state_to_wire(outcome.state, tree),
        }

    async def call_upstream(url: str, payload: dict) -> dict:
        assert upstream is not None
        try:
            response = await upstream.post(url, json=payload)
            response.raise_for_status()
            return response.json()
        except httpx.HTTPError as exc:
            raise _ProtocolError(502, "upstream_unavailable", f"sub-service call failed: {exc}")

    @app.get("/cair/v1/state")
    async def get_state(request: Request) -> Response:
        route = "GET /cair/v1/state"
        started = time.perf_counter()
        try:
            culture = request.query_params.get("culture")
            seed_raw = request.query_params.get("seed")
            seed = int(seed_raw) if seed_raw is not None else seeding.random_seed()
            tree = tree_for(culture)
            simulate_work()
            state, greeting = initial_state(tree, seed)
            doc = {"client_state": state_to_wire(state, tree), "dialogue_sentence": greeting}
        except ValueError:
            return error_response(
                _ProtocolError(400, "bad_field", "query parameter 'seed' must be an integer", "seed"),
                route,
                0,
            )
        processing_ms = (time.perf_counter() - started) * 1000.0
        return reply(doc, processing_ms, route=route)

    @app.post("/cair/v1/plan")
    async def post_plan(request: Request) -> Response:
        route = "POST /cair/v1/plan"
        bytes_in = 0
        try:
            doc, bytes_in = await read_json(request)
            sentence = require(doc, "client_sentence", str)
            started = time.perf_counter()
            simulate_work()
            result = run_plan(sentence)
            processing_ms = (time.perf_counter() - started) * 1000.0
        except _ProtocolError as exc:
            return error_response(exc, route, bytes_in)
        return reply(result, processing_ms, route=route, bytes_in=bytes_in, intent=result["intent"])

    @app.post("/cair/v1/dialogue")
    async def post_dialogue(request: Request) -> Response:
        route = "POST /cair/v1/dialogue"
        bytes_in = 0
        try:
            doc, bytes_in = await read_json(request)
            sentence = require(doc, "client_sentence", str)
            tree = tree_for(doc.get("culture"))
            state = decode_request_state(doc, tree)
            kbplan = parse_kbplan(doc)
            seed = parse_seed(doc)
            started = time.perf_counter()
            simulate_work()
            result = run_dialogue(sentence, state, kbplan, tree, seed if seed is not None else seeding.random_seed())
            processing_ms = (time.perf_counter() - started) * 1000.0
        except _ProtocolError as exc:
            return error_response(exc, route, bytes_in)
        return reply(result, processing_ms, route=route, bytes_in=bytes_in)

    @app.post("/cair/v1/hub")
    async def post_hub(request: Request) -> Response:
        route = "POST /cair/v1/hub"
        bytes_in = 0
        try:
            doc, bytes_in = await read_json(request)
            sentence = require(doc, "client_sentence", str)
            culture = doc.get("culture")
            if culture is not None and not isinstance(culture, str):
                raise _ProtocolError(400, "bad_field", "field 'culture' must be a string", "culture")
            tree = tree_for(culture)
            state = decode_request_state(doc, tree)
            seed = parse_seed(doc)
            if seed is None:
                seed = seeding.random_seed()

            started = time.perf_counter()
            simulate_work()
            if config.plan_url:
                plan_result = await call_upstream(config.plan_url, {"client_sentence": sentence})
                logger.debug("plan-manager consulted")
            else:
                plan_result = run_plan(sentence)
            kbplan = [Action.from_wire(a) for a in plan_result.get("kbplan", [])]

            if config.dialogue_url:
                dialogue_result = await call_upstream(
                    config.dialogue_url,
                    {
                        "client_sentence": sentence,
                        "client_state": state_to_wire(state, tree),
                        "kbplan": [a.to_wire() for a in kbplan],
                        "seed": seed,
                    },
                )
                logger.debug("dialogue-manager consulted")
            else:
                dialogue_result = run_dialogue(sentence, state, kbplan, tree, seed)

            matched = plan_result.get("intent")
            if matched is not None:
                plan = plan_result.get("plan", [])
                plan_sentence = plan_result.get("plan_sentence")
            else:
                plan = dialogue_result.get("plan", [])
                plan_sentence = dialogue_result.get("plan_sentence")
            result = {
                "dialogue_sentence": dialogue_result["dialogue_sentence"],
                "plan_sentence": plan_sentence,
                "plan": plan,
                "client_state": dialogue_result["client_state"],
            }
            processing_ms = (time.perf_counter() - started) * 1000.0
        except _ProtocolError as exc:
            return error_response(exc, route, bytes_in)
        return reply(result, processing_ms, route=route, bytes_in=bytes_in, intent=matched)

    if config.webchat_dir and Path(config.webchat_dir).is_dir():
        app.mount("/chat", StaticFiles(directory=config.webchat_dir, html=True), name="webchat")

    return app


def app_from_env() -> FastAPI:
    """Factory used by multi-worker deployments; configuration via CAIR_* vars."""
    return create_app(HubConfig.from_env())
