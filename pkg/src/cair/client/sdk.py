"""Client SDK: state round-trip, plan execution, placeholder substitution.

The client persists the state blob exactly as the server returned it and
sends it back with the next utterance; the only client-side rewriting is
placeholder substitution ($name and friends) on sentences about to be
rendered, never on the state. Plan actions the device cannot execute are
skipped, not errors.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import httpx

from cair import seeding


class ClientError(RuntimeError):
    """Turn or bootstrap failure; the persisted state is left untouched."""


@dataclass
class LocalProfile:
    """Device-local data that never travels inside the client state."""

    placeholders: dict[str, str] = field(default_factory=dict)
    capabilities: set[str] = field(default_factory=set)
    state_path: Path = Path("cair_state.json")

    def substitute(self, sentence: str) -> str:
        out = sentence
        for key in sorted(self.placeholders, key=len, reverse=True):
            out = out.replace(key, self.placeholders[key])
        return out


def load_profile(path: str | Path) -> LocalProfile:
    path = Path(path)
    doc = json.loads(path.read_text(encoding="utf-8"))
    placeholders = doc.get("placeholders", {})
    for key in placeholders:
        if not key.startswith("$"):
            raise ClientError(f"placeholder key {key!r} must start with '$'")
    state_path = doc.get("state_path")
    if state_path:
        state_path = Path(state_path)
        if not state_path.is_absolute():
            state_path = path.parent / state_path
    else:
        state_path = path.with_suffix(".state.json")
    return LocalProfile(
        placeholders=dict(placeholders),
        capabilities=set(doc.get("capabilities", [])),
        state_path=state_path,
    )


@dataclass
class TurnResult:
    """Everything one turn produced, in the order it should be rendered."""

    plan_sentence: str | None
    executed: list[tuple[str, dict]]
    skipped: list[str]
    dialogue_sentence: str
    lines: list[str]


class HubClient:
    """One conversation against a hub server, persisted at profile.state_path."""

    def __init__(
        self,
        server: str,
        profile: LocalProfile,
        culture: str | None = None,
        seed: int | None = None,
        handlers: dict[str, Callable[[dict], None]] | None = None,
        timeout: float = 30.0,
    ):
        self.server = server.rstrip("/")
        self.profile = profile
        self.culture = culture
        self.base_seed = seed
        self.handlers = handlers or {}
        self.turn_index = 0
        self._http = httpx.Client(timeout=timeout)

    def close(self) -> None:
        self._http.close()

    # -- state persistence -------------------------------------------------

    def load_state(self) -> dict | None:
        path = self.profile.state_path
        if not path.exists():
            return None
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except (json.JSONDecodeError, OSError):
            backup = path.with_suffix(path.suffix + ".corrupt")
            path.replace(backup)
            return None

    def save_state(self, state: dict) -> None:
        """Write-then-rename so a crash never leaves a torn state file."""
        path = self.profile.state_path
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(json.dumps(state, separators=(",", ":"), ensure_ascii=False), encoding="utf-8")
        os.replace(tmp, path)

    # -- conversation ------------------------------------------------------

    def bootstrap(self, seed: int | None = None) -> str:
        """Fetch the initial state, persist it, return the rendered greeting."""
        params: dict[str, object] = {}
        if self.culture:
            params["culture"] = self.culture
        if seed is None:
            seed = self.base_seed
        if seed is not None:
            params["seed"] = seed
        try:
            response = self._http.get(f"{self.server}/cair/v1/state", params=params)
        except httpx.HTTPError as exc:
            raise ClientError(
                f"cannot reach server {self.server}: {exc}. Is the hub running? Retry once it is up."
            ) from exc
        if response.status_code != 200:
            raise ClientError(f"initial state request failed: {response.status_code} {response.text}")
        doc = response.json()
        self.save_state(doc["client_state"])
        return self.profile.substitute(doc["dialogue_sentence"])

    def converse_turn(self, utterance: str, seed: int | None = None) -> TurnResult:
        """One utterance round-trip: send, persist new state, execute plan."""
        state = self.load_state()
        if state is None:
            raise ClientError("no conversation state found; bootstrap first")
        if seed is None and self.base_seed is not None:
            seed = seeding.derive(self.base_seed, "turn", self.turn_index) % (1 << 62)
        body: dict = {"client_sentence": utterance, "client_state": state}
        if self.culture:
            body["culture"] = self.culture
        if seed is not None:
            body["seed"] = seed
        try:
            response = self._http.post(f"{self.server}/cair/v1/hub", json=body)
        except httpx.HTTPError as exc:
            raise ClientError(f"turn failed, state unchanged: {exc}") from exc
        if response.status_code != 200:
            raise ClientError(f"server rejected the turn: {response.status_code} {response.text}")
        doc = response.json()
        self.save_state(doc["client_state"])
        self.turn_index += 1

        lines: list[str] = []
        plan_sentence = doc.get("plan_sentence")
        if plan_sentence:
            plan_sentence = self.profile.substitute(plan_sentence)
            lines.append(plan_sentence)
        executed: list[tuple[str, dict]] = []
        skipped: list[str] = []
        for action in doc.get("plan", []):
            name = action.get("action", "?")
            args = action.get("args", {})
            if name in self.profile.capabilities:
                handler = self.handlers.get(name)
                if handler is not None:
                    handler(args)
                executed.append((name, args))
                lines.append(f"[executed: {name}]")
            else:
                skipped.append(name)
                lines.append(f"[skipped: {name}]")
        dialogue_sentence = self.profile.substitute(doc["dialogue_sentence"])
        lines.append(dialogue_sentence)
        return TurnResult(
            plan_sentence=plan_sentence,
            executed=executed,
            skipped=skipped,
            dialogue_sentence=dialogue_sentence,
            lines=lines,
        )
