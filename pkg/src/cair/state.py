"""Client-carried conversation state and its wire codec.

The server keeps nothing per client: every request carries the full state
and every response returns the updated copy. The wire form uses short keys
and dense per-topic arrays (likeliness levels and used-sentence bitmasks
indexed by the tree's canonical topic order, trailing zeros trimmed) so the
payload stays within a few bytes per covered topic even at full coverage.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from cair.knowledge.compiler import DialogueTree
from cair.knowledge.model import SENTENCE_TYPES, LikelinessLevel

WIRE_VERSION = 1

_WIRE_KEYS = ("v", "t", "lt", "q", "l", "u", "p")


class StateError(ValueError):
    """Client state that does not validate against the dialogue tree."""


class StateVersionError(StateError):
    """Client state written for an unsupported schema version."""


@dataclass
class ClientState:
    """Complete per-user conversation context.

    ``queue`` holds the sentence type codes still scheduled for the current
    topic; ``likeliness`` holds only explicit user overrides; ``used`` maps a
    topic to the sentence indexes already produced for it. ``pending_trigger``
    is set exactly while the last produced sentence was an activity proposal.
    """

    topic: str
    last_type: str
    queue: list[str] = field(default_factory=list)
    likeliness: dict[str, LikelinessLevel] = field(default_factory=dict)
    used: dict[str, set[int]] = field(default_factory=dict)
    pending_trigger: str | None = None
    version: int = WIRE_VERSION

    def copy(self) -> "ClientState":
        return ClientState(
            topic=self.topic,
            last_type=self.last_type,
            queue=list(self.queue),
            likeliness=dict(self.likeliness),
            used={topic: set(indexes) for topic, indexes in self.used.items()},
            pending_trigger=self.pending_trigger,
            version=self.version,
        )


def state_to_wire(state: ClientState, tree: DialogueTree) -> dict:
    """Compact JSON-ready form of a state, canonical for a given tree."""
    levels = [0] * tree.topic_count
    for topic, level in state.likeliness.items():
        levels[tree.index_of(topic)] = int(level)
    masks = [0] * tree.topic_count
    for topic, indexes in state.used.items():
        mask = 0
        for index in indexes:
            mask |= 1 << index
        masks[tree.index_of(topic)] = mask
    return {
        "v": state.version,
        "t": state.topic,
        "lt": state.last_type,
        "q": list(state.queue),
        "l": _trim(levels),
        "u": _trim(masks),
        "p": state.pending_trigger,
    }


def encode_state(state: ClientState, tree: DialogueTree) -> bytes:
    return json.dumps(state_to_wire(state, tree), separators=(",", ":"), ensure_ascii=False).encode(
        "utf-8"
    )


def decode_state(wire: dict | bytes | str, tree: DialogueTree) -> ClientState:
    """Parse and validate a wire state against the tree; raises StateError."""
    if isinstance(wire, (bytes, str)):
        try:
            wire = json.loads(wire)
        except json.JSONDecodeError as exc:
            raise StateError(f"client state is not valid JSON: {exc.msg}") from exc
    if not isinstance(wire, dict):
        raise StateError("client state must be an object")
    for key in _WIRE_KEYS:
        if key not in wire:
            raise StateError(f"client state is missing field '{key}'")

    if wire["v"] != WIRE_VERSION:
        raise StateVersionError(f"unsupported client state version {wire['v']!r}")

    topic = wire["t"]
    if not isinstance(topic, str) or topic not in tree:
        raise StateError(f"unknown current topic {topic!r}")

    last_type = wire["lt"]
    if last_type not in SENTENCE_TYPES:
        raise StateError(f"unknown sentence type {last_type!r} in 'lt'")

    queue = wire["q"]
    if not isinstance(queue, list) or any(code not in SENTENCE_TYPES for code in queue):
        raise StateError("'q' must be a list of sentence type codes")

    levels = wire["l"]
    if not isinstance(levels, list) or len(levels) > tree.topic_count:
        raise StateError("'l' must be a list no longer than the topic count")
    likeliness: dict[str, LikelinessLevel] = {}
    for index, value in enumerate(levels):
        if not isinstance(value, int) or not 0 <= value <= 5:
            raise StateError(f"likeliness entry {index} out of range")
        if value:
            likeliness[tree.order[index]] = LikelinessLevel(value)

    masks = wire["u"]
    if not isinstance(masks, list) or len(masks) > tree.topic_count:
        raise StateError("'u' must be a list no longer than the topic count")
    used: dict[str, set[int]] = {}
    for index, mask in enumerate(masks):
        if not isinstance(mask, int) or mask < 0:
            raise StateError(f"used mask {index} must be a non-negative integer")
        topic_id = tree.order[index]
        limit = 1 << len(tree.node(topic_id).sentences)
        if mask >= limit:
            raise StateError(f"used mask for topic '{topic_id}' addresses unknown sentences")
        if mask:
            used[topic_id] = {bit for bit in range(mask.bit_length()) if mask >> bit & 1}

    pending = wire["p"]
    if pending is not None and (not isinstance(pending, str) or not pending):
        raise StateError("'p' must be null or a non-empty trigger sentence")
    if (pending is not None) != (last_type == "a"):
        raise StateError("pending trigger must be set exactly when the last sentence was a proposal")

    return ClientState(
        topic=topic,
        last_type=last_type,
        queue=list(queue),
        likeliness=likeliness,
        used=used,
        pending_trigger=pending,
        version=WIRE_VERSION,
    )


def full_coverage_state(tree: DialogueTree, level: LikelinessLevel = LikelinessLevel.VERY_HIGH) -> ClientState:
    """State in which every topic has an override and every sentence is used.

    This is the theoretical upper bound of the client payload for a tree.
    """
    return ClientState(
        topic=tree.root,
        last_type="p",
        queue=[],
        likeliness={topic: level for topic in tree.order},
        used={topic: set(range(len(tree.node(topic).sentences))) for topic in tree.order},
        pending_trigger=None,
    )


def _trim(values: list[int]) -> list[int]:
    end = len(values)
    while end and values[end - 1] == 0:
        end -= 1
    return values[:end]
