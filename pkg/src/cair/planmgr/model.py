"""Intent, action, and match result types."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from cair.knowledge.model import SENTENCE_TYPES, LikelinessLevel

SLOT_PATTERN = re.compile(r"<([a-z][a-z0-9_]*)>")

# Knowledge-base action identifiers the dialogue engine understands. Plans
# carry arbitrary identifiers; those are executed (or ignored) client-side.
KB_ACTIONS = ("setlikeliness", "jump")


class IntentError(ValueError):
    """Malformed intent registry content."""

    def __init__(self, message: str, *, intent: str | None = None):
        super().__init__(f"intent '{intent}': {message}" if intent else message)
        self.intent = intent


@dataclass(frozen=True)
class ActionTemplate:
    """Action whose argument values may still contain ``<slot>`` placeholders."""

    action: str
    args: dict[str, str] = field(default_factory=dict)

    def slots(self) -> set[str]:
        found: set[str] = set()
        for value in self.args.values():
            found.update(SLOT_PATTERN.findall(value))
        return found


@dataclass(frozen=True)
class Action:
    """Fully instantiated action; argument values contain no placeholders."""

    action: str
    args: dict[str, str] = field(default_factory=dict)

    def to_wire(self) -> dict:
        return {"action": self.action, "args": dict(self.args)}

    @classmethod
    def from_wire(cls, doc: dict) -> "Action":
        if not isinstance(doc, dict) or not isinstance(doc.get("action"), str):
            raise ValueError("action must be an object with an 'action' string")
        args = doc.get("args", {})
        if not isinstance(args, dict):
            raise ValueError("action 'args' must be an object")
        return cls(action=doc["action"], args={str(k): str(v) for k, v in args.items()})


@dataclass
class Intent:
    """A named bundle of trigger patterns and the plans they emit."""

    name: str
    triggers: list[str]
    plan_sentences: list[str] = field(default_factory=list)
    kbplan: list[ActionTemplate] = field(default_factory=list)
    plan: list[ActionTemplate] = field(default_factory=list)

    def validate(self) -> None:
        if not self.name:
            raise IntentError("missing name")
        if not self.triggers:
            raise IntentError("at least one trigger is required", intent=self.name)
        if not (self.kbplan or self.plan or self.plan_sentences):
            raise IntentError(
                "one of kbplan, plan, or plan_sentences must be non-empty", intent=self.name
            )
        trigger_slots: set[str] = set()
        for trigger in self.triggers:
            trigger_slots.update(SLOT_PATTERN.findall(trigger))
        referenced: set[str] = set()
        for sentence in self.plan_sentences:
            referenced.update(SLOT_PATTERN.findall(sentence))
        for template in list(self.kbplan) + list(self.plan):
            referenced.update(template.slots())
        unknown = referenced - trigger_slots
        if unknown:
            raise IntentError(
                f"slots {sorted(unknown)} are not bound by any trigger", intent=self.name
            )
        for template in self.kbplan:
            _validate_kb_action(template, self.name)


def _validate_kb_action(template: ActionTemplate, intent: str) -> None:
    if template.action == "setlikeliness":
        if "topic" not in template.args or "value" not in template.args:
            raise IntentError("setlikeliness requires 'topic' and 'value' args", intent=intent)
        value = template.args["value"]
        if not SLOT_PATTERN.search(value):
            LikelinessLevel.from_label(value)
    elif template.action == "jump":
        if "topic" not in template.args or "startsentence" not in template.args:
            raise IntentError("jump requires 'topic' and 'startsentence' args", intent=intent)
        start = template.args["startsentence"]
        if not SLOT_PATTERN.search(start) and start not in SENTENCE_TYPES:
            raise IntentError(f"unknown startsentence code {start!r}", intent=intent)
    else:
        raise IntentError(
            f"unknown knowledge-base action {template.action!r} in kbplan", intent=intent
        )


@dataclass
class IntentMatch:
    """Result of matching one sentence against the registry."""

    intent: str
    params: dict[str, str]
    plan_sentence: str | None
    kbplan: list[Action]
    plan: list[Action]
