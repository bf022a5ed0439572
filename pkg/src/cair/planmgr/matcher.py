"""Trigger-sentence matching and intent registry loading.

Matching runs against the normalized sentence (edge punctuation stripped,
whitespace collapsed) case-insensitively, but slot values keep the exact
characters the user typed. A trigger must cover the whole sentence and each
slot binds the maximal non-empty substring that still lets the rest match.
"""

from __future__ import annotations

import json
import re
from functools import lru_cache
from pathlib import Path

from cair.planmgr.model import (
    Action,
    ActionTemplate,
    Intent,
    IntentError,
    IntentMatch,
    SLOT_PATTERN,
)
from cair.textnorm import normalize


def match_intent(sentence: str, registry: list[Intent]) -> IntentMatch | None:
    """First matching intent in registry order, or None.

    Pure function of (sentence, registry); it never touches conversation
    state or the dialogue tree.
    """
    norm = normalize(sentence)
    if not norm:
        return None
    for intent in registry:
        for trigger in intent.triggers:
            matched = _compile_trigger(trigger).fullmatch(norm)
            if matched is None:
                continue
            params = dict(matched.groupdict())
            plan_sentence = (
                _substitute(intent.plan_sentences[0], params) if intent.plan_sentences else None
            )
            return IntentMatch(
                intent=intent.name,
                params=params,
                plan_sentence=plan_sentence,
                kbplan=[_instantiate(t, params) for t in intent.kbplan],
                plan=[_instantiate(t, params) for t in intent.plan],
            )
    return None


def render_trigger(pattern: str, binding: dict[str, str]) -> str:
    """Fill a trigger pattern's slots; inverse of match for well-formed values."""
    return _substitute(pattern, binding)


def load_intent_registry_file(path: str | Path) -> list[Intent]:
    return load_intent_registry(Path(path).read_text(encoding="utf-8"))


def load_intent_registry(document: str) -> list[Intent]:
    """Parse and validate an intent registry document; raises IntentError."""
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise IntentError(f"malformed JSON: {exc.msg}") from exc
    if not isinstance(raw, dict) or not isinstance(raw.get("intents"), list):
        raise IntentError("document must be an object with an 'intents' array")

    registry = []
    for position, entry in enumerate(raw["intents"]):
        if not isinstance(entry, dict):
            raise IntentError(f"intent entry #{position} must be an object")
        name = entry.get("name")
        if not isinstance(name, str) or not name:
            raise IntentError(f"intent entry #{position} is missing a non-empty 'name'")
        intent = Intent(
            name=name,
            triggers=_string_list(entry.get("triggers", []), "triggers", name),
            plan_sentences=_string_list(entry.get("plan_sentences", []), "plan_sentences", name),
            kbplan=[_parse_action(a, name) for a in _object_list(entry.get("kbplan", []), "kbplan", name)],
            plan=[_parse_action(a, name) for a in _object_list(entry.get("plan", []), "plan", name)],
        )
        for trigger in intent.triggers:
            _check_trigger_shape(trigger, name)
        intent.validate()
        registry.append(intent)

    names = [intent.name for intent in registry]
    duplicates = {n for n in names if names.count(n) > 1}
    if duplicates:
        raise IntentError(f"duplicate intent names: {sorted(duplicates)}")
    return registry


@lru_cache(maxsize=4096)
def _compile_trigger(trigger: str) -> re.Pattern:
    pieces = []
    for token in trigger.split():
        slot = SLOT_PATTERN.fullmatch(token)
        if slot is not None:
            pieces.append(f"(?P<{slot.group(1)}>.+)")
        else:
            literal = normalize(token)
            if literal:
                pieces.append(re.escape(literal))
    return re.compile(" ".join(pieces), flags=re.IGNORECASE)


def _check_trigger_shape(trigger: str, intent: str) -> None:
    if not trigger.strip():
        raise IntentError("trigger must be a non-empty pattern", intent=intent)
    for token in trigger.split():
        if "<" in token and SLOT_PATTERN.fullmatch(token) is None:
            raise IntentError(
                f"slot in {token!r} must be a whole whitespace-delimited token", intent=intent
            )


def _substitute(text: str, params: dict[str, str]) -> str:
    return SLOT_PATTERN.sub(lambda m: params.get(m.group(1), m.group(0)), text)


def _instantiate(template: ActionTemplate, params: dict[str, str]) -> Action:
    return Action(
        action=template.action,
        args={key: _substitute(value, params) for key, value in template.args.items()},
    )


def _string_list(raw: object, fieldname: str, intent: str) -> list[str]:
    if not isinstance(raw, list) or any(not isinstance(item, str) for item in raw):
        raise IntentError(f"'{fieldname}' must be an array of strings", intent=intent)
    return list(raw)


def _object_list(raw: object, fieldname: str, intent: str) -> list[dict]:
    if not isinstance(raw, list) or any(not isinstance(item, dict) for item in raw):
        raise IntentError(f"'{fieldname}' must be an array of objects", intent=intent)
    return list(raw)


def _parse_action(entry: dict, intent: str) -> ActionTemplate:
    action = entry.get("action")
    if not isinstance(action, str) or not action:
        raise IntentError("action entries require a non-empty 'action'", intent=intent)
    args = entry.get("args", {})
    if not isinstance(args, dict):
        raise IntentError(f"action '{action}' args must be an object", intent=intent)
    return ActionTemplate(action=action, args={str(k): str(v) for k, v in args.items()})
