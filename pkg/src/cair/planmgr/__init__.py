"""Intent recognition: trigger-pattern matching with slot extraction."""

from cair.planmgr.model import Action, ActionTemplate, Intent, IntentError, IntentMatch
from cair.planmgr.matcher import (
    load_intent_registry,
    load_intent_registry_file,
    match_intent,
    render_trigger,
)

__all__ = [
    "Action",
    "ActionTemplate",
    "Intent",
    "IntentError",
    "IntentMatch",
    "load_intent_registry",
    "load_intent_registry_file",
    "match_intent",
    "render_trigger",
]
