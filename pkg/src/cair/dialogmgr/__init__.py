"""Topic-driven dialogue engine over the compiled dialogue tree."""

from cair.dialogmgr.engine import (
    AFFIRMATIONS,
    DialogueOutcome,
    choose_sentence,
    dialogue_step,
    initial_state,
    is_affirmative,
    next_topic,
    search_topics,
)

__all__ = [
    "AFFIRMATIONS",
    "DialogueOutcome",
    "choose_sentence",
    "dialogue_step",
    "initial_state",
    "is_affirmative",
    "next_topic",
    "search_topics",
]
