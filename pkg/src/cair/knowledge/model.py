"""Domain types for the layered topic ontology."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

# Closed set of sentence type codes:
#   p positive assertion, n negative assertion, y yes/no question,
#   o open question, a activity proposal, f first-encounter greeting.
SENTENCE_TYPES: tuple[str, ...] = ("p", "n", "y", "o", "a", "f")

# Types eligible for the per-topic sentence queue once a conversation is
# under way; greetings are only produced on the very first turn.
QUEUEABLE_TYPES: tuple[str, ...] = ("p", "n", "y", "o", "a")


class OntologyError(ValueError):
    """Malformed or inconsistent ontology content.

    ``location`` carries document coordinates for syntax problems, ``topic``
    names the offending concept for semantic ones.
    """

    def __init__(self, message: str, *, topic: str | None = None, location: str | None = None):
        detail = message
        if topic is not None:
            detail = f"topic '{topic}': {message}"
        if location is not None:
            detail = f"{detail} (at {location})"
        super().__init__(detail)
        self.topic = topic
        self.location = location


class LikelinessLevel(IntEnum):
    """Five-point attitude scale used to weight topic selection."""

    VERY_LOW = 1
    LOW = 2
    MEDIUM = 3
    HIGH = 4
    VERY_HIGH = 5

    @property
    def weight(self) -> float:
        return _LEVEL_WEIGHTS[self]

    @property
    def label(self) -> str:
        return _LEVEL_LABELS[self]

    @classmethod
    def from_label(cls, label: str) -> "LikelinessLevel":
        try:
            return _LABEL_LEVELS[label.replace(" ", "").lower()]
        except KeyError:
            raise ValueError(f"unknown likeliness level {label!r}") from None


_LEVEL_WEIGHTS = {
    LikelinessLevel.VERY_LOW: 0.1,
    LikelinessLevel.LOW: 0.3,
    LikelinessLevel.MEDIUM: 0.5,
    LikelinessLevel.HIGH: 0.7,
    LikelinessLevel.VERY_HIGH: 0.9,
}

_LEVEL_LABELS = {
    LikelinessLevel.VERY_LOW: "VeryLow",
    LikelinessLevel.LOW: "Low",
    LikelinessLevel.MEDIUM: "Medium",
    LikelinessLevel.HIGH: "High",
    LikelinessLevel.VERY_HIGH: "VeryHigh",
}

_LABEL_LEVELS = {label.lower(): level for level, label in _LEVEL_LABELS.items()}

DEFAULT_LIKELINESS = LikelinessLevel.MEDIUM


@dataclass(frozen=True)
class SentenceTemplate:
    """One templated sentence attached to a topic.

    ``text`` may contain ``$hasName``, replaced at compile time with the name
    of the topic that instantiates the template. Activity proposals (type
    ``a``) carry the trigger sentence forwarded to the Plan Manager when the
    user accepts. ``inheritable`` templates are also instantiated on every
    descendant topic.
    """

    type: str
    text: str
    trigger: str | None = None
    inheritable: bool = False


@dataclass(frozen=True)
class CultureOverride:
    """Culture-specific layer for one topic: likeliness plus extra sentences."""

    likeliness: LikelinessLevel | None = None
    extra_templates: tuple[SentenceTemplate, ...] = ()


@dataclass
class TopicConcept:
    """One conversation topic of the ontology."""

    id: str
    name: str
    parent: str | None = None
    related: list[str] = field(default_factory=list)
    keywords: list[str] = field(default_factory=list)
    sentence_templates: list[SentenceTemplate] = field(default_factory=list)
    culture_overrides: dict[str, CultureOverride] = field(default_factory=dict)


@dataclass
class Ontology:
    """Validated topic collection; ``topics`` preserves document order."""

    version: int
    topics: list[TopicConcept]

    def __post_init__(self) -> None:
        self.by_id: dict[str, TopicConcept] = {t.id: t for t in self.topics}

    @property
    def root_id(self) -> str:
        for topic in self.topics:
            if topic.parent is None:
                return topic.id
        raise OntologyError("ontology has no root topic")

    def children_of(self, topic_id: str) -> list[str]:
        return [t.id for t in self.topics if t.parent == topic_id]

    def ancestors_of(self, topic_id: str) -> list[str]:
        """Parent chain from the immediate parent up to the root."""
        chain = []
        current = self.by_id[topic_id].parent
        while current is not None:
            chain.append(current)
            current = self.by_id[current].parent
        return chain

    def cultures(self) -> list[str]:
        seen: dict[str, None] = {}
        for topic in self.topics:
            for culture in topic.culture_overrides:
                seen.setdefault(culture, None)
        return list(seen)
