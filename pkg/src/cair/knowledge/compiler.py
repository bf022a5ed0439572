"""Compilation of a validated ontology into the dialogue tree.

Each topic becomes one node; subclass edges become child links and
related-topic links become sibling links. Sentence templates are
instantiated here ($hasName resolved, inheritable templates pushed down to
descendants, culture overlays applied), so the tree is a self-contained,
immutable artifact that request handlers can share freely.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from cair.knowledge.model import (
    DEFAULT_LIKELINESS,
    QUEUEABLE_TYPES,
    LikelinessLevel,
    Ontology,
    OntologyError,
    SentenceTemplate,
)

TREE_FORMAT_VERSION = 1

_NAME_VAR = "$hasName"


@dataclass(frozen=True)
class Sentence:
    """A fully instantiated sentence on a dialogue tree node."""

    type: str
    text: str
    trigger: str | None = None


@dataclass
class DTNode:
    """One conversation topic of the compiled tree."""

    topic: str
    name: str
    children: list[str] = field(default_factory=list)
    siblings: list[str] = field(default_factory=list)
    sentences: list[Sentence] = field(default_factory=list)
    default_likeliness: LikelinessLevel = DEFAULT_LIKELINESS
    keywords: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self._reindex()

    def _reindex(self) -> None:
        by_type: dict[str, list[int]] = {}
        for index, sentence in enumerate(self.sentences):
            by_type.setdefault(sentence.type, []).append(index)
        self.indexes_by_type = by_type

    @property
    def first_type(self) -> str:
        return self.sentences[0].type

    @property
    def queueable_types(self) -> list[str]:
        return [t for t in QUEUEABLE_TYPES if t in self.indexes_by_type]

    def completion_indexes(self) -> set[int]:
        """Indexes counting toward topic completion: everything but greetings."""
        return {i for i, s in enumerate(self.sentences) if s.type != "f"}


class DialogueTree:
    """Immutable conversation graph; ``order`` fixes the canonical topic index."""

    def __init__(self, nodes: dict[str, DTNode], order: list[str], root: str, culture: str | None):
        self.nodes = nodes
        self.order = order
        self.root = root
        self.culture = culture
        self._index = {topic: i for i, topic in enumerate(order)}

    def __contains__(self, topic: str) -> bool:
        return topic in self.nodes

    def node(self, topic: str) -> DTNode:
        return self.nodes[topic]

    def index_of(self, topic: str) -> int:
        return self._index[topic]

    @property
    def topic_count(self) -> int:
        return len(self.order)

    @property
    def sentence_count(self) -> int:
        return sum(len(self.nodes[t].sentences) for t in self.order)

    def stats(self) -> dict:
        return {
            "format": TREE_FORMAT_VERSION,
            "culture": self.culture,
            "root": self.root,
            "topics": self.topic_count,
            "sentences": self.sentence_count,
            "sentence_counts": [len(self.nodes[t].sentences) for t in self.order],
        }

    def serialize(self) -> bytes:
        """Canonical byte encoding; identical input always yields identical bytes."""
        doc = {
            "format": TREE_FORMAT_VERSION,
            "culture": self.culture,
            "root": self.root,
            "nodes": [
                {
                    "topic": node.topic,
                    "name": node.name,
                    "children": node.children,
                    "siblings": node.siblings,
                    "likeliness": int(node.default_likeliness),
                    "keywords": node.keywords,
                    "sentences": [
                        [s.type, s.text, s.trigger] if s.trigger else [s.type, s.text]
                        for s in node.sentences
                    ],
                }
                for node in (self.nodes[t] for t in self.order)
            ],
        }
        return json.dumps(doc, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def load_tree(source: bytes | str | Path) -> DialogueTree:
    """Inverse of DialogueTree.serialize; accepts bytes or a file path."""
    if isinstance(source, (str, Path)):
        data = Path(source).read_bytes()
    else:
        data = source
    doc = json.loads(data.decode("utf-8"))
    if doc.get("format") != TREE_FORMAT_VERSION:
        raise OntologyError(f"unsupported dialogue tree format {doc.get('format')!r}")
    nodes = {}
    order = []
    for raw in doc["nodes"]:
        sentences = [
            Sentence(type=s[0], text=s[1], trigger=s[2] if len(s) > 2 else None)
            for s in raw["sentences"]
        ]
        node = DTNode(
            topic=raw["topic"],
            name=raw["name"],
            children=list(raw["children"]),
            siblings=list(raw["siblings"]),
            sentences=sentences,
            default_likeliness=LikelinessLevel(raw["likeliness"]),
            keywords=list(raw["keywords"]),
        )
        nodes[node.topic] = node
        order.append(node.topic)
    return DialogueTree(nodes=nodes, order=order, root=doc["root"], culture=doc.get("culture"))


def compile_dialogue_tree(ontology: Ontology, culture: str | None = None) -> DialogueTree:
    """Compile a validated ontology for one culture (None: culture-agnostic)."""
    children: dict[str, list[str]] = {t.id: [] for t in ontology.topics}
    for topic in ontology.topics:
        if topic.parent is not None:
            children[topic.parent].append(topic.id)

    nodes = {}
    order = []
    for topic in ontology.topics:
        sentences = _instantiate_sentences(ontology, topic.id, culture)
        override = topic.culture_overrides.get(culture) if culture else None
        likeliness = DEFAULT_LIKELINESS
        if override is not None and override.likeliness is not None:
            likeliness = override.likeliness
        node = DTNode(
            topic=topic.id,
            name=topic.name,
            children=children[topic.id],
            siblings=list(topic.related),
            sentences=sentences,
            default_likeliness=likeliness,
            keywords=list(topic.keywords),
        )
        nodes[topic.id] = node
        order.append(topic.id)

    return DialogueTree(nodes=nodes, order=order, root=ontology.root_id, culture=culture)


def _instantiate_sentences(ontology: Ontology, topic_id: str, culture: str | None) -> list[Sentence]:
    topic = ontology.by_id[topic_id]
    name = topic.name

    templates: list[SentenceTemplate] = list(topic.sentence_templates)
    for ancestor in ontology.ancestors_of(topic_id):
        templates.extend(t for t in ontology.by_id[ancestor].sentence_templates if t.inheritable)
    if culture:
        override = topic.culture_overrides.get(culture)
        if override is not None:
            templates.extend(override.extra_templates)
        for ancestor in ontology.ancestors_of(topic_id):
            ancestor_override = ontology.by_id[ancestor].culture_overrides.get(culture)
            if ancestor_override is not None:
                templates.extend(t for t in ancestor_override.extra_templates if t.inheritable)

    sentences: list[Sentence] = []
    seen: set[tuple] = set()
    for template in templates:
        text = template.text.replace(_NAME_VAR, name)
        trigger = template.trigger.replace(_NAME_VAR, name) if template.trigger else None
        key = (template.type, text, trigger)
        if key in seen:
            continue
        seen.add(key)
        sentences.append(Sentence(type=template.type, text=text, trigger=trigger))
    return sentences
