"""Ontology document parsing and validation.

The exchange format is a structured JSON document (one ``topics`` array with
subclass, related-topic, keyword, sentence, and per-culture fields). Parsing
rejects malformed syntax with a document location and inconsistent content
with the offending topic id.
"""

from __future__ import annotations

import json
from pathlib import Path

from cair.knowledge.model import (
    SENTENCE_TYPES,
    CultureOverride,
    LikelinessLevel,
    Ontology,
    OntologyError,
    SentenceTemplate,
    TopicConcept,
)

SUPPORTED_VERSION = 1

# Question templates default to inheritable, assertions do not; mirrors how
# "Do you like $hasName?" style questions generalize to subclasses while
# topic-specific claims usually do not.
_INHERITABLE_DEFAULT = {"y": True, "o": True, "p": False, "n": False, "a": False, "f": False}


def parse_ontology_file(path: str | Path) -> Ontology:
    return parse_ontology(Path(path).read_text(encoding="utf-8"))


def dump_ontology(ontology: Ontology) -> str:
    """Canonical document form; equal ontologies serialize byte-identically."""
    doc = {
        "version": ontology.version,
        "topics": [
            {
                "id": topic.id,
                "name": topic.name,
                **({"parent": topic.parent} if topic.parent is not None else {}),
                **({"related": topic.related} if topic.related else {}),
                "keywords": topic.keywords,
                "sentences": [_template_doc(t) for t in topic.sentence_templates],
                **(
                    {
                        "cultures": {
                            culture: {
                                **(
                                    {"likeliness": override.likeliness.label}
                                    if override.likeliness is not None
                                    else {}
                                ),
                                **(
                                    {"sentences": [_template_doc(t) for t in override.extra_templates]}
                                    if override.extra_templates
                                    else {}
                                ),
                            }
                            for culture, override in topic.culture_overrides.items()
                        }
                    }
                    if topic.culture_overrides
                    else {}
                ),
            }
            for topic in ontology.topics
        ],
    }
    return json.dumps(doc, indent=1, ensure_ascii=False)


def _template_doc(template: SentenceTemplate) -> dict:
    doc: dict = {"type": template.type, "text": template.text}
    if template.trigger is not None:
        doc["trigger"] = template.trigger
    if template.inheritable != _INHERITABLE_DEFAULT[template.type]:
        doc["inheritable"] = template.inheritable
    return doc


def parse_ontology(document: str) -> Ontology:
    """Parse and validate an ontology document; raises OntologyError."""
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise OntologyError(
            f"malformed JSON: {exc.msg}", location=f"line {exc.lineno}, column {exc.colno}"
        ) from exc

    if not isinstance(raw, dict):
        raise OntologyError("document root must be an object")
    version = raw.get("version")
    if version != SUPPORTED_VERSION:
        raise OntologyError(f"unsupported ontology version {version!r}")
    topics_raw = raw.get("topics")
    if not isinstance(topics_raw, list) or not topics_raw:
        raise OntologyError("'topics' must be a non-empty array")

    topics = [_parse_topic(entry, position) for position, entry in enumerate(topics_raw)]
    ontology = Ontology(version=version, topics=topics)
    _validate(ontology)
    return ontology


def _parse_topic(entry: object, position: int) -> TopicConcept:
    if not isinstance(entry, dict):
        raise OntologyError(f"topic entry #{position} must be an object")
    topic_id = entry.get("id")
    if not isinstance(topic_id, str) or not topic_id:
        raise OntologyError(f"topic entry #{position} is missing a non-empty 'id'")

    name = entry.get("name")
    if name is None:
        name = topic_id.replace("_", " ").title()
    if not isinstance(name, str) or not name.strip():
        raise OntologyError("'name' must be a non-empty string", topic=topic_id)

    parent = entry.get("parent")
    if parent is not None and (not isinstance(parent, str) or not parent):
        raise OntologyError("'parent' must be a topic id", topic=topic_id)

    related = entry.get("related", [])
    if not isinstance(related, list) or any(not isinstance(r, str) for r in related):
        raise OntologyError("'related' must be an array of topic ids", topic=topic_id)

    keywords = _parse_keywords(entry.get("keywords", []), topic_id)
    sentences = [
        _parse_template(item, topic_id, i) for i, item in enumerate(entry.get("sentences", []))
    ]
    cultures = _parse_cultures(entry.get("cultures", {}), topic_id)

    return TopicConcept(
        id=topic_id,
        name=name.strip(),
        parent=parent,
        related=list(related),
        keywords=keywords,
        sentence_templates=sentences,
        culture_overrides=cultures,
    )


def _parse_keywords(raw: object, topic_id: str) -> list[str]:
    if not isinstance(raw, list):
        raise OntologyError("'keywords' must be an array", topic=topic_id)
    keywords = []
    for item in raw:
        if not isinstance(item, str) or not item.strip():
            raise OntologyError("keywords must be non-empty strings", topic=topic_id)
        keyword = item.strip().lower()
        if "*" in keyword[:-1]:
            raise OntologyError(
                f"keyword {keyword!r} may only use a trailing wildcard", topic=topic_id
            )
        keywords.append(keyword)
    return keywords


def _parse_template(item: object, topic_id: str, index: int) -> SentenceTemplate:
    if not isinstance(item, dict):
        raise OntologyError(f"sentence #{index} must be an object", topic=topic_id)
    stype = item.get("type")
    if stype not in SENTENCE_TYPES:
        raise OntologyError(f"sentence #{index} has unknown type {stype!r}", topic=topic_id)
    text = item.get("text")
    if not isinstance(text, str) or not text.strip():
        raise OntologyError(f"sentence #{index} has empty text", topic=topic_id)
    trigger = item.get("trigger")
    if stype == "a":
        if not isinstance(trigger, str) or not trigger.strip():
            raise OntologyError(
                f"activity proposal #{index} requires a non-empty 'trigger'", topic=topic_id
            )
        trigger = trigger.strip()
    elif trigger is not None:
        trigger = str(trigger).strip() or None
    inheritable = item.get("inheritable", _INHERITABLE_DEFAULT[stype])
    if not isinstance(inheritable, bool):
        raise OntologyError(f"sentence #{index} 'inheritable' must be a boolean", topic=topic_id)
    return SentenceTemplate(type=stype, text=text.strip(), trigger=trigger, inheritable=inheritable)


def _parse_cultures(raw: object, topic_id: str) -> dict[str, CultureOverride]:
    if not isinstance(raw, dict):
        raise OntologyError("'cultures' must be an object", topic=topic_id)
    overrides = {}
    for culture, body in raw.items():
        if not isinstance(body, dict):
            raise OntologyError(f"culture {culture!r} must be an object", topic=topic_id)
        likeliness = None
        if "likeliness" in body:
            try:
                likeliness = LikelinessLevel.from_label(str(body["likeliness"]))
            except ValueError as exc:
                raise OntologyError(str(exc), topic=topic_id) from None
        extras = tuple(
            _parse_template(item, topic_id, i) for i, item in enumerate(body.get("sentences", []))
        )
        overrides[str(culture)] = CultureOverride(likeliness=likeliness, extra_templates=extras)
    return overrides


def _validate(ontology: Ontology) -> None:
    seen: set[str] = set()
    for topic in ontology.topics:
        if topic.id in seen:
            raise OntologyError("duplicate topic id", topic=topic.id)
        seen.add(topic.id)

    roots = []
    for topic in ontology.topics:
        if topic.parent is None:
            roots.append(topic.id)
        elif topic.parent not in ontology.by_id:
            raise OntologyError(f"parent '{topic.parent}' does not exist", topic=topic.id)
        for rel in topic.related:
            if rel not in ontology.by_id:
                raise OntologyError(f"related topic '{rel}' does not exist", topic=topic.id)

    if not roots:
        raise OntologyError("no root topic: every topic declares a parent (cycle)")
    if len(roots) > 1:
        raise OntologyError(f"multiple root topics: {', '.join(sorted(roots))}")

    # Parent edges must form a tree under the single root: walking up from any
    # topic terminates without revisiting a node.
    for topic in ontology.topics:
        slow: set[str] = set()
        current = topic.parent
        while current is not None:
            if current in slow or current == topic.id:
                raise OntologyError("parent chain contains a cycle", topic=topic.id)
            slow.add(current)
            current = ontology.by_id[current].parent

    # Every topic must be able to speak in any culture: it needs at least one
    # culture-agnostic template of its own or inheritable from an ancestor.
    for topic in ontology.topics:
        if topic.sentence_templates:
            continue
        inherited = any(
            template.inheritable
            for ancestor in ontology.ancestors_of(topic.id)
            for template in ontology.by_id[ancestor].sentence_templates
        )
        if not inherited:
            raise OntologyError(
                "topic has no sentences and inherits none from its ancestors", topic=topic.id
            )
