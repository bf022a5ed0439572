"""Synthetic ontology generation for testing and load experiments.

Builds deterministic topic trees at the scale of the production knowledge
base (thousands of topics, tens of thousands of sentences): a complete
B-ary tree where every topic carries exactly two distinct keywords and a
fixed number of sentences cycled over all sentence type codes.
"""

from __future__ import annotations

import random

from cair.knowledge.model import (
    SENTENCE_TYPES,
    Ontology,
    SentenceTemplate,
    TopicConcept,
)

_ADJECTIVES = [
    "quiet", "sunny", "ancient", "modern", "gentle", "brisk", "golden", "silver",
    "crimson", "emerald", "amber", "misty", "breezy", "cozy", "rustic", "vivid",
    "mellow", "spry", "sturdy", "nimble", "patient", "curious", "cheerful", "serene",
    "bold", "subtle", "humble", "grand", "tiny", "vast", "warm", "crisp",
    "fragrant", "savory", "tangy", "smooth", "rough", "polished", "woven", "carved",
    "painted", "printed", "woody", "floral", "coastal", "alpine", "urban", "rural",
    "northern", "southern", "eastern", "western", "early", "late", "winter", "summer",
    "autumn", "spring", "daily", "weekly",
]

_NOUNS = [
    "garden", "river", "mountain", "recipe", "novel", "melody", "painting", "journey",
    "harbor", "forest", "meadow", "kitchen", "library", "workshop", "market", "festival",
    "orchard", "village", "castle", "bridge", "lantern", "teapot", "quilt", "compass",
    "telescope", "bicycle", "sailboat", "campfire", "puzzle", "garland", "pottery", "almanac",
    "biscuit", "chutney", "porridge", "samovar", "violin", "accordion", "ballad", "waltz",
    "fresco", "mosaic", "tapestry", "sketch", "postcard", "atlas", "herbarium", "aviary",
    "terrace", "veranda", "cellar", "attic", "pantry", "greenhouse", "dovecote", "windmill",
    "lighthouse", "jetty", "causeway", "footpath",
]

_PHRASINGS: dict[str, list[str]] = {
    "p": [
        "$hasName is a lovely thing to talk about.",
        "I find $hasName genuinely fascinating.",
        "$hasName always brightens up a conversation.",
    ],
    "n": [
        "Not everyone is fond of $hasName.",
        "$hasName is certainly not for everybody.",
    ],
    "y": [
        "Do you like $hasName?",
        "Have you thought about $hasName lately?",
    ],
    "o": [
        "What do you think about $hasName?",
        "What is your favourite thing about $hasName?",
    ],
    "a": [
        "Shall I tell you something more about $hasName?",
        "Would you like to dig deeper into $hasName?",
    ],
    "f": [
        "Hello! Shall we talk about $hasName today?",
    ],
}

_PROPOSAL_TRIGGER = "tell me about $hasName"


def generate_synthetic_ontology(
    topic_count: int,
    branching: int,
    sentences_per_topic: int,
    seed: int,
) -> Ontology:
    """Deterministically generate a topic tree of the requested size.

    The result has exactly ``topic_count`` topics in a complete tree of the
    given branching factor and ``topic_count * sentences_per_topic`` sentences
    overall (no inheritable templates, so compiled counts match exactly).
    """
    if topic_count < 1:
        raise ValueError("topic_count must be >= 1")
    if branching < 1:
        raise ValueError("branching must be >= 1")
    if sentences_per_topic < 1:
        raise ValueError("sentences_per_topic must be >= 1")

    rng = random.Random(seed)
    name_pool = [f"{adj} {noun}" for adj in _ADJECTIVES for noun in _NOUNS]
    rng.shuffle(name_pool)

    topics = []
    for i in range(topic_count):
        base = name_pool[i % len(name_pool)]
        series = i // len(name_pool)
        name = base.title() if series == 0 else f"{base.title()} {series + 1}"
        adj, noun = base.split(" ", 1)
        keywords = [adj, noun]
        templates = [_template(stype_index=k) for k in range(sentences_per_topic)]
        topics.append(
            TopicConcept(
                id=f"t{i}",
                name=name,
                parent=None if i == 0 else f"t{(i - 1) // branching}",
                related=[],
                keywords=keywords,
                sentence_templates=templates,
            )
        )
    return Ontology(version=1, topics=topics)


def _template(stype_index: int) -> SentenceTemplate:
    stype = SENTENCE_TYPES[stype_index % len(SENTENCE_TYPES)]
    variant = stype_index // len(SENTENCE_TYPES)
    phrasings = _PHRASINGS[stype]
    text = phrasings[variant % len(phrasings)]
    if variant >= len(phrasings):
        text = f"{text[:-1]} (take {variant + 1})."
    trigger = _PROPOSAL_TRIGGER if stype == "a" else None
    return SentenceTemplate(type=stype, text=text, trigger=trigger, inheritable=False)
