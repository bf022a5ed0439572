"""Topic ontology, its compiled dialogue tree, and synthetic ontology generation."""

from cair.knowledge.model import (
    LikelinessLevel,
    Ontology,
    OntologyError,
    SentenceTemplate,
    TopicConcept,
    SENTENCE_TYPES,
)
from cair.knowledge.parse import parse_ontology, parse_ontology_file
from cair.knowledge.compiler import DialogueTree, DTNode, Sentence, compile_dialogue_tree, load_tree
from cair.knowledge.synth import generate_synthetic_ontology
from cair.knowledge.sizing import estimate_max_state_size

__all__ = [
    "LikelinessLevel",
    "Ontology",
    "OntologyError",
    "SentenceTemplate",
    "TopicConcept",
    "SENTENCE_TYPES",
    "parse_ontology",
    "parse_ontology_file",
    "DialogueTree",
    "DTNode",
    "Sentence",
    "compile_dialogue_tree",
    "load_tree",
    "generate_synthetic_ontology",
    "estimate_max_state_size",
]
