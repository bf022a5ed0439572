"""Packaged demo knowledge: a small ontology and the default intent registry."""

from importlib import resources


def demo_ontology_path() -> str:
    return str(resources.files("cair.data") / "ontology_demo.json")


def default_intents_path() -> str:
    return str(resources.files("cair.data") / "intents_default.json")
