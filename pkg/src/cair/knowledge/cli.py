"""Knowledge tooling: compile, generate, and inspect dialogue trees.

Usage:
    cair-knowledge compile ontology.json --culture EN --out dt.bin
    cair-knowledge generate --topics 2780 --branching 3 --sentences 8 --seed 42 --out ontology.json
    cair-knowledge stats dt.bin [--json stats.json]
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from cair.knowledge.compiler import compile_dialogue_tree, load_tree
from cair.knowledge.model import OntologyError
from cair.knowledge.parse import dump_ontology, parse_ontology_file
from cair.knowledge.sizing import estimate_max_state_size
from cair.knowledge.synth import generate_synthetic_ontology


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="cair-knowledge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_compile = sub.add_parser("compile", help="compile an ontology into a dialogue tree")
    p_compile.add_argument("ontology", help="ontology JSON document")
    p_compile.add_argument("--culture", default="EN", help="culture layer to compile (default EN)")
    p_compile.add_argument("--out", required=True, help="output path for the compiled tree")

    p_generate = sub.add_parser("generate", help="generate a synthetic ontology")
    p_generate.add_argument("--topics", type=int, required=True)
    p_generate.add_argument("--branching", type=int, default=3)
    p_generate.add_argument("--sentences", type=int, default=8)
    p_generate.add_argument("--seed", type=int, default=0)
    p_generate.add_argument("--out", required=True)

    p_stats = sub.add_parser("stats", help="print statistics for a compiled tree")
    p_stats.add_argument("tree", help="compiled dialogue tree file")
    p_stats.add_argument("--json", help="also write machine-readable stats to this path")

    args = parser.parse_args(argv)
    try:
        if args.command == "compile":
            return _compile(args)
        if args.command == "generate":
            return _generate(args)
        return _stats(args)
    except (OntologyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _compile(args: argparse.Namespace) -> int:
    ontology = parse_ontology_file(args.ontology)
    tree = compile_dialogue_tree(ontology, args.culture)
    Path(args.out).write_bytes(tree.serialize())
    print(f"compiled {tree.topic_count} topics / {tree.sentence_count} sentences -> {args.out}")
    return 0


def _generate(args: argparse.Namespace) -> int:
    ontology = generate_synthetic_ontology(args.topics, args.branching, args.sentences, args.seed)
    Path(args.out).write_text(dump_ontology(ontology), encoding="utf-8")
    total = sum(len(t.sentence_templates) for t in ontology.topics)
    print(f"generated {len(ontology.topics)} topics / {total} sentences -> {args.out}")
    return 0


def _stats(args: argparse.Namespace) -> int:
    tree = load_tree(args.tree)
    stats = tree.stats()
    stats["max_state_bytes"] = estimate_max_state_size(tree)
    print(f"topics:           {stats['topics']}")
    print(f"sentences:        {stats['sentences']}")
    print(f"culture:          {stats['culture'] or '-'}")
    print(f"root:             {stats['root']}")
    print(f"max state size:   {stats['max_state_bytes']} bytes")
    if args.json:
        Path(args.json).write_text(json.dumps(stats), encoding="utf-8")
        print(f"stats written to {args.json}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
