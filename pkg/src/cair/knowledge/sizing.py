"""Payload sizing for the client-carried state."""

from __future__ import annotations

from cair.knowledge.compiler import DialogueTree


def estimate_max_state_size(tree: DialogueTree) -> int:
    """Serialized bytes of the largest state the tree can produce.

    Upper bound reached when every topic carries a likeliness override and
    every sentence has been used; computed with the production wire codec so
    the estimate tracks the real encoding exactly.
    """
    from cair.state import encode_state, full_coverage_state

    return len(encode_state(full_coverage_state(tree), tree))
