"""Synthesis of conversation states with a chosen topic coverage.

Load experiments need payloads that look like conversations at different
stages; given the stats of a compiled tree, this builds a valid wire state
in which the first ``fraction`` of the topics carry a likeliness override
and fully used sentence sets.
"""

from __future__ import annotations

from fractions import Fraction

from cair import seeding
from cair.state import WIRE_VERSION

# Coverage scenarios: untouched, one third, two thirds, and all topics.
COVERAGE_FRACTIONS: tuple[Fraction, ...] = (
    Fraction(0),
    Fraction(1, 3),
    Fraction(2, 3),
    Fraction(1),
)


def parse_fraction(raw: str | float | Fraction) -> Fraction:
    if isinstance(raw, Fraction):
        fraction = raw
    elif isinstance(raw, str):
        fraction = Fraction(raw)
    else:
        fraction = Fraction(raw).limit_denominator(3)
    if fraction not in COVERAGE_FRACTIONS:
        allowed = ", ".join(str(f) for f in COVERAGE_FRACTIONS)
        raise ValueError(f"coverage fraction must be one of {{{allowed}}}, got {raw!r}")
    return fraction


def build_coverage_state(stats: dict, fraction: str | float | Fraction, seed: int = 0) -> dict:
    """Wire-format client state covering the first floor(fraction * topics) topics."""
    fraction = parse_fraction(fraction)
    topics = int(stats["topics"])
    counts = list(stats["sentence_counts"])
    if len(counts) != topics:
        raise ValueError("tree stats are inconsistent: sentence_counts length != topics")
    covered = int(fraction * topics)  # exact rational arithmetic, floor

    levels = [seeding.derive(seed, "level", i) % 5 + 1 for i in range(covered)]
    masks = [(1 << counts[i]) - 1 for i in range(covered)]
    return {
        "v": WIRE_VERSION,
        "t": stats["root"],
        "lt": "p",
        "q": [],
        "l": levels,
        "u": masks,
        "p": None,
    }
